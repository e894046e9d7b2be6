import io
import json
import math
import os
import tempfile

from django.conf import settings
from django.test import SimpleTestCase, override_settings

from ringlab.services.data import (
    circuit_to_dict,
    fixture_path,
    list_fixtures,
    load_circuit,
    load_fixture,
    load_problem,
    parse_phase,
    parse_phase_value,
    save_circuit,
)
from ringlab.services.errors import CircuitFileError
from ringlab.services.problems import FIXTURES, build_mesh_problem

MINIMAL = {
    "n": 2,
    "gain": 4,
    "nodes": [
        {"id": 1, "delta": "0.5pi", "filter": [1]},
        {"id": 2, "delta": 0.0, "filter": [1]},
        {"id": 3, "delta": "pi", "filter": [1]},
        {"id": 4, "delta": "1.5pi", "filter": [1]},
    ],
    "ports": {
        "inputs": [{"row": 1, "on": True}],
        "outputs": [{"row": 2, "on": True, "psi": "0.2pi"}],
    },
}


def as_stream(data):
    return io.StringIO(json.dumps(data))


def with_node(**fields):
    data = json.loads(json.dumps(MINIMAL))
    data["nodes"][3].update(fields)
    return data


class PhaseParsingTests(SimpleTestCase):
    def test_pi_units(self):
        self.assertAlmostEqual(parse_phase("0.6pi").value, 0.6 * math.pi)
        self.assertAlmostEqual(parse_phase("pi").value, math.pi)
        self.assertAlmostEqual(parse_phase("0.5π").value, 0.5 * math.pi)
        self.assertAlmostEqual(parse_phase(1.0).value, 1.0)

    def test_unwrapped_values(self):
        self.assertAlmostEqual(parse_phase_value("2pi"), 2 * math.pi)
        self.assertAlmostEqual(parse_phase_value("0.25"), 0.25)

    def test_garbage(self):
        with self.assertRaises(CircuitFileError):
            parse_phase("half a turn")


class LoadCircuitTests(SimpleTestCase):
    def test_minimal_file(self):
        circuit = load_circuit(as_stream(MINIMAL))
        self.assertEqual(circuit.mesh.rows, 2)
        self.assertEqual(circuit.electric.gain, 4.0)
        self.assertEqual(len(circuit.electric.ports), 4)
        self.assertAlmostEqual(circuit.electric.port("output", 2).psi.pi_units, 0.2)

    def test_wrapped_delta_warns(self):
        with self.assertLogs("ringlab.services.data", level="WARNING") as logs:
            circuit = load_circuit(as_stream(with_node(delta="2.5pi")))
        self.assertAlmostEqual(circuit.mesh.node(4).delta.pi_units, 0.5)
        self.assertIn("nodes[3].delta", logs.output[0])

    def test_empty_filter_names_node(self):
        with self.assertRaises(CircuitFileError) as ctx:
            load_circuit(as_stream(with_node(filter=[])))
        self.assertIn("node 4", str(ctx.exception))
        self.assertEqual(ctx.exception.field, "nodes[3].filter")

    def test_unknown_field_in_strict_mode(self):
        data = with_node(colour="blue")
        with self.assertRaises(CircuitFileError) as ctx:
            load_circuit(as_stream(data), strict=True)
        self.assertEqual(ctx.exception.field, "nodes[3]")
        self.assertEqual(load_circuit(as_stream(data), strict=False).mesh.rows, 2)

    @override_settings(RINGSIM_STRICT_FILES=False)
    def test_strict_mode_follows_settings(self):
        self.assertEqual(load_circuit(as_stream(with_node(colour="blue"))).mesh.rows, 2)

    def test_json_syntax_error_has_line(self):
        with self.assertRaises(CircuitFileError) as ctx:
            load_circuit(io.StringIO('{\n  "n": 2,\n  "gain": \n}'))
        self.assertEqual(ctx.exception.line, 4)
        self.assertTrue(str(ctx.exception).startswith("line 4"))

    def test_missing_field(self):
        data = json.loads(json.dumps(MINIMAL))
        del data["gain"]
        with self.assertRaises(CircuitFileError) as ctx:
            load_circuit(as_stream(data))
        self.assertEqual(ctx.exception.field, "gain")

    def test_duplicate_node(self):
        with self.assertRaises(CircuitFileError):
            load_circuit(as_stream(with_node(id=1)))

    def test_no_switched_on_output(self):
        data = json.loads(json.dumps(MINIMAL))
        data["ports"]["outputs"][0]["on"] = False
        with self.assertRaises(CircuitFileError):
            load_circuit(as_stream(data))

    def test_missing_file(self):
        with self.assertRaises(CircuitFileError):
            load_circuit("/nonexistent/circuit.json")

    def test_physical_lengths(self):
        data = json.loads(json.dumps(MINIMAL))
        data["physical"] = {
            "medium": {"d0": 9.6e-6, "M0_4pi": 1750.0, "geometry": "MSSW"},
            "frequency_ghz": 2.8,
        }
        del data["nodes"][0]["delta"]
        data["nodes"][0]["length_m"] = 1e-3
        circuit = load_circuit(as_stream(data))
        self.assertGreaterEqual(circuit.mesh.node(1).delta.value, 0.0)

    def test_length_needs_physical_section(self):
        data = json.loads(json.dumps(MINIMAL))
        del data["nodes"][0]["delta"]
        data["nodes"][0]["length_m"] = 1e-3
        with self.assertRaises(CircuitFileError) as ctx:
            load_circuit(as_stream(data))
        self.assertEqual(ctx.exception.field, "nodes[0].length_m")


class FixtureFileTests(SimpleTestCase):
    def test_files_match_constructions(self):
        for name in FIXTURES:
            self.assertEqual(load_problem(fixture_path(name)), build_mesh_problem(name), name)

    def test_load_fixture_is_cached(self):
        self.assertIs(load_fixture("example2"), load_fixture("example2"))

    def test_list_fixtures(self):
        self.assertTrue(set(FIXTURES) <= set(list_fixtures()))

    def test_round_trip(self):
        for name in FIXTURES:
            problem = build_mesh_problem(name)
            text = save_circuit(problem.circuit, problem)
            self.assertEqual(load_problem(io.StringIO(text)), problem, name)

    def test_save_is_deterministic(self):
        problem = build_mesh_problem("example2")
        self.assertEqual(
            save_circuit(problem.circuit, problem),
            save_circuit(build_mesh_problem("example2").circuit, build_mesh_problem("example2")),
        )

    def test_phases_saved_in_pi_units(self):
        data = circuit_to_dict(build_mesh_problem("example3").circuit)
        self.assertEqual(data["nodes"][5]["delta"], "0.6pi")
        self.assertEqual(data["ports"]["outputs"][0]["psi"], "1.7pi")

    def test_saved_file_loads_from_disk(self):
        problem = build_mesh_problem("two_path")
        with tempfile.TemporaryDirectory() as tmp:
            fn = os.path.join(tmp, "two_path.json")
            with open(fn, "w", encoding="utf-8") as f:
                f.write(save_circuit(problem.circuit, problem))
            self.assertEqual(load_circuit(fn), problem.circuit)

    def test_data_dir_setting(self):
        self.assertTrue(fixture_path("example2").startswith(str(settings.DATA_DIR)))


class ProblemSectionTests(SimpleTestCase):
    def with_problem(self, **section):
        data = json.loads(json.dumps(MINIMAL))
        data["problem"] = {"objective": "shortest", **section}
        return data

    def test_gain_levels_must_be_numbers(self):
        with self.assertRaises(CircuitFileError) as ctx:
            load_problem(as_stream(self.with_problem(gain_levels=["ten"])))
        self.assertEqual(ctx.exception.field, "problem.gain_levels[0]")

    def test_gain_levels_must_be_a_list(self):
        with self.assertRaises(CircuitFileError) as ctx:
            load_problem(as_stream(self.with_problem(gain_levels=10)))
        self.assertEqual(ctx.exception.field, "problem.gain_levels")

    def test_via_nodes_must_be_integers(self):
        data = self.with_problem(objective="shortest-via-nodes", via_nodes=[2, "4"])
        with self.assertRaises(CircuitFileError) as ctx:
            load_problem(as_stream(data))
        self.assertEqual(ctx.exception.field, "problem.via_nodes[1]")

    def test_valid_section(self):
        problem = load_problem(as_stream(self.with_problem(gain_levels=[4, 3.5])))
        self.assertEqual(problem.gain_levels, (4, 3.5))
        self.assertEqual(problem.via_nodes, frozenset())


class FixtureCacheTests(SimpleTestCase):
    def test_cache_follows_data_dir(self):
        original = load_fixture("example2")
        replacement = build_mesh_problem("example3")
        with tempfile.TemporaryDirectory() as tmp:
            with open(os.path.join(tmp, "example2.json"), "w", encoding="utf-8") as f:
                f.write(save_circuit(replacement.circuit, replacement))
            with override_settings(DATA_DIR=tmp):
                self.assertEqual(load_fixture("example2"), replacement)
        self.assertIs(load_fixture("example2"), original)
