import math
import random

from django.test import SimpleTestCase, override_settings

from ringlab.services.circuit import (
    KING,
    OUTPUT,
    ROOK,
    ElectricPart,
    PhaseAngle,
    RingCircuit,
    build_mesh,
    make_ports,
)
from ringlab.services.engine import (
    PARAM_GAIN,
    SensorGrid,
    SweepRecord,
    SweepReport,
    all_port_paths,
    enumerate_paths,
    find_resonant_paths,
    phase_grid,
    sensor_readout,
    sweep_gain,
    sweep_phase,
)
from ringlab.services.errors import PortError, SweepError
from ringlab.services.problems import build_mesh_problem

from .oracles import resonant_set, simple_walks

PI = math.pi


def keys(resonant):
    return {(r.path.input_port, r.path.node_ids, r.path.output_port) for r in resonant}


def plain_circuit(n, deltas_pi, gain=10.0, inputs=(1,), outputs=None, psi=None):
    mesh = build_mesh(n, ROOK, [PhaseAngle.from_pi(d) for d in deltas_pi], [{1}] * n * n)
    ports = make_ports(n, inputs_on=inputs, outputs_on=outputs or (n,), psi=psi)
    return RingCircuit(mesh=mesh, electric=ElectricPart(gain=gain, ports=ports))


class EnumerationTests(SimpleTestCase):
    def test_three_by_three_corner_paths(self):
        circuit = plain_circuit(3, [0.0] * 9, outputs=(1, 2, 3))
        counts = {row: len(enumerate_paths(circuit, 1, row)) for row in (1, 2, 3)}
        # node 1 to nodes 3, 6 and 9 on the 3x3 lattice
        self.assertEqual(counts, {1: 8, 2: 13, 3: 12})
        self.assertEqual(len(all_port_paths(circuit)), 33)

    def test_monotone_paths_are_lattice_walks(self):
        circuit = plain_circuit(3, [0.0] * 9)
        paths = enumerate_paths(circuit, 1, 3, monotone=True)
        self.assertEqual(len(paths), math.comb(4, 2))

    def test_monotone_corner_counts(self):
        # n x n delay lines give C(2n-2, n-1) walks; 252 needs the 6 x 6 mesh
        five = enumerate_paths(plain_circuit(5, [0.0] * 25), 1, 5, monotone=True)
        six = enumerate_paths(plain_circuit(6, [0.0] * 36), 1, 6, monotone=True)
        self.assertEqual(len(five), 70)
        self.assertEqual(len(six), 252)

    def test_single_node_mesh(self):
        circuit = plain_circuit(1, [0.0])
        paths = enumerate_paths(circuit, 1, 1)
        self.assertEqual([p.node_ids for p in paths], [(1,)])

    def test_switched_off_port(self):
        circuit = plain_circuit(3, [0.0] * 9)
        with self.assertRaises(PortError):
            enumerate_paths(circuit, 2, 3)

    def test_disjoint_filters_leave_no_path(self):
        mesh = build_mesh(2, ROOK, [0.0] * 4, [{1}, {2}, {2}, {1}])
        ports = make_ports(2, inputs_on=(1,), outputs_on=(2,))
        circuit = RingCircuit(mesh=mesh, electric=ElectricPart(gain=10.0, ports=ports))
        self.assertEqual(enumerate_paths(circuit, 1, 2), [])

    def test_paths_are_valid_and_simple(self):
        circuit = plain_circuit(4, [0.0] * 16, outputs=(1, 4))
        for path in all_port_paths(circuit):
            self.assertEqual(len(set(path.node_ids)), len(path.node_ids))
            for a, b in zip(path.node_ids, path.node_ids[1:]):
                self.assertTrue(circuit.mesh.adjacent(a, b))


class ResonanceTests(SimpleTestCase):
    def test_gain_condition_counts_port_links(self):
        # 1-2-3 has three delay lines: 4 l0 with the port links
        circuit = plain_circuit(3, [0.0] * 9, gain=4.0, outputs=(1,))
        self.assertEqual(keys(find_resonant_paths(circuit)), {(1, (1, 2, 3), 1)})
        self.assertEqual(find_resonant_paths(circuit.with_gain(3.0)), [])

    def test_attenuation_raises_required_gain(self):
        mesh = build_mesh(3, ROOK, [0.0] * 9, [{1}] * 9)
        ports = make_ports(3, inputs_on=(1,), outputs_on=(1,), attenuation={1: 1.0})
        circuit = RingCircuit(mesh=mesh, electric=ElectricPart(gain=4.0, ports=ports))
        self.assertEqual(find_resonant_paths(circuit), [])

    def test_phase_condition_uses_tolerance(self):
        circuit = plain_circuit(3, [0.0] * 9, gain=4.0, outputs=(1,))
        near = circuit.with_psi(PhaseAngle(2 * PI - 0.005))
        far = circuit.with_psi(PhaseAngle(0.05))
        self.assertEqual(len(find_resonant_paths(near)), 1)
        self.assertEqual(find_resonant_paths(far), [])

    def test_no_gain_no_resonance(self):
        circuit = plain_circuit(3, [0.0] * 9, gain=0.0)
        self.assertEqual(find_resonant_paths(circuit), [])
        self.assertEqual(sensor_readout(circuit).bits, "0" * 9)

    def test_sensor_readout_lights_union_of_paths(self):
        circuit = plain_circuit(3, [0.0] * 9, gain=4.0, outputs=(1,))
        sensors = sensor_readout(circuit)
        self.assertEqual(sensors.active_nodes, (1, 2, 3))
        self.assertTrue(sensors[2])
        self.assertEqual(len(sensors), 9)


class TwoPathTests(SimpleTestCase):
    def setUp(self):
        self.circuit = build_mesh_problem("two_path").circuit

    def test_upper_path(self):
        resonant = find_resonant_paths(self.circuit.with_psi(PhaseAngle.from_pi(0.3)))
        self.assertEqual(keys(resonant), {(1, (1,), 1)})
        self.assertEqual(resonant[0].channel, 1)

    def test_lower_path(self):
        resonant = find_resonant_paths(self.circuit.with_psi(PhaseAngle.from_pi(1.0)))
        self.assertEqual(keys(resonant), {(2, (2,), 2)})
        self.assertEqual(resonant[0].channel, 2)

    def test_neither_path(self):
        self.assertEqual(find_resonant_paths(self.circuit.with_psi(PhaseAngle.from_pi(0.5))), [])


class Example2SweepTests(SimpleTestCase):
    """Grid point k sets Ψ = 0.1π·k, i.e. the paths summing to (2 - 0.1k)π."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.circuit = build_mesh_problem("example2").circuit
        cls.report = sweep_phase(cls.circuit, 0.0, 2 * PI, 0.1 * PI)

    def record(self, internal_pi):
        return self.report.records[round(20 - internal_pi * 10)]

    def test_grid(self):
        self.assertEqual(len(self.report.records), 21)
        self.assertAlmostEqual(self.report.grid[-1], 2 * PI)

    def test_nothing_below_six_tenths(self):
        for k in range(15, 21):
            self.assertEqual(self.report.records[k].path_count, 0, k)

    def test_single_path_at_six_tenths(self):
        record = self.record(0.6)
        self.assertEqual(keys(record.resonant), {(1, (1, 4, 7, 8, 9), 3)})

    def test_two_paths_at_eleven_tenths(self):
        record = self.record(1.1)
        self.assertEqual(keys(record.resonant), {
            (1, (1, 2, 5, 4, 7, 8, 9), 3),
            (1, (1, 4, 7, 8, 5, 2, 3), 1),
        })

    def test_four_paths_at_eighteen_tenths(self):
        record = self.record(1.8)
        self.assertEqual(record.path_count, 4)
        self.assertEqual({r.path.output_port for r in record.resonant}, {1, 3})
        self.assertTrue(all(len(r.path.node_ids) == 9 for r in record.resonant))
        self.assertEqual(record.sensors.bits, "1" * 9)

    def test_reported_paths_match_oracle(self):
        for record in self.report.records:
            circuit = self.circuit.with_psi(record.value)
            self.assertEqual(keys(record.resonant), resonant_set(circuit))

    @override_settings(RINGSIM_SWEEP_WORKERS=4)
    def test_parallel_sweep_matches_serial(self):
        parallel = sweep_phase(self.circuit, 0.0, 2 * PI, 0.1 * PI)
        self.assertEqual(parallel, self.report)


class Example3GainTests(SimpleTestCase):
    def test_gain_ladder(self):
        problem = build_mesh_problem("example3")
        report = sweep_gain(problem.circuit, problem.gain_levels)
        self.assertEqual(report.parameter, PARAM_GAIN)
        self.assertEqual(report.grid, (3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0))
        self.assertEqual(report.counts, (0, 1, 2, 2, 3, 4, 4, 4))
        survivor = report.at(4.0).resonant[0]
        self.assertEqual(survivor.path.node_ids, (1, 2, 3))
        self.assertEqual(survivor.path.length_l0, 4)


class Example4Tests(SimpleTestCase):
    def setUp(self):
        self.circuit = build_mesh_problem("example4").circuit

    def test_all_sensors_at_full_gain(self):
        resonant = find_resonant_paths(self.circuit)
        self.assertEqual(len(resonant), 3)
        self.assertEqual(sensor_readout(self.circuit).bits, "1" * 9)

    def test_seven_sensors_at_eight(self):
        resonant = find_resonant_paths(self.circuit.with_gain(8))
        self.assertEqual(keys(resonant), {(1, (1, 4, 5, 2, 3, 6, 9), 3)})
        sensors = sensor_readout(self.circuit.with_gain(8))
        self.assertEqual(sensors.active_nodes, (1, 2, 3, 4, 5, 6, 9))

    def test_lower_gains_match_oracle(self):
        for gain in range(1, 8):
            circuit = self.circuit.with_gain(gain)
            self.assertEqual(keys(find_resonant_paths(circuit)), resonant_set(circuit))
            self.assertEqual(find_resonant_paths(circuit), [])


class SweepValidationTests(SimpleTestCase):
    def setUp(self):
        self.circuit = plain_circuit(3, [0.0] * 9)

    def test_phase_grid_inclusive(self):
        self.assertEqual(len(phase_grid(0.0, 2 * PI, 0.1 * PI)), 21)
        self.assertEqual(phase_grid(1.0, 1.0, 0.5), [1.0])

    def test_phase_grid_short_of_stop(self):
        with self.assertLogs("ringlab.services.engine", level="WARNING"):
            grid = phase_grid(0.0, 1.0, 0.3)
        self.assertEqual(len(grid), 4)

    def test_bad_phase_grid(self):
        with self.assertRaises(SweepError):
            phase_grid(0.0, 1.0, 0.0)
        with self.assertRaises(SweepError):
            phase_grid(1.0, 0.0, 0.1)

    def test_gain_levels_validated(self):
        with self.assertRaises(SweepError):
            sweep_gain(self.circuit, [])
        with self.assertRaises(SweepError):
            sweep_gain(self.circuit, [3, -1])
        with self.assertRaises(SweepError):
            sweep_gain(self.circuit, [3, 3])

    def test_report_grid_must_increase(self):
        grid = SensorGrid.empty(1, 1)
        with self.assertRaises(SweepError):
            SweepReport("psi", (SweepRecord(1.0, (), grid), SweepRecord(0.5, (), grid)))
        with self.assertRaises(SweepError):
            SweepReport("psi", ())


class OracleEquivalenceTests(SimpleTestCase):
    def test_random_circuits(self):
        rng = random.Random(20240501)
        for trial in range(200):
            n = rng.choice((2, 3, 4))
            deltas = [PhaseAngle.from_pi(rng.randrange(20) / 10) for _ in range(n * n)]
            filters = [rng.choice(({1}, {2}, {1, 2}, {1, 2})) for _ in range(n * n)]
            couplers = {}
            if rng.random() < 0.3:
                a = rng.randrange(1, n * n)
                b = a + 1 if a % n else a + n
                if b <= n * n:
                    couplers[(a, b)] = rng.choice((set(), {1}, {2}))
            mesh = build_mesh(n, ROOK, deltas, filters, couplers=couplers)
            inputs = tuple(r for r in range(1, n + 1) if rng.random() < 0.5) or (1,)
            outputs = tuple(r for r in range(1, n + 1) if rng.random() < 0.5) or (n,)
            psi = {r: PhaseAngle.from_pi(rng.randrange(20) / 10) for r in outputs}
            ports = make_ports(n, inputs_on=inputs, outputs_on=outputs, psi=psi)
            circuit = RingCircuit(
                mesh=mesh,
                electric=ElectricPart(gain=float(rng.randint(2, 12)), ports=ports),
            )
            with self.subTest(trial=trial):
                self.assertEqual(keys(find_resonant_paths(circuit)), resonant_set(circuit))
                for r in find_resonant_paths(circuit):
                    psi_out = circuit.electric.port(OUTPUT, r.path.output_port).psi
                    self.assertLessEqual(
                        min((psi_out.value + r.total_phase.value) % (2 * PI),
                            2 * PI - (psi_out.value + r.total_phase.value) % (2 * PI)),
                        circuit.phase_tolerance,
                    )


def random_circuit(n, deltas_pi, psi_pi, gain):
    """Rook mesh fed from input 1 only, so node 1 lies on every path."""
    mesh = build_mesh(n, ROOK, [PhaseAngle.from_pi(d) for d in deltas_pi], [{1}] * n * n)
    psi = {r: PhaseAngle.from_pi(p) for r, p in psi_pi.items()}
    ports = make_ports(n, inputs_on=(1,), outputs_on=tuple(psi_pi), psi=psi)
    return RingCircuit(mesh=mesh, electric=ElectricPart(gain=gain, ports=ports))


class KingMeshTests(SimpleTestCase):
    def test_paths_match_exhaustive_walks(self):
        mesh = build_mesh(3, KING, [0.0] * 9, [{1}] * 9)
        ports = make_ports(3, inputs_on=(1,), outputs_on=(1, 2, 3))
        circuit = RingCircuit(mesh=mesh, electric=ElectricPart(gain=12.0, ports=ports))
        walks = simple_walks(3, 3, True, 1, 9)
        for row in (1, 2, 3):
            with self.subTest(row=row):
                found = {p.node_ids for p in enumerate_paths(circuit, 1, row)}
                self.assertEqual(found, {w for w in walks if w[-1] == 3 * row})
        diagonal = {p.node_ids for p in enumerate_paths(circuit, 1, 3)}
        self.assertIn((1, 5, 9), diagonal)

    def test_king_mesh_has_more_paths_than_rook(self):
        king = build_mesh(3, KING, [0.0] * 9, [{1}] * 9)
        ports = make_ports(3, inputs_on=(1,), outputs_on=(3,))
        circuit = RingCircuit(mesh=king, electric=ElectricPart(gain=12.0, ports=ports))
        rook = plain_circuit(3, [0.0] * 9, gain=12.0)
        self.assertGreater(len(enumerate_paths(circuit, 1, 3)), len(enumerate_paths(rook, 1, 3)))


class GainMonotonicityTests(SimpleTestCase):
    def test_fixture_ladder(self):
        circuit = build_mesh_problem("example3").circuit
        previous = set()
        for gain in range(0, 13):
            current = keys(find_resonant_paths(circuit.with_gain(gain)))
            self.assertLessEqual(previous, current, gain)
            previous = current

    def test_random_circuits(self):
        rng = random.Random(7)
        for trial in range(50):
            n = rng.choice((2, 3, 4))
            deltas = [rng.randrange(20) / 10 for _ in range(n * n)]
            outputs = {r: rng.randrange(20) / 10 for r in range(1, n + 1) if rng.random() < 0.6} or {n: 0.0}
            circuit = random_circuit(n, deltas, outputs, gain=1.0)
            sets = [keys(find_resonant_paths(circuit.with_gain(g))) for g in range(1, n * n + 3)]
            with self.subTest(trial=trial):
                for low, high in zip(sets, sets[1:]):
                    self.assertLessEqual(low, high)


class PhaseShiftTests(SimpleTestCase):
    def test_output_shift_cancelled_by_shared_node(self):
        rng = random.Random(11)
        for trial in range(50):
            n = rng.choice((2, 3, 4))
            theta = rng.randrange(1, 20) / 10
            deltas = [rng.randrange(20) / 10 for _ in range(n * n)]
            outputs = {r: rng.randrange(20) / 10 for r in range(1, n + 1) if rng.random() < 0.6} or {n: 0.0}
            gain = float(rng.randint(n + 1, n * n + 2))
            base = random_circuit(n, deltas, outputs, gain)
            shifted = random_circuit(
                n,
                [deltas[0] - theta] + deltas[1:],
                {r: p + theta for r, p in outputs.items()},
                gain,
            )
            with self.subTest(trial=trial, theta=theta):
                self.assertEqual(keys(find_resonant_paths(shifted)), keys(find_resonant_paths(base)))

    def test_unmatched_shift_changes_the_answer(self):
        base = plain_circuit(3, [0.0] * 9, gain=4.0, outputs=(1,))
        self.assertEqual(len(find_resonant_paths(base)), 1)
        self.assertEqual(find_resonant_paths(base.with_psi(PhaseAngle.from_pi(0.5))), [])
