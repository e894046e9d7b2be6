import math

from django.test import SimpleTestCase

from ringlab.services.capacity import (
    corner_path_count,
    functional_throughput,
    instruction_count,
    integer_text,
    memory_comparison,
    monotone_lattice_paths,
    port_combinations,
    total_path_count,
)
from ringlab.services.errors import RingSimError


class PathCountTests(SimpleTestCase):
    def test_corner_paths(self):
        self.assertEqual(corner_path_count(5), 252)
        self.assertEqual(corner_path_count(1), 2)
        self.assertEqual(corner_path_count(6), 924)

    def test_matches_lattice_walker(self):
        for n in range(1, 9):
            self.assertEqual(corner_path_count(n), monotone_lattice_paths(n), n)

    def test_pascal_recurrence(self):
        for n in range(2, 101):
            self.assertEqual(
                corner_path_count(n) * n * n,
                corner_path_count(n - 1) * (2 * n) * (2 * n - 1),
            )

    def test_total_paths(self):
        self.assertEqual(port_combinations(5), 256)
        self.assertEqual(total_path_count(5), 64512)
        self.assertEqual(total_path_count(1), 2)
        self.assertGreater(total_path_count(50), 10 ** 29 * 2 ** 98)

    def test_side_must_be_positive(self):
        for fn in (corner_path_count, total_path_count, monotone_lattice_paths):
            with self.assertRaises(RingSimError):
                fn(0)


class InstructionCountTests(SimpleTestCase):
    def test_defaults(self):
        self.assertEqual(instruction_count(1), 3600)
        self.assertEqual(instruction_count(5), 9674588160000000000)
        self.assertIsInstance(instruction_count(50), int)

    def test_custom_levels(self):
        self.assertEqual(instruction_count(2, z=2, levels=2), 32)

    def test_invalid(self):
        with self.assertRaises(RingSimError):
            instruction_count(3, z=0)

    def test_memory_comparison(self):
        memory = memory_comparison(5)
        self.assertEqual(memory.conventional_bits, 25)
        self.assertEqual(memory.bits_per_query, 25)
        self.assertEqual(memory.device_bits, 25 * instruction_count(5))


class ThroughputTests(SimpleTestCase):
    def test_fifty_by_fifty(self):
        report = functional_throughput(50, 100e-6, 1e4)
        self.assertTrue(math.isclose(report.area_m2, 25e-6, rel_tol=1e-12))
        self.assertTrue(math.isclose(report.time_s, 25e-6, rel_tol=1e-12))
        self.assertGreater(report.throughput, 1e60)
        self.assertEqual(report.corner_paths, math.comb(100, 50))

    def test_unit_case(self):
        report = functional_throughput(1, 1.0, 1.0)
        self.assertEqual(report.throughput, 2.0)
        self.assertEqual(report.total_paths, 2)

    def test_invalid_geometry(self):
        with self.assertRaises(RingSimError):
            functional_throughput(5, 0.0, 1e4)
        with self.assertRaises(RingSimError):
            functional_throughput(5, 1e-4, -1.0)

    def test_as_dict_keeps_big_integers_exact(self):
        data = functional_throughput(50, 100e-6, 1e4).as_dict()
        self.assertEqual(int(data["total_paths"]), total_path_count(50))
        self.assertTrue(data["notes"])

    def test_large_mesh_reports_log_throughput(self):
        report = functional_throughput(300, 100e-6, 1e4)
        self.assertIsNone(report.throughput)
        expected = math.log10(total_path_count(300)) + 12 - 4 * math.log10(300) + 4
        self.assertAlmostEqual(report.log10_throughput, expected, places=6)
        self.assertEqual(len(report.notes), 2)
        data = report.as_dict()
        self.assertIsNone(data["throughput"])
        self.assertEqual(int(data["corner_paths"]), math.comb(600, 300))

    def test_log_throughput_matches_float_value(self):
        report = functional_throughput(50, 100e-6, 1e4)
        self.assertAlmostEqual(report.log10_throughput, math.log10(report.throughput), places=9)


class IntegerTextTests(SimpleTestCase):
    def test_small_counts_are_exact(self):
        self.assertEqual(integer_text(252), "252")

    def test_huge_counts_keep_their_magnitude(self):
        text = integer_text(1 << 20000)
        if "e+" in text:
            self.assertEqual(int(text.split("e+")[1]), 6020)
        else:
            self.assertEqual(len(text), 6021)
