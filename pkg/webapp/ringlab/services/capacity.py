"""
Closed-form capacity figures for an n x n device. Counts are exact Python
integers; only the throughput is a float.
"""

import math
from dataclasses import asdict, dataclass, field

from .errors import RingSimError

# Phases per shifter and amplitude levels assumed for the instruction count
DEFAULT_PHASE_STEPS = 180
DEFAULT_AMPLITUDE_LEVELS = 20

TOTAL_PATHS_NOTE = (
    "total_paths takes the corner-to-corner count for every port combination"
)


def _require_side(n):
    if not isinstance(n, int) or n < 1:
        raise RingSimError(f"mesh side must be an integer >= 1, got {n!r}")


def corner_path_count(n):
    """(2n)! / (n! n!) paths between the two most distant ports."""
    _require_side(n)
    return math.comb(2 * n, n)


def port_combinations(n):
    """2^(2n-2) ways to switch the input/output ports."""
    _require_side(n)
    return 1 << (2 * n - 2)


def total_path_count(n):
    return port_combinations(n) * corner_path_count(n)


def instruction_count(n, z=DEFAULT_PHASE_STEPS, levels=DEFAULT_AMPLITUDE_LEVELS):
    """2^(n-1) · z^n · levels^n distinct phase/gain settings."""
    _require_side(n)
    for name, value in (("z", z), ("levels", levels)):
        if not isinstance(value, int) or value < 1:
            raise RingSimError(f"{name} must be an integer >= 1, got {value!r}")
    return (1 << (n - 1)) * z ** n * levels ** n


def monotone_lattice_paths(n):
    """Brute-force count of n-right, n-down lattice walks (slow; small n only)."""
    _require_side(n)

    def walk(right, down):
        if right == n and down == n:
            return 1
        count = 0
        if right < n:
            count += walk(right + 1, down)
        if down < n:
            count += walk(right, down + 1)
        return count

    return walk(0, 0)


def integer_text(value):
    """Decimal digits of a count; scientific form past the int->str digit limit."""
    try:
        return str(value)
    except ValueError:
        exponent = math.log10(value)
        whole = math.floor(exponent)
        return f"{10 ** (exponent - whole):.6f}e+{whole}"


@dataclass(frozen=True)
class CapacityReport:
    n: int
    corner_paths: int
    total_paths: int
    instructions: int
    throughput: float | None
    area_m2: float
    time_s: float
    log10_throughput: float = 0.0
    notes: tuple = field(default=(TOTAL_PATHS_NOTE,))

    def as_dict(self):
        data = asdict(self)
        # keep the big integers exact in JSON
        for key in ("corner_paths", "total_paths", "instructions"):
            data[key] = integer_text(data[key])
        data["notes"] = list(self.notes)
        return data


def functional_throughput(n, l, v_g, *, z=DEFAULT_PHASE_STEPS, levels=DEFAULT_AMPLITUDE_LEVELS):
    """Operations per m² per second: total paths / (area x propagation time).

    area = l² n², time = l n² / v_g. Past the float range `throughput` is
    None and only `log10_throughput` is reported.
    """
    _require_side(n)
    for name, value in (("l", l), ("v_g", v_g)):
        if not (math.isfinite(value) and value > 0):
            raise RingSimError(f"{name} must be positive, got {value!r}")
    area = l * l * n * n
    time = l * n * n / v_g
    total = total_path_count(n)
    log_rate = math.log10(total) - 3 * math.log10(l) - 4 * math.log10(n) + math.log10(v_g)
    notes = (TOTAL_PATHS_NOTE,)
    try:
        throughput = total / (area * time)
    except (OverflowError, ZeroDivisionError):
        throughput = None
        notes += (f"throughput exceeds the float range (log10 = {log_rate:.3f})",)
    return CapacityReport(
        n=n,
        corner_paths=corner_path_count(n),
        total_paths=total,
        instructions=instruction_count(n, z, levels),
        throughput=throughput,
        area_m2=area,
        time_s=time,
        log10_throughput=log_rate,
        notes=notes,
    )


@dataclass(frozen=True)
class MemoryComparison:
    n: int
    conventional_bits: int
    device_queries: int
    bits_per_query: int

    @property
    def device_bits(self):
        return self.device_queries * self.bits_per_query


def memory_comparison(n, z=DEFAULT_PHASE_STEPS, levels=DEFAULT_AMPLITUDE_LEVELS):
    """n² one-bit cells versus one n²-bit sensor readout per instruction."""
    return MemoryComparison(
        n=n,
        conventional_bits=n * n,
        device_queries=instruction_count(n, z, levels),
        bits_per_query=n * n,
    )
