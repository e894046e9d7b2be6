"""
Resonance engine: enumerate admissible paths, apply the auto-oscillation
gain and phase conditions, and emit sensor readouts and sweep reports.

A path resonates when
  - (Ψ_out + ΣΔ) is within `phase_tolerance` of a multiple of 2π, and
  - gain - attenuation_out >= path length in l0 (A0·l0 = 1).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from django.conf import settings

from .circuit import (
    INPUT,
    OUTPUT,
    PhaseAngle,
    format_pi,
    Path,
    phase_sum,
    path_length_l0,
    wrap_distance,
)
from .errors import PortError, SweepError

logger = logging.getLogger(__name__)

# Slack for float gain comparisons (gains are whole A0 steps in practice).
GAIN_EPSILON = 1e-9

PARAM_PHASE = "psi"
PARAM_GAIN = "gain"


@dataclass(frozen=True)
class ResonantPath:
    path: Path
    total_phase: PhaseAngle
    required_gain: float
    channel: int | None

    @property
    def node_ids(self):
        return self.path.node_ids


@dataclass(frozen=True)
class SensorGrid:
    """Boolean power-sensor readouts, row-major."""

    rows: int
    cols: int
    cells: tuple

    @classmethod
    def empty(cls, rows, cols):
        return cls(rows, cols, (False,) * (rows * cols))

    @property
    def bits(self):
        return "".join("1" if c else "0" for c in self.cells)

    @property
    def active_nodes(self):
        return tuple(i for i, c in enumerate(self.cells, start=1) if c)

    def __getitem__(self, node_id):
        return self.cells[node_id - 1]

    def __len__(self):
        return len(self.cells)


@dataclass(frozen=True)
class SweepRecord:
    value: float
    resonant: tuple
    sensors: SensorGrid

    @property
    def path_count(self):
        return len(self.resonant)


@dataclass(frozen=True)
class SweepReport:
    parameter: str
    records: tuple

    def __post_init__(self):
        grid = [r.value for r in self.records]
        if not grid:
            raise SweepError("sweep report has no grid points")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise SweepError("sweep grid must be strictly increasing")

    @property
    def grid(self):
        return tuple(r.value for r in self.records)

    @property
    def counts(self):
        return tuple(r.path_count for r in self.records)

    def at(self, value, tol=1e-9):
        for record in self.records:
            if abs(record.value - value) <= tol:
                return record
        raise KeyError(value)


# ---------------------------------------------------------------------------
# Path enumeration
# ---------------------------------------------------------------------------

def _forward(mesh, a, b, output_row):
    """Monotone step: one column right, or one row toward the output row."""
    (r1, c1), (r2, c2) = mesh.position(a), mesh.position(b)
    if r1 == r2:
        return c2 == c1 + 1
    if c1 == c2:
        toward = 1 if output_row > r1 else -1
        return r2 - r1 == toward
    return False


def enumerate_paths(circuit, input_row, output_row, *, monotone=False):
    """Every viable simple path between two switched-on ports.

    Depth-first over the mesh graph; a branch is dropped as soon as the
    running channel intersection is empty.
    """
    electric = circuit.electric
    in_port = electric.port(INPUT, input_row)
    out_port = electric.port(OUTPUT, output_row)
    if in_port is None or not in_port.switch:
        raise PortError(f"input port {input_row} is switched off")
    if out_port is None or not out_port.switch:
        raise PortError(f"output port {output_row} is switched off")

    mesh = circuit.mesh
    graph = mesh.graph
    start = mesh.node_id(input_row, 1)
    target = mesh.node_id(output_row, mesh.cols)

    channels = mesh.node(start).filter
    if in_port.filter is not None:
        channels = channels & in_port.filter
    found = []

    def walk(node, trail, visited, admitted):
        if node == target:
            final = admitted if out_port.filter is None else admitted & out_port.filter
            if final:
                found.append(Path(input_row, tuple(trail), output_row, final))
            return
        for nb in sorted(graph.neighbors(node)):
            if nb in visited:
                continue
            if monotone and not _forward(mesh, node, nb, output_row):
                continue
            nxt = admitted & mesh.nodes[nb - 1].filter
            coupler = mesh.coupler(node, nb)
            if coupler is not None:
                nxt = nxt & coupler
            if not nxt:
                continue
            visited.add(nb)
            trail.append(nb)
            walk(nb, trail, visited, nxt)
            trail.pop()
            visited.discard(nb)

    if channels:
        walk(start, [start], {start}, channels)
    return found


def all_port_paths(circuit, *, monotone=False):
    """Viable paths for every switched-on (input, output) pair."""
    paths = []
    for input_row in circuit.electric.rows_on(INPUT):
        for output_row in circuit.electric.rows_on(OUTPUT):
            paths.extend(enumerate_paths(circuit, input_row, output_row, monotone=monotone))
    return paths


# ---------------------------------------------------------------------------
# Resonance conditions
# ---------------------------------------------------------------------------

def phase_condition(circuit, path, total):
    psi = circuit.electric.port(OUTPUT, path.output_port).psi
    return wrap_distance(psi.value + total.value) <= circuit.phase_tolerance


def gain_condition(circuit, path):
    port = circuit.electric.port(OUTPUT, path.output_port)
    net = circuit.electric.gain - port.attenuation
    return net + GAIN_EPSILON >= path_length_l0(path)


def resonant_subset(circuit, paths):
    """Apply both auto-oscillation conditions to pre-enumerated paths."""
    electric = circuit.electric
    on_in = set(electric.rows_on(INPUT))
    on_out = set(electric.rows_on(OUTPUT))
    hits = []
    for path in paths:
        if path.input_port not in on_in or path.output_port not in on_out:
            continue
        if not gain_condition(circuit, path):
            continue
        total = phase_sum(circuit.mesh, path.node_ids)
        if not phase_condition(circuit, path, total):
            continue
        hits.append(ResonantPath(
            path=path,
            total_phase=total,
            required_gain=float(path_length_l0(path)),
            channel=path.channel,
        ))
    hits.sort(key=lambda r: (r.path.output_port, r.path.node_ids, r.path.input_port))
    return hits


def find_resonant_paths(circuit):
    """All paths meeting the gain and phase conditions (empty = no oscillation)."""
    return resonant_subset(circuit, all_port_paths(circuit))


def sensors_for(mesh, resonant):
    lit = set()
    for r in resonant:
        lit.update(r.path.node_ids)
    cells = tuple(node.id in lit for node in mesh.nodes)
    return SensorGrid(mesh.rows, mesh.cols, cells)


def sensor_readout(circuit):
    return sensors_for(circuit.mesh, find_resonant_paths(circuit))


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _workers(workers):
    if workers is None:
        workers = getattr(settings, "RINGSIM_SWEEP_WORKERS", 1)
    return max(1, int(workers))


def _evaluate(circuits, paths, workers):
    def one(c):
        resonant = resonant_subset(c, paths)
        return tuple(resonant), sensors_for(c.mesh, resonant)

    if workers == 1 or len(circuits) == 1:
        return [one(c) for c in circuits]
    # map() keeps grid order
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, circuits))


def phase_grid(start, stop, step):
    start, stop, step = float(start), float(stop), float(step)
    if not step > 0:
        raise SweepError(f"phase step must be positive, got {step!r}")
    if stop < start:
        raise SweepError("phase sweep grid is empty (stop < start)")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = [start + i * step for i in range(count)]
    if stop - grid[-1] > 1e-9 * max(1.0, abs(stop)):
        logger.warning("phase grid stops at %s, short of %s", format_pi(grid[-1]), format_pi(stop))
    return grid


def sweep_phase(circuit, start, stop, step, *, workers=None):
    """Evaluate the circuit with every output Ψ set to each grid value."""
    grid = phase_grid(start, stop, step)
    paths = all_port_paths(circuit)
    circuits = [circuit.with_psi(value) for value in grid]
    results = _evaluate(circuits, paths, _workers(workers))
    logger.info("phase sweep: %d points, %d candidate paths", len(grid), len(paths))
    records = tuple(
        SweepRecord(value, resonant, sensors)
        for value, (resonant, sensors) in zip(grid, results)
    )
    return SweepReport(PARAM_PHASE, records)


def sweep_gain(circuit, levels, *, workers=None):
    """Evaluate the circuit at each amplification level (A0 units), Ψ fixed."""
    levels = [float(level) for level in levels]
    if not levels:
        raise SweepError("gain sweep needs at least one level")
    negative = [level for level in levels if level < 0]
    if negative:
        raise SweepError(f"gain levels must be >= 0, got {negative}")
    grid = sorted(levels)
    if len(set(grid)) != len(grid):
        raise SweepError("gain levels must be distinct")
    paths = all_port_paths(circuit)
    circuits = [circuit.with_gain(level) for level in grid]
    results = _evaluate(circuits, paths, _workers(workers))
    logger.info("gain sweep: %d levels, %d candidate paths", len(grid), len(paths))
    records = tuple(
        SweepRecord(value, resonant, sensors)
        for value, (resonant, sensors) in zip(grid, results)
    )
    return SweepReport(PARAM_GAIN, records)
