"""
Circuit model: the passive magnetic matrix (delay lines, filters, sensors,
couplers) and the active electric loop (amplifier, phase shifters,
attenuators, port switches).

All values are immutable. Node ids are row-major and 1-based: node 1 is the
top-left delay line, node rows*cols the bottom-right one.
"""

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx

from .errors import CircuitError, PathError

TWO_PI = 2 * math.pi

# Must separate the 0.1π parameter grid used by the worked examples.
DEFAULT_PHASE_TOLERANCE = 0.01
MAX_PHASE_TOLERANCE = 0.05 * math.pi

ROOK = "rook"   # horizontal + vertical waveguides
KING = "king"   # + diagonal waveguides
ADJACENCIES = (ROOK, KING)

INPUT = "input"
OUTPUT = "output"


# ---------------------------------------------------------------------------
# Phases and channels
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class PhaseAngle:
    """Phase in radians, always wrapped into [0, 2π)."""

    value: float = 0.0

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value):
            raise CircuitError(f"phase must be finite, got {self.value!r}")
        wrapped = value % TWO_PI
        if wrapped >= TWO_PI:
            wrapped = 0.0
        object.__setattr__(self, "value", wrapped)

    @classmethod
    def from_pi(cls, units):
        return cls(float(units) * math.pi)

    @property
    def pi_units(self):
        return self.value / math.pi

    def __add__(self, other):
        return PhaseAngle(self.value + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PhaseAngle(self.value - float(other))

    def __float__(self):
        return self.value

    def __str__(self):
        return format_pi(self.value)


def format_pi(radians):
    """Render a phase in π units, e.g. ``0.6pi``."""
    units = round(radians / math.pi, 10)
    if units == 0:
        units = 0.0
    return f"{units:.10g}pi"


def wrap_distance(radians):
    """Distance of a phase from the nearest multiple of 2π."""
    x = radians % TWO_PI
    return min(x, TWO_PI - x)


@dataclass(frozen=True)
class FrequencyChannel:
    id: int
    value_ghz: float | None = None

    def __post_init__(self):
        if self.value_ghz is not None and not self.value_ghz > 0:
            raise CircuitError(f"channel f{self.id}: frequency must be positive")


# ---------------------------------------------------------------------------
# Passive part
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeshNode:
    """One delay line: internal phase shift, bandpass filter, power sensor."""

    id: int
    delta: PhaseAngle
    filter: frozenset
    sensor: bool = False

    def __post_init__(self):
        if not self.filter:
            raise CircuitError(f"node {self.id}: filter set is empty")
        object.__setattr__(self, "filter", frozenset(int(c) for c in self.filter))


def _edge_key(a, b):
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Mesh:
    rows: int
    cols: int
    adjacency: str
    nodes: tuple
    # ((a, b), frozenset) pairs; an empty set removes the waveguide
    couplers: tuple = ()
    cell_pitch: float = 1.0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise CircuitError("mesh needs at least one row and one column")
        if self.adjacency not in ADJACENCIES:
            raise CircuitError(f"unknown adjacency {self.adjacency!r}")
        if len(self.nodes) != self.rows * self.cols:
            raise CircuitError(
                f"expected {self.rows * self.cols} nodes, got {len(self.nodes)}"
            )
        for expected, node in enumerate(self.nodes, start=1):
            if node.id != expected:
                raise CircuitError(f"node ids must be row-major 1..n², found {node.id} at {expected}")
        couplers = []
        for (a, b), channels in self.couplers:
            key = _edge_key(a, b)
            if not self._lattice_adjacent(*key):
                raise CircuitError(f"coupler {a}-{b} joins non-adjacent delay lines")
            couplers.append((key, frozenset(int(c) for c in channels)))
        object.__setattr__(self, "couplers", tuple(sorted(couplers, key=lambda kv: kv[0])))

    @property
    def n(self):
        if self.rows != self.cols:
            raise CircuitError(f"mesh is {self.rows}x{self.cols}, not square")
        return self.rows

    @property
    def is_square(self):
        return self.rows == self.cols

    def node(self, node_id):
        if not 1 <= node_id <= len(self.nodes):
            raise PathError(f"node {node_id} is not on the mesh")
        return self.nodes[node_id - 1]

    def position(self, node_id):
        """(row, col), both 1-based."""
        row, col = divmod(node_id - 1, self.cols)
        return row + 1, col + 1

    def node_id(self, row, col):
        if not (1 <= row <= self.rows and 1 <= col <= self.cols):
            raise PathError(f"({row}, {col}) is outside the {self.rows}x{self.cols} mesh")
        return (row - 1) * self.cols + col

    def _lattice_adjacent(self, a, b):
        (r1, c1), (r2, c2) = self.position(a), self.position(b)
        dr, dc = abs(r1 - r2), abs(c1 - c2)
        if self.adjacency == ROOK:
            return dr + dc == 1
        return max(dr, dc) == 1

    @cached_property
    def _coupler_map(self):
        return dict(self.couplers)

    def coupler(self, a, b):
        """Channels passed by the waveguide a-b, or None when unrestricted."""
        return self._coupler_map.get(_edge_key(a, b))

    @cached_property
    def graph(self):
        g = nx.Graph()
        g.add_nodes_from(node.id for node in self.nodes)
        for a in range(1, len(self.nodes) + 1):
            for b in range(a + 1, len(self.nodes) + 1):
                if self._lattice_adjacent(a, b) and self.coupler(a, b) != frozenset():
                    g.add_edge(a, b)
        return g

    def adjacent(self, a, b):
        return self.graph.has_edge(a, b)

    def neighbors(self, node_id):
        return tuple(sorted(self.graph.neighbors(node_id)))

    @property
    def channel_ids(self):
        ids = set()
        for node in self.nodes:
            ids |= node.filter
        return tuple(sorted(ids))


def build_mesh(n, adjacency, deltas, filters, *, cols=None, couplers=None, cell_pitch=1.0):
    """Build a validated mesh with row-major numbering.

    `deltas` holds PhaseAngle values (or radians); `filters` one channel set
    per node. `cols` defaults to `n` for the square meshes.
    """
    rows = n
    cols = n if cols is None else cols
    size = rows * cols
    if len(deltas) != size or len(filters) != size:
        raise CircuitError(
            f"{rows}x{cols} mesh needs {size} deltas and filters, "
            f"got {len(deltas)} and {len(filters)}"
        )
    nodes = []
    for i, (delta, channels) in enumerate(zip(deltas, filters), start=1):
        if not isinstance(delta, PhaseAngle):
            delta = PhaseAngle(delta)
        nodes.append(MeshNode(id=i, delta=delta, filter=frozenset(channels)))
    coupler_items = tuple((tuple(k), frozenset(v)) for k, v in (couplers or {}).items())
    return Mesh(
        rows=rows, cols=cols, adjacency=adjacency, nodes=tuple(nodes),
        couplers=coupler_items, cell_pitch=cell_pitch,
    )


# ---------------------------------------------------------------------------
# Active part
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PortConfig:
    side: str
    row: int
    switch: bool = False
    psi: PhaseAngle | None = None
    attenuation: float = 0.0
    filter: frozenset | None = None

    def __post_init__(self):
        if self.side not in (INPUT, OUTPUT):
            raise CircuitError(f"port side must be input or output, got {self.side!r}")
        if self.side == INPUT and (self.psi is not None or self.attenuation):
            raise CircuitError(f"input port {self.row} cannot carry a phase shifter or attenuator")
        if self.side == OUTPUT and self.psi is None:
            object.__setattr__(self, "psi", PhaseAngle(0.0))
        if self.attenuation < 0:
            raise CircuitError(f"{self.side} port {self.row}: attenuation must be >= 0")
        if self.filter is not None:
            object.__setattr__(self, "filter", frozenset(int(c) for c in self.filter))


@dataclass(frozen=True)
class ElectricPart:
    gain: float
    ports: tuple

    def __post_init__(self):
        if not (math.isfinite(self.gain) and self.gain >= 0):
            raise CircuitError(f"gain must be >= 0, got {self.gain!r}")
        seen = set()
        for port in self.ports:
            key = (port.side, port.row)
            if key in seen:
                raise CircuitError(f"duplicate {port.side} port {port.row}")
            seen.add(key)
        object.__setattr__(
            self, "ports", tuple(sorted(self.ports, key=lambda p: (p.side != INPUT, p.row)))
        )

    def port(self, side, row):
        for p in self.ports:
            if p.side == side and p.row == row:
                return p
        return None

    def rows_on(self, side):
        return tuple(p.row for p in self.ports if p.side == side and p.switch)

    def with_psi(self, psi, rows=None):
        psi = psi if isinstance(psi, PhaseAngle) else PhaseAngle(psi)
        ports = tuple(
            replace(p, psi=psi) if p.side == OUTPUT and (rows is None or p.row in rows) else p
            for p in self.ports
        )
        return replace(self, ports=ports)

    def with_gain(self, gain):
        return replace(self, gain=float(gain))


def make_ports(rows, inputs_on=(), outputs_on=(), psi=None, attenuation=None, filters=None):
    """Complete 2·rows port list; rows not listed are switched off.

    `psi`, `attenuation`: per output row dicts; `filters`: dict keyed by
    (side, row).
    """
    psi = psi or {}
    attenuation = attenuation or {}
    filters = filters or {}
    ports = []
    for row in range(1, rows + 1):
        ports.append(PortConfig(INPUT, row, row in inputs_on, filter=filters.get((INPUT, row))))
    for row in range(1, rows + 1):
        value = psi.get(row, 0.0)
        ports.append(PortConfig(
            OUTPUT, row, row in outputs_on,
            psi=value if isinstance(value, PhaseAngle) else PhaseAngle(value),
            attenuation=attenuation.get(row, 0.0),
            filter=filters.get((OUTPUT, row)),
        ))
    return tuple(ports)


@dataclass(frozen=True)
class RingCircuit:
    mesh: Mesh
    electric: ElectricPart
    phase_tolerance: float = DEFAULT_PHASE_TOLERANCE
    power_threshold: float = 1.0
    channels: tuple = ()

    def __post_init__(self):
        if not 0 < self.phase_tolerance < MAX_PHASE_TOLERANCE:
            raise CircuitError(
                f"phase_tolerance must lie in (0, 0.05π), got {self.phase_tolerance!r}"
            )
        for port in self.electric.ports:
            if not 1 <= port.row <= self.mesh.rows:
                raise CircuitError(f"{port.side} port {port.row} has no mesh row")
        if not self.electric.rows_on(INPUT) or not self.electric.rows_on(OUTPUT):
            raise CircuitError("at least one input and one output port must be switched on")
        ids = [c.id for c in self.channels]
        if len(ids) != len(set(ids)):
            raise CircuitError("channel ids must be unique")
        if not self.channels:
            object.__setattr__(
                self, "channels", tuple(FrequencyChannel(c) for c in self.mesh.channel_ids)
            )

    def with_psi(self, psi, rows=None):
        return replace(self, electric=self.electric.with_psi(psi, rows))

    def with_gain(self, gain):
        return replace(self, electric=self.electric.with_gain(gain))

    def with_tolerance(self, tolerance):
        return replace(self, phase_tolerance=float(tolerance))


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """Ordered simple walk from an input port row to an output port row."""

    input_port: int
    node_ids: tuple
    output_port: int
    channels: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "node_ids", tuple(self.node_ids))
        object.__setattr__(self, "channels", frozenset(self.channels))

    @property
    def channel(self):
        return min(self.channels) if self.channels else None

    @property
    def length_l0(self):
        return path_length_l0(self)

    def __str__(self):
        route = "-".join(str(i) for i in self.node_ids)
        return f"in{self.input_port} [{route}] out{self.output_port}"


def validate_path(mesh, path):
    ids = path.node_ids
    if not ids:
        raise PathError("path has no delay lines")
    for node_id in ids:
        mesh.node(node_id)
    if len(set(ids)) != len(ids):
        raise PathError(f"path {path} revisits a delay line")
    for a, b in zip(ids, ids[1:]):
        if not mesh.adjacent(a, b):
            raise PathError(f"path {path}: {a} and {b} are not connected")
    if mesh.position(ids[0]) != (path.input_port, 1):
        raise PathError(f"path {path} does not start at input row {path.input_port}, column 1")
    if mesh.position(ids[-1]) != (path.output_port, mesh.cols):
        raise PathError(f"path {path} does not end at output row {path.output_port}, column {mesh.cols}")


def phase_sum(mesh, node_ids):
    return PhaseAngle(sum(mesh.nodes[i - 1].delta.value for i in node_ids))


def accumulated_phase(mesh, path):
    """Internal phase shift of a path, wrapped mod 2π."""
    validate_path(mesh, path)
    return phase_sum(mesh, path.node_ids)


def path_length_l0(path):
    # internal edges plus the two port links
    return len(path.node_ids) + 1
