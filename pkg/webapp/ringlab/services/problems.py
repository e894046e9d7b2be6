"""
Problem compilers: build circuits for the worked problems (prime
factorization, phase-matched paths, shortest paths) and decode the
resonant paths back into answers.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from .circuit import (
    KING,
    OUTPUT,
    ROOK,
    ElectricPart,
    PhaseAngle,
    RingCircuit,
    build_mesh,
    make_ports,
    path_length_l0,
    validate_path,
    wrap_distance,
)
from .engine import all_port_paths, resonant_subset, sensors_for, sweep_gain
from .errors import CircuitError, FixtureError, RingSimError

logger = logging.getLogger(__name__)

DEFAULT_PRIMES = (3, 5, 7, 11, 13)
# One channel per route: 2^k channels for k blocks.
MAX_BLOCKS = 12

PHASE_MATCH = "phase-match"
SHORTEST = "shortest"
SHORTEST_VIA_NODES = "shortest-via-nodes"
OBJECTIVES = (PHASE_MATCH, SHORTEST, SHORTEST_VIA_NODES)


# ---------------------------------------------------------------------------
# Two-path blocks
# ---------------------------------------------------------------------------

def route_channel(route):
    """Channel id of a route (tuple of booleans, True = upper path).

    All-upper is channel 1; flipping block i to its lower path adds 2**i.
    """
    return 1 + sum(1 << i for i, upper in enumerate(route) if not upper)


def build_block_chain(upper_deltas, lower_deltas=None, *, gain=None, psi=0.0):
    """Chain of two-path blocks on a 2 x k king-step mesh.

    Row 1 holds the upper delay lines, row 2 the lower ones. Each block's
    filters pass exactly the channels of the routes through it, so a walk
    that touches both paths of a block has no common channel and every
    viable path is one of the 2**k routes.
    """
    k = len(upper_deltas)
    if k < 1:
        raise CircuitError("a block chain needs at least one block")
    if k > MAX_BLOCKS:
        raise CircuitError(f"at most {MAX_BLOCKS} blocks are supported, got {k}")
    lower_deltas = list(lower_deltas) if lower_deltas is not None else [0.0] * k
    if len(lower_deltas) != k:
        raise CircuitError("upper and lower delta lists differ in length")

    routes = range(1 << k)
    upper_filters = [frozenset(1 + m for m in routes if not (m >> i) & 1) for i in range(k)]
    lower_filters = [frozenset(1 + m for m in routes if (m >> i) & 1) for i in range(k)]
    mesh = build_mesh(
        2, KING,
        list(upper_deltas) + lower_deltas,
        upper_filters + lower_filters,
        cols=k,
    )
    electric = ElectricPart(
        gain=float(k + 1 if gain is None else gain),
        ports=make_ports(2, inputs_on=(1, 2), outputs_on=(1, 2), psi={1: psi, 2: psi}),
    )
    return RingCircuit(mesh=mesh, electric=electric)


def decode_route(path, cols):
    """Upper/lower choice per block, read from the path's node ids."""
    route = [None] * cols
    for node_id in path.node_ids:
        row, col = divmod(node_id - 1, cols)
        route[col] = row == 0
    return tuple(route)


def build_two_path_circuit(delta1=PhaseAngle.from_pi(1.7), delta2=PhaseAngle.from_pi(1.0), psi=0.0):
    """Two delay lines in parallel with filters on f1 (upper) and f2 (lower)."""
    mesh = build_mesh(2, ROOK, [delta1, delta2], [{1}, {2}], cols=1)
    electric = ElectricPart(
        gain=2.0,
        ports=make_ports(2, inputs_on=(1, 2), outputs_on=(1, 2), psi={1: psi, 2: psi}),
    )
    return RingCircuit(mesh=mesh, electric=electric)


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------

def _is_prime(p):
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def log_phase(value):
    """π·log10(value), the phase a factor contributes."""
    return math.pi * math.log10(value)


@dataclass(frozen=True)
class FactorizationDevice:
    primes: tuple
    circuit: RingCircuit

    @cached_property
    def routes(self):
        return all_port_paths(self.circuit)

    @property
    def blocks(self):
        return len(self.primes)


@dataclass(frozen=True)
class FactorizationOutcome:
    N: int
    factors: frozenset | None
    resonant: tuple
    sensors: object
    # phase-matched routes whose prime product is not N
    rejected: int = 0

    @property
    def solved(self):
        return self.factors is not None


def build_factorization_device(primes=DEFAULT_PRIMES):
    primes = tuple(int(p) for p in primes)
    if not primes:
        raise RingSimError("factorization device needs at least one prime")
    if len(set(primes)) != len(primes):
        raise RingSimError(f"device primes must be distinct, got {list(primes)}")
    bad = [p for p in primes if not _is_prime(p)]
    if bad:
        raise RingSimError(f"not prime: {bad}")
    upper = [PhaseAngle(log_phase(p)) for p in primes]
    return FactorizationDevice(primes=primes, circuit=build_block_chain(upper))


def run_factorization(device, N):
    """Set Ψ = 2π - π·log10(N) and decode the resonant route."""
    N = int(N)
    if N < 2:
        raise RingSimError(f"N must be >= 2, got {N}")
    circuit = device.circuit.with_psi(PhaseAngle(2 * math.pi - log_phase(N)))
    resonant = tuple(resonant_subset(circuit, device.routes))
    for hit in resonant:
        route = decode_route(hit.path, device.blocks)
        factors = frozenset(p for p, upper in zip(device.primes, route) if upper)
        if math.prod(factors) == N:
            return FactorizationOutcome(N, factors, (hit,), sensors_for(circuit.mesh, (hit,)))
    dark = sensors_for(circuit.mesh, ())
    if resonant:
        logger.warning("N=%d: %d phase-matched route(s) fail the integer check", N, len(resonant))
    return FactorizationOutcome(N, None, (), dark, rejected=len(resonant))


def factorize(device, N):
    """Set of device primes whose product is N, or None."""
    return run_factorization(device, N).factors


# ---------------------------------------------------------------------------
# Mesh problems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeshProblem:
    name: str
    circuit: RingCircuit
    objective: str = PHASE_MATCH
    via_nodes: frozenset = field(default_factory=frozenset)
    gain_levels: tuple = ()

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise RingSimError(f"unknown objective {self.objective!r}")
        object.__setattr__(self, "via_nodes", frozenset(self.via_nodes))
        if self.objective == SHORTEST_VIA_NODES:
            if not self.via_nodes:
                raise RingSimError("shortest-via-nodes needs at least one via node")
            mesh = self.circuit.mesh
            via_sum = sum(mesh.node(i).delta.value for i in self.via_nodes)
            for row in self.circuit.electric.rows_on(OUTPUT):
                psi = self.circuit.electric.port(OUTPUT, row).psi
                if wrap_distance(psi.value + via_sum) > self.circuit.phase_tolerance:
                    raise RingSimError(
                        f"output {row}: Ψ must complement the via-node phase sum"
                    )


@dataclass(frozen=True)
class ShortestSolution:
    resonant: tuple
    gain: float

    @property
    def path(self):
        return min(self.resonant, key=lambda r: (path_length_l0(r.path), r.path.node_ids)).path


LADDER_10_TO_3 = tuple(range(10, 2, -1))
LADDER_10_TO_4 = tuple(range(10, 3, -1))

_EXAMPLE2_DELTAS = (0.1, 0.1, 0.1, 0.2, 0.4, 0.6, 0.1, 0.1, 0.1)
_EXAMPLE4_DELTAS = (0.0, 0.5, 0.0, 0.3, 0.0, 0.7, 0.0, 0.0, 0.0)


def _square(deltas_pi, filters, couplers=None):
    return build_mesh(
        3, ROOK,
        [PhaseAngle.from_pi(d) for d in deltas_pi],
        filters,
        couplers=couplers,
    )


def _example2():
    # Couplers 1-2 / 2-3 and the output-1 filter block only the straight
    # 1-2-3 route; every other route keeps a channel.
    mesh = _square(
        _EXAMPLE2_DELTAS, [{1, 2, 3}] * 9,
        couplers={(1, 2): {1, 3}, (2, 3): {1, 2}},
    )
    ports = make_ports(3, inputs_on=(1,), outputs_on=(1, 2, 3), filters={(OUTPUT, 1): {2, 3}})
    circuit = RingCircuit(mesh=mesh, electric=ElectricPart(gain=10.0, ports=ports))
    return MeshProblem("example2", circuit, PHASE_MATCH)


def _example3():
    mesh = _square(_EXAMPLE2_DELTAS, [{1}] * 9)
    psi = {1: PhaseAngle.from_pi(1.7), 2: PhaseAngle.from_pi(0.8), 3: PhaseAngle.from_pi(0.9)}
    ports = make_ports(3, inputs_on=(1,), outputs_on=(1, 2, 3), psi=psi)
    circuit = RingCircuit(mesh=mesh, electric=ElectricPart(gain=10.0, ports=ports))
    return MeshProblem("example3", circuit, SHORTEST, gain_levels=LADDER_10_TO_3)


def _example4():
    mesh = _square(_EXAMPLE4_DELTAS, [{1}] * 9)
    ports = make_ports(3, inputs_on=(1,), outputs_on=(3,), psi={3: PhaseAngle.from_pi(0.5)})
    circuit = RingCircuit(mesh=mesh, electric=ElectricPart(gain=10.0, ports=ports))
    return MeshProblem(
        "example4", circuit, SHORTEST_VIA_NODES,
        via_nodes=frozenset({2, 4, 6}), gain_levels=LADDER_10_TO_4,
    )


def _two_path():
    return MeshProblem("two_path", build_two_path_circuit(), PHASE_MATCH)


FIXTURES = {
    "two_path": _two_path,
    "example2": _example2,
    "example3": _example3,
    "example4": _example4,
}


def build_mesh_problem(source):
    """MeshProblem from a fixture name or from keyword parameters.

    Parameters: ``{"circuit": RingCircuit, "objective": ..., "via_nodes":
    ..., "gain_levels": ..., "name": ...}``.
    """
    if isinstance(source, str):
        try:
            return FIXTURES[source]()
        except KeyError:
            raise FixtureError(
                f"unknown fixture {source!r}; choose from {', '.join(sorted(FIXTURES))}"
            ) from None
    params = dict(source)
    return MeshProblem(
        name=params.get("name", "custom"),
        circuit=params["circuit"],
        objective=params.get("objective", PHASE_MATCH),
        via_nodes=frozenset(params.get("via_nodes", ())),
        gain_levels=tuple(params.get("gain_levels", ())),
    )


def default_ladder(circuit):
    """Max..1 A0: the longest simple path has rows*cols + 1 links."""
    return tuple(range(len(circuit.mesh.nodes) + 1, 0, -1))


def solve_shortest(problem):
    """Lower the gain step by step; keep the last level that still oscillates."""
    if problem.objective not in (SHORTEST, SHORTEST_VIA_NODES):
        raise RingSimError(f"{problem.name}: objective {problem.objective!r} is not a shortest-path search")
    levels = problem.gain_levels or default_ladder(problem.circuit)
    report = sweep_gain(problem.circuit, levels)
    best = None
    for record in reversed(report.records):
        resonant = record.resonant
        if problem.objective == SHORTEST_VIA_NODES:
            resonant = tuple(r for r in resonant if problem.via_nodes <= set(r.path.node_ids))
        if not resonant:
            break
        best = ShortestSolution(resonant, record.value)
    if best is None:
        logger.info("%s: no resonance at any gain level", problem.name)
    return best


# ---------------------------------------------------------------------------
# Frequency reuse
# ---------------------------------------------------------------------------

def assign_channels(mesh, paths, s):
    """Greedy channel assignment: paths that share a delay line differ.

    Returns one channel id (1-based) per path, or None when the greedy
    coloring needs more than `s` channels.
    """
    if s < 1:
        raise RingSimError(f"channel budget must be >= 1, got {s}")
    for path in paths:
        validate_path(mesh, path)
    conflicts = nx.Graph()
    conflicts.add_nodes_from(range(len(paths)))
    node_sets = [set(p.node_ids) for p in paths]
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            if node_sets[i] & node_sets[j]:
                conflicts.add_edge(i, j)
    coloring = nx.greedy_color(conflicts, strategy="largest_first")
    channels = tuple(coloring[i] + 1 for i in range(len(paths)))
    if channels and max(channels) > s:
        return None
    return channels
