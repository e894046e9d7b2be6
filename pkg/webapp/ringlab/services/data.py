"""
Circuit description files: JSON loading with field-precise diagnostics,
deterministic saving, and the canonical fixture files under DATA_DIR.
"""

import json
import logging
import math
import os
import re

from django.conf import settings

from .circuit import (
    ADJACENCIES,
    DEFAULT_PHASE_TOLERANCE,
    INPUT,
    OUTPUT,
    TWO_PI,
    ElectricPart,
    FrequencyChannel,
    Mesh,
    MeshNode,
    PhaseAngle,
    PortConfig,
    RingCircuit,
    format_pi,
)
from .dispersion import GEOMETRIES, SpinWaveMedium, phase_over_length
from .errors import CircuitFileError, FixtureError, RingSimError
from .problems import OBJECTIVES, PHASE_MATCH, MeshProblem

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

TOP_FIELDS = {
    "format", "n", "rows", "cols", "adjacency", "cell_pitch", "gain",
    "phase_tolerance", "power_threshold", "nodes", "couplers", "ports",
    "channels", "physical", "problem",
}
NODE_FIELDS = {"id", "delta", "length_m", "filter", "sensor"}
COUPLER_FIELDS = {"a", "b", "filter"}
INPUT_FIELDS = {"row", "on", "filter"}
OUTPUT_FIELDS = {"row", "on", "psi", "attenuation", "filter"}
CHANNEL_FIELDS = {"id", "ghz"}
PHYSICAL_FIELDS = {"medium", "frequency_ghz"}
MEDIUM_FIELDS = {"d0", "M0_4pi", "H0", "gamma", "geometry"}
PROBLEM_FIELDS = {"name", "objective", "via_nodes", "gain_levels"}

_PI_UNITS = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*(?:pi|π)\s*$")

# Loaded fixtures keyed by name so commands and views don't re-read files
_fixture_cache = {}


def _strict_default():
    return getattr(settings, "RINGSIM_STRICT_FILES", True)


# ---------------------------------------------------------------------------
# Field readers
# ---------------------------------------------------------------------------

def _check_fields(obj, allowed, where, strict):
    if not isinstance(obj, dict):
        raise CircuitFileError("expected an object", field=where or None)
    unknown = sorted(set(obj) - allowed)
    if unknown and strict:
        raise CircuitFileError(f"unknown field(s) {', '.join(unknown)}", field=where or None)


def _require(obj, key, where):
    if key not in obj:
        raise CircuitFileError("missing required field", field=f"{where}.{key}" if where else key)
    return obj[key]


def _number(value, where, *, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CircuitFileError(f"expected a number, got {value!r}", field=where)
    if integer and (not isinstance(value, int)):
        raise CircuitFileError(f"expected an integer, got {value!r}", field=where)
    if not math.isfinite(value):
        raise CircuitFileError(f"expected a finite number, got {value!r}", field=where)
    return value


def _pi_units(text, where):
    match = _PI_UNITS.match(text)
    if not match:
        raise CircuitFileError(f"cannot read phase {text!r}", field=where)
    return float(match.group(1)) if match.group(1) else 1.0


def parse_phase_value(value, where="phase"):
    """Unwrapped radians from a number, a numeric string or "0.1pi"."""
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            return _pi_units(value, where) * math.pi
    return float(_number(value, where))


def parse_phase(value, where="phase"):
    """PhaseAngle from a number or a π-unit string such as "0.6pi" or "pi"."""
    if isinstance(value, str):
        units = _pi_units(value, where)
        raw = units * math.pi
        angle = PhaseAngle.from_pi(units)
    else:
        raw = float(_number(value, where))
        angle = PhaseAngle(raw)
    if not 0 <= raw < TWO_PI:
        logger.warning("%s: phase %s wrapped to %s", where, value, angle)
    return angle


def _channel_set(value, where):
    if not isinstance(value, list):
        raise CircuitFileError("expected a list of channel ids", field=where)
    ids = set()
    for i, c in enumerate(value):
        ids.add(_number(c, f"{where}[{i}]", integer=True))
    return frozenset(ids)


def _medium(section, strict):
    _check_fields(section, MEDIUM_FIELDS, "physical.medium", strict)
    params = {}
    for key in ("d0", "M0_4pi", "H0", "gamma"):
        if key in section:
            params[key] = float(_number(section[key], f"physical.medium.{key}"))
    if "geometry" in section:
        if section["geometry"] not in GEOMETRIES:
            raise CircuitFileError(
                f"geometry must be one of {', '.join(GEOMETRIES)}", field="physical.medium.geometry"
            )
        params["geometry"] = section["geometry"]
    try:
        return SpinWaveMedium(**params)
    except TypeError as exc:
        raise CircuitFileError(str(exc), field="physical.medium") from None
    except RingSimError as exc:
        raise CircuitFileError(str(exc), field="physical.medium") from None


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _nodes(data, rows, cols, strict):
    raw_nodes = _require(data, "nodes", "")
    if not isinstance(raw_nodes, list):
        raise CircuitFileError("expected a list", field="nodes")
    size = rows * cols
    if len(raw_nodes) != size:
        raise CircuitFileError(f"{rows}x{cols} mesh needs {size} nodes, got {len(raw_nodes)}", field="nodes")

    physical = data.get("physical")
    medium = frequency = None
    if physical is not None:
        _check_fields(physical, PHYSICAL_FIELDS, "physical", strict)
        medium = _medium(_require(physical, "medium", "physical"), strict)
        frequency = float(_number(_require(physical, "frequency_ghz", "physical"), "physical.frequency_ghz"))

    by_id = {}
    for i, raw in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        _check_fields(raw, NODE_FIELDS, where, strict)
        node_id = _number(_require(raw, "id", where), f"{where}.id", integer=True)
        if not 1 <= node_id <= size:
            raise CircuitFileError(f"node id {node_id} outside 1..{size}", field=f"{where}.id")
        if node_id in by_id:
            raise CircuitFileError(f"node {node_id} listed twice", field=f"{where}.id")
        if "delta" in raw:
            delta = parse_phase(raw["delta"], f"{where}.delta")
        elif "length_m" in raw:
            if medium is None:
                raise CircuitFileError("length_m needs a physical section", field=f"{where}.length_m")
            length = float(_number(raw["length_m"], f"{where}.length_m"))
            try:
                delta = phase_over_length(medium, frequency, length)
            except RingSimError as exc:
                raise CircuitFileError(str(exc), field=f"{where}.length_m") from None
        else:
            raise CircuitFileError("node needs delta or length_m", field=f"{where}.delta")
        channels = _channel_set(_require(raw, "filter", where), f"{where}.filter")
        if not channels:
            raise CircuitFileError(f"node {node_id} has an empty filter set", field=f"{where}.filter")
        sensor = raw.get("sensor", False)
        if not isinstance(sensor, bool):
            raise CircuitFileError("expected true or false", field=f"{where}.sensor")
        by_id[node_id] = MeshNode(id=node_id, delta=delta, filter=channels, sensor=sensor)
    return tuple(by_id[i] for i in range(1, size + 1))


def _couplers(data, strict):
    items = []
    for i, raw in enumerate(data.get("couplers", [])):
        where = f"couplers[{i}]"
        _check_fields(raw, COUPLER_FIELDS, where, strict)
        a = _number(_require(raw, "a", where), f"{where}.a", integer=True)
        b = _number(_require(raw, "b", where), f"{where}.b", integer=True)
        items.append(((a, b), _channel_set(_require(raw, "filter", where), f"{where}.filter")))
    return tuple(items)


def _ports(data, rows, strict):
    section = _require(data, "ports", "")
    _check_fields(section, {"inputs", "outputs"}, "ports", strict)
    given = {}
    for side, key, allowed in ((INPUT, "inputs", INPUT_FIELDS), (OUTPUT, "outputs", OUTPUT_FIELDS)):
        for i, raw in enumerate(section.get(key, [])):
            where = f"ports.{key}[{i}]"
            _check_fields(raw, allowed, where, strict)
            row = _number(_require(raw, "row", where), f"{where}.row", integer=True)
            if not 1 <= row <= rows:
                raise CircuitFileError(f"row {row} outside 1..{rows}", field=f"{where}.row")
            if (side, row) in given:
                raise CircuitFileError(f"{side} port {row} listed twice", field=f"{where}.row")
            on = raw.get("on", False)
            if not isinstance(on, bool):
                raise CircuitFileError("expected true or false", field=f"{where}.on")
            port_filter = _channel_set(raw["filter"], f"{where}.filter") if "filter" in raw else None
            if side == INPUT:
                port = PortConfig(INPUT, row, on, filter=port_filter)
            else:
                port = PortConfig(
                    OUTPUT, row, on,
                    psi=parse_phase(raw.get("psi", 0.0), f"{where}.psi"),
                    attenuation=float(_number(raw.get("attenuation", 0.0), f"{where}.attenuation")),
                    filter=port_filter,
                )
            given[(side, row)] = port
    ports = []
    for side in (INPUT, OUTPUT):
        for row in range(1, rows + 1):
            ports.append(given.get((side, row), PortConfig(side, row)))
    return tuple(ports)


def _channels(data, strict):
    channels = []
    for i, raw in enumerate(data.get("channels", [])):
        where = f"channels[{i}]"
        _check_fields(raw, CHANNEL_FIELDS, where, strict)
        cid = _number(_require(raw, "id", where), f"{where}.id", integer=True)
        ghz = raw.get("ghz")
        channels.append(FrequencyChannel(cid, None if ghz is None else float(_number(ghz, f"{where}.ghz"))))
    return tuple(channels)


def circuit_from_dict(data, strict=None):
    """Validated RingCircuit from an already-decoded description."""
    strict = _strict_default() if strict is None else strict
    _check_fields(data, TOP_FIELDS, "", strict)
    if "rows" in data or "cols" in data:
        rows = _number(_require(data, "rows", ""), "rows", integer=True)
        cols = _number(_require(data, "cols", ""), "cols", integer=True)
    else:
        rows = cols = _number(_require(data, "n", ""), "n", integer=True)
    if rows < 1 or cols < 1:
        raise CircuitFileError("mesh needs at least one row and one column", field="rows")
    adjacency = data.get("adjacency", "rook")
    if adjacency not in ADJACENCIES:
        raise CircuitFileError(f"must be one of {', '.join(ADJACENCIES)}", field="adjacency")

    nodes = _nodes(data, rows, cols, strict)
    try:
        mesh = Mesh(
            rows=rows, cols=cols, adjacency=adjacency, nodes=nodes,
            couplers=_couplers(data, strict),
            cell_pitch=float(_number(data.get("cell_pitch", 1.0), "cell_pitch")),
        )
    except RingSimError as exc:
        if isinstance(exc, CircuitFileError):
            raise
        raise CircuitFileError(str(exc), field="couplers") from None

    try:
        electric = ElectricPart(
            gain=float(_number(_require(data, "gain", ""), "gain")),
            ports=_ports(data, rows, strict),
        )
    except CircuitFileError:
        raise
    except RingSimError as exc:
        raise CircuitFileError(str(exc), field="ports") from None

    try:
        return RingCircuit(
            mesh=mesh,
            electric=electric,
            phase_tolerance=float(_number(
                data.get("phase_tolerance", DEFAULT_PHASE_TOLERANCE), "phase_tolerance"
            )),
            power_threshold=float(_number(data.get("power_threshold", 1.0), "power_threshold")),
            channels=_channels(data, strict),
        )
    except CircuitFileError:
        raise
    except RingSimError as exc:
        raise CircuitFileError(str(exc)) from None


def _decode(source):
    if hasattr(source, "read"):
        text, name = source.read(), getattr(source, "name", "<stream>")
    else:
        name = os.fspath(source)
        try:
            with open(name, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise CircuitFileError(f"cannot read {name}: {exc.strerror}") from None
    try:
        return json.loads(text), name
    except json.JSONDecodeError as exc:
        raise CircuitFileError(exc.msg, line=exc.lineno) from None


def load_circuit(source, strict=None):
    """Read and validate a circuit description (path or open file)."""
    data, name = _decode(source)
    circuit = circuit_from_dict(data, strict)
    logger.info("loaded %s: %dx%d mesh", name, circuit.mesh.rows, circuit.mesh.cols)
    return circuit


def _number_list(section, key, *, integer):
    where = f"problem.{key}"
    values = section.get(key, [])
    if not isinstance(values, list):
        raise CircuitFileError("expected a list", field=where)
    return [_number(v, f"{where}[{i}]", integer=integer) for i, v in enumerate(values)]


def problem_from_dict(data, strict=None):
    strict = _strict_default() if strict is None else strict
    circuit = circuit_from_dict(data, strict)
    section = data.get("problem", {})
    _check_fields(section, PROBLEM_FIELDS, "problem", strict)
    objective = section.get("objective", PHASE_MATCH)
    if objective not in OBJECTIVES:
        raise CircuitFileError(f"must be one of {', '.join(OBJECTIVES)}", field="problem.objective")
    via_nodes = _number_list(section, "via_nodes", integer=True)
    gain_levels = _number_list(section, "gain_levels", integer=False)
    try:
        return MeshProblem(
            name=section.get("name", "custom"),
            circuit=circuit,
            objective=objective,
            via_nodes=frozenset(via_nodes),
            gain_levels=tuple(gain_levels),
        )
    except RingSimError as exc:
        raise CircuitFileError(str(exc), field="problem") from None


def load_problem(source, strict=None):
    data, _ = _decode(source)
    return problem_from_dict(data, strict)


# ---------------------------------------------------------------------------
# Saving
# ---------------------------------------------------------------------------

def _ids(channels):
    return sorted(channels)


def circuit_to_dict(circuit, problem=None):
    mesh, electric = circuit.mesh, circuit.electric
    data = {"format": FORMAT_VERSION}
    if mesh.is_square:
        data["n"] = mesh.rows
    else:
        data["rows"], data["cols"] = mesh.rows, mesh.cols
    data.update({
        "adjacency": mesh.adjacency,
        "cell_pitch": mesh.cell_pitch,
        "gain": electric.gain,
        "phase_tolerance": circuit.phase_tolerance,
        "power_threshold": circuit.power_threshold,
        "nodes": [
            {"id": node.id, "delta": format_pi(node.delta.value), "filter": _ids(node.filter)}
            | ({"sensor": True} if node.sensor else {})
            for node in mesh.nodes
        ],
    })
    if mesh.couplers:
        data["couplers"] = [
            {"a": a, "b": b, "filter": _ids(channels)} for (a, b), channels in mesh.couplers
        ]
    inputs, outputs = [], []
    for port in electric.ports:
        entry = {"row": port.row, "on": port.switch}
        if port.side == OUTPUT:
            entry["psi"] = format_pi(port.psi.value)
            if port.attenuation:
                entry["attenuation"] = port.attenuation
        if port.filter is not None:
            entry["filter"] = _ids(port.filter)
        (inputs if port.side == INPUT else outputs).append(entry)
    data["ports"] = {"inputs": inputs, "outputs": outputs}
    if any(c.value_ghz is not None for c in circuit.channels):
        data["channels"] = [
            {"id": c.id} | ({"ghz": c.value_ghz} if c.value_ghz is not None else {})
            for c in circuit.channels
        ]
    if problem is not None:
        section = {"name": problem.name, "objective": problem.objective}
        if problem.via_nodes:
            section["via_nodes"] = sorted(problem.via_nodes)
        if problem.gain_levels:
            section["gain_levels"] = list(problem.gain_levels)
        data["problem"] = section
    return data


def save_circuit(circuit, problem=None):
    """Deterministic JSON text; phases in π units."""
    return json.dumps(circuit_to_dict(circuit, problem), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Fixture files
# ---------------------------------------------------------------------------

def fixture_path(name):
    return os.path.join(settings.DATA_DIR, f"{name}.json")


def load_fixture(name):
    """MeshProblem stored in DATA_DIR/<name>.json."""
    path = fixture_path(name)
    key = (os.path.abspath(path), _strict_default())
    if key in _fixture_cache:
        return _fixture_cache[key]
    if not os.path.exists(path):
        raise FixtureError(f"no fixture file for {name!r} in {settings.DATA_DIR}")
    problem = load_problem(path)
    _fixture_cache[key] = problem
    return problem


def list_fixtures():
    try:
        names = os.listdir(settings.DATA_DIR)
    except FileNotFoundError:
        return []
    return sorted(fn[:-5] for fn in names if fn.endswith(".json"))
