"""
Run orchestration: a RunManifest names the command, its input and parameter
overrides; run() dispatches to the services and returns the exit status
with the report bundle.

Exit statuses: 0 solved, 1 no resonance (a legitimate answer), 2 error.
"""

import logging
import os
from dataclasses import asdict, dataclass, field, replace

from django.conf import settings

from . import capacity, dispersion, engine, problems, reports
from .data import load_fixture, load_problem, parse_phase_value
from .errors import FixtureError, RingSimError

logger = logging.getLogger(__name__)

SOLVED = 0
NO_RESONANCE = 1
ERROR = 2

COMMANDS = (
    "factorize", "solve", "sweep-phase", "sweep-gain",
    "dispersion", "capacity", "validate",
)

DEFAULT_PHASE_STEP = "0.1pi"

MEDIA = {
    "line1": dispersion.YIG_DELAY_LINE_1,
    "line2": dispersion.YIG_DELAY_LINE_2,
}

SOURCE_FIXTURE = "fixture"
SOURCE_FILE = "file"


@dataclass(frozen=True)
class RunManifest:
    command: str
    source: str | None = None
    overrides: dict = field(default_factory=dict)
    output_dir: str | None = None
    version: str = ""
    seed: str | None = None
    # "file" for --circuit; fixture names fall back to the built-in constructions
    source_kind: str = SOURCE_FIXTURE

    def as_dict(self):
        data = asdict(self)
        data["overrides"] = dict(sorted(self.overrides.items()))
        return data


@dataclass(frozen=True)
class RunResult:
    status: int
    summary: str
    files: dict = field(default_factory=dict)
    error: str | None = None


def usage():
    return "usage: <command> [options]; commands: " + ", ".join(COMMANDS)


def _opt(manifest, key, default=None):
    value = manifest.overrides.get(key)
    return default if value is None else value


def load_source(source, kind=SOURCE_FIXTURE):
    """MeshProblem from a circuit file path or a fixture name."""
    if not source:
        raise RingSimError("a --fixture or --circuit input is required")
    if kind == SOURCE_FILE:
        return load_problem(source)
    try:
        return load_fixture(source)
    except FixtureError:
        return problems.build_mesh_problem(source)


def apply_tolerance(circuit, tolerance=None):
    """Explicit tolerance, else RINGSIM_PHASE_TOLERANCE, else the circuit's own."""
    if tolerance is None:
        tolerance = getattr(settings, "RINGSIM_PHASE_TOLERANCE", None)
    if tolerance is None:
        return circuit
    return circuit.with_tolerance(float(tolerance))


def _problem(manifest):
    return load_source(manifest.source, manifest.source_kind)


def _with_tolerance(problem, manifest):
    return apply_tolerance(problem.circuit, _opt(manifest, "tolerance"))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _factorize(manifest):
    primes = _opt(manifest, "primes", problems.DEFAULT_PRIMES)
    device = problems.build_factorization_device(primes)
    device = replace(device, circuit=apply_tolerance(device.circuit, _opt(manifest, "tolerance")))
    N = _opt(manifest, "N")
    if N is None:
        raise RingSimError("factorize needs N")
    N = int(N)
    outcome = problems.run_factorization(device, N)
    body = {
        "N": N,
        "primes": list(device.primes),
        "factors": sorted(outcome.factors) if outcome.solved else None,
        "sensor_bits": outcome.sensors.bits,
        "paths": [reports.resonant_to_dict(r) for r in outcome.resonant],
        "rejected_routes": outcome.rejected,
    }
    if outcome.solved:
        text = " × ".join(str(p) for p in sorted(outcome.factors))
        status = SOLVED
    else:
        text = "no factorization over device primes"
        status = NO_RESONANCE
    summary = f"{text}\n{reports.render_grid(outcome.sensors)}"
    return status, summary, {"report.json": reports.to_json(body)}


def _phase_sweep(circuit, manifest):
    start = parse_phase_value(_opt(manifest, "start", 0.0))
    stop = parse_phase_value(_opt(manifest, "stop", "2pi"))
    step = parse_phase_value(_opt(manifest, "step", DEFAULT_PHASE_STEP))
    return engine.sweep_phase(circuit, start, stop, step)


def _sweep_files(report, manifest):
    files = {
        "report.csv": reports.sweep_csv(report),
        "report.json": reports.to_json(reports.sweep_to_dict(report)),
    }
    if _opt(manifest, "xlsx", False) and manifest.output_dir:
        files["report.xlsx"] = reports.sweep_xlsx(report)
    return files


def _sweep_status(report):
    return SOLVED if any(r.resonant for r in report.records) else NO_RESONANCE


def _sweep_phase(manifest):
    problem = _problem(manifest)
    report = _phase_sweep(_with_tolerance(problem, manifest), manifest)
    return _sweep_status(report), reports.sweep_summary(report), _sweep_files(report, manifest)


def _sweep_gain(manifest):
    problem = _problem(manifest)
    levels = _opt(manifest, "levels") or problem.gain_levels or problems.default_ladder(problem.circuit)
    report = engine.sweep_gain(_with_tolerance(problem, manifest), levels)
    return _sweep_status(report), reports.sweep_summary(report), _sweep_files(report, manifest)


def _solve(manifest):
    problem = _problem(manifest)
    circuit = _with_tolerance(problem, manifest)
    if _opt(manifest, "sweep_phase", False):
        report = _phase_sweep(circuit, manifest)
        return _sweep_status(report), reports.sweep_summary(report), _sweep_files(report, manifest)

    if problem.objective == problems.PHASE_MATCH:
        resonant = engine.find_resonant_paths(circuit)
        sensors = engine.sensors_for(circuit.mesh, resonant)
        body = {"objective": problem.objective, "paths": [reports.resonant_to_dict(r) for r in resonant],
                "sensor_bits": sensors.bits}
        lines = [f"{len(resonant)} resonant path(s)"]
        lines.extend(reports.describe_path(r) for r in resonant)
        lines.append(reports.render_grid(sensors))
        status = SOLVED if resonant else NO_RESONANCE
        return status, "\n".join(lines), {"report.json": reports.to_json(body)}

    solution = problems.solve_shortest(replace(problem, circuit=circuit))
    if solution is None:
        body = {"objective": problem.objective, "gain": None, "paths": []}
        return NO_RESONANCE, "no resonance at any gain level", {"report.json": reports.to_json(body)}
    sensors = engine.sensors_for(circuit.mesh, solution.resonant)
    body = {
        "objective": problem.objective,
        "gain": solution.gain,
        "paths": [reports.resonant_to_dict(r) for r in solution.resonant],
        "sensor_bits": sensors.bits,
    }
    lines = [f"shortest path at {solution.gain:g} A0: {reports.describe_path(solution.resonant[0])}"
             if len(solution.resonant) == 1 else
             f"{len(solution.resonant)} path(s) at {solution.gain:g} A0"]
    if len(solution.resonant) > 1:
        lines.extend(reports.describe_path(r) for r in solution.resonant)
    lines.append(reports.render_grid(sensors))
    return SOLVED, "\n".join(lines), {"report.json": reports.to_json(body)}


def _medium(manifest):
    name = _opt(manifest, "medium")
    if name is not None:
        if name not in MEDIA:
            raise RingSimError(f"unknown medium {name!r}; choose from {', '.join(sorted(MEDIA))}")
        medium = MEDIA[name]
    else:
        medium = dispersion.SpinWaveMedium(
            d0=float(_opt(manifest, "d0", dispersion.YIG_DELAY_LINE_1.d0)),
            M0_4pi=float(_opt(manifest, "M0_4pi", dispersion.YIG_DELAY_LINE_1.M0_4pi)),
            H0=float(_opt(manifest, "H0", dispersion.DEFAULT_BIAS_OE)),
        )
    geometry = _opt(manifest, "geometry")
    return medium.with_geometry(geometry) if geometry else medium


def _dispersion(manifest):
    medium = _medium(manifest)
    low, high = dispersion.band_limits(medium)
    body = {
        "geometry": medium.geometry,
        "f_H": medium.f_H,
        "f_M": medium.f_M,
        "band_ghz": [low, high],
    }
    lines = [f"{medium.geometry} band {low:.6f} .. {high:.6f} GHz"]
    frequency = _opt(manifest, "frequency")
    if frequency is not None:
        k = dispersion.wavenumber_for(medium, frequency)
        body["frequency_ghz"] = float(frequency)
        body["k_rad_per_m"] = k
        lines.append(f"k({float(frequency):g} GHz) = {k:.6g} rad/m")
    points = dispersion.dispersion_table(
        medium,
        float(_opt(manifest, "k_min", 0.0)),
        float(_opt(manifest, "k_max", 20.0 / medium.d0)),
        int(_opt(manifest, "points", 50)),
    )
    return SOLVED, "\n".join(lines), {
        "report.csv": reports.dispersion_csv(points),
        "report.json": reports.to_json(body),
    }


def _capacity(manifest):
    report = capacity.functional_throughput(
        int(_opt(manifest, "n", 5)),
        float(_opt(manifest, "l", 100e-6)),
        float(_opt(manifest, "v_g", 1e4)),
        z=int(_opt(manifest, "z", capacity.DEFAULT_PHASE_STEPS)),
        levels=int(_opt(manifest, "levels", capacity.DEFAULT_AMPLITUDE_LEVELS)),
    )
    return SOLVED, reports.capacity_table(report), {"report.json": reports.to_json(report.as_dict())}


def _validate(manifest):
    problem = _problem(manifest)
    mesh = problem.circuit.mesh
    summary = (
        f"ok: {mesh.rows}x{mesh.cols} {mesh.adjacency} mesh, "
        f"{len(problem.circuit.channels)} channel(s), objective {problem.objective}"
    )
    return SOLVED, summary, {}


HANDLERS = {
    "factorize": _factorize,
    "solve": _solve,
    "sweep-phase": _sweep_phase,
    "sweep-gain": _sweep_gain,
    "dispersion": _dispersion,
    "capacity": _capacity,
    "validate": _validate,
}


def run(manifest):
    command = manifest.command.replace("_", "-")
    handler = HANDLERS.get(command)
    if handler is None:
        return RunResult(ERROR, usage(), error=f"unknown command {manifest.command!r}")
    try:
        status, summary, files = handler(manifest)
        files = dict(files)
        files["manifest.json"] = reports.to_json(manifest.as_dict())
        files["summary.txt"] = summary + "\n"
        if manifest.output_dir:
            reports.write_bundle(manifest.output_dir, files)
    except RingSimError as exc:
        logger.info("%s failed: %s", command, exc)
        return RunResult(ERROR, "", error=str(exc))
    except (ValueError, TypeError, OSError) as exc:
        logger.warning("%s failed: %s: %s", command, type(exc).__name__, exc)
        return RunResult(ERROR, "", error=f"{type(exc).__name__}: {exc}")
    return RunResult(status, summary, files)
