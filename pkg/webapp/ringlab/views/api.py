"""
Read-only JSON API over the simulator services.
"""

import logging
from dataclasses import replace

from django.http import JsonResponse
from django.views.decorators.cache import cache_page
from django.views.decorators.http import require_http_methods

from .. import services
from ..services import reports
from ..services.data import circuit_to_dict
from ..services.engine import phase_grid, sensors_for
from ..services.runner import apply_tolerance
from .utils import (
    MAX_FACTOR_N,
    MAX_MESH_SIDE,
    MAX_SWEEP_POINTS,
    validate_float,
    validate_int,
    validate_int_list,
    validate_phase,
)

logger = logging.getLogger(__name__)


def _problem(name):
    """Fixture file from DATA_DIR, else the built-in construction."""
    return services.load_source(name)


@cache_page(60 * 5)
@require_http_methods(["GET"])
def api_fixtures(request):
    names = sorted(set(services.list_fixtures()) | set(services.FIXTURES))
    fixtures = []
    for name in names:
        try:
            problem = _problem(name)
        except services.RingSimError as e:
            logger.warning("fixture %s skipped: %s", name, e)
            continue
        mesh = problem.circuit.mesh
        fixtures.append({
            "name": name,
            "rows": mesh.rows,
            "cols": mesh.cols,
            "adjacency": mesh.adjacency,
            "objective": problem.objective,
        })
    return JsonResponse({"fixtures": fixtures, "count": len(fixtures)})


@cache_page(60 * 5)
@require_http_methods(["GET"])
def api_fixture_detail(request, name):
    """Circuit description plus its resonant paths at the stored settings."""
    try:
        problem = _problem(name)
    except services.FixtureError as e:
        return JsonResponse({"error": str(e)}, status=404)
    try:
        circuit = apply_tolerance(problem.circuit)
        resonant = services.find_resonant_paths(circuit)
        return JsonResponse({
            "circuit": circuit_to_dict(problem.circuit, problem),
            "paths": [reports.resonant_to_dict(r) for r in resonant],
            "sensor_bits": sensors_for(circuit.mesh, resonant).bits,
        })
    except Exception:
        logger.exception("fixture %s failed", name)
        return JsonResponse({"error": "Internal error"}, status=500)


@cache_page(60 * 5)
@require_http_methods(["GET"])
def api_factorize(request):
    """?n=15&primes=3,5,7,11,13"""
    n, error = validate_int(request.GET.get("n"), "n", minimum=2, maximum=MAX_FACTOR_N)
    if error:
        return error
    primes = list(services.DEFAULT_PRIMES)
    if request.GET.get("primes"):
        primes, error = validate_int_list(request.GET["primes"], "primes")
        if error:
            return error
    try:
        device = services.build_factorization_device(primes)
        device = replace(device, circuit=apply_tolerance(device.circuit))
    except services.RingSimError as e:
        return JsonResponse({"error": str(e)}, status=400)
    try:
        outcome = services.run_factorization(device, n)
        return JsonResponse({
            "n": n,
            "primes": list(device.primes),
            "factors": sorted(outcome.factors) if outcome.solved else None,
            "sensor_bits": outcome.sensors.bits,
            "rejected_routes": outcome.rejected,
        })
    except Exception:
        logger.exception("factorize n=%s failed", n)
        return JsonResponse({"error": "Internal error"}, status=500)


@cache_page(60 * 5)
@require_http_methods(["GET"])
def api_sweep(request, name):
    """Phase sweep (?start=&stop=&step=) or gain sweep (?levels=10,9,8)."""
    try:
        problem = _problem(name)
    except services.FixtureError as e:
        return JsonResponse({"error": str(e)}, status=404)

    circuit = apply_tolerance(problem.circuit)
    if request.GET.get("levels"):
        levels, error = validate_int_list(request.GET["levels"], "levels")
        if error:
            return error
        if len(levels) > MAX_SWEEP_POINTS:
            return JsonResponse({"error": "too many gain levels"}, status=400)
        sweep = services.sweep_gain
        args = (circuit, levels)
    else:
        bounds = {}
        for key, default in (("start", "0"), ("stop", "2pi"), ("step", "0.1pi")):
            bounds[key], error = validate_phase(request.GET.get(key, default), key)
            if error:
                return error
        try:
            points = len(phase_grid(bounds["start"], bounds["stop"], bounds["step"]))
        except services.SweepError as e:
            return JsonResponse({"error": str(e)}, status=400)
        if points > MAX_SWEEP_POINTS:
            return JsonResponse({"error": f"sweep has {points} points (max {MAX_SWEEP_POINTS})"}, status=400)
        sweep = services.sweep_phase
        args = (circuit, bounds["start"], bounds["stop"], bounds["step"])

    try:
        report = sweep(*args)
    except services.SweepError as e:
        return JsonResponse({"error": str(e)}, status=400)
    except Exception:
        logger.exception("sweep %s failed", name)
        return JsonResponse({"error": "Internal error"}, status=500)
    return JsonResponse(reports.sweep_to_dict(report))


@cache_page(60 * 5)
@require_http_methods(["GET"])
def api_capacity(request):
    """?n=50&l=100e-6&vg=1e4"""
    n, error = validate_int(request.GET.get("n", "5"), "n", minimum=1, maximum=MAX_MESH_SIDE)
    if error:
        return error
    length, error = validate_float(request.GET.get("l", "100e-6"), "l", positive=True)
    if error:
        return error
    v_g, error = validate_float(request.GET.get("vg", "1e4"), "vg", positive=True)
    if error:
        return error
    report = services.functional_throughput(n, length, v_g)
    return JsonResponse(report.as_dict())
