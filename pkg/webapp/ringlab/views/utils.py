"""
Shared utilities for views: query-parameter validation.
"""

from django.http import JsonResponse

from ..services.data import parse_phase_value
from ..services.errors import RingSimError


# =============================================================================
# CONSTANTS
# =============================================================================

MAX_FACTOR_N = 10 ** 12
MAX_MESH_SIDE = 200
MAX_SWEEP_POINTS = 721


# =============================================================================
# VALIDATION UTILITIES
# =============================================================================

def validate_int(value, name, minimum=None, maximum=None):
    """Parse an integer query parameter.

    Returns (value, None) on success, (None, error_response) on failure.
    """
    try:
        val = int(value)
    except (ValueError, TypeError):
        return None, JsonResponse({"error": f"Invalid {name}"}, status=400)
    if minimum is not None and val < minimum:
        return None, JsonResponse({"error": f"{name} must be >= {minimum}"}, status=400)
    if maximum is not None and val > maximum:
        return None, JsonResponse({"error": f"{name} must be <= {maximum}"}, status=400)
    return val, None


def validate_float(value, name, positive=False):
    try:
        val = float(value)
    except (ValueError, TypeError):
        return None, JsonResponse({"error": f"Invalid {name}"}, status=400)
    if positive and not val > 0:
        return None, JsonResponse({"error": f"{name} must be positive"}, status=400)
    return val, None


def validate_phase(value, name):
    """Radians from "1.2", "0.1pi" or "pi"."""
    try:
        return parse_phase_value(value, name), None
    except RingSimError:
        return None, JsonResponse({"error": f"Invalid {name}"}, status=400)


def validate_int_list(value, name):
    """Comma-separated integers, e.g. ``3,5,7``."""
    try:
        items = [int(v) for v in str(value).split(",") if v.strip()]
    except ValueError:
        return None, JsonResponse({"error": f"Invalid {name}"}, status=400)
    if not items:
        return None, JsonResponse({"error": f"{name} is empty"}, status=400)
    return items, None
