"""
Health check endpoint for monitoring and load balancers.
"""

import os

from django.conf import settings
from django.core.cache import cache
from django.http import JsonResponse
from django.views.decorators.http import require_http_methods

from .. import services


@require_http_methods(["GET"])
def health_check(request):
    """Reports cache and fixture-directory status."""
    status = {
        "status": "healthy",
        "version": settings.RINGSIM_VERSION,
        "checks": {},
    }

    if os.path.isdir(settings.DATA_DIR):
        status["checks"]["fixtures"] = f"ok ({len(services.list_fixtures())} files)"
    else:
        status["checks"]["fixtures"] = f"error: {settings.DATA_DIR} missing"
        status["status"] = "degraded"

    try:
        cache.set("health_check", "ok", 10)
        if cache.get("health_check") == "ok":
            status["checks"]["cache"] = "ok"
        else:
            status["checks"]["cache"] = "error: cache read failed"
            status["status"] = "degraded"
    except Exception as e:
        status["checks"]["cache"] = f"error: {str(e)}"
        status["status"] = "degraded"

    http_status = 200 if status["status"] == "healthy" else 503
    return JsonResponse(status, status=http_status)
