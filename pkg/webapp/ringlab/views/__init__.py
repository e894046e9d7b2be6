"""
Ring simulator views package.

Re-exports all views for urls.py.
"""

# Health check
from .health import health_check

# Read-only simulator API
from .api import (
    api_fixtures,
    api_fixture_detail,
    api_factorize,
    api_sweep,
    api_capacity,
)

__all__ = [
    "health_check",
    "api_fixtures",
    "api_fixture_detail",
    "api_factorize",
    "api_sweep",
    "api_capacity",
]
