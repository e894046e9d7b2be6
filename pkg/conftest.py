# Wires the Django test suite (normally run via `manage.py test ringlab`) into pytest.
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "webapp"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "ringsim.settings")

import django  # noqa: E402
from django.test.utils import setup_test_environment  # noqa: E402

django.setup()
setup_test_environment()
