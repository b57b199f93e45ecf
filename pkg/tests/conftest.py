import os
import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# Add the project root to the path so the tests can import our modules
sys.path.insert(0, str(Path(__file__).parent.parent))

settings.register_profile(
    "ci",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    print_blob=True,
)
settings.register_profile("dev", max_examples=30, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive sweeps taking minutes; deselect with -m 'not slow'")
