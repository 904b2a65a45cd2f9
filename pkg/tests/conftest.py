import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from funkgeom import catalog
from funkgeom.bodyio import load_body

ROOT = Path(__file__).resolve().parents[1]
BODIES = ROOT / "bodies"
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def disk():
    return catalog.unit_disk()


@pytest.fixture
def square():
    return catalog.unit_square()


@pytest.fixture
def halfplane():
    return catalog.upper_half_plane()


@pytest.fixture(params=["disk", "square", "polygon12", "ellipse", "lens"])
def bounded_body(request):
    return load_body(BODIES / f"{request.param}.json")


@pytest.fixture(params=["disk", "square", "polygon12", "ellipse", "lens", "halfplane", "strip"])
def any_body(request):
    return load_body(BODIES / f"{request.param}.json")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
