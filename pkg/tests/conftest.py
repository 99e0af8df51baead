import pytest

from bonnet.identities import GaussBonnetConstants


def pytest_addoption(parser):
    """Add custom command line options."""
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run slow tests (n = 4 quadrature, calibration sweeps)"
    )


def pytest_collection_modifyitems(config, items):
    """Skip slow tests by default unless --run-slow is passed."""
    if not config.getoption("--run-slow"):
        skip_slow = pytest.mark.skip(reason="need --run-slow option to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)


@pytest.fixture
def surface_constants():
    """Gauss-Bonnet constant of surfaces (c_1 = 1)."""
    return GaussBonnetConstants(n=2, c=[1.0])
