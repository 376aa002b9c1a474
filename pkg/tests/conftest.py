import pytest

from nlho import OscillatorParams


@pytest.fixture
def params():
    """Natural units with lam = 0.1, i.e. v = 100."""
    return OscillatorParams(1.0, 1.0, 0.1, 1.0)
