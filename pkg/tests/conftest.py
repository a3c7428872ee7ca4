import pytest

from ordbase.config import get_settings
from ordbase.poset import validate_poset


@pytest.fixture(autouse=True)
def small_sweeps(monkeypatch):
    monkeypatch.setenv("ORDBASE_SWEEP_COUNT", "3")
    monkeypatch.setenv("ORDBASE_SWEEP_MAX_SIZE", "5")
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def chain3():
    return validate_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])


@pytest.fixture
def diamond():
    return validate_poset(["bot", "l", "r", "top"], [("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")])


@pytest.fixture
def vee():
    """Two minimal elements below a common top, so not conditionally connected."""
    return validate_poset(["a", "b", "c"], [("a", "c"), ("b", "c")])
