import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def zring():
    from flagmirror.algebra.poly import PolyRing
    return PolyRing(("X", "z"), {"X": 1}, {"X": 1}, None, ("z",))
