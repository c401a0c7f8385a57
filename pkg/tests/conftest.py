import pytest
from hypothesis import settings

from magtwist.io import load_fixture
from magtwist.twist import build_twist_pair

# exact computations vary a lot in cost between examples
settings.register_profile("magtwist", deadline=None)
settings.load_profile("magtwist")


@pytest.fixture(scope="session")
def fig2():
    return build_twist_pair(load_fixture("fig2"))


@pytest.fixture(scope="session")
def fig4():
    return build_twist_pair(load_fixture("fig4"))


@pytest.fixture(scope="session", params=["fig2", "fig4"])
def sycamore_pair(request):
    return build_twist_pair(load_fixture(request.param))
