import pytest

from a3count.number_field import make_field


@pytest.fixture(scope="session")
def QQ():
    return make_field("Q")


@pytest.fixture(scope="session")
def Qi():
    return make_field(-1)


@pytest.fixture(scope="session")
def Qw():
    return make_field(-3)


@pytest.fixture(scope="session")
def Q5():
    return make_field(-5)


@pytest.fixture(scope="session", params=["Q", -1, -2, -3, -5, -23])
def anyfield(request):
    return make_field(request.param)
