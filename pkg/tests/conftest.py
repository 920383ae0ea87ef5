import pytest

from colexjump import make_context, minimal_colex, split_colex
from colexjump.codes import build_2d, build_3d, build_inner


@pytest.fixture(scope="session")
def tri7():
    return minimal_colex(2)


@pytest.fixture(scope="session")
def tetra15():
    return minimal_colex(3)


@pytest.fixture(scope="session")
def split15(tetra15):
    return split_colex(tetra15, "rgb")


@pytest.fixture(scope="session")
def ctx(tetra15):
    return make_context(tetra15, "rgb")


@pytest.fixture(scope="session")
def code2(tri7):
    return build_2d(tri7)


@pytest.fixture(scope="session")
def code3(tetra15):
    return build_3d(tetra15)


@pytest.fixture(scope="session")
def inner_code(split15):
    return build_inner(split15)
