import numpy as np
import pytest

from kahlerpinch import complex_hyperbolic_tensor, make_space


@pytest.fixture(scope="session")
def space1():
    return make_space(1)


@pytest.fixture(scope="session")
def space2():
    return make_space(2)


@pytest.fixture(scope="session")
def space3():
    return make_space(3)


@pytest.fixture(scope="session")
def r0_n1(space1):
    return complex_hyperbolic_tensor(space1)


@pytest.fixture(scope="session")
def r0_n2(space2):
    return complex_hyperbolic_tensor(space2)


@pytest.fixture(scope="session")
def r0_n3(space3):
    return complex_hyperbolic_tensor(space3)


@pytest.fixture(autouse=True)
def _quiet_numpy_errors():
    with np.errstate(all="raise", under="ignore"):
        yield
