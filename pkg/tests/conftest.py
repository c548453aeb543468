import numpy as np
import pytest

from quermass.components.bodies import Ellipsoid, Polytope
from quermass.components.orlicz import make_normalized_exp, make_power
from quermass.data.models import SuiteConfig
from quermass.harness.corpus import box, cube


@pytest.fixture
def square():
    return cube(2)


@pytest.fixture
def rectangle():
    return box((2.0, 1.0), name="rectangle")


@pytest.fixture
def triangle():
    return Polytope([[-1.0, -1.0], [2.0, -1.0], [-1.0, 2.0]], name="triangle")


@pytest.fixture
def disk():
    return Ellipsoid.ball(1.0, 2, name="disk")


@pytest.fixture
def ellipse():
    return Ellipsoid(np.diag([1.0, 4.0]), name="ellipse")


@pytest.fixture
def cube3():
    return cube(3)


@pytest.fixture(params=["power1", "power2", "exp1"])
def phi(request):
    return {
        "power1": make_power(1),
        "power2": make_power(2),
        "exp1": make_normalized_exp(1.0),
    }[request.param]


@pytest.fixture
def small_config():
    """A configuration small enough for a full run inside the test suite."""

    return SuiteConfig(
        n=2,
        j=1,
        N_grassmann=400,
        N_directions=256,
        projection_directions=64,
        eps_schedule=[0.08, 0.04, 0.02],
        eps_grid=[0.5],
        phi=[{"family": "power", "p": 2}],
    )
