import numpy as np
import pytest

from locokit import robots


@pytest.fixture(scope="session")
def pend1():
    return robots.load_robot("pend1")[0]


@pytest.fixture(scope="session")
def arm2():
    return robots.load_robot("arm2")[0]


@pytest.fixture(scope="session")
def arm6():
    return robots.load_robot("arm6")[0]


@pytest.fixture(scope="session")
def quad12():
    return robots.load_robot("quad12")[0]


@pytest.fixture(scope="session")
def all_models(pend1, arm2, arm6, quad12):
    return {"pend1": pend1, "arm2": arm2, "arm6": arm6, "quad12": quad12}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_configuration(model, rng, base_scale=0.5):
    from locokit.kindyn import Configuration

    lo, hi = model.position_limits
    q = rng.uniform(np.maximum(lo, -1.5), np.minimum(hi, 1.5))
    if model.floating_base:
        return Configuration(
            rng.uniform(-1, 1, 3), rng.uniform(-base_scale, base_scale, 3), q
        )
    return Configuration.fixed(q)


def random_velocity(model, rng):
    from locokit.kindyn import Velocity

    qd = rng.uniform(-1, 1, model.nq)
    if model.floating_base:
        return Velocity(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3), qd)
    return Velocity.fixed(qd)
