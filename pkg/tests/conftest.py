import numpy as np
import pytest

from helmnav import ObstacleSpec, RawParams, SimConfig, validate


@pytest.fixture(scope="session")
def obstacle_3d():
    return ObstacleSpec(c=np.array([1.0, 1.0, 1.0]), epsilon=0.700)


@pytest.fixture(scope="session")
def params_3d(obstacle_3d):
    """Reference 3-D parameter set used across the suite."""
    raw = RawParams(
        obstacle=obstacle_3d,
        eps_s=0.800,
        eps_h=0.901,
        mu=0.444,
        theta=0.276,
        psi=0.249,
        psi_bar=0.266,
        gains=(1.0, 1.0, 1.0),
        w_hint=np.array([-2.0, 1.0, 1.0]),
    )
    return validate(raw)


@pytest.fixture(scope="session")
def params_2d():
    obs = ObstacleSpec(c=np.array([2.0, 0.0]), epsilon=0.5)
    raw = RawParams(obstacle=obs, eps_s=0.65, eps_h=0.8, mu=0.47, theta=0.4,
                    psi=0.2, psi_bar=0.3, gains=(1.0, 1.0, 1.0))
    return validate(raw)


@pytest.fixture(scope="session")
def sim_cfg():
    return SimConfig()
