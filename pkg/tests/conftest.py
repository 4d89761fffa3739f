import math
import os

# single-threaded BLAS: the acceptance timing criteria assume it, and the
# narrow GEMMs here are faster without thread fan-out anyway
for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import numpy as np
import pytest

from wristkin import RationalQuadricSurface, SubjectParams


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture
def subject():
    return SubjectParams(a4=100.0, p_lorg=np.zeros(3), subject_id="fixture")


@pytest.fixture
def steep_truth():
    """Ground truth used by pipeline tests: strong flexion slope, mild
    rational denominator, pole-free on the protocol domain."""
    return RationalQuadricSurface(
        numerator=[21.0, 2.0, -25.0, 0.0, 12.0, 1.5],
        denominator=[0.0, 0.08, 0.0, 0.05, 0.0],
    )


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform-ish random proper rotation via QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, [0, 1]] = q[:, [1, 0]]
    return q


def random_pose(rng: np.random.Generator):
    from wristkin import Pose

    return Pose(random_rotation(rng), rng.uniform(-100, 100, 3))


def protocol_state_samples(rng: np.random.Generator, n: int):
    """(theta3, theta4, d2, a4) tuples inside the physiological test box."""
    t3 = rng.uniform(math.radians(-20), math.radians(20), n)
    t4 = rng.uniform(math.radians(-85), math.radians(85), n)
    d2 = rng.uniform(-50.0, 50.0, n)
    a4 = rng.uniform(80.0, 120.0, n)
    return t3, t4, d2, a4
