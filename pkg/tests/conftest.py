import warnings
from fractions import Fraction
from functools import lru_cache
from math import sqrt

import pytest
from hypothesis import HealthCheck, settings

from steklovqc.geometry import make_ellipse, make_hippopede, make_polygon
from steklovqc.spectrum import steklov_eigenvalues

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

POLYGON_N = (3, 4, 5, 6, 8, 10)
ELLIPSE_E2 = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(8, 9), Fraction(99, 100))
HIPPO_D2 = (Fraction(1, 100), Fraction(1, 16), Fraction(1, 9), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4),
            Fraction(1))

EXAMPLES = ([("polygon", n) for n in POLYGON_N] + [("ellipse", e) for e in ELLIPSE_E2]
            + [("hippopede", d) for d in HIPPO_D2])


def example_domain(family, value):
    if family == "polygon":
        return make_polygon(value)
    if family == "ellipse":
        return make_ellipse(sqrt(value))
    return make_hippopede(sqrt(value))


@lru_cache(maxsize=None)
def cached_spectrum(family, value, n=20):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return steklov_eigenvalues(example_domain(family, value), None, n)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)
