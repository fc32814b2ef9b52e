"""Shared helpers: seeded random rational series/polynomials."""

import random
from fractions import Fraction

import pytest

from zerodyn import Poly, PowerSeries


def make_rng(seed):
    return random.Random(seed)


def random_fraction(rng, num_bound=9, den_bound=6, nonzero=False):
    while True:
        f = Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
        if f != 0 or not nonzero:
            return f


def random_series(rng, order, nonzero_constant=True):
    coeffs = [random_fraction(rng) for _ in range(order + 1)]
    if nonzero_constant:
        coeffs[0] = random_fraction(rng, nonzero=True)
    return PowerSeries(coeffs)


def random_poly(rng, degree, monic=False):
    coeffs = [random_fraction(rng) for _ in range(degree + 1)]
    coeffs[-1] = Fraction(1) if monic else random_fraction(rng, nonzero=True)
    return Poly(coeffs)


@pytest.fixture
def rng():
    return make_rng(20240801)
