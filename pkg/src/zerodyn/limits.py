"""Closed-form limit polynomials and the classical families behind them.

The rescaled operator iterates of a monic degree-d polynomial converge
to exp(beta*D^p) applied to x^d, a finite sum::

    (exp(beta*D^p) x^d) = sum_{k=0}^{floor(d/p)} d! beta^k / (k! (d-pk)!) x^(d-pk)

For beta = -1, p = 2 this is the Hermite polynomial H_d(x/2); for
d = p*q it is a rescaled Jensen polynomial of the Mittag-Leffler series
E_p(x) = sum x^k/(pk)! evaluated at -x^p.  Everything here is exact;
factorials are Python big ints, never floats.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .poly import Poly
from .series import PowerSeries
from .scalars import is_exact


def exp_dp_monomial(beta, p: int, d: int, precision_bits: int = 256) -> Poly:
    """exp(beta*D^p) applied to x^d; monic of degree d, exact for exact beta.

    ``precision_bits`` only matters when beta is a floating scalar.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if d < 0:
        raise ValueError("d must be >= 0")
    exact = is_exact(beta)
    coeffs = [Fraction(0)] * (d + 1) if exact else [0 * beta] * (d + 1)
    bpow = beta**0
    for k in range(d // p + 1):
        num = math.factorial(d)
        den = math.factorial(k) * math.factorial(d - p * k)
        if exact:
            coeffs[d - p * k] = Fraction(num, den) * bpow
        else:
            coeffs[d - p * k] = bpow * num / den
        bpow = bpow * beta
    return Poly(coeffs, None if exact else precision_bits)


def hermite(d: int) -> Poly:
    """The d-th Hermite polynomial (physicists'), exact integer coefficients."""
    if d < 0:
        raise ValueError("d must be >= 0")
    coeffs = [Fraction(0)] * (d + 1)
    for k in range(d // 2 + 1):
        j = d - 2 * k
        num = math.factorial(d) * 2**j
        den = math.factorial(k) * math.factorial(j)
        coeffs[j] = Fraction((-1) ** k * num, den)
    return Poly(coeffs)


def ml_partial(p: int, order: int) -> PowerSeries:
    """Partial sum of E_p(x) = sum_k x^k/(pk)! through x^order."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if order < 0:
        raise ValueError("order must be >= 0")
    return PowerSeries(
        Fraction(1, math.factorial(p * k)) for k in range(order + 1)
    )


def jensen_ml(p: int, q: int) -> Poly:
    """q-th Jensen polynomial of E_p: sum_k q! x^k / ((q-k)! (pk)!)."""
    if p < 1 or q < 1:
        raise ValueError("need p >= 1 and q >= 1")
    qf = math.factorial(q)
    return Poly(
        Fraction(qf, math.factorial(q - k) * math.factorial(p * k))
        for k in range(q + 1)
    )


def jensen_of_series(phi: PowerSeries, q: int) -> Poly:
    """General q-th Jensen polynomial sum_k C(q,k) phi^(k)(0) x^k.

    Convenience only: with a truncated series there is no all-real-roots
    guarantee, since membership of phi in the closed-under-limits class
    of real-rooted functions is not decidable from finitely many
    coefficients.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if phi.truncation_order < q:
        from .errors import TruncationTooShort

        raise TruncationTooShort(f"need order {q}, have {phi.truncation_order}")
    return Poly(
        (math.comb(q, k) * phi.derivative_at_zero(k) for k in range(q + 1)),
        phi.precision,
    )
