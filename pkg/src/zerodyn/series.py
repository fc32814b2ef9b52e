"""Truncated formal power series and operator classification.

A series phi(x) = sum alpha_n x^n is stored by its Taylor coefficients
alpha_n = phi^(n)(0)/n!, exactly (Fraction) by default.  The truncation
order is explicit and operations fail loudly when it is too short; a
polynomial's known zero tail can be declared with :func:`extend`.

Classification splits an operator into the three regimes that drive the
zero dynamics: a vanishing constant term (pure differentiation factor),
a pure exponential c*e^(gamma*x) up to the stored truncation (a shift,
no dynamics), or the general form with invariants (p, alpha, beta)::

    p     = min{ n >= 2 : phi^(n)(0) != phi'(0)^n }   (phi scaled to phi(0)=1)
    alpha = phi'(0)
    beta  = (phi^(p)(0) - phi'(0)^p) / p!
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AllZeroSeries, TruncationTooShort, ZeroConstantTerm
from .scalars import as_fraction, is_exact, to_mp


class PowerSeries:
    """Truncated power series; index n of ``coeffs`` holds alpha_n."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs, precision=None):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant term")
        if precision is None:
            coeffs = tuple(as_fraction(c) for c in coeffs)
        else:
            coeffs = tuple(to_mp(c, precision) for c in coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("PowerSeries is immutable")

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def taylor(self, n):
        """alpha_n (0 beyond the truncation is *not* assumed; raises)."""
        if n > self.truncation_order:
            raise TruncationTooShort(
                f"coefficient {n} beyond truncation order {self.truncation_order}"
            )
        return self.coeffs[n]

    def derivative_at_zero(self, n):
        """phi^(n)(0) = n! * alpha_n."""
        return self.taylor(n) * math.factorial(n)

    @property
    def constant(self):
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncated(self, order: int) -> "PowerSeries":
        """Drop coefficients above ``order`` (must be storable)."""
        if order > self.truncation_order:
            raise TruncationTooShort(
                f"have order {self.truncation_order}, asked to keep {order}"
            )
        return PowerSeries(self.coeffs[: order + 1], self.precision)

    def to_floating(self, precision_bits: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, precision=precision_bits)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PowerSeries({list(self.coeffs)!r})"


def extend(phi: PowerSeries, order: int) -> PowerSeries:
    """Zero-pad up to ``order``: the caller declares the tail is known zero.

    This is the explicit counterpart of silent padding; use it when phi
    came from a polynomial, whose tail genuinely is zero.
    """
    if order <= phi.truncation_order:
        return phi
    zero = Fraction(0) if phi.is_exact else to_mp(0, phi.precision)
    pad = (zero,) * (order - phi.truncation_order)
    return PowerSeries(phi.coeffs + pad, phi.precision)


def normalize(phi: PowerSeries) -> PowerSeries:
    """Scale so the constant term is exactly 1."""
    c = phi.constant
    if c == 0:
        raise ZeroConstantTerm("phi(0) = 0; use factor_out_zero first")
    if c == 1:
        return phi
    return PowerSeries((a / c for a in phi.coeffs), phi.precision)


def factor_out_zero(phi: PowerSeries):
    """Write phi = x^mu * psi with psi(0) != 0; returns (mu, psi)."""
    mu = 0
    while mu <= phi.truncation_order and phi.coeffs[mu] == 0:
        mu += 1
    if mu > phi.truncation_order:
        raise AllZeroSeries("every stored coefficient is zero")
    return mu, PowerSeries(phi.coeffs[mu:], phi.precision)


def dilate_series(phi: PowerSeries, c, precision_bits: int | None = None) -> PowerSeries:
    """phi(c*x): multiply alpha_n by c^n.  Exact when phi and c both are.

    When c is a floating scalar the result is floating at
    ``precision_bits`` (required in that case unless phi already is).
    """
    if c == 0:
        raise ValueError("series dilation by zero")
    exact = phi.is_exact and is_exact(c)
    if exact:
        c = as_fraction(c)
        prec = None
    else:
        prec = precision_bits or phi.precision
        if prec is None:
            raise ValueError("floating dilation scalar needs precision_bits")
        c = to_mp(c, prec)
    coeffs = []
    power = c**0
    for a in phi.coeffs:
        coeffs.append(a * power)
        power = power * c
    return PowerSeries(coeffs, prec)


def truncated_product(phi: PowerSeries, psi: PowerSeries, order: int) -> PowerSeries:
    """Cauchy product truncated at ``order``."""
    if phi.truncation_order < order or psi.truncation_order < order:
        raise TruncationTooShort(
            f"need both factors to order {order}; have "
            f"{phi.truncation_order} and {psi.truncation_order}"
        )
    a, b = phi.coeffs, psi.coeffs
    out = []
    for n in range(order + 1):
        out.append(sum(a[i] * b[n - i] for i in range(n + 1)))
    prec = None
    if not (phi.is_exact and psi.is_exact):
        prec = max(phi.precision or 0, psi.precision or 0)
    return PowerSeries(out, prec)


def truncated_power(phi: PowerSeries, m: int, order: int) -> PowerSeries:
    """phi^m truncated at ``order`` (m >= 0); repeated Cauchy products."""
    if m < 0:
        raise ValueError("negative power")
    if phi.truncation_order < order:
        raise TruncationTooShort(
            f"need order {order}, have {phi.truncation_order}"
        )
    one = [Fraction(1)] + [Fraction(0)] * order
    acc = PowerSeries(one, None if phi.is_exact else phi.precision)
    base = phi.truncated(order)
    for _ in range(m):
        acc = truncated_product(acc, base, order)
    return acc


@dataclass(frozen=True)
class OperatorClass:
    """Classification record; ``form`` selects which fields are meaningful.

    form == "ZeroConstant": mu (order of vanishing at 0).
    form == "PureExponential": c, gamma — a verdict *relative to the stored
        truncation*; a finite coefficient list cannot certify phi = c e^(gx).
    form == "General": p, alpha, beta with beta != 0.
    """

    form: str
    normalized_from: PowerSeries
    mu: int | None = None
    c: Fraction | None = None
    gamma: Fraction | None = None
    p: int | None = None
    alpha: Fraction | None = None
    beta: Fraction | None = None

    @property
    def is_general(self) -> bool:
        return self.form == "General"

    @property
    def is_pure_exponential(self) -> bool:
        return self.form == "PureExponential"

    @property
    def is_zero_constant(self) -> bool:
        return self.form == "ZeroConstant"

    def __str__(self):
        if self.is_general:
            return f"General(p={self.p}, alpha={self.alpha}, beta={self.beta})"
        if self.is_pure_exponential:
            return f"PureExponentialUpToTruncation(c={self.c}, gamma={self.gamma})"
        return f"ZeroConstant(mu={self.mu})"


def classify(phi: PowerSeries) -> OperatorClass:
    """Classify the operator phi(D) into the three zero-dynamics regimes."""
    if phi.is_zero():
        raise AllZeroSeries("cannot classify the zero series")
    if phi.constant == 0:
        mu, _psi = factor_out_zero(phi)
        return OperatorClass(form="ZeroConstant", normalized_from=phi, mu=mu)
    c0 = phi.constant
    norm = normalize(phi)
    alpha = norm.taylor(1) if norm.truncation_order >= 1 else Fraction(0)
    for n in range(2, norm.truncation_order + 1):
        deriv = norm.derivative_at_zero(n)
        if deriv != alpha**n:
            gap = deriv - alpha**n
            beta = Fraction(gap, math.factorial(n)) if is_exact(gap) else gap / math.factorial(n)
            return OperatorClass(
                form="General", normalized_from=norm, p=n, alpha=alpha, beta=beta
            )
    gamma = phi.taylor(1) / c0 if phi.truncation_order >= 1 else Fraction(0)
    return OperatorClass(
        form="PureExponential", normalized_from=norm, c=c0, gamma=gamma
    )


def turan_expression(phi: PowerSeries):
    """phi''(0)*phi(0) - phi'(0)^2, exactly.

    Its sign separates the two polynomial regimes: negative means every
    real polynomial is eventually driven to all-real-and-simple zeros;
    nonnegative (and not pure-exponential) means nonreal zeros persist.
    """
    if phi.truncation_order < 2:
        raise TruncationTooShort("need truncation order >= 2")
    return phi.derivative_at_zero(2) * phi.constant - phi.derivative_at_zero(1) ** 2


@dataclass(frozen=True)
class LPObstructionResult:
    """Outcome of the monomial-image test for Laguerre-Polya membership.

    ``nonreal_counts[i]`` is the nonreal-zero count of phi(D)M^d for
    d = i+1, recorded for every scanned degree so the once-a-witness,
    always-a-witness monotonicity can be checked downstream.
    """

    obstructed: bool
    d_witness: int | None
    d_max: int
    nonreal_counts: tuple[int, ...]

    def __str__(self):
        if self.obstructed:
            return f"CertifiedNotLP({self.d_witness})"
        return f"NoObstructionUpTo({self.d_max})"


def polya_lp_test(phi: PowerSeries, d_max: int) -> LPObstructionResult:
    """Scan d = 1..d_max for nonreal zeros of phi(D)M^d.

    A witness certifies that phi does not represent a Laguerre-Polya
    function; once some d is a witness, every larger degree is too.  A
    monomial factor x^mu of phi only differentiates and never creates
    nonreal zeros, so it is stripped first.
    """
    from . import poly as _poly
    from . import roots as _roots

    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    _mu, psi = factor_out_zero(phi)
    if psi.truncation_order < d_max:
        raise TruncationTooShort(
            f"need truncation order {d_max} after stripping, "
            f"have {psi.truncation_order}"
        )
    counts = []
    witness = None
    for d in range(1, d_max + 1):
        image = _poly.apply_operator(psi, _poly.monomial(d))
        z = _roots.count_nonreal(image)
        counts.append(z.nonreal_count)
        if witness is None and z.nonreal_count > 0:
            witness = d
    return LPObstructionResult(
        obstructed=witness is not None,
        d_witness=witness,
        d_max=d_max,
        nonreal_counts=tuple(counts),
    )
