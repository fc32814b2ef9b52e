"""Experiment layer: onset detection, rescaled convergence, zero attractors.

Three sweeps over the iterate index m, all driven by exact arithmetic on
the iterates themselves:

* onset_scan       — when does the operator drive every zero real and
                     simple (Turan expression negative), or when do
                     nonreal zeros set in for good (Turan >= 0)?
* convergence_experiment — sup-norm distance of the rescaled iterate
                     from its closed-form limit, with a log-log rate fit
                     (first-order rate 1/m^(1/p) expected).
* attractor_experiment — pull the iterate's zeros back through the
                     affine rescaling and measure containment in the
                     dilated limit zero set / the star of p rays.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import (
    NonMonicInput,
    NotGeneralForm,
    PureExponential,
    TruncationTooShort,
    ZeroConstantTerm,
)
from .limits import exp_dp_monomial
from .poly import Poly, apply_operator, rescale_iterate
from .roots import _exact_profile, find_roots
from .scalars import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_REAL_TOL,
    exact_nth_root,
    is_exact,
    to_mp,
)
from .series import (
    OperatorClass,
    PowerSeries,
    classify,
    dilate_series,
    truncated_power,
    truncated_product,
    turan_expression,
)

DEFAULT_M_MAX = 200


@dataclass(frozen=True)
class OnsetReport:
    mode: str  # "AllRealSimple" | "PersistentNonreal"
    m0: int | None  # None: not found within m_max
    m_max: int
    trace: tuple  # (m, nonreal_count) pairs, m ascending

    @property
    def found(self) -> bool:
        return self.m0 is not None


@dataclass(frozen=True)
class ConvergenceReport:
    p: int
    alpha: Fraction
    beta: Fraction
    samples: tuple  # (m, sup_norm_error) pairs, m ascending
    fitted_slope: float | None  # None when every error is exactly zero
    exact_convergence: bool
    limit_poly: Poly


@dataclass(frozen=True)
class AttractorRecord:
    m: int
    max_scaled_star_distance: float
    containment_epsilon_needed: float
    contained: bool
    all_simple: bool | None  # recorded only when d = 0 or 1 mod p


@dataclass(frozen=True)
class AttractorReport:
    p: int
    alpha: Fraction
    beta: Fraction
    gamma: object  # principal p-th root of -beta (mpc)
    epsilon: float
    records: tuple  # AttractorRecord, m ascending


def _require_general(phi: PowerSeries) -> OperatorClass:
    cls = classify(phi)
    if not cls.is_general:
        raise NotGeneralForm(f"need General classification, got {cls.form}")
    return cls


def star_distance(z, p: int):
    """Distance from z to the union of the p rays through the p-th roots of 1."""
    if p < 2:
        raise ValueError("p must be >= 2")
    z = mp.mpc(z)
    best = None
    for k in range(p):
        u = mp.expjpi(mp.mpf(2 * k) / p)
        t = (z * mp.conj(u)).real
        cand = abs(z) if t <= 0 else abs(z - t * u)
        if best is None or cand < best:
            best = cand
    return best


def onset_scan(
    phi: PowerSeries,
    f: Poly,
    m_max: int = DEFAULT_M_MAX,
    tol: float = DEFAULT_REAL_TOL,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> OnsetReport:
    """Scan m = 1..m_max for the onset of the terminal zero behavior.

    With a negative Turan expression the scan looks for the least m0
    such that every zero of the m-th iterate is real and simple for all
    m in [m0, m_max]; with a nonnegative one (and deg f >= p) for the
    least m0 past which nonreal zeros never disappear.  The full
    (m, nonreal count) trace is always reported.
    """
    if not f.is_real():
        raise ValueError("f must be a real polynomial")
    if f.degree < 1:
        raise ValueError("f must be nonconstant")
    if phi.constant == 0:
        raise ZeroConstantTerm("onset scan needs phi(0) != 0")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    cls = classify(phi)
    if cls.is_pure_exponential:
        raise PureExponential(
            "phi acts as a shift: the nonreal-zero count of every iterate equals "
            "that of f"
        )
    turan = turan_expression(phi)
    if turan < 0:
        mode = "AllRealSimple"
    else:
        mode = "PersistentNonreal"
        if int(f.degree) < cls.p:
            raise ValueError(
                f"persistence regime needs deg f >= p = {cls.p}, got {int(f.degree)}"
            )

    trace = []
    ok = []
    g = f
    for m in range(1, m_max + 1):
        g = apply_operator(phi, g)
        if g.is_exact and int(g.degree) <= 64:
            _real, nonreal, squarefree = _exact_profile(g)
        else:
            rs = find_roots(g, precision_bits)
            nonreal = sum(
                r.multiplicity
                for r in rs.roots
                if abs(r.location.imag) > tol * (1 + abs(r.location))
            )
            squarefree = all(r.multiplicity == 1 for r in rs.roots)
        trace.append((m, nonreal))
        if mode == "AllRealSimple":
            ok.append(nonreal == 0 and squarefree)
        else:
            ok.append(nonreal > 0)

    m0 = None
    for i in range(m_max - 1, -1, -1):
        if not ok[i]:
            break
        m0 = i + 1
    return OnsetReport(mode=mode, m0=m0, m_max=m_max, trace=tuple(trace))


def convergence_experiment(
    phi: PowerSeries,
    f: Poly,
    m_list,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> ConvergenceReport:
    """Sup-norm error of the rescaled iterates against the limit polynomial.

    Errors are exact rationals whenever the rescaling is (see
    rescale_iterate); exact zeros are excluded from the log-log fit and
    reported as exact convergence when they are all there is.
    """
    cls = _require_general(phi)
    if not f.is_monic() or f.degree < 1:
        raise NonMonicInput("f must be monic of degree >= 1")
    d = int(f.degree)
    ms = sorted(set(int(m) for m in m_list))
    if not ms or ms[0] < 1:
        raise ValueError("m_list must contain integers >= 1")
    limit = exp_dp_monomial(cls.beta, cls.p, d)
    samples = []
    g = f
    last = 0
    for m in ms:
        for _ in range(m - last):
            g = apply_operator(phi, g)
        last = m
        fm = rescale_iterate(cls, phi, f, m, precision_bits, _iterate=g)
        err = (fm - limit).sup_norm()
        samples.append((m, err))
    slope = _fit_loglog_slope(samples)
    exact = all(e == 0 for _, e in samples)
    return ConvergenceReport(
        p=cls.p,
        alpha=cls.alpha,
        beta=cls.beta,
        samples=tuple(samples),
        fitted_slope=slope,
        exact_convergence=exact,
        limit_poly=limit,
    )


def _fit_loglog_slope(samples):
    xs, ys = [], []
    for m, e in samples:
        if e == 0:
            continue
        ef = float(e)
        if ef <= 0.0:  # underflowed to zero: treat as exact convergence
            continue
        xs.append(math.log(m))
        ys.append(math.log(ef))
    if len(xs) < 2 or len(set(xs)) < 2:
        return None
    return statistics.linear_regression(xs, ys).slope


def operator_discrepancy(
    cls: OperatorClass,
    phi: PowerSeries,
    d: int,
    m: int,
    precision_bits: int = DEFAULT_PRECISION_BITS,
):
    """Executable surrogate for the operator-norm gap at order d.

    Builds the composite series exp(-m^(1-1/p) alpha x) * phi(m^(-1/p) x)^m
    truncated at order d, subtracts exp(beta x^p), applies the difference
    to every monomial x^j (j <= d) and returns the largest sup-norm.
    Exact when phi is exact and m is a perfect p-th power; otherwise
    computed at ``precision_bits``.  Identically zero for d < p.
    """
    if not cls.is_general:
        raise NotGeneralForm(f"need General form, got {cls.form}")
    if d < 0 or m < 1:
        raise ValueError("need d >= 0 and m >= 1")
    if phi.truncation_order < d:
        raise TruncationTooShort(
            f"need truncation order {d}, have {phi.truncation_order}"
        )
    p, alpha, beta = cls.p, cls.alpha, cls.beta
    norm = cls.normalized_from
    root = exact_nth_root(m, p)
    if norm.is_exact and root is not None:
        inv = Fraction(1, root)
        shift_c = -Fraction(m, root) * alpha
        dilated = dilate_series(norm.truncated(d), inv)
        powered = truncated_power(dilated, m, d)
        shift = _exp_monomial_series(shift_c, 1, d)
        composite = truncated_product(shift, powered, d)
        target = _exp_monomial_series(beta, p, d)
        diff = [a - b for a, b in zip(composite.coeffs, target.coeffs)]
        return _max_monomial_image_norm(diff, d)
    with mp.workprec(precision_bits):
        mroot = to_mp(m, precision_bits) ** (mp.mpf(1) / p)
        inv = 1 / mroot
        shift_c = -(to_mp(m, precision_bits) / mroot) * to_mp(alpha, precision_bits)
        base = norm.truncated(d).to_floating(precision_bits)
        dilated = dilate_series(base, inv, precision_bits)
        powered = truncated_power(dilated, m, d)
        shift = _exp_monomial_series(shift_c, 1, d, precision_bits)
        composite = truncated_product(shift, powered, d)
        target = _exp_monomial_series(to_mp(beta, precision_bits), p, d, precision_bits)
        diff = [a - b for a, b in zip(composite.coeffs, target.coeffs)]
        return _max_monomial_image_norm(diff, d)


def _exp_monomial_series(c, j: int, order: int, precision_bits=None) -> PowerSeries:
    """exp(c * x^j) truncated at ``order``."""
    exact = is_exact(c) and precision_bits is None
    prec = None if exact else (precision_bits or DEFAULT_PRECISION_BITS)
    zero = Fraction(0) if exact else to_mp(0, prec)
    coeffs = [zero] * (order + 1)
    term = c**0
    k = 0
    while j * k <= order:
        if exact:
            coeffs[j * k] = term * Fraction(1, math.factorial(k))
        else:
            coeffs[j * k] = term / math.factorial(k)
        term = term * c
        k += 1
    return PowerSeries(coeffs, prec)


def _max_monomial_image_norm(diff_coeffs, d: int):
    """max_j ||(sum_n diff_n D^n) x^j||_inf for j = 0..d."""
    best = None
    for j in range(d + 1):
        for n in range(j + 1):
            c = diff_coeffs[n]
            if c == 0:
                continue
            weight = math.factorial(j) // math.factorial(j - n)
            val = abs(c) * weight
            if best is None or val > best:
                best = val
    if best is None:
        return diff_coeffs[0] * 0  # typed zero
    return best


def attractor_experiment(
    phi: PowerSeries,
    f: Poly,
    m_list,
    epsilon: float,
    tol: float = DEFAULT_REAL_TOL,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> AttractorReport:
    """Pull the iterate's zeros back through the rescaling and measure fit.

    For each m, every zero z of the m-th iterate maps to
    w = (z + m*alpha) / m^(1/p); the record keeps the worst distance
    from w to gamma * (zeros of exp(-D^p)x^d) (the epsilon needed for
    containment), the worst distance from w/gamma to the star of p rays,
    and — when d = 0 or 1 mod p, where the limit zeros are simple —
    whether the iterate's zeros are all simple.
    """
    cls = _require_general(phi)
    if not f.is_monic() or f.degree < 1:
        raise ValueError("f must be monic of degree >= 1")
    d = int(f.degree)
    p, alpha, beta = cls.p, cls.alpha, cls.beta
    ms = sorted(set(int(m) for m in m_list))
    if not ms or ms[0] < 1:
        raise ValueError("m_list must contain integers >= 1")
    with mp.workprec(precision_bits):
        gamma = mp.root(-to_mp(beta, precision_bits), p)
        base = exp_dp_monomial(Fraction(-1), p, d)
        base_roots = find_roots(base, precision_bits)
        limit_pts = [gamma * r.location for r in base_roots.roots]
        alpha_mp = to_mp(alpha, precision_bits)
        records = []
        g = f
        last = 0
        for m in ms:
            for _ in range(m - last):
                g = apply_operator(phi, g)
            last = m
            rs = find_roots(g, precision_bits)
            scale = to_mp(m, precision_bits) ** (mp.mpf(1) / p)
            worst_eps = mp.mpf(0)
            worst_star = mp.mpf(0)
            for r in rs.roots:
                w = (r.location + m * alpha_mp) / scale
                dmin = min(abs(w - q) for q in limit_pts)
                if dmin > worst_eps:
                    worst_eps = dmin
                sd = star_distance(w / gamma, p)
                if sd > worst_star:
                    worst_star = sd
            simple = None
            if d % p in (0, 1):
                if g.is_exact and int(g.degree) <= 64:
                    _r, _n, squarefree = _exact_profile(g)
                    simple = squarefree
                else:
                    simple = all(r.multiplicity == 1 for r in rs.roots)
            records.append(
                AttractorRecord(
                    m=m,
                    max_scaled_star_distance=float(worst_star),
                    containment_epsilon_needed=float(worst_eps),
                    contained=worst_eps < epsilon,
                    all_simple=simple,
                )
            )
    return AttractorReport(
        p=p,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        epsilon=float(epsilon),
        records=tuple(records),
    )
