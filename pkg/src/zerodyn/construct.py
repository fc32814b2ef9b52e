"""Desk-scale counterexample products with persistent nonreal zeros.

Given an operator whose monomial images certify it is not real-rooted in
the limit sense (see series.polya_lp_test), this module builds a finite
product  f_N(x) = prod_{k<=N} (1 + gamma(k) x)^{d(k)}  whose operator
iterates keep a nonreal zero inside a prescribed off-axis disk per stage:
for every m <= N, the m-th iterate has a zero in each of the pairwise
disjoint closed disks D(a(m,k) - 1/gamma(k); r(m,k)), k = m..N.

The stage factors gamma(k) come from a halving search validated against
that persistence predicate; verify_counterexample then recomputes
everything from scratch, independent of the search's own bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .errors import (
    GammaSearchExhausted,
    NoNonrealZero,
    VerificationFailed,
    WitnessNotFound,
)
from .poly import Poly, apply_operator, derivative, monomial
from .roots import count_nonreal, find_roots, roots_in_disk
from .scalars import DEFAULT_PRECISION_BITS, DEFAULT_REAL_TOL, as_fraction
from .series import (
    PowerSeries,
    factor_out_zero,
    polya_lp_test,
    truncated_power,
)

DEFAULT_D_CAP = 40
DEFAULT_MAX_HALVINGS = 60


def _to_mpf(x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


@dataclass
class StagePlan:
    """Construction state: degrees, stage factors, target zeros and radii.

    targets[(m, k)] is the chosen upper-half-plane zero a(m,k) of the m-th
    iterate applied to x^d(k); radii[(m, k)] = Im a(m,k) / 2, so every
    disk D(a(m,k) - c; r(m,k)) with real c misses the real axis.
    ``coefficient_bound_ok[k-1]`` records the stage-k positivity witness:
    all partial-product coefficients positive and f_k'(0) = sum d gamma.
    """

    degrees: tuple[int, ...]
    targets: dict
    radii: dict
    gammas: tuple[Fraction, ...] = ()
    coefficient_bound_ok: tuple[bool, ...] = ()
    precision_bits: int = DEFAULT_PRECISION_BITS

    @property
    def stages_fixed(self) -> int:
        return len(self.gammas)

    def disk(self, m: int, k: int):
        """(center, radius) of the stage-(m,k) disk; needs gamma(k) fixed."""
        center = self.targets[(m, k)] - 1 / _to_mpf(self.gammas[k - 1])
        return center, self.radii[(m, k)]


@dataclass
class CounterexampleReport:
    plan: StagePlan
    witnessed: dict  # (m, k) -> a zero of the m-th iterate inside disk (m,k)
    nonreal_totals: dict  # m -> nonreal-zero count of the m-th iterate
    product_coeffs: tuple
    derivative_identity_ok: bool
    boundary_ties: list = field(default_factory=list)


def find_degree_witnesses(
    phi: PowerSeries,
    M: int,
    d_cap: int = DEFAULT_D_CAP,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> list[int]:
    """Increasing degrees d(1) < ... < d(M) with a nonreal zero per iterate.

    d(m) is the least degree above d(m-1) such that the m-th operator
    iterate of x^d(m) has a nonreal zero.  A monomial factor of phi is
    stripped first; the scan runs on the cofactor.  WitnessNotFound never
    contradicts the certified obstruction — it means d_cap was too small.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    check = polya_lp_test(phi, d_cap)
    if not check.obstructed:
        raise WitnessNotFound(1, d_cap)
    _mu, psi = factor_out_zero(phi)
    degrees = []
    prev = 0
    for m in range(1, M + 1):
        iterated = truncated_power(psi, m, d_cap)
        found = None
        for d in range(prev + 1, d_cap + 1):
            image = apply_operator(iterated, monomial(d))
            if count_nonreal(image, precision_bits=precision_bits).nonreal_count > 0:
                found = d
                break
        if found is None:
            raise WitnessNotFound(m, d_cap)
        degrees.append(found)
        prev = found
    return degrees


def pick_targets(
    phi: PowerSeries,
    degrees,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    tol: float = DEFAULT_REAL_TOL,
) -> StagePlan:
    """Choose a(m,k) and r(m,k) = Im a(m,k)/2 for every m <= k <= N.

    a(m,k) is the upper-half-plane zero of the m-th iterate of x^d(k)
    with the largest imaginary part, ties broken by smallest real part —
    a deterministic stand-in for the proof-side free choice.
    """
    _mu, psi = factor_out_zero(phi)
    degrees = [int(d) for d in degrees]
    targets = {}
    radii = {}
    with mp.workprec(precision_bits):
        for k, d in enumerate(degrees, start=1):
            g_m = monomial(d)
            for m in range(1, k + 1):
                g_m = apply_operator(psi, g_m)
                rs = find_roots(g_m, precision_bits)
                upper = [
                    r.location
                    for r in rs.roots
                    if r.location.imag > tol * (1 + abs(r.location))
                ]
                if not upper:
                    raise NoNonrealZero(
                        f"iterate m={m} of x^{d} has no upper-half-plane zero"
                    )
                upper.sort(key=lambda z: (-z.imag, z.real))
                a = upper[0]
                targets[(m, k)] = a
                radii[(m, k)] = a.imag / 2
    return StagePlan(
        degrees=tuple(degrees),
        targets=targets,
        radii=radii,
        precision_bits=precision_bits,
    )


def _partial_product(degrees, gammas, upto: int) -> Poly:
    acc = Poly([1])
    for k in range(upto):
        acc = acc * Poly([1, gammas[k]]) ** degrees[k]
    return acc


def _stage_predicate(psi, plan: StagePlan, gammas, k: int, precision_bits: int):
    """Persistence check for stages 1..k with the given gamma list.

    For every m <= k the m-th iterate of the partial product must have a
    zero in each disk D(a(m,j) - 1/gamma(j); r(m,j)), j = m..k, and the
    closed disks must be pairwise disjoint and miss the real axis.
    """
    product = _partial_product(plan.degrees, gammas, k)
    with mp.workprec(precision_bits):
        g_m = product
        for m in range(1, k + 1):
            g_m = apply_operator(psi, g_m)
            disks = []
            for j in range(m, k + 1):
                c = plan.targets[(m, j)] - 1 / _to_mpf(gammas[j - 1])
                r = plan.radii[(m, j)]
                if not abs(c.imag) > r:
                    return False
                disks.append((c, r))
            for i in range(len(disks)):
                for jj in range(i + 1, len(disks)):
                    (c1, r1), (c2, r2) = disks[i], disks[jj]
                    if abs(c1 - c2) <= r1 + r2:
                        return False
            rs = find_roots(g_m, precision_bits)
            for c, r in disks:
                if roots_in_disk(rs, c, r) < 1:
                    return False
    return True


def choose_gamma(
    phi: PowerSeries,
    plan: StagePlan,
    k: int,
    gamma0,
    max_halvings: int = DEFAULT_MAX_HALVINGS,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> Fraction:
    """First gamma in gamma0, gamma0/2, ... passing the stage-k predicate.

    Replaces a non-effective smallness threshold with a checked search:
    shrinking gamma pushes the new stage's disks far to the left while
    barely perturbing the already-fixed factors.
    """
    gamma0 = as_fraction(gamma0)
    if gamma0 <= 0:
        raise ValueError("gamma0 must be positive")
    if k != plan.stages_fixed + 1:
        raise ValueError(
            f"stage {k} cannot be chosen with {plan.stages_fixed} stages fixed"
        )
    _mu, psi = factor_out_zero(phi)
    trial = gamma0
    for _ in range(max_halvings + 1):
        gammas = list(plan.gammas) + [trial]
        if _stage_predicate(psi, plan, gammas, k, precision_bits):
            return trial
        trial = trial / 2
    raise GammaSearchExhausted(k, max_halvings)


def build_partial_product(plan: StagePlan, N: int) -> Poly:
    """Exact expansion of prod_{k<=N} (1 + gamma(k) x)^d(k); N = 0 gives 1."""
    if N > plan.stages_fixed:
        raise ValueError(f"only {plan.stages_fixed} stages fixed, asked for {N}")
    return _partial_product(plan.degrees, plan.gammas, N)


def extend_plan(
    phi: PowerSeries,
    plan: StagePlan,
    k: int,
    gamma0=Fraction(1),
    max_halvings: int = DEFAULT_MAX_HALVINGS,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> StagePlan:
    """Fix stage k in place (driver around choose_gamma)."""
    gamma = choose_gamma(phi, plan, k, gamma0, max_halvings, precision_bits)
    gammas = plan.gammas + (gamma,)
    product = _partial_product(plan.degrees, gammas, k)
    positive = all(c > 0 for c in product.coeffs)
    identity = derivative(product).coefficient(0) == sum(
        d * g for d, g in zip(plan.degrees[:k], gammas)
    )
    plan.gammas = gammas
    plan.coefficient_bound_ok = plan.coefficient_bound_ok + (positive and identity,)
    return plan


def build_plan(
    phi: PowerSeries,
    N: int,
    d_cap: int = DEFAULT_D_CAP,
    gamma0=Fraction(1),
    max_halvings: int = DEFAULT_MAX_HALVINGS,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    tol: float = DEFAULT_REAL_TOL,
) -> StagePlan:
    """Full pipeline: witnesses, targets, then the stagewise gamma search."""
    degrees = find_degree_witnesses(phi, N, d_cap, precision_bits)
    plan = pick_targets(phi, degrees, precision_bits, tol)
    for k in range(1, N + 1):
        extend_plan(phi, plan, k, gamma0, max_halvings, precision_bits)
    return plan


def verify_counterexample(
    phi: PowerSeries,
    plan: StagePlan,
    N: int,
    M: int,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> CounterexampleReport:
    """Recompute everything from scratch and check every claim.

    Independent of choose_gamma's internal checks: expands the product,
    iterates the operator, finds roots, and re-verifies disk membership,
    disjointness, off-axis placement, nonreal totals, coefficient
    positivity and the identity f_N'(0) = sum d(k) gamma(k).  Raises
    VerificationFailed naming the first violated clause.
    """
    if M > N:
        raise ValueError("need M <= N")
    if N > plan.stages_fixed:
        raise VerificationFailed("stages", f"only {plan.stages_fixed} fixed, need {N}")
    _mu, psi = factor_out_zero(phi)
    f_n = build_partial_product(plan, N)
    if not all(c > 0 for c in f_n.coeffs):
        raise VerificationFailed("positivity", "product has a nonpositive coefficient")
    expected = sum(d * g for d, g in zip(plan.degrees[:N], plan.gammas[:N]))
    if derivative(f_n).coefficient(0) != expected:
        raise VerificationFailed("derivative-identity", "f_N'(0) != sum d(k)gamma(k)")

    witnessed = {}
    nonreal_totals = {}
    ties = []
    with mp.workprec(precision_bits):
        g_m = f_n
        for m in range(1, M + 1):
            g_m = apply_operator(psi, g_m)
            nonreal_totals[m] = count_nonreal(
                g_m, precision_bits=precision_bits
            ).nonreal_count
            disks = []
            for k in range(m, N + 1):
                c, r = plan.disk(m, k)
                if not abs(c.imag) > r:
                    raise VerificationFailed(
                        "off-axis", f"disk (m={m}, k={k}) touches the real axis"
                    )
                disks.append((k, c, r))
            for i in range(len(disks)):
                for j in range(i + 1, len(disks)):
                    _, c1, r1 = disks[i]
                    _, c2, r2 = disks[j]
                    if abs(c1 - c2) <= r1 + r2:
                        raise VerificationFailed(
                            "disjointness",
                            f"disks (m={m}, k={disks[i][0]}) and "
                            f"(m={m}, k={disks[j][0]}) overlap",
                        )
            rs = find_roots(g_m, precision_bits)
            for k, c, r in disks:
                if roots_in_disk(rs, c, r) < 1:
                    raise VerificationFailed(
                        "membership", f"no zero in disk (m={m}, k={k})"
                    )
                witnessed[(m, k)] = min(
                    (root.location for root in rs.roots), key=lambda z: abs(z - c)
                )
            ties.extend(rs.diagnostics)
            if nonreal_totals[m] < N - m + 1:
                raise VerificationFailed(
                    "nonreal-total",
                    f"iterate m={m} has {nonreal_totals[m]} nonreal zeros, "
                    f"wanted >= {N - m + 1}",
                )
    return CounterexampleReport(
        plan=plan,
        witnessed=witnessed,
        nonreal_totals=nonreal_totals,
        product_coeffs=f_n.coeffs,
        derivative_identity_ok=True,
        boundary_ties=ties,
    )
