"""Counterexample-product pipeline: witnesses, targets, gamma search, verify."""

import copy
from fractions import Fraction as F

import mpmath as mp
import pytest

from zerodyn import (
    GammaSearchExhausted,
    NoNonrealZero,
    Poly,
    PowerSeries,
    StagePlan,
    VerificationFailed,
    WitnessNotFound,
    build_partial_product,
    build_plan,
    choose_gamma,
    extend,
    extend_plan,
    find_degree_witnesses,
    pick_targets,
    verify_counterexample,
)

PHI = extend(PowerSeries([1, 1, 1]), 40)       # 1 + x + x^2
PHI_LP = extend(PowerSeries([1, 1]), 40)       # 1 + x, never obstructed
PHI_ZERO = extend(PowerSeries([0, 1, 0, 1]), 41)  # x + x^3 = x(1 + x^2)
PHI_A = extend(PowerSeries([1, 0, 1]), 40)     # 1 + x^2


class TestWitnesses:
    def test_first_stage_by_hand(self):
        ds = find_degree_witnesses(PHI, 2, 12)
        assert ds[0] == 2  # the image x^2+2x+2 has zeros -1 +- i
        assert ds[1] > ds[0]

    def test_strictly_increasing(self):
        ds = find_degree_witnesses(PHI, 3, 20)
        assert all(a < b for a, b in zip(ds, ds[1:]))

    def test_negative_control(self):
        with pytest.raises(WitnessNotFound):
            find_degree_witnesses(PHI_LP, 1, 10)

    def test_monomial_factor_stripped(self):
        # x + x^3 behaves as its cofactor 1 + x^2
        assert find_degree_witnesses(PHI_ZERO, 2, 12) == find_degree_witnesses(
            PHI_A, 2, 12
        )


class TestTargets:
    def test_hand_values(self):
        plan = pick_targets(PHI, [2, 3])
        a11 = plan.targets[(1, 1)]
        assert abs(a11 - mp.mpc(-1, 1)) < 1e-40
        assert abs(plan.radii[(1, 1)] - mp.mpf("0.5")) < 1e-40

    def test_upper_half_plane_with_largest_imag(self):
        plan = pick_targets(PHI_A, [3])
        a = plan.targets[(1, 1)]
        with mp.workprec(300):
            assert abs(a - mp.mpc(0, 1) * mp.sqrt(6)) < 1e-40
            assert abs(plan.radii[(1, 1)] - mp.sqrt(6) / 2) < 1e-40

    def test_all_real_image_rejected(self):
        phi_h = extend(PowerSeries([1, 0, -1]), 40)  # images all-real
        with pytest.raises(NoNonrealZero):
            pick_targets(phi_h, [2])


class TestChooseGamma:
    def test_first_trial_passes_via_shift_conjugacy(self):
        # (1+x)^2 = T^1 x^2, so the stage-1 image is the shifted monomial
        # image and its zero sits exactly at the disk center
        plan = pick_targets(PHI, [2, 3])
        gamma = choose_gamma(PHI, plan, 1, F(1))
        assert gamma == 1

    def test_later_stage_shrinks_on_collision(self):
        plan = pick_targets(PHI, [2, 3])
        extend_plan(PHI, plan, 1, F(1))
        gamma2 = choose_gamma(PHI, plan, 2, F(1))
        assert 0 < gamma2 < 1

    def test_rejects_nonpositive_gamma0(self):
        plan = pick_targets(PHI, [2])
        with pytest.raises(ValueError):
            choose_gamma(PHI, plan, 1, F(0))

    def test_stage_order_enforced(self):
        plan = pick_targets(PHI, [2, 3])
        with pytest.raises(ValueError):
            choose_gamma(PHI, plan, 2, F(1))

    def test_budget_exhaustion(self):
        plan = pick_targets(PHI, [2])
        # sabotage: demand a zero in a far-away disk no gamma can reach
        plan.targets[(1, 1)] = mp.mpc(1000, 1)
        plan.radii[(1, 1)] = mp.mpf("0.25")
        with pytest.raises(GammaSearchExhausted):
            choose_gamma(PHI, plan, 1, F(1), max_halvings=8)


class TestPartialProduct:
    def test_single_stage(self):
        plan = StagePlan(degrees=(2,), targets={}, radii={}, gammas=(F(1),))
        assert build_partial_product(plan, 1) == Poly([1, 1]) ** 2

    def test_two_stages(self):
        plan = StagePlan(
            degrees=(2, 3), targets={}, radii={}, gammas=(F(1), F(1, 2))
        )
        expected = Poly([1, 1]) ** 2 * Poly([1, F(1, 2)]) ** 3
        got = build_partial_product(plan, 2)
        assert got == expected and int(got.degree) == 5

    def test_empty_product(self):
        plan = StagePlan(degrees=(), targets={}, radii={})
        assert build_partial_product(plan, 0) == Poly([1])


class TestVerify:
    def test_end_to_end_single_stage(self):
        plan = build_plan(PHI, 1, d_cap=12)
        rep = verify_counterexample(PHI, plan, 1, 1)
        assert rep.nonreal_totals[1] >= 2
        assert (1, 1) in rep.witnessed
        assert rep.derivative_identity_ok

    def test_end_to_end_two_stages(self):
        plan = build_plan(PHI, 2, d_cap=12)
        rep = verify_counterexample(PHI, plan, 2, 2)
        # m = 1 keeps a zero in the k=1 and k=2 disks; m = 2 in the k=2 disk
        assert {(1, 1), (1, 2), (2, 2)} <= set(rep.witnessed)
        assert rep.nonreal_totals[1] >= 2 and rep.nonreal_totals[2] >= 1
        f2 = build_partial_product(plan, 2)
        assert all(c > 0 for c in f2.coeffs)

    def test_derivative_identity(self):
        plan = build_plan(PHI, 2, d_cap=12)
        f2 = build_partial_product(plan, 2)
        from zerodyn import derivative

        assert derivative(f2).coefficient(0) == sum(
            d * g for d, g in zip(plan.degrees, plan.gammas)
        )

    def test_stage_monotonicity(self):
        # a verified two-stage plan truncated to one stage still verifies
        plan = build_plan(PHI, 2, d_cap=12)
        rep = verify_counterexample(PHI, plan, 1, 1)
        assert (1, 1) in rep.witnessed

    def test_overlapping_disks_detected(self):
        plan = build_plan(PHI, 2, d_cap=12)
        bad = copy.deepcopy(plan)
        # drag the k=2 disk onto the k=1 disk and inflate it
        bad.targets[(1, 2)] = bad.targets[(1, 1)] + mp.mpf("0.01")
        bad.radii[(1, 2)] = bad.radii[(1, 1)]
        bad.gammas = (bad.gammas[0], bad.gammas[0])
        with pytest.raises(VerificationFailed) as exc:
            verify_counterexample(PHI, bad, 2, 1)
        assert exc.value.clause in ("disjointness", "membership")

    def test_off_axis_violation_detected(self):
        plan = build_plan(PHI, 1, d_cap=12)
        bad = copy.deepcopy(plan)
        bad.radii[(1, 1)] = bad.targets[(1, 1)].imag * 2  # radius > Im a
        with pytest.raises(VerificationFailed) as exc:
            verify_counterexample(PHI, bad, 1, 1)
        assert exc.value.clause == "off-axis"

    def test_m_larger_than_n_rejected(self):
        plan = build_plan(PHI, 1, d_cap=12)
        with pytest.raises(ValueError):
            verify_counterexample(PHI, plan, 1, 2)
