import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from urnlab.classification import dominated_set, full_dominance_relation
from urnlab.core import enumerate_rules, induced_act
from urnlab.preferences import (
    TIE_EPS,
    DegeneratePriorError,
    MaxminEU,
    Prior,
    SEU,
    SmoothAmbiguity,
    maxmin_value,
    model_value,
    monotonicity_audit,
    optimal_rules,
    seu_value,
    smooth_value,
)
from conftest import rule


class TestPriorValidation:
    def test_point_mass_interior_ok(self):
        Prior.point_mass(F(1, 3))

    def test_point_mass_at_endpoints_rejected(self):
        for omega in (0, 1):
            with pytest.raises(DegeneratePriorError):
                Prior.point_mass(omega)

    def test_all_mass_on_endpoints_rejected(self):
        with pytest.raises(DegeneratePriorError):
            Prior(((F(0), F(1, 2)), (F(1), F(1, 2))))

    def test_endpoint_with_interior_companion_ok(self):
        Prior(((F(0), F(1, 2)), (F(1, 3), F(1, 2))))

    def test_weights_must_be_positive_and_sum_to_one(self):
        with pytest.raises(DegeneratePriorError):
            Prior(((F(1, 2), F(0)), (F(1, 3), F(1))))
        with pytest.raises(DegeneratePriorError):
            Prior(((F(1, 2), F(1, 3)), (F(1, 3), F(1, 3))))

    def test_duplicate_support_rejected(self):
        with pytest.raises(DegeneratePriorError):
            Prior(((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))))

    def test_symmetry_detection(self):
        assert Prior.two_point(F(1, 10), F(9, 10)).is_symmetric()
        assert not Prior.two_point(F(1, 10), F(8, 10)).is_symmetric()
        assert Prior.point_mass(F(1, 2)).is_symmetric()


class TestSeuValue:
    def test_symmetric_two_point_on_ggyy(self):
        prior = Prior.two_point(F(1, 4), F(3, 4))
        # oracle: direct evaluation at both support points
        act = induced_act(rule("GGYY"))
        assert act(F(1, 4)) == act(F(3, 4)) == F(5, 8)
        assert seu_value(prior, rule("GGYY")) == F(5, 8)

    def test_constant_act_under_any_prior(self):
        for prior in (
            Prior.point_mass(F(2, 7)),
            Prior.two_point(F(1, 10), F(9, 10)),
            Prior(((F(0), F(1, 3)), (F(1, 2), F(2, 3)))),
        ):
            assert seu_value(prior, rule("WWWW")) == F(49, 100)

    def test_point_mass_value_at_one_third(self):
        assert seu_value(Prior.point_mass(F(1, 3)), rule("GGGY")) == F(13, 27)


class TestMaxminValue:
    def test_ggyy_guarantees_one_half(self):
        res = maxmin_value(MaxminEU(), rule("GGYY"))
        assert (res.value, res.argmin, res.exact) == (F(1, 2), F(1, 2), True)

    def test_gygy_identical(self):
        res = maxmin_value(MaxminEU(), rule("GYGY"))
        assert res.value == F(1, 2)

    def test_constant_act(self):
        res = maxmin_value(MaxminEU(), rule("WWWW"))
        assert res.value == F(49, 100)
        assert res.exact

    def test_all_green_zero_at_empty_urn(self):
        res = maxmin_value(MaxminEU(), rule("GGGG"))
        assert (res.value, res.argmin) == (F(0), F(0))

    def test_gggy_interior_minimum_against_grid_oracle(self):
        # oracle 1: closed form, argmin at (5 - sqrt 7)/6
        # oracle 2: brute-force minimum over a 10^6-point grid
        res = maxmin_value(MaxminEU(), rule("GGGY"))
        argmin_closed = (5 - math.sqrt(7)) / 6
        assert abs(float(res.argmin) - argmin_closed) < 1e-12
        assert not res.exact
        coeffs = [float(c) for c in reversed(induced_act(rule("GGGY")).coefficients)]
        grid = np.linspace(0.0, 1.0, 10**6 + 1)
        grid_min = np.polyval(coeffs, grid).min()
        assert abs(float(res.value) - grid_min) < 1e-10
        assert abs(float(res.value) - 0.4718) < 1e-4

    def test_subinterval(self):
        res = maxmin_value(MaxminEU(F(1, 2), F(9, 10)), rule("GGGG"))
        assert (res.value, res.argmin) == (F(1, 2), F(1, 2))

    def test_degenerate_endpoint_intervals_rejected(self):
        with pytest.raises(DegeneratePriorError):
            MaxminEU(F(0), F(0))
        with pytest.raises(DegeneratePriorError):
            MaxminEU(F(1), F(1))
        with pytest.raises(ValueError):
            MaxminEU(F(3, 4), F(1, 4))

    def test_interior_point_interval_ok(self):
        res = maxmin_value(MaxminEU(F(1, 3), F(1, 3)), rule("GGGY"))
        assert res.value == F(13, 27)


class TestSmoothValue:
    def test_concentrated_second_order_prior_collapses_to_seu(self):
        prior = Prior.point_mass(F(2, 5))
        model = SmoothAmbiguity(prior, theta=0.7)
        for code in ("GGYY", "GGGY", "WWWW"):
            expected = float(seu_value(prior, rule(code)))
            assert abs(smooth_value(model, rule(code)) - expected) < 1e-12

    def test_large_theta_approaches_mean(self):
        # series oracle: value = mean - variance/(2 theta) + O(theta^-2)
        prior = Prior.two_point(F(1, 4), F(3, 4))
        model = SmoothAmbiguity(prior, theta=1e6)
        mean = float(seu_value(prior, rule("GGYY")))
        assert abs(smooth_value(model, rule("GGYY")) - mean) < 1e-6

    def test_constant_act_is_theta_invariant(self):
        prior = Prior.two_point(F(1, 10), F(9, 10))
        for theta in (0.01, 1.0, 100.0):
            model = SmoothAmbiguity(prior, theta=theta)
            assert abs(smooth_value(model, rule("WWWW")) - 0.49) < 1e-12

    def test_ambiguity_aversion_penalizes_spread(self):
        # GGGG is risky across the support; small theta punishes it
        prior = Prior.two_point(F(1, 10), F(9, 10))
        tight = smooth_value(SmoothAmbiguity(prior, theta=0.01), rule("GGGG"))
        loose = smooth_value(SmoothAmbiguity(prior, theta=100.0), rule("GGGG"))
        assert tight < loose

    def test_theta_must_be_positive(self):
        with pytest.raises(ValueError):
            SmoothAmbiguity(Prior.point_mass(F(1, 2)), theta=0.0)


class TestOptimalRules:
    def test_maxmin_full_interval_optimum(self):
        assert {r.code for r in optimal_rules(MaxminEU())} == {"GGYY", "GYGY"}

    def test_seu_point_mass_high_green(self):
        optima = optimal_rules(SEU(Prior.point_mass(F(9, 10))))
        assert {r.code for r in optima} == {"GGGG"}

    def test_seu_symmetric_two_point_includes_both_split_rules(self):
        optima = optimal_rules(SEU(Prior.two_point(F(1, 10), F(9, 10))))
        codes = {r.code for r in optima}
        assert {"GGYY", "GYGY"} <= codes

    def test_smooth_optima_nonempty(self):
        prior = Prior.two_point(F(1, 5), F(4, 5))
        optima = optimal_rules(SmoothAmbiguity(prior, theta=0.5))
        assert optima

    def test_color_symmetry_of_symmetric_model_optima(self):
        for optima in (
            optimal_rules(MaxminEU()),
            optimal_rules(SEU(Prior.two_point(F(1, 10), F(9, 10)))),
            optimal_rules(SEU(Prior.point_mass(F(1, 2)))),
        ):
            assert {r.color_swapped() for r in optima} == set(optima)


class TestMonotonicityAudit:
    def test_maxmin_full_interval_passes(self):
        report = monotonicity_audit(MaxminEU())
        assert report.passed
        assert not report.violations

    def test_seu_battery_passes(self):
        priors = [
            Prior.point_mass(F(1, 2)),
            Prior.point_mass(F(1, 100)),
            Prior.two_point(F(1, 10), F(9, 10)),
            Prior.two_point(F(2, 5), F(3, 5), F(1, 5)),
            Prior(((F(0), F(1, 4)), (F(1, 2), F(1, 2)), (F(1), F(1, 4)))),
        ]
        for prior in priors:
            assert monotonicity_audit(SEU(prior)).passed

    def test_500_random_smooth_configurations_pass(self):
        rng = random.Random(1729)
        interior = [F(k, 20) for k in range(1, 20)]
        for _ in range(500):
            support_points = rng.sample(interior, rng.randint(1, 4))
            raw = [rng.randint(1, 9) for _ in support_points]
            total = sum(raw)
            prior = Prior(
                tuple((o, F(w, total)) for o, w in zip(support_points, raw))
            )
            theta = 10.0 ** rng.uniform(-2, 2)
            report = monotonicity_audit(SmoothAmbiguity(prior, theta))
            assert report.passed, report.model

    def test_maxmin_sampled_intervals_pass(self):
        grid = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
        for i, lo in enumerate(grid):
            for hi in grid[i + 1 :]:
                assert monotonicity_audit(MaxminEU(lo, hi)).passed


class TestValueInvariants:
    def test_dominance_implies_weakly_higher_maxmin(self):
        for better, worse in full_dominance_relation():
            assert (
                maxmin_value(MaxminEU(), better).value
                >= maxmin_value(MaxminEU(), worse).value
            )

    def test_dominance_implies_strictly_higher_seu_and_smooth(self):
        prior = Prior.two_point(F(1, 5), F(7, 10), F(2, 5))
        smooth = SmoothAmbiguity(prior, theta=0.3)
        for better, worse in full_dominance_relation():
            assert seu_value(prior, better) > seu_value(prior, worse)
            assert smooth_value(smooth, better) > smooth_value(smooth, worse)

    def test_maxmin_below_seu_for_priors_in_interval(self, rules):
        model = MaxminEU(F(1, 10), F(9, 10))
        priors = [
            Prior.point_mass(F(1, 10)),
            Prior.point_mass(F(1, 2)),
            Prior.two_point(F(1, 10), F(9, 10)),
            Prior.two_point(F(3, 10), F(4, 5), F(3, 4)),
        ]
        for r in rules[::7]:
            worst = maxmin_value(model, r).value
            for prior in priors:
                assert worst <= seu_value(prior, r)

    def test_optima_always_undominated(self):
        dominated = dominated_set()
        models = [
            MaxminEU(),
            MaxminEU(F(1, 10), F(1, 2)),
            SEU(Prior.point_mass(F(3, 10))),
            SEU(Prior.two_point(F(1, 4), F(3, 4))),
            SmoothAmbiguity(Prior.two_point(F(1, 4), F(3, 4)), theta=0.2),
        ]
        for model in models:
            assert not (optimal_rules(model) & dominated)

    def test_model_value_dispatch(self):
        r = rule("GGYY")
        assert model_value(SEU(Prior.point_mass(F(1, 2))), r) == F(1, 2)
        assert model_value(MaxminEU(), r) == F(1, 2)
        prior = Prior.point_mass(F(1, 2))
        assert abs(model_value(SmoothAmbiguity(prior, 1.0), r) - 0.5) < 1e-12

    def test_tie_tolerance_declared(self):
        assert TIE_EPS == F(1, 10**9)
