import pytest

from betweenu import (
    AffineFunctional,
    ExpectedUtility,
    Infeasible,
    MembershipViolation,
    Polytope,
    chord_point,
    context_for,
    contour_samples,
    cross_polytope_consistency,
    degenerate,
    grid,
    local_utility,
    lottery,
    mix,
    quadratic_oracle,
    separate,
    verify_separation,
)


def full_simplex(n: int) -> Polytope:
    return Polytope(tuple(sorted(degenerate(i, n) for i in range(n))))


def audit_samples(ctx, t, polytope, resolution=6):
    base = contour_samples(ctx, t, polytope)
    merged = {x.probs: x for x in [*base, *grid(ctx.model.n_outcomes, resolution)]}
    return sorted(merged.values())


class TestSeparate:
    def test_two_outcome_expected_utility_exact(self):
        ctx = context_for(ExpectedUtility((0.0, 1.0)))
        functional = separate(ctx, 0.5, full_simplex(2), sorted(grid(2, 8)))
        assert functional.coeffs == (0.0, 1.0)

    def test_normalization_exact_at_extremes(self, wu_model):
        ctx = context_for(wu_model)
        functional = separate(ctx, 0.3, full_simplex(3), audit_samples(ctx, 0.3, full_simplex(3)))
        assert functional.value(ctx.best) == 1.0
        assert functional.value(ctx.worst) == 0.0

    def test_chord_only_polytope_reproduces_levels(self, da_model):
        ctx = context_for(da_model)
        chord = Polytope(tuple(sorted((ctx.best, ctx.worst))))
        samples = sorted(chord_point(ctx, s) for s in [k / 10 for k in range(11)])
        functional = separate(ctx, 0.5, chord, samples)
        for s in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert functional.value(chord_point(ctx, s)) == pytest.approx(s, abs=1e-12)

    def test_level_must_be_interior(self, eu_model):
        ctx = context_for(eu_model)
        with pytest.raises(ValueError):
            separate(ctx, 1.0, full_simplex(3), sorted(grid(3, 4)))

    def test_polytope_must_hold_extremes(self, eu_model):
        ctx = context_for(eu_model)
        chordless = Polytope((degenerate(0, 3), degenerate(1, 3)))
        with pytest.raises(ValueError):
            separate(ctx, 0.5, chordless, sorted(grid(3, 4)))

    def test_nonconvex_contours_are_infeasible(self):
        ctx = context_for(quadratic_oracle())
        with pytest.raises(Infeasible):
            separate(ctx, 0.5, full_simplex(3), sorted(grid(3, 6)))


class TestVerifySeparation:
    @pytest.mark.parametrize("t", [0.2, 0.5, 0.8])
    def test_fitted_functional_passes(self, family_model, t):
        ctx = context_for(family_model)
        samples = audit_samples(ctx, t, full_simplex(3))
        functional = separate(ctx, t, full_simplex(3), samples)
        check = verify_separation(ctx, t, functional, samples)
        assert check.passed, check.violations[:3]
        assert check.n_upper + check.n_lower + check.n_indifferent == len(samples)
        assert check.chord_value == pytest.approx(t, abs=1e-7)

    def test_perturbed_functional_is_flagged(self, eu_model):
        ctx = context_for(eu_model)
        t = 0.5
        samples = audit_samples(ctx, t, full_simplex(3))
        functional = separate(ctx, t, full_simplex(3), samples)
        skewed = AffineFunctional(
            tuple(c + 0.01 for c in functional.coeffs[:1]) + functional.coeffs[1:]
        )
        check = verify_separation(ctx, t, skewed, samples)
        assert not check.passed
        assert check.violations
        for violation in check.violations:
            assert violation["class"] in ("upper", "lower", "indifferent")

    def test_matches_engine_local_utility(self, wu_model):
        ctx = context_for(wu_model)
        t = 0.5
        samples = audit_samples(ctx, t, full_simplex(3))
        functional = separate(ctx, t, full_simplex(3), samples)
        for x in grid(3, 6):
            engine_value = local_utility(ctx, x, t).value
            assert functional.value(x) == pytest.approx(engine_value, abs=1e-6)


class TestContourSamples:
    def test_contains_structure_points(self, da_model):
        ctx = context_for(da_model)
        samples = contour_samples(ctx, 0.4, full_simplex(3))
        probs = {x.probs for x in samples}
        assert ctx.best.probs in probs and ctx.worst.probs in probs
        assert chord_point(ctx, 0.4).probs in probs
        assert len(probs) == len(samples)
        assert samples == sorted(samples)


class TestCrossPolytope:
    def test_polytope_independence(self, family_model):
        ctx = context_for(family_model)
        x = lottery((0.2, 0.5, 0.3))
        third = next(
            v for v in (degenerate(i, 3) for i in range(3))
            if v not in (ctx.best, ctx.worst)
        )
        polys = [
            Polytope(tuple(sorted((ctx.best, ctx.worst, x)))),
            full_simplex(3),
            Polytope(tuple(sorted((ctx.best, ctx.worst, x, mix(0.5, third, x))))),
        ]
        result = cross_polytope_consistency(ctx, x, 0.5, polys)
        assert result.passed
        assert len(result.separator_values) == 3
        assert result.max_discrepancy <= 1e-6

    def test_membership_enforced(self, eu_model):
        ctx = context_for(eu_model)
        chord = Polytope(tuple(sorted((ctx.best, ctx.worst))))
        off_chord = lottery((0.2, 0.5, 0.3))
        with pytest.raises(MembershipViolation):
            cross_polytope_consistency(ctx, off_chord, 0.5, [chord])


class TestAffineFunctional:
    def test_value_and_dict(self):
        f = AffineFunctional((0.0, 0.4, 1.0))
        assert f.value(lottery((0.2, 0.5, 0.3))) == pytest.approx(0.5, abs=1e-15)
        assert f.to_dict() == {"coeffs": [0.0, 0.4, 1.0]}

    def test_dimension_checked(self):
        f = AffineFunctional((0.0, 1.0))
        with pytest.raises(ValueError):
            f.value(lottery((0.2, 0.5, 0.3)))
