import numpy as np
import pytest

from betweenu import (
    Branch,
    DegeneratePreference,
    ExpectedUtility,
    ImplicitKernel,
    IterationLimit,
    MultipleFixedPoints,
    NoCrossing,
    NonMonotoneChord,
    Ordering,
    ValueModel,
    chord_point,
    context_for,
    find_extremes,
    grid,
    implicit_utility,
    implicit_utility_many,
    local_utility,
    local_value,
    lottery,
    mix,
    one_sided_limits,
    oracle_from_value,
    solve_mixing,
    solve_utility,
    solve_utility_many,
    utility_fixed_point,
)

from conftest import WU_U, WU_W

BISECT_TOL = 5e-11  # half of the default bracket tolerance


def wu_utility_oracle(model, x) -> float:
    """Chord-calibrated utility for weighted utility, in closed form.

    The chord value V(m_t) = t*w_best / (t*w_best + (1-t)*w_worst) is a
    Moebius function of t; inverting it at V(x) gives the utility level
    without any bisection.
    """
    v = model.value(x)
    if v in (0.0, 1.0):
        return v
    w_best, w_worst = model.w[2], model.w[0]
    q = v * w_worst / (w_best * (1.0 - v))
    return q / (1.0 + q)


def da_utility_oracle(model, x) -> float:
    """Chord-calibrated utility for disappointment aversion.

    On the chord only the worst outcome disappoints, so
    V(m_t) = t / (1 + beta (1 - t)); invert at V(x).
    """
    v = model.value(x)
    return v * (1.0 + model.beta) / (1.0 + model.beta * v)


def wu_mixing_oracle(model, x, t) -> float:
    """Weight putting the x/worst mixture on the chord, in closed form."""
    u, w = np.asarray(model.u), np.asarray(model.w)
    p = np.asarray(x.probs)
    num, den = float((p * w * u).sum()), float((p * w).sum())
    w_best, w_worst = w[2], w[0]
    v_m = t * w_best / (t * w_best + (1.0 - t) * w_worst)
    return v_m * w_worst / (num - v_m * den + v_m * w_worst)


class CappedValue(ValueModel):
    """Value flat above a cap; breaks strict chord monotonicity."""

    def __init__(self):
        super().__init__(3)

    def _values(self, rows):
        return np.minimum(rows[:, 1], 0.6)


class RidgeValue(ValueModel):
    """Interior ridge exceeding every vertex value."""

    def __init__(self):
        super().__init__(3)

    def _values(self, rows):
        return rows[:, 2] + 4.4 * rows[:, 0] * rows[:, 1]


class TestContext:
    def test_extremes_found_at_vertices(self, eu_model):
        best, worst = find_extremes(eu_model)
        assert best == lottery((0.0, 0.0, 1.0))
        assert worst == lottery((1.0, 0.0, 0.0))

    def test_degenerate_preference_rejected(self):
        flat = ImplicitKernel.from_table(
            (0.0, 1.0), ((0.3, 0.7), (0.3, 0.7), (0.3, 0.7))
        )
        with pytest.raises(DegeneratePreference):
            context_for(flat)

    def test_parameter_validation(self, eu_model):
        with pytest.raises(ValueError):
            context_for(eu_model, tol_t=0.0)
        with pytest.raises(ValueError):
            context_for(eu_model, max_iter=0)

    def test_chord_point_endpoints(self, eu_model):
        ctx = context_for(eu_model)
        assert chord_point(ctx, 0.0) == ctx.worst
        assert chord_point(ctx, 1.0) == ctx.best
        assert chord_point(ctx, 0.25).probs == (0.75, 0.0, 0.25)


class TestSolveUtility:
    def test_expected_utility_closed_form(self, eu_model):
        ctx = context_for(eu_model)
        for x in grid(3, 6):
            assert solve_utility(ctx, x) == pytest.approx(eu_model.value(x), abs=BISECT_TOL)

    def test_weighted_utility_closed_form(self, wu_model):
        ctx = context_for(wu_model)
        for x in grid(3, 6):
            assert solve_utility(ctx, x) == pytest.approx(
                wu_utility_oracle(wu_model, x), abs=BISECT_TOL
            )

    def test_disappointment_closed_form(self, da_model):
        ctx = context_for(da_model)
        for x in grid(3, 6):
            assert solve_utility(ctx, x) == pytest.approx(
                da_utility_oracle(da_model, x), abs=BISECT_TOL
            )

    def test_kernel_lands_on_chord_value(self, kernel_model):
        ctx = context_for(kernel_model)
        for x in grid(3, 6):
            t = solve_utility(ctx, x)
            assert kernel_model.value(chord_point(ctx, t)) == pytest.approx(
                kernel_model.value(x), abs=1e-9
            )

    def test_extremes_exact(self, family_model):
        ctx = context_for(family_model)
        assert solve_utility(ctx, ctx.best) == 1.0
        assert solve_utility(ctx, ctx.worst) == 0.0

    def test_chord_identity(self, eu_model):
        ctx = context_for(eu_model)
        assert solve_utility(ctx, chord_point(ctx, 0.37)) == pytest.approx(0.37, abs=1e-10)

    def test_batch_matches_scalar_bitwise(self, family_model):
        ctx = context_for(family_model)
        points = sorted(grid(3, 6))
        batch = solve_utility_many(ctx, points)
        for x, u in zip(points, batch):
            assert solve_utility(ctx, x) == u

    def test_oracle_path_agrees_with_value_path(self, eu_model):
        twin = oracle_from_value(
            lambda x: sum(p * u for p, u in zip(x.probs, (0.0, 0.4, 1.0))), 3
        )
        ctx_v = context_for(eu_model)
        ctx_o = context_for(twin)
        # The oracle path may stop early anywhere inside the comparison
        # indifference band, so agreement is eps_pref-limited.
        for x in grid(3, 4):
            assert solve_utility(ctx_o, x) == pytest.approx(
                solve_utility(ctx_v, x), abs=2e-9
            )

    def test_nonmonotone_chord_value_path(self):
        ctx = context_for(RidgeValue())
        with pytest.raises(NonMonotoneChord):
            solve_utility(ctx, lottery((0.5, 0.5, 0.0)))

    def test_nonmonotone_chord_oracle_path(self):
        ridge = oracle_from_value(
            lambda x: x.probs[2] + 4.4 * x.probs[0] * x.probs[1], 3
        )
        ctx = context_for(ridge)
        with pytest.raises(NonMonotoneChord):
            solve_utility(ctx, lottery((0.5, 0.5, 0.0)))

    def test_iteration_limit(self, eu_model):
        ctx = context_for(eu_model, max_iter=2)
        with pytest.raises(IterationLimit):
            solve_utility(ctx, lottery((0.4, 0.25, 0.35)))


class TestSolveMixing:
    def test_expected_utility_closed_form(self, eu_model):
        ctx = context_for(eu_model)
        x = lottery((0.1, 0.5, 0.4))  # value 0.6
        w, branch = solve_mixing(ctx, x, 0.3)
        assert branch is Branch.USED_WORST
        assert w == pytest.approx(0.3 / 0.6, abs=BISECT_TOL)
        w, branch = solve_mixing(ctx, x, 0.9)
        assert branch is Branch.USED_BEST
        assert w == pytest.approx((1.0 - 0.9) / (1.0 - 0.6), abs=BISECT_TOL)

    def test_weighted_utility_closed_form(self, wu_model):
        ctx = context_for(wu_model)
        x = lottery((0.0, 1.0, 0.0))
        for t in (0.1, 0.3):
            w, branch = solve_mixing(ctx, x, t)
            assert branch is Branch.USED_WORST
            assert w == pytest.approx(wu_mixing_oracle(wu_model, x, t), abs=BISECT_TOL)

    def test_on_chord_weight_is_one(self, eu_model):
        ctx = context_for(eu_model)
        x = lottery((0.5, 0.0, 0.5))  # exactly the chord point at 0.5
        w, branch = solve_mixing(ctx, x, 0.5)
        assert (w, branch) == (1.0, Branch.USED_WORST)

    def test_extremes_closed_form(self, family_model):
        ctx = context_for(family_model)
        for t in (0.05, 0.3, 0.8):
            assert solve_mixing(ctx, ctx.best, t) == (t, Branch.USED_WORST)
            assert solve_mixing(ctx, ctx.worst, t) == (1.0 - t, Branch.USED_BEST)

    def test_level_must_be_interior(self, eu_model):
        ctx = context_for(eu_model)
        with pytest.raises(ValueError):
            solve_mixing(ctx, lottery((0.2, 0.5, 0.3)), 0.0)

    def test_no_crossing_value_path(self):
        ctx = context_for(CappedValue())
        with pytest.raises(NoCrossing):
            solve_mixing(ctx, lottery((0.9, 0.05, 0.05)), 0.7)

    def test_no_crossing_oracle_path(self):
        capped = oracle_from_value(lambda x: min(x.probs[1], 0.6), 3)
        ctx = context_for(capped)
        with pytest.raises(NoCrossing):
            solve_mixing(ctx, lottery((0.9, 0.05, 0.05)), 0.7)


class TestLocalValueAlgebra:
    def test_frozen_branch_arithmetic(self):
        assert local_value(0.5, 0.25, Branch.USED_WORST) == 2.0
        assert local_value(0.3, 1.0, Branch.USED_WORST) == 0.3
        assert local_value(0.2, 0.8, Branch.USED_BEST) == 0.0
        assert local_value(0.6, 0.5, Branch.USED_BEST) == pytest.approx(0.2, abs=1e-15)

    def test_validates_inputs(self):
        with pytest.raises(ValueError):
            local_value(0.0, 0.5, Branch.USED_WORST)
        with pytest.raises(ValueError):
            local_value(0.5, 0.0, Branch.USED_WORST)
        with pytest.raises(ValueError):
            local_value(0.5, 1.5, Branch.USED_WORST)

    def test_sample_assembly(self, wu_model):
        ctx = context_for(wu_model)
        x = lottery((0.2, 0.5, 0.3))
        s = local_utility(ctx, x, 0.4)
        assert s.x == x and s.level == 0.4
        assert s.value == local_value(0.4, s.mix_weight, s.branch)


class TestImplicitUtility:
    def test_constant_in_level_for_expected_utility(self, eu_model):
        ctx = context_for(eu_model)
        x = lottery((0.2, 0.5, 0.3))
        for t in (0.1, 0.35, 0.5, 0.9):
            assert implicit_utility(ctx, x, t) == pytest.approx(0.5, abs=1e-9)

    def test_endpoint_indicators(self, family_model):
        ctx = context_for(family_model)
        x = lottery((0.2, 0.5, 0.3))
        assert implicit_utility(ctx, x, 0.0) == 1.0
        assert implicit_utility(ctx, x, 1.0) == 0.0
        assert implicit_utility(ctx, ctx.worst, 0.0) == 0.0
        assert implicit_utility(ctx, ctx.best, 1.0) == 1.0

    def test_extreme_normalization_exact_interior(self, family_model):
        ctx = context_for(family_model)
        for t in (0.01, 0.37, 0.99):
            assert implicit_utility(ctx, ctx.best, t) == 1.0
            assert implicit_utility(ctx, ctx.worst, t) == 0.0

    def test_batch_matches_scalar_bitwise(self, family_model):
        ctx = context_for(family_model)
        points = sorted(grid(3, 5))
        ts = np.linspace(0.0, 1.0, len(points))
        batch = implicit_utility_many(ctx, points, ts)
        for x, t, u in zip(points, ts, batch):
            assert implicit_utility(ctx, x, float(t)) == u

    def test_weighted_utility_vertex_value(self, wu_model):
        ctx = context_for(wu_model)
        x = lottery((0.0, 1.0, 0.0))
        t = 0.1
        expected = t / wu_mixing_oracle(wu_model, x, t)
        assert implicit_utility(ctx, x, t) == pytest.approx(expected, abs=1e-7)


class TestFixedPoint:
    def test_agrees_with_solve_utility(self, family_model):
        ctx = context_for(family_model)
        for x in (lottery((0.2, 0.5, 0.3)), lottery((0.7, 0.1, 0.2))):
            assert abs(utility_fixed_point(ctx, x) - solve_utility(ctx, x)) <= 1e-9

    def test_vertex_fixed_points_exact(self, eu_model):
        ctx = context_for(eu_model)
        assert utility_fixed_point(ctx, ctx.best) == 1.0
        assert utility_fixed_point(ctx, ctx.worst) == 0.0

    def test_multiple_crossings_detected(self, eu_model, monkeypatch):
        ctx = context_for(eu_model)

        def rigged(_ctx, xs, ts):
            ts = np.asarray(ts, dtype=float)
            return ts + np.where(ts < 0.3, 0.1, np.where(ts < 0.6, -0.1, 0.1))

        monkeypatch.setattr("betweenu.engine.implicit_utility_many", rigged)
        with pytest.raises(MultipleFixedPoints):
            utility_fixed_point(ctx, lottery((0.2, 0.5, 0.3)))

    def test_scan_size_validated(self, eu_model):
        ctx = context_for(eu_model)
        with pytest.raises(ValueError):
            utility_fixed_point(ctx, lottery((0.2, 0.5, 0.3)), n_scan=2)


class TestOneSidedLimits:
    def test_reports_four_values(self, wu_model):
        ctx = context_for(wu_model)
        report = one_sided_limits(ctx, lottery((0.2, 0.5, 0.3)))
        assert set(report) == {"at_zero", "near_zero", "near_one", "at_one"}
        assert report["at_zero"] == 1.0
        assert report["at_one"] == 0.0
