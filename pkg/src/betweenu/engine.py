"""Constructive implicit mixture-linear representations.

Given a preference model satisfying the betweenness axioms, this module
builds a utility ``U`` on the simplex together with a two-argument
function ``u(x, t)`` that is mixture linear in ``x`` at every level
``t``, normalized to 1 at the best extreme and 0 at the worst, and whose
unique fixed point ``t = u(x, t)`` is exactly ``U(x)``.

Everything is driven by pairwise comparisons:

1. Find best and worst degenerate lotteries.  The chord between them is
   strictly increasing in preference, so chord levels act as a utility
   yardstick.
2. ``U(x)`` is the chord level indifferent to ``x``, found by bisection
   (:func:`solve_utility`).
3. For an interior level ``t``, mix ``x`` toward the extreme on the
   opposite side of the chord point until the mixture is indifferent to
   it (:func:`solve_mixing`); inverting mixture linearity along that
   segment yields the local utility (:func:`local_value`).
4. At the endpoint levels, ``u(x, 0)`` and ``u(x, 1)`` are indicators of
   the indifference classes of the worst and best extremes.

For value-backed models every operation routes through one vectorized
code path; scalar calls are one-row batches, so scalar and batched
results are bitwise identical and independent of batch composition.
Comparison-only oracles run a scalar bisection over the same brackets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import (
    DegeneratePreference,
    IterationLimit,
    MultipleFixedPoints,
    NoCrossing,
    NonMonotoneChord,
)
from .models import Ordering, PreferenceModel, ValueModel
from .simplex import Lottery, degenerate, mix

DEFAULT_TOL_T = 1e-10
DEFAULT_MAX_ITER = 200

#: Mixing weights at or below this floor are rejected as "no crossing":
#: at interior levels the opposite extreme lies strictly across the chord
#: point, which bounds the true crossing weight away from zero.
MU_FLOOR = 1e-12


class Branch(Enum):
    """Which extreme anchored the mixing solve at a given level."""

    USED_WORST = "used_worst"
    USED_BEST = "used_best"


def local_value(t: float, mix_weight: float, branch: Branch) -> float:
    """Invert mixture linearity along the solved segment.

    A weight ``w`` makes ``w*x + (1-w)*anchor`` indifferent to the chord
    point at level ``t``.  Mixture linearity of the local utility, with
    the anchor worth 0 (worst) or 1 (best), gives

        worst anchor:  t = w*v           so  v = t / w
        best anchor:   t = w*v + (1-w)   so  v = 1 - (1-t) / w

    Pure arithmetic on already-solved quantities.  The normalizations
    v(best) = 1 and v(worst) = 0 hold exactly: the chord solves give
    w = t (resp. w = 1-t) and the expressions collapse to t/t and
    1 - (1-t)/(1-t).
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {t!r}")
    if not 0.0 < mix_weight <= 1.0:
        raise ValueError(f"mixing weight must lie in (0, 1], got {mix_weight!r}")
    if branch is Branch.USED_WORST:
        return t / mix_weight
    return 1.0 - (1.0 - t) / mix_weight


@dataclass(frozen=True)
class LocalUtilitySample:
    """One evaluation of the local utility at an interior level.

    ``branch`` is USED_WORST exactly when ``x`` is weakly preferred to
    the chord point at ``level``; ``value`` always equals
    ``local_value(level, mix_weight, branch)``.
    """

    x: Lottery
    level: float
    mix_weight: float
    branch: Branch
    value: float


@dataclass(frozen=True, eq=False)
class RepresentationContext:
    """A model, its preference extremes, and the solver tolerances.

    ``best`` must be strictly preferred to ``worst``, and every lottery
    the context is applied to must lie weakly between them.  Instances
    are immutable; the internal chord cache is value-deterministic, so a
    context can be shared across threads without changing any result.
    """

    model: PreferenceModel
    best: Lottery
    worst: Lottery
    tol_t: float = DEFAULT_TOL_T
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        n = self.model.n_outcomes
        if self.best.n_outcomes != n or self.worst.n_outcomes != n:
            raise ValueError("extreme lotteries do not match the model's outcome count")
        if not (math.isfinite(self.tol_t) and 0.0 < self.tol_t < 1.0):
            raise ValueError(f"tol_t must lie in (0, 1), got {self.tol_t!r}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if self.model.compare(self.best, self.worst) is not Ordering.STRICTLY_PREFERS:
            raise DegeneratePreference(
                "the designated best element is not strictly preferred to the worst"
            )
        object.__setattr__(self, "_best_row", self.best.as_array())
        object.__setattr__(self, "_worst_row", self.worst.as_array())
        object.__setattr__(self, "_chord_cache", {0.0: self.worst, 1.0: self.best})
        if isinstance(self.model, ValueModel):
            object.__setattr__(self, "_value_best", self.model.value(self.best))
            object.__setattr__(self, "_value_worst", self.model.value(self.worst))
        else:
            object.__setattr__(self, "_value_best", None)
            object.__setattr__(self, "_value_worst", None)


def find_extremes(model: PreferenceModel, n: int | None = None) -> tuple[Lottery, Lottery]:
    """Best and worst degenerate lotteries under the model.

    Betweenness makes preference both quasiconcave and quasiconvex, so
    extremes over the whole simplex are attained at vertices; a linear
    scan of pairwise comparisons finds them.  Raises
    :class:`DegeneratePreference` when every vertex is indifferent to
    every other.
    """
    n = model.n_outcomes if n is None else int(n)
    if n != model.n_outcomes:
        raise ValueError(f"model has {model.n_outcomes} outcomes, asked for {n}")
    best = worst = degenerate(0, n)
    for i in range(1, n):
        vertex = degenerate(i, n)
        if model.compare(vertex, best) is Ordering.STRICTLY_PREFERS:
            best = vertex
        if model.compare(vertex, worst) is Ordering.STRICTLY_DISPREFERRED:
            worst = vertex
    if model.compare(best, worst) is not Ordering.STRICTLY_PREFERS:
        raise DegeneratePreference("all simplex vertices are mutually indifferent")
    return best, worst


def context_for(
    model: PreferenceModel,
    tol_t: float = DEFAULT_TOL_T,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RepresentationContext:
    """Find the model's extremes and wrap everything in a context."""
    best, worst = find_extremes(model)
    return RepresentationContext(model, best, worst, tol_t, max_iter)


def chord_point(ctx: RepresentationContext, t: float) -> Lottery:
    """The yardstick lottery at level ``t``: ``t*best + (1-t)*worst``."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"chord level must lie in [0, 1], got {t!r}")
    cached = ctx._chord_cache.get(t)
    if cached is None:
        cached = mix(t, ctx.best, ctx.worst)
        ctx._chord_cache[t] = cached
    return cached


def _chord_rows(ctx: RepresentationContext, ts: np.ndarray) -> np.ndarray:
    return np.asarray([chord_point(ctx, float(t)).probs for t in ts], dtype=float)


def _check_point(ctx: RepresentationContext, x: Lottery) -> None:
    if x.n_outcomes != ctx.model.n_outcomes:
        raise ValueError(
            f"lottery has {x.n_outcomes} outcomes, context expects {ctx.model.n_outcomes}"
        )


def _as_rows(ctx: RepresentationContext, xs) -> np.ndarray:
    if isinstance(xs, np.ndarray):
        rows = np.asarray(xs, dtype=float)
    else:
        rows = np.asarray([x.probs for x in xs], dtype=float)
    if rows.ndim != 2 or rows.shape[1] != ctx.model.n_outcomes:
        raise ValueError(f"expected (k, {ctx.model.n_outcomes}) lottery rows, got {rows.shape}")
    return rows


def _as_lotteries(ctx: RepresentationContext, xs) -> list[Lottery]:
    if isinstance(xs, np.ndarray):
        return [Lottery(tuple(float(p) for p in row)) for row in xs]
    return list(xs)


def solve_utility(ctx: RepresentationContext, x: Lottery) -> float:
    """The unique chord level indifferent to ``x``.

    Bisection on the level exploits that the chord is strictly increasing
    in preference.  Endpoint shortcut: within the model's indifference
    band of an extreme, that extreme's level is returned outright.
    """
    _check_point(ctx, x)
    if isinstance(ctx.model, ValueModel):
        return float(_solve_utility_batch(ctx, np.asarray([x.probs], dtype=float))[0])
    return _solve_utility_compare(ctx, x)


def solve_utility_many(ctx: RepresentationContext, xs) -> np.ndarray:
    """Vectorized :func:`solve_utility` over lottery rows or Lottery lists."""
    if isinstance(ctx.model, ValueModel):
        return _solve_utility_batch(ctx, _as_rows(ctx, xs))
    return np.asarray([solve_utility(ctx, x) for x in _as_lotteries(ctx, xs)])


def _solve_utility_batch(ctx: RepresentationContext, rows: np.ndarray) -> np.ndarray:
    model = ctx.model
    vx = model.values(rows)
    eps = model.eps_pref
    above_best = vx - ctx._value_best
    above_worst = vx - ctx._value_worst
    bad = np.flatnonzero((above_best > eps) | (above_worst < -eps))
    if bad.size:
        i = int(bad[0])
        raise NonMonotoneChord(
            f"lottery {tuple(rows[i])} falls outside the preference range of the extremes"
        )
    k = len(rows)
    out = np.empty(k)
    is_best = np.abs(above_best) <= eps
    is_worst = (np.abs(above_worst) <= eps) & ~is_best
    out[is_best] = 1.0
    out[is_worst] = 0.0
    active = ~(is_best | is_worst)
    lo = np.zeros(k)
    hi = np.ones(k)
    # Raw value signs drive the bisection; the indifference band is used
    # only for the endpoint shortcuts above.  Banded midpoint exits would
    # cap the accuracy at eps_pref, well short of tol_t.
    for _ in range(ctx.max_iter):
        run = active & ((hi - lo) > ctx.tol_t)
        if not run.any():
            break
        mid = 0.5 * (lo + hi)
        vm = model.values(_chord_rows(ctx, mid))
        d = vx - vm
        exact = run & (d == 0.0)
        if exact.any():
            out[exact] = mid[exact]
            active &= ~exact
            run &= ~exact
        go_up = d > 0.0
        lo = np.where(run & go_up, mid, lo)
        hi = np.where(run & ~go_up, mid, hi)
    if (active & ((hi - lo) > ctx.tol_t)).any():
        raise IterationLimit(
            f"level bisection missed tol {ctx.tol_t} within {ctx.max_iter} iterations"
        )
    out[active] = 0.5 * (lo[active] + hi[active])
    return out


def _solve_utility_compare(ctx: RepresentationContext, x: Lottery) -> float:
    model = ctx.model
    vs_best = model.compare(x, ctx.best)
    if vs_best is Ordering.INDIFFERENT:
        return 1.0
    if vs_best is Ordering.STRICTLY_PREFERS:
        raise NonMonotoneChord(f"{x} is strictly preferred to the best extreme")
    vs_worst = model.compare(x, ctx.worst)
    if vs_worst is Ordering.INDIFFERENT:
        return 0.0
    if vs_worst is Ordering.STRICTLY_DISPREFERRED:
        raise NonMonotoneChord(f"{x} is strictly dispreferred to the worst extreme")
    lo, hi = 0.0, 1.0
    for _ in range(ctx.max_iter):
        if hi - lo <= ctx.tol_t:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        side = model.compare(x, chord_point(ctx, mid))
        if side is Ordering.INDIFFERENT:
            return mid
        if side is Ordering.STRICTLY_PREFERS:
            lo = mid
        else:
            hi = mid
    raise IterationLimit(
        f"level bisection missed tol {ctx.tol_t} within {ctx.max_iter} iterations"
    )


def solve_mixing(ctx: RepresentationContext, x: Lottery, t: float) -> tuple[float, Branch]:
    """Weight making a mixture of ``x`` and the opposite extreme sit on the chord.

    At an interior level ``t``, pick the anchor extreme on the far side
    of the chord point from ``x`` (worst if ``x`` is weakly preferred to
    the chord point, best otherwise) and bisect the mixture weight until
    ``w*x + (1-w)*anchor`` is indifferent to the chord point.  Returns
    ``(w, branch)`` with ``w`` in (0, 1]; ``w = 1`` exactly when ``x``
    itself is indifferent to the chord point.  The extremes themselves
    skip the bisection: mixing an extreme with the other extreme lands
    on the chord, so the weight is ``t`` (for the best lottery) or
    ``1 - t`` (for the worst) in closed form.
    """
    _check_point(ctx, x)
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"mixing level must lie in (0, 1), got {t!r}")
    if isinstance(ctx.model, ValueModel):
        w, used_worst = _solve_mixing_batch(
            ctx, np.asarray([x.probs], dtype=float), np.asarray([t])
        )
        return float(w[0]), (Branch.USED_WORST if used_worst[0] else Branch.USED_BEST)
    return _solve_mixing_compare(ctx, x, t)


def _solve_mixing_batch(
    ctx: RepresentationContext,
    rows: np.ndarray,
    ts: np.ndarray,
    vx: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Crossing weights for mixing each row with its opposite extreme.

    Returns ``(weights, used_worst_mask)``.  As in the level bisection,
    raw value signs steer the brackets and the indifference band only
    grants the on-chord shortcut, so weights carry bisection accuracy.
    """
    model = ctx.model
    ts = np.asarray(ts, dtype=float)
    if np.any((ts <= 0.0) | (ts >= 1.0)):
        raise ValueError("mixing levels must lie strictly inside (0, 1)")
    if vx is None:
        vx = model.values(rows)
    vm = model.values(_chord_rows(ctx, ts))
    d = vx - vm
    # The extremes solve in closed form: their mixture with the opposite
    # extreme is the chord point at the mixing weight itself.
    is_best = (rows == ctx._best_row).all(axis=1)
    is_worst = (rows == ctx._worst_row).all(axis=1)
    on_chord = np.abs(d) <= model.eps_pref
    up = d > 0.0
    used_worst = is_best | (~is_worst & (on_chord | up))
    k = len(rows)
    weights = np.ones(k)
    weights[is_best] = ts[is_best]
    weights[is_worst] = 1.0 - ts[is_worst]
    active = ~(on_chord | is_best | is_worst)
    sign = np.where(up, 1.0, -1.0)
    v_anchor = np.where(up, ctx._value_worst, ctx._value_best)
    blocked = active & (sign * (v_anchor - vm) >= 0.0)
    if blocked.any():
        i = int(np.flatnonzero(blocked)[0])
        raise NoCrossing(
            f"at level {ts[i]!r} the opposite extreme does not sit strictly across "
            f"the chord point; the model violates chord monotonicity"
        )
    anchor_rows = np.where(up[:, None], ctx._worst_row[None, :], ctx._best_row[None, :])
    lo = np.zeros(k)
    hi = np.ones(k)
    for _ in range(ctx.max_iter):
        run = active & ((hi - lo) > ctx.tol_t)
        if not run.any():
            break
        lam = 0.5 * (lo + hi)
        pts = lam[:, None] * rows + (1.0 - lam)[:, None] * anchor_rows
        g = sign * (model.values(pts) - vm)
        exact = run & (g == 0.0)
        if exact.any():
            weights[exact] = lam[exact]
            active &= ~exact
            run &= ~exact
        x_side = g > 0.0
        hi = np.where(run & x_side, lam, hi)
        lo = np.where(run & ~x_side, lam, lo)
    if (active & ((hi - lo) > ctx.tol_t)).any():
        raise IterationLimit(
            f"mixing bisection missed tol {ctx.tol_t} within {ctx.max_iter} iterations"
        )
    rest = active
    weights[rest] = 0.5 * (lo[rest] + hi[rest])
    if (weights <= MU_FLOOR).any():
        raise NoCrossing("mixing weight collapsed to zero; no interior crossing exists")
    return weights, used_worst


def _solve_mixing_compare(
    ctx: RepresentationContext, x: Lottery, t: float
) -> tuple[float, Branch]:
    model = ctx.model
    if x.probs == ctx.best.probs:
        return t, Branch.USED_WORST
    if x.probs == ctx.worst.probs:
        return 1.0 - t, Branch.USED_BEST
    target = chord_point(ctx, t)
    side = model.compare(x, target)
    if side is Ordering.INDIFFERENT:
        return 1.0, Branch.USED_WORST
    up = side is Ordering.STRICTLY_PREFERS
    anchor = ctx.worst if up else ctx.best
    branch = Branch.USED_WORST if up else Branch.USED_BEST
    if model.compare(anchor, target) is not side.converse:
        raise NoCrossing(
            f"at level {t!r} the opposite extreme does not sit strictly across "
            f"the chord point; the model violates chord monotonicity"
        )
    lo, hi = 0.0, 1.0
    for _ in range(ctx.max_iter):
        if hi - lo <= ctx.tol_t:
            break
        lam = 0.5 * (lo + hi)
        probe = model.compare(mix(lam, x, anchor), target)
        if probe is Ordering.INDIFFERENT:
            lo = hi = lam
            break
        if probe is side:
            hi = lam
        else:
            lo = lam
    else:
        raise IterationLimit(
            f"mixing bisection missed tol {ctx.tol_t} within {ctx.max_iter} iterations"
        )
    weight = 0.5 * (lo + hi)
    if weight <= MU_FLOOR:
        raise NoCrossing("mixing weight collapsed to zero; no interior crossing exists")
    return weight, branch


def local_utility(ctx: RepresentationContext, x: Lottery, t: float) -> LocalUtilitySample:
    """Solve the mixing weight at level ``t`` and assemble the full sample."""
    t = float(t)
    weight, branch = solve_mixing(ctx, x, t)
    return LocalUtilitySample(
        x=x, level=t, mix_weight=weight, branch=branch, value=local_value(t, weight, branch)
    )


def implicit_utility(ctx: RepresentationContext, x: Lottery, t: float) -> float:
    """``u(x, t)``: local utility inside (0, 1), class indicators at the ends.

    At ``t = 0`` the value is 0 for lotteries indifferent to the worst
    extreme and 1 otherwise; at ``t = 1`` it is 1 for lotteries
    indifferent to the best extreme and 0 otherwise.  Indifference is
    judged by the model's own band.
    """
    _check_point(ctx, x)
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"level must lie in [0, 1], got {t!r}")
    if t == 0.0:
        return 0.0 if ctx.model.compare(x, ctx.worst) is Ordering.INDIFFERENT else 1.0
    if t == 1.0:
        return 1.0 if ctx.model.compare(x, ctx.best) is Ordering.INDIFFERENT else 0.0
    return local_utility(ctx, x, t).value


def implicit_utility_many(ctx: RepresentationContext, xs, ts) -> np.ndarray:
    """Vectorized :func:`implicit_utility` over paired lotteries and levels."""
    rows = _as_rows(ctx, xs)
    ts = np.asarray(ts, dtype=float)
    if ts.ndim == 0:
        ts = np.full(len(rows), float(ts))
    if ts.shape != (len(rows),):
        raise ValueError(f"expected {len(rows)} levels, got shape {ts.shape}")
    if np.any((ts < 0.0) | (ts > 1.0)):
        raise ValueError("levels must lie in [0, 1]")
    model = ctx.model
    if not isinstance(model, ValueModel):
        xs_l = _as_lotteries(ctx, xs)
        return np.asarray(
            [implicit_utility(ctx, x, float(t)) for x, t in zip(xs_l, ts)]
        )
    out = np.empty(len(rows))
    vx = model.values(rows)
    eps = model.eps_pref
    at0 = ts == 0.0
    at1 = ts == 1.0
    out[at0] = np.where(np.abs(vx[at0] - ctx._value_worst) <= eps, 0.0, 1.0)
    out[at1] = np.where(np.abs(vx[at1] - ctx._value_best) <= eps, 1.0, 0.0)
    inner = ~(at0 | at1)
    if inner.any():
        weights, used_worst = _solve_mixing_batch(ctx, rows[inner], ts[inner], vx=vx[inner])
        t_in = ts[inner]
        out[inner] = np.where(used_worst, t_in / weights, 1.0 - (1.0 - t_in) / weights)
    return out


def utility_fixed_point(ctx: RepresentationContext, x: Lottery, n_scan: int = 1000) -> float:
    """The level solving ``t = u(x, t)``, located without :func:`solve_utility`.

    Scans ``n_scan`` uniform levels (endpoints included), verifies the
    residual ``u(x, t) - t`` crosses zero exactly once, then bisects the
    bracketing cell down to the context tolerance.  The endpoint
    indicators force the residual to start >= 0 and end <= 0, so a
    genuine second fixed point shows up on the scan as a negative
    residual followed by a positive one, or as an extra exact zero; both
    raise :class:`MultipleFixedPoints`.

    The residual's slope is ``du/dt - 1``, which approaches zero when
    the level dependence is strong, so evaluation error moves the
    located root by more than its own size.  Evaluations therefore run
    two digits tighter than the context tolerance, keeping the root
    within the published accuracy.

    Value ties within ``eps_pref`` count as on-chord, which makes the
    residual exactly zero on a short plateau around the fixed point.  A
    single bisection would stop anywhere on that plateau, so the search
    brackets both plateau edges and returns their midpoint.
    """
    _check_point(ctx, x)
    n_scan = int(n_scan)
    if n_scan < 3:
        raise ValueError(f"need at least 3 scan points, got {n_scan}")
    eval_tol = min(ctx.tol_t, max(0.01 * ctx.tol_t, 1e-12))
    eval_ctx = replace(ctx, tol_t=eval_tol)
    ts = np.linspace(0.0, 1.0, n_scan)
    g = implicit_utility_many(eval_ctx, [x] * n_scan, ts) - ts
    pos = np.flatnonzero(g > 0.0)
    neg = np.flatnonzero(g < 0.0)
    zero = np.flatnonzero(g == 0.0)
    multiple = bool(pos.size and neg.size and pos.max() > neg.min()) or zero.size > 1
    if zero.size == 1:
        z = int(zero[0])
        multiple = (
            multiple
            or bool(pos.size and pos.max() > z)
            or bool(neg.size and neg.min() < z)
        )
    if multiple:
        raise MultipleFixedPoints(
            f"the residual u(x, t) - t crosses zero more than once for {x}"
        )
    if zero.size:
        z = int(zero[0])
        if z in (0, n_scan - 1):
            return float(ts[z])
        a = float(ts[z - 1])
        b = float(ts[z + 1])
    else:
        a = float(ts[int(pos.max())])
        b = float(ts[int(neg.min())])
    lo_a, lo_b = a, b
    hi_a, hi_b = a, b
    for _ in range(ctx.max_iter):
        if lo_b - lo_a <= ctx.tol_t and hi_b - hi_a <= ctx.tol_t:
            break
        if lo_b - lo_a > ctx.tol_t:
            mid = 0.5 * (lo_a + lo_b)
            if implicit_utility(eval_ctx, x, mid) - mid > 0.0:
                lo_a = mid
            else:
                lo_b = mid
        if hi_b - hi_a > ctx.tol_t:
            mid = 0.5 * (hi_a + hi_b)
            if implicit_utility(eval_ctx, x, mid) - mid >= 0.0:
                hi_a = mid
            else:
                hi_b = mid
    return 0.25 * (lo_a + lo_b + hi_a + hi_b)


def one_sided_limits(ctx: RepresentationContext, x: Lottery, delta: float = 1e-4) -> dict:
    """Report ``u(x, t)`` just inside the endpoint levels, next to the
    endpoint indicator values.

    The endpoints are pinned to indicators of the extreme indifference
    classes; nothing in the construction forces the interior values to
    approach them, so both sides are reported without asserting equality.
    """
    if not 0.0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 0.5), got {delta!r}")
    return {
        "at_zero": implicit_utility(ctx, x, 0.0),
        "near_zero": implicit_utility(ctx, x, delta),
        "near_one": implicit_utility(ctx, x, 1.0 - delta),
        "at_one": implicit_utility(ctx, x, 1.0),
    }
