"""Planted pathological preferences for exercising the axiom checkers.

Each fixture is a :class:`~betweenu.models.BlackBoxOracle` that violates
exactly one axiom in a known, replayable way, so the checkers can be
tested against ground truth rather than only against well-behaved models:

* :func:`cyclic_oracle`         breaks transitivity on one planted triple
* :func:`jump_oracle`           breaks continuity with a value jump
* :func:`quadratic_oracle`      breaks betweenness (bowed indifference sets)
"""

from __future__ import annotations

import numpy as np

from .models import DEFAULT_EPS_PREF, BlackBoxOracle, Ordering
from .simplex import Lottery, lottery


def oracle_from_value(
    value_fn,
    n_outcomes: int,
    eps_pref: float = DEFAULT_EPS_PREF,
    thread_safe: bool = True,
) -> BlackBoxOracle:
    """Wrap a scalar lottery-value function as a comparison oracle.

    Unlike :class:`~betweenu.models.ValueModel` subclasses, the result
    only exposes ``compare``; the checkers cannot peek at values.  The
    wrapped function is kept on the oracle as ``value_fn`` for tests.
    """
    band = float(eps_pref)

    def compare_fn(x: Lottery, y: Lottery) -> Ordering:
        d = value_fn(x) - value_fn(y)
        if abs(d) <= band:
            return Ordering.INDIFFERENT
        return Ordering.STRICTLY_PREFERS if d > 0.0 else Ordering.STRICTLY_DISPREFERRED

    oracle = BlackBoxOracle(compare_fn, n_outcomes, eps_pref, thread_safe)
    oracle.value_fn = value_fn
    return oracle


#: The planted intransitive triple used by :func:`cyclic_oracle`.  All
#: three lotteries have exact binary-fraction-free coordinates that also
#: appear in ``grid(3, 6)``, so default check grids hit the cycle.
CYCLE: tuple[Lottery, Lottery, Lottery] = (
    lottery((0.0, 1.0 / 3.0, 2.0 / 3.0)),
    lottery((1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)),
    lottery((2.0 / 3.0, 1.0 / 3.0, 0.0)),
)


def cyclic_oracle(eps_pref: float = DEFAULT_EPS_PREF) -> BlackBoxOracle:
    """Expected-utility comparisons with one planted preference cycle.

    The base ordering is expected utility with u = (0, 1/2, 1).  On the
    planted triple a > b > c the base order is overridden for the single
    pair (c, a) to c > a, closing a cycle while leaving every other
    comparison intact.
    """
    u = np.asarray([0.0, 0.5, 1.0])
    a, b, c = CYCLE

    def value_fn(x: Lottery) -> float:
        return float(np.dot(x.as_array(), u))

    base = oracle_from_value(value_fn, 3, eps_pref).compare_fn

    def compare_fn(x: Lottery, y: Lottery) -> Ordering:
        if x.probs == c.probs and y.probs == a.probs:
            return Ordering.STRICTLY_PREFERS
        if x.probs == a.probs and y.probs == c.probs:
            return Ordering.STRICTLY_DISPREFERRED
        return base(x, y)

    return BlackBoxOracle(compare_fn, 3, eps_pref)


def jump_oracle(
    threshold: float = 0.5,
    drop: float = 0.2,
    eps_pref: float = DEFAULT_EPS_PREF,
) -> BlackBoxOracle:
    """Two-outcome preference whose value jumps down at a mass threshold.

    The value of (p0, p1) is p1 below the threshold and p1 - drop at and
    above it, so preference flips discontinuously as p1 crosses the
    threshold from below.
    """
    threshold = float(threshold)
    drop = float(drop)
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold!r}")
    if not 0.0 < drop < threshold:
        raise ValueError(f"drop must lie in (0, threshold), got {drop!r}")

    def value_fn(x: Lottery) -> float:
        p1 = x.probs[1]
        return p1 if p1 < threshold else p1 - drop

    return oracle_from_value(value_fn, 2, eps_pref)


def quadratic_oracle(matrix=None, eps_pref: float = DEFAULT_EPS_PREF) -> BlackBoxOracle:
    """Preference with value x' B x, quadratic in probabilities.

    Quadratic values bow the indifference sets, so mixtures of
    indifferent lotteries are strictly ranked against their components
    and betweenness fails.  The default matrix rewards hedging between
    the first two outcomes.
    """
    if matrix is None:
        matrix = [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]
    B = np.asarray(matrix, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"matrix must be square, got shape {B.shape}")
    if not np.all(np.isfinite(B)):
        raise ValueError("matrix entries must be finite")

    def value_fn(x: Lottery) -> float:
        p = x.as_array()
        return float(p @ B @ p)

    return oracle_from_value(value_fn, B.shape[0], eps_pref)
