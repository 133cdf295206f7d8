"""Preference relations over lotteries.

Four built-in families share one interface: each assigns every lottery a
real value and compares by value with a symmetric indifference band
``eps_pref``.  A fifth kind wraps an arbitrary comparison callable for
preferences that have no value function at all (or deliberately violate
the axioms; see :mod:`betweenu.fixtures`).

Built-in families, with ``x`` a lottery and ``u`` outcome utilities:

* expected utility            ``V(x) = sum_i x_i u_i``
* weighted utility            ``V(x) = sum_i x_i w_i u_i / sum_i x_i w_i``
* disappointment aversion     the unique ``V`` solving
  ``V = (sum_i x_i u_i + beta * sum_{i: u_i <= V} x_i u_i)
  / (1 + beta * sum_{i: u_i <= V} x_i)``
* implicit kernel             the unique ``t`` solving
  ``t = sum_i x_i phi(i, t)`` for a kernel ``phi`` that is a contraction
  in ``t``.

Outcome utilities (and kernel values) are constrained to [0, 1] so the
value scale of every family lines up with the unit normalization used by
the representation engine.  Attaining 0 and 1 is not enforced here: the
engine checks nondegeneracy itself, and constant families are legitimate
negative fixtures for the axiom checkers.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .errors import FixedPointDivergence
from .simplex import Lottery

#: Default half-width of the indifference band used by ``compare``.
DEFAULT_EPS_PREF = 1e-9

_DA_WIDTH_TOL = 1e-14
_DA_MAX_ITER = 80
_FP_TOL = 1e-13


class Ordering(Enum):
    """Outcome of comparing lottery ``x`` against lottery ``y``."""

    STRICTLY_PREFERS = "strictly_prefers"
    INDIFFERENT = "indifferent"
    STRICTLY_DISPREFERRED = "strictly_dispreferred"

    @property
    def converse(self) -> "Ordering":
        if self is Ordering.STRICTLY_PREFERS:
            return Ordering.STRICTLY_DISPREFERRED
        if self is Ordering.STRICTLY_DISPREFERRED:
            return Ordering.STRICTLY_PREFERS
        return Ordering.INDIFFERENT


class PreferenceModel:
    """A total comparison capability over lotteries on ``n_outcomes`` outcomes."""

    def __init__(self, n_outcomes: int, eps_pref: float = DEFAULT_EPS_PREF):
        if n_outcomes < 1:
            raise ValueError(f"need at least one outcome, got {n_outcomes}")
        if not (math.isfinite(eps_pref) and eps_pref > 0.0):
            raise ValueError(f"eps_pref must be a positive float, got {eps_pref!r}")
        self.n_outcomes = int(n_outcomes)
        self.eps_pref = float(eps_pref)

    @property
    def is_value_based(self) -> bool:
        return False

    def compare(self, x: Lottery, y: Lottery) -> Ordering:
        raise NotImplementedError

    def _check_dim(self, x: Lottery) -> None:
        if x.n_outcomes != self.n_outcomes:
            raise ValueError(
                f"lottery has {x.n_outcomes} outcomes, model expects {self.n_outcomes}"
            )


class ValueModel(PreferenceModel):
    """A preference represented by a real-valued function on lotteries.

    Subclasses implement ``_values`` on a ``(k, n)`` array of lottery rows.
    Scalar evaluation routes through the same code path (as a one-row
    batch), so scalar and batched results are bitwise identical.
    """

    def __init__(self, n_outcomes: int, eps_pref: float = DEFAULT_EPS_PREF):
        super().__init__(n_outcomes, eps_pref)
        self._cache: dict[tuple[float, ...], float] = {}

    @property
    def is_value_based(self) -> bool:
        return True

    def _values(self, rows: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def values(self, rows: np.ndarray) -> np.ndarray:
        """Values for a ``(k, n)`` array whose rows are valid lotteries."""
        rows = np.asarray(rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != self.n_outcomes:
            raise ValueError(f"expected a (k, {self.n_outcomes}) array, got {rows.shape}")
        return self._values(rows)

    def value(self, x: Lottery) -> float:
        v = self._cache.get(x.probs)
        if v is None:
            self._check_dim(x)
            v = float(self._values(np.asarray([x.probs], dtype=float))[0])
            self._cache[x.probs] = v
        return v

    def ordering(self, x: Lottery, y: Lottery, band: float | None = None) -> Ordering:
        """Compare with an explicit indifference band (defaults to eps_pref)."""
        band = self.eps_pref if band is None else band
        d = self.value(x) - self.value(y)
        if abs(d) <= band:
            return Ordering.INDIFFERENT
        return Ordering.STRICTLY_PREFERS if d > 0.0 else Ordering.STRICTLY_DISPREFERRED

    def compare(self, x: Lottery, y: Lottery) -> Ordering:
        return self.ordering(x, y)


def _check_outcome_utilities(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or len(u) < 1:
        raise ValueError("outcome utilities must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(u)) or u.min() < 0.0 or u.max() > 1.0:
        raise ValueError(f"outcome utilities must lie in [0, 1], got {u}")
    # Attained endpoints anchor the family's value scale to the
    # representation's own 0..1 normalization.
    if u.min() != 0.0 or u.max() != 1.0:
        raise ValueError(
            f"outcome utilities must attain both 0 and 1, got range "
            f"[{u.min()}, {u.max()}]"
        )
    return u


class ExpectedUtility(ValueModel):
    """Linear-in-probabilities utility: ``V(x) = sum_i x_i u_i``."""

    def __init__(self, u, eps_pref: float = DEFAULT_EPS_PREF):
        u = _check_outcome_utilities(u)
        super().__init__(len(u), eps_pref)
        self.u = u

    def _values(self, rows: np.ndarray) -> np.ndarray:
        return (rows * self.u).sum(axis=1)


class WeightedUtility(ValueModel):
    """Weighted utility: ``V(x) = sum_i x_i w_i u_i / sum_i x_i w_i``, w_i > 0."""

    def __init__(self, u, w, eps_pref: float = DEFAULT_EPS_PREF):
        u = _check_outcome_utilities(u)
        w = np.asarray(w, dtype=float)
        if w.shape != u.shape:
            raise ValueError("utilities and weights must have the same length")
        if not np.all(np.isfinite(w)) or w.min() <= 0.0:
            raise ValueError(f"weights must be finite and strictly positive, got {w}")
        super().__init__(len(u), eps_pref)
        self.u = u
        self.w = w

    def _values(self, rows: np.ndarray) -> np.ndarray:
        return (rows * (self.w * self.u)).sum(axis=1) / (rows * self.w).sum(axis=1)


class DisappointmentAversion(ValueModel):
    """Disappointment-averse utility with elation/disappointment weight ``beta``.

    The defining residual

        g(V) = sum_i x_i u_i - V + beta * sum_i x_i min(u_i - V, 0)

    is continuous and strictly decreasing for beta > -1, with
    g(min u) >= 0 >= g(max u), so the value is found by plain bisection on
    [min u, max u].  Writing the disappointment term through ``min(., 0)``
    keeps the residual exact at the kink points u_i = V.
    """

    def __init__(self, u, beta: float, eps_pref: float = DEFAULT_EPS_PREF):
        u = _check_outcome_utilities(u)
        beta = float(beta)
        if not math.isfinite(beta) or beta <= -1.0:
            raise ValueError(f"beta must be a finite number > -1, got {beta!r}")
        super().__init__(len(u), eps_pref)
        self.u = u
        self.beta = beta

    def _values(self, rows: np.ndarray) -> np.ndarray:
        u, beta = self.u, self.beta
        base = (rows * u).sum(axis=1)
        u_lo, u_hi = float(u.min()), float(u.max())
        if u_hi == u_lo:
            return base
        k = len(rows)
        lo = np.full(k, u_lo)
        hi = np.full(k, u_hi)
        for _ in range(_DA_MAX_ITER):
            active = (hi - lo) > _DA_WIDTH_TOL
            if not active.any():
                break
            mid = 0.5 * (lo + hi)
            slack = (rows * np.minimum(u[None, :] - mid[:, None], 0.0)).sum(axis=1)
            g = base - mid + beta * slack
            go_up = g > 0.0
            lo = np.where(active & go_up, mid, lo)
            hi = np.where(active & ~go_up, mid, hi)
        return 0.5 * (lo + hi)


class ImplicitKernel(ValueModel):
    """Implicitly defined utility ``t = sum_i x_i phi(i, t)``.

    ``phi`` maps (outcome index, level) to [0, 1] and must be Lipschitz in
    the level with constant < 1, which makes the defining map a contraction
    with a unique fixed point.  The fixed point is found by plain iteration;
    failure to converge raises :class:`FixedPointDivergence`.

    The usual way to build one is :meth:`from_table`: values of phi on a
    level grid per outcome, linearly interpolated in between.  A raw
    callable with a declared Lipschitz constant is also accepted.
    """

    def __init__(
        self,
        phi,
        n_outcomes: int,
        lipschitz: float,
        eps_pref: float = DEFAULT_EPS_PREF,
    ):
        lipschitz = float(lipschitz)
        if not 0.0 <= lipschitz < 1.0:
            raise ValueError(f"Lipschitz constant must lie in [0, 1), got {lipschitz!r}")
        super().__init__(n_outcomes, eps_pref)
        self.phi = phi
        self.lipschitz = lipschitz
        self._table: tuple[np.ndarray, np.ndarray] | None = None
        if lipschitz > 0.0:
            guess = int(math.log(_FP_TOL) / math.log(lipschitz)) + 20
        else:
            guess = 60
        self.max_fp_iter = min(max(guess, 60), 20000)

    @classmethod
    def from_table(cls, t_grid, phi_values, eps_pref: float = DEFAULT_EPS_PREF) -> "ImplicitKernel":
        """Kernel tabulated on a level grid, linearly interpolated.

        ``t_grid`` must increase from 0 to 1; ``phi_values[i]`` holds the
        kernel values for outcome ``i`` on that grid, each within [0, 1].
        """
        t_grid = np.asarray(t_grid, dtype=float)
        phi_values = np.asarray(phi_values, dtype=float)
        if t_grid.ndim != 1 or len(t_grid) < 2:
            raise ValueError("t_grid must contain at least two level points")
        if t_grid[0] != 0.0 or t_grid[-1] != 1.0 or np.any(np.diff(t_grid) <= 0.0):
            raise ValueError("t_grid must increase strictly from 0 to 1")
        if phi_values.ndim != 2 or phi_values.shape[1] != len(t_grid):
            raise ValueError("phi_values must be shaped (n_outcomes, len(t_grid))")
        if not np.all(np.isfinite(phi_values)) or phi_values.min() < 0.0 or phi_values.max() > 1.0:
            raise ValueError("kernel values must lie in [0, 1]")
        slopes = np.abs(np.diff(phi_values, axis=1) / np.diff(t_grid)[None, :])
        lipschitz = float(slopes.max()) if slopes.size else 0.0
        if lipschitz >= 1.0:
            raise ValueError(
                f"tabulated kernel has Lipschitz constant {lipschitz:.6g}; it must be < 1"
            )

        def phi(i: int, t: float) -> float:
            return float(np.interp(t, t_grid, phi_values[i]))

        model = cls(phi, phi_values.shape[0], lipschitz, eps_pref)
        model._table = (t_grid, phi_values)
        return model

    def _phi_sum(self, rows: np.ndarray, t: np.ndarray) -> np.ndarray:
        if self._table is not None:
            t_grid, phi_values = self._table
            acc = np.zeros(len(rows))
            for i in range(self.n_outcomes):
                acc += rows[:, i] * np.interp(t, t_grid, phi_values[i])
            return acc
        acc = np.zeros(len(rows))
        for i in range(self.n_outcomes):
            acc += rows[:, i] * np.asarray([self.phi(i, float(tv)) for tv in t])
        return acc

    def _values(self, rows: np.ndarray) -> np.ndarray:
        k = len(rows)
        t = np.full(k, 0.5)
        done = np.zeros(k, dtype=bool)
        # Each element freezes the moment its own step shrinks below
        # tolerance, so results do not depend on what else is in the batch.
        for _ in range(self.max_fp_iter):
            if done.all():
                break
            g = self._phi_sum(rows, t)
            converged = ~done & (np.abs(g - t) <= _FP_TOL)
            t = np.where(done, t, g)
            done |= converged
        if not done.all():
            raise FixedPointDivergence(
                f"kernel fixed point did not converge within {self.max_fp_iter} iterations"
            )
        return t


class BlackBoxOracle(PreferenceModel):
    """A preference given only through a comparison callable.

    ``compare_fn(x, y)`` must return an :class:`Ordering`.  The oracle is
    assumed deterministic; ``thread_safe`` declares whether concurrent
    calls are allowed.  Exceptions raised by the callable propagate to the
    caller (the axiom checkers record them as completeness failures).
    """

    def __init__(
        self,
        compare_fn,
        n_outcomes: int,
        eps_pref: float = DEFAULT_EPS_PREF,
        thread_safe: bool = True,
    ):
        super().__init__(n_outcomes, eps_pref)
        self.compare_fn = compare_fn
        self.thread_safe = bool(thread_safe)

    def compare(self, x: Lottery, y: Lottery) -> Ordering:
        self._check_dim(x)
        self._check_dim(y)
        out = self.compare_fn(x, y)
        if not isinstance(out, Ordering):
            raise TypeError(f"oracle returned {out!r}, expected an Ordering")
        return out
