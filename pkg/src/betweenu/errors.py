"""Exception types shared across the package."""


class BetweenuError(Exception):
    """Base class for domain errors raised by this package."""


class DegeneratePreference(BetweenuError):
    """No strictly ranked pair exists where one is required."""


class NonMonotoneChord(BetweenuError):
    """Bracketing comparisons along the reference chord are inconsistent."""


class IterationLimit(BetweenuError):
    """A bisection failed to converge within its iteration budget."""


class NoCrossing(BetweenuError):
    """A segment expected to straddle an indifference level does not."""


class MultipleFixedPoints(BetweenuError):
    """The scanned utility profile crosses the diagonal more than once."""


class FixedPointDivergence(BetweenuError):
    """Fixed-point iteration did not converge; the kernel is likely not a contraction."""


class Infeasible(BetweenuError):
    """The separation program has no solution on the sampled data."""


class MembershipViolation(BetweenuError):
    """A point lies outside the polytope hull it was claimed to belong to."""
