"""Exception types shared across the package."""


class ZerodynError(Exception):
    """Base class for all library errors."""


class ZeroConstantTerm(ZerodynError):
    """Series has constant term 0 where a nonzero one is required."""


class AllZeroSeries(ZerodynError):
    """Every stored coefficient of the series is zero."""


class TruncationTooShort(ZerodynError):
    """Series truncation order is smaller than the operation needs."""


class ZeroDilation(ZerodynError):
    """Dilation scalar must be nonzero."""


class NotGeneralForm(ZerodynError):
    """Operator classification is not General(p, alpha, beta)."""


class NonMonicInput(ZerodynError):
    """Polynomial must be monic."""


class DegreeZero(ZerodynError):
    """Root finding needs degree >= 1."""


class NoConvergence(ZerodynError):
    """Root iteration budget exhausted; carries the best result found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class PureExponential(ZerodynError):
    """Operator acts as a pure shift: the nonreal-zero count never changes."""


class NoNonrealZero(ZerodynError):
    """No zero in the open upper half plane where one was required."""


class WitnessNotFound(ZerodynError):
    """Degree scan exhausted without a nonreal-zero witness."""

    def __init__(self, m, d_cap):
        super().__init__(
            f"no degree d <= {d_cap} with a nonreal zero at iterate m={m}; raise d_cap"
        )
        self.m = m
        self.d_cap = d_cap


class GammaSearchExhausted(ZerodynError):
    """Halving search for a stage factor ran out of budget."""

    def __init__(self, k, max_halvings):
        super().__init__(
            f"stage {k}: persistence not achieved within {max_halvings} halvings"
        )
        self.k = k
        self.max_halvings = max_halvings


class VerificationFailed(ZerodynError):
    """From-scratch verification of a construction plan failed."""

    def __init__(self, clause, detail=""):
        super().__init__(f"{clause}: {detail}" if detail else clause)
        self.clause = clause
