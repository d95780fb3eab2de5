"""Exception hierarchy shared by the solver modules."""


class SecrecyGameError(Exception):
    """Base class for every error raised by this package."""


class InvalidChannel(SecrecyGameError, ValueError):
    """A channel description is malformed or violates its invariants."""


class ConditionsViolated(SecrecyGameError):
    """The corner points fall outside the analyzed region ordering."""

    def __init__(self, report):
        failed = [name for name, ok in report.as_dict().items() if name.startswith("cond_") and not ok]
        super().__init__("corner-point ordering not supported, failed: " + ", ".join(failed))
        self.report = report


class DegenerateGame(SecrecyGameError):
    """The reduced square has (numerically) zero edge length."""


class DomainError(SecrecyGameError, ValueError):
    """A closed-form expression was evaluated outside its stated domain."""


class SkewAtOne(SecrecyGameError, ValueError):
    """Skew a = 1 has no finite interval index."""


class UnsupportedK(SecrecyGameError):
    """No closed form is available for this interval index."""

    def __init__(self, k):
        super().__init__(f"closed-form equilibrium only available for k in {{0, 1}}, got k={k}")
        self.k = k


class NormalizationFailure(SecrecyGameError):
    """A constructed c.d.f. is not a valid distribution function."""


class SolverFailure(SecrecyGameError):
    """The matrix-game solver did not produce a certified optimum."""
