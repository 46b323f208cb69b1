"""Exception types shared across the package."""


class LmflowsError(Exception):
    """Base class for package-specific errors."""


class PanelFormatError(LmflowsError):
    """Input file is unreadable or its header does not match a known schema."""


class EmptyCohortError(LmflowsError):
    """No observations match the requested (quarter, cohort) combination."""

    def __init__(self, quarter, cohort):
        self.quarter = quarter
        self.cohort = cohort
        super().__init__(
            f"no observations for quarter {quarter} and cohort '{cohort.describe()}'"
        )


class NonStochasticError(LmflowsError):
    """A matrix row is not a probability distribution."""

    def __init__(self, row: int, detail: str):
        self.row = row
        super().__init__(f"matrix row {row} is not a probability distribution: {detail}")


class InfiniteEfptError(LmflowsError):
    """The expected first passage time does not exist or cannot be computed.

    ``trapped`` lists the states, reachable from the source without touching
    the target, from which the target can never be reached; it is empty when
    the failure was detected numerically (a series that will not converge)
    rather than structurally, in which case ``detail`` says what happened.
    """

    def __init__(self, source: str, target: str, trapped: tuple[str, ...] = (), detail: str = ""):
        self.source = source
        self.target = target
        self.trapped = tuple(trapped)
        if self.trapped:
            names = "{" + ", ".join(self.trapped) + "}"
            reason = f"the chain can be trapped in {names}"
        else:
            reason = detail or "the passage probabilities do not sum to one"
        super().__init__(
            f"expected first passage time from {source} to {target} is infinite "
            f"or undefined: {reason}"
        )
