"""Exception hierarchy.

Everything raised on bad input derives from :class:`StateError` (a
``ValueError``), so callers that only care about "the input was invalid"
can catch a single class.
"""


class StateError(ValueError):
    """Base class for invalid states, weights or solver arguments."""


class NotHermitian(StateError):
    pass


class NotUnitTrace(StateError):
    pass


class NotPositive(StateError):
    pass


class ParamOutOfRange(StateError):
    pass


class ZeroVector(StateError):
    pass


class NotUnitBloch(StateError):
    pass


class NotNormalized(StateError):
    pass


class BadWeights(StateError):
    pass


class NotOrthonormal(StateError):
    pass


class RankDeficient(StateError):
    pass


class TOutOfRange(StateError):
    pass


class BoundaryMixture(StateError):
    """The mixture sits on the Bloch sphere, where d(sqrt s)/dp is undefined."""


class EmptySet(StateError):
    pass


class BudgetExceeded(RuntimeError):
    """The oracle would need more objective evaluations than allowed."""

    def __init__(self, required, cap):
        self.required = int(required)
        self.cap = int(cap)
        super().__init__(
            f"grid search needs {self.required} objective evaluations, cap is {self.cap}"
        )
