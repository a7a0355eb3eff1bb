"""Semantic exceptions shared across the toolkit."""


class TwoWeightError(Exception):
    """Base class for all toolkit errors."""


class DomainError(TwoWeightError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class InvariantViolation(TwoWeightError, RuntimeError):
    """A structural invariant failed (non-convex gauge, unbounded supremum, ...)."""


class AlignmentError(TwoWeightError, ValueError):
    """A cube does not align with the sample lattice or leaves the domain."""


class SparsityError(TwoWeightError):
    """A cube family failed sparsity verification.

    Carries the offending cube and the measure ratio it achieved.
    """

    def __init__(self, message, cube=None, ratio=None):
        super().__init__(message)
        self.cube = cube
        self.ratio = ratio


class ScenarioError(TwoWeightError, ValueError):
    """A scenario file failed validation; ``problems`` lists every issue."""

    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = list(problems)
