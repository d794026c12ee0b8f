"""Exception hierarchy shared across the package.

Two families matter to callers: ValidationError for inputs rejected before
any real computation starts (CLI exit code 2), and ComputeError when a
computation cannot be completed within the requested precision or memory
budget (CLI exit code 3).
"""


class BceError(Exception):
    pass


class ValidationError(BceError, ValueError):
    pass


class ComputeError(BceError, RuntimeError):
    pass


class EmptyInput(ValidationError):
    pass


class ZeroLeadingCoefficient(ValidationError):
    pass


class ConstantPolynomial(ValidationError):
    pass


class NotSquarefree(ValidationError):
    pass


class NonPositiveProbability(ValidationError):
    pass


class ProbabilitySumNotOne(ValidationError):
    pass


class DuplicateAtom(ValidationError):
    pass


class NotUnit(ValidationError):
    pass


class CircleRootPresent(ValidationError):
    pass


class NoRealRootInRange(ValidationError):
    pass


class PrecisionExhausted(ComputeError):
    pass


class AmbiguousCircleRoot(PrecisionExhausted):
    """A root enclosure straddles |z| = 1 and the exact reciprocal test
    could not settle it at the precision ladder's cap."""


class MemoryBudgetExceeded(ComputeError):
    pass


class QuadratureNonConvergence(ComputeError):
    pass


class ClusterAmbiguity(ComputeError):
    pass
