"""Exception types raised across the package."""


class ParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class DegenerateBasisError(ValueError):
    """Basis rows are linearly dependent (or numerically so)."""


class SamplerStuckError(RuntimeError):
    """Lattice sampling exhausted its retry budget; usually a badly reduced basis."""


class ReductionStuckError(RuntimeError):
    """A reduction while-loop exceeded its defensive iteration cap."""


class SamplingFailure(RuntimeError):
    """A solver could not obtain any non-zero starting vector."""


class ListBlowUpError(RuntimeError):
    """A saturation list outgrew its defensive size cap."""


class OracleLimitError(ValueError):
    """Exact oracle asked to run beyond its supported dimension or box size."""


class InsufficientSampleError(ValueError):
    """Too few vectors fall in the requested shell for a uniformity test."""
