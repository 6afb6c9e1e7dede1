"""Exception types raised across the package."""


class NullGSError(Exception):
    """Base class for all package errors."""


class DegenerateMetric(NullGSError):
    pass


class LabelMismatch(NullGSError):
    pass


class EvaluationFailure(NullGSError):
    pass


class OracleDisagreement(NullGSError):
    pass


class SymmetryViolation(NullGSError):
    pass


class InvalidRealIndex(NullGSError):
    pass


class DimensionTooSmall(NullGSError):
    pass


class ClassMismatch(NullGSError):
    pass


class BuilderDisagreement(NullGSError):
    pass


class SplitViolation(NullGSError):
    pass


class ZeroOmega(NullGSError):
    pass


class SchemaError(NullGSError):
    pass


class FileError(NullGSError):
    pass
