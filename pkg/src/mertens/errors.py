"""Error types shared across the package.

Plain ``ValueError`` is used for precondition violations (bad arguments,
ranges, shapes). The classes here mark failures that callers may want to
catch separately: damaged files and numerically unsafe results.
"""


class IntegrityError(Exception):
    """A persisted table or checkpoint failed a structural or checksum check."""


class NumericalError(ArithmeticError):
    """A floating-point identity left too large a residue to round safely."""
