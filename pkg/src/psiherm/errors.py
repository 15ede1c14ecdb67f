"""Exception types shared across the package."""

from __future__ import annotations


class PsihermError(Exception):
    """Base class for every error raised by psiherm."""


class FieldMismatchError(PsihermError, TypeError):
    """Two scalars (or algebras, modules) live over different base fields."""


class ValidationError(PsihermError, ValueError):
    """A construction failed one of its defining identities.

    ``witness`` pins down where: a basis triple, a matrix entry, and so on.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class RingMismatchError(PsihermError, ValueError):
    """Objects that must share a ring (or hermitian base) do not."""


class UnsupportedError(PsihermError, ValueError):
    """The request is outside the families this package can decide."""


class DegenerateFormError(PsihermError, ValueError):
    def __init__(self, message: str, radical_dim: int):
        super().__init__(message)
        self.radical_dim = radical_dim
