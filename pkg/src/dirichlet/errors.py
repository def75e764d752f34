"""Exception hierarchy.

Every error names the invariant it guards so the CLI can report it verbatim.
"""


class DirichletError(Exception):
    invariant = "unspecified"

    def __init__(self, message: str, invariant: str | None = None):
        if invariant is not None:
            self.invariant = invariant
        super().__init__(message)


class ValidationError(DirichletError, ValueError):
    invariant = "validation"


class CodomainMismatch(ValidationError):
    invariant = "f.cod == g.dom"


class DomainMismatch(ValidationError):
    invariant = "f.dom == g.dom"


class ShapeMismatch(ValidationError):
    invariant = "matching shapes"


class BaseMismatch(ValidationError):
    invariant = "same base"


class IndexOutOfRange(ValidationError, IndexError):
    invariant = "index in range"


class NotCommuting(ValidationError):
    invariant = "square commutes"


class NotFiberwiseBijective(ValidationError):
    invariant = "fiberwise bijection"


class EnumerationCapExceeded(DirichletError):
    invariant = "enumeration cap"

    def __init__(self, needed: int, cap: int, what: str = "enumeration"):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what} needs {needed} candidates, cap is {cap}")
