"""Exception types shared across the package."""


class ApproxSysError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ApproxSysError):
    """An exact operation was applied outside its domain (e.g. division by zero)."""


class DimensionError(ApproxSysError):
    """Point dimensions do not match the ambient dimension they are used with."""


class FormatError(ApproxSysError):
    """Malformed external input: rational literals, formula files, reports."""


class SearchTimeout(ApproxSysError):
    """A budgeted search exhausted its step budget before certifying a result.

    By design this outcome is indistinguishable from "the named point lies
    outside the function's domain" and from "the name is invalid": the search
    is only ever budget-bounded.
    """

    def __init__(self, budget: int):
        super().__init__(f"search budget of {budget} steps exhausted")
        self.budget = budget
