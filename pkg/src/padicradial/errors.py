"""Exception types shared across the package.

The CLI maps these onto its exit codes: everything rooted at
:class:`DomainError` is a precondition violation (exit 2), while
:class:`NonConvergenceError`, :class:`BudgetError` and
:class:`IndeterminateResidualError` are runtime failures (exit 3).
"""


class DomainError(ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class DivergenceError(DomainError):
    """An infinite series required by an operation diverges.

    The message names the violated inequality (e.g. ``e + rho > 0``).
    """


class DegenerationError(DomainError):
    """The degeneration exponent violates ``0 <= gamma < min(1, alpha)``."""


class ContractionError(DomainError):
    """A fixed-point map is not a contraction (``kappa >= 1``)."""


class InfeasibleRadiusError(DomainError):
    """No admissible local radius exists in the configured level range."""


class MetadataError(ValueError):
    """Declared nonlinearity metadata is inconsistent with observed values."""


class MagnitudeError(OverflowError):
    """A guarded exponential ``p**x`` would exceed the floating-point range."""


class NonConvergenceError(RuntimeError):
    """An iteration hit its step limit before reaching tolerance."""

    def __init__(self, message: str, diffs=None):
        super().__init__(message)
        self.diffs = list(diffs) if diffs is not None else []


class BudgetError(RuntimeError):
    """A certified truncation bound exceeds the allowed error budget."""


class IndeterminateResidualError(RuntimeError):
    """The residual cannot be certified at the requested level."""
