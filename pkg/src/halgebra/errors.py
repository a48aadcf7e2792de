"""Exception hierarchy for halgebra.

Every error raised by the library derives from :class:`HalgebraError`, which is
itself a ``ValueError`` so that callers treating bad input generically keep working.
Identity failures are not errors: checkers return an
:class:`~halgebra.reports.IdentityReport` instead.
"""


class HalgebraError(ValueError):
    """Base class for all halgebra errors."""


class ConfigError(HalgebraError):
    """Raised when settings or environment overrides are malformed."""


class DegreeWindowError(HalgebraError):
    """Raised when a computation produces a degree outside the configured window."""


class ArityError(HalgebraError):
    """Raised on arity mismatch, underflow or overflow."""


class SpaceMismatchError(HalgebraError):
    """Raised when operands live over incompatible graded spaces or are not composable."""


class HomogeneityError(HalgebraError):
    """Raised when an entry, family or element has the wrong degree."""


class WordLengthError(HalgebraError):
    """Raised when a coalgebra word exceeds the maximum word length."""


class PolynomialDegreeError(HalgebraError):
    """Raised when a polynomial form coefficient exceeds the degree cap."""


class ConvergenceError(HalgebraError):
    """Raised when an iteration or series does not terminate within its guard."""


class InvalidStructureError(HalgebraError):
    """Raised when input that must be valid (d^2 = 0, endpoints, homotopies) is not."""


class SchemaError(HalgebraError):
    """Raised when a structure file does not match the file schema."""
