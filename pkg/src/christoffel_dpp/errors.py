"""Exception hierarchy shared by every module of the package."""


class ChristoffelDPPError(Exception):
    """Base class for all package errors."""


class PoleError(ChristoffelDPPError, ValueError):
    """Argument sits on a pole of a Gamma-type function."""


class DivergenceError(ChristoffelDPPError, ArithmeticError):
    """A hypergeometric series cannot be summed at the requested argument."""


class QuadratureError(ChristoffelDPPError, ArithmeticError):
    """Node doubling failed to reach the requested tolerance."""


class BranchError(ChristoffelDPPError, ArithmeticError):
    """A quantity that must be real positive under a square root is not."""


class DegenerateDeformationError(ChristoffelDPPError, ArithmeticError):
    """A Christoffel determinant vanishes, so the deformed object does not exist."""


class GuardError(ChristoffelDPPError, ValueError):
    """Combinatorial size guard exceeded."""


class TruncationError(ChristoffelDPPError, ArithmeticError):
    """Truncated support misses too much kernel mass."""


class NonPositiveWeightError(ChristoffelDPPError, ValueError):
    """A deformed measure assigns a non-positive weight."""


class AdmissibilityError(ChristoffelDPPError, ValueError):
    """Parameters fall outside the admissible set."""
