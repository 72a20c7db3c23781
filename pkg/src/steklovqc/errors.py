"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a special function or constructor."""


class DivergentIntegral(ArithmeticError):
    """An integrand carries a non-integrable singularity (exponent <= -1)."""


class PossiblyDivergent(ArithmeticError):
    """Heuristic: successive refinements keep growing without settling."""


class UnsupportedFamily(ValueError):
    pass


class DegenerateDilatation(ValueError):
    """|mu| >= 1 somewhere, so the map is not quasiconformal."""


class NotInL2(ValueError):
    pass


class InfeasibleOrigin(ValueError):
    """Candidate origin lies outside the star-shaped kernel."""


class InsufficientBasis(RuntimeError):
    pass


class NoConvergence(RuntimeError):
    pass


class NonPositiveEigenvalue(ValueError):
    pass


class BoundViolation(AssertionError):
    """A proven inequality failed beyond tolerance; indicates a bug or bad data."""
