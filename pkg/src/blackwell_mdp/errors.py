"""Exception hierarchy shared by all modules."""


class BlackwellError(Exception):
    """Base class for every error raised by this package."""


class InstanceError(BlackwellError, ValueError):
    """An MDP instance violates the rational-MDP invariants."""


class ParseError(InstanceError):
    """Raw instance data could not be parsed at all."""


class NonStochasticRow(InstanceError):
    pass


class NegativeProbability(InstanceError):
    pass


class DenominatorMismatch(InstanceError):
    pass


class InvalidPolicy(BlackwellError, ValueError):
    pass


class GammaOutOfRange(BlackwellError, ValueError):
    pass


class ZeroPolynomial(BlackwellError, ValueError):
    pass


class NonIntegralCoefficient(BlackwellError, ArithmeticError):
    """Scaling by m^(2|S|) left a fractional coefficient (arithmetic bug)."""


class NonOddN(BlackwellError, ValueError):
    pass


class NonMonotoneBreakpoints(BlackwellError, ValueError):
    pass


class NonConvergence(BlackwellError, RuntimeError):
    pass


class ResourceGuard(BlackwellError):
    """An enumeration would exceed its configured size guard."""


class PolicySpaceTooLarge(ResourceGuard):
    pass


class VertexSpaceTooLarge(ResourceGuard):
    pass
