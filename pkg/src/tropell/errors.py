"""Exception hierarchy shared by all tropell modules."""


class TropellError(Exception):
    """Base class for every error raised by this package."""


class ParseError(TropellError, ValueError):
    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")


# --- series arithmetic -------------------------------------------------------

class IndeterminateValuation(TropellError, ArithmeticError):
    """A truncated series has no known terms, so its valuation is unknown."""


class DivisionByZero(TropellError, ZeroDivisionError):
    pass


class NonSquareLeadingCoefficient(TropellError, ArithmeticError):
    """A square root would leave the rational coefficient field."""


class NegativeValuation(TropellError, ArithmeticError):
    pass


class PrecisionExhausted(TropellError, ArithmeticError):
    """Coefficient precision is too low to certify the requested result."""


# --- tropical geometry -------------------------------------------------------

class DegenerateInput(TropellError, ValueError):
    pass


class ZeroLengthEdge(TropellError, ValueError):
    pass


class MultipleCycles(TropellError):
    pass


# --- Weierstrass models ------------------------------------------------------

class SingularModel(TropellError, ValueError):
    pass


class NonIntegralInput(TropellError, ValueError):
    pass


class ZeroScaling(TropellError, ValueError):
    pass


class NotMinimal(TropellError, ValueError):
    pass


class NotOnCurve(TropellError, ValueError):
    pass


# --- faithful embedding pipeline ---------------------------------------------

class NoRationalBranch(TropellError):
    """Every qualifying torsion root needs irrational residue arithmetic."""


class DiscriminantNotZero(TropellError):
    pass


class NotMultiplicative(TropellError):
    """The curve has good reduction, so no cycle can be certified."""


class StageError(TropellError):
    """Wraps an upstream failure with the pipeline stage it occurred in."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
