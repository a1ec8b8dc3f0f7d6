"""Exception hierarchy shared by every module of the package."""


class RatSeriesError(Exception):
    pass


class StarUndefined(RatSeriesError, ArithmeticError):
    """A star was requested outside the star domain of a semiring."""


class NotProper(StarUndefined):
    pass


class ImproperStar(StarUndefined):
    """Star/plus applied to a non-proper subexpression in a partial-star semiring."""


class NotPositive(RatSeriesError, ValueError):
    pass


class NotAUnit(RatSeriesError, ArithmeticError):
    pass


class NotSquare(RatSeriesError, ValueError):
    pass


class DimensionMismatch(RatSeriesError, ValueError):
    pass


class NotInvertibleDiagonal(RatSeriesError, ValueError):
    pass


class IncompatibleSeries(RatSeriesError, ValueError):
    """Operands disagree on semiring, alphabet or truncation length."""


class IncompatibleSemiring(RatSeriesError, ValueError):
    pass


class UnsupportedSemiring(RatSeriesError, ValueError):
    pass


class StateBlowup(RatSeriesError):
    pass


class LimitExceeded(RatSeriesError):
    pass


class ParseError(RatSeriesError, ValueError):
    pass
