"""Exception hierarchy shared by all modules."""


class GibbsWilbrahamError(Exception):
    """Base class for every error raised by this package."""


class InvalidOrderError(GibbsWilbrahamError, ValueError):
    pass


class DomainError(GibbsWilbrahamError, ValueError):
    pass


class DegenerateJumpError(GibbsWilbrahamError, ValueError):
    pass


class TruncationBudgetError(GibbsWilbrahamError, ArithmeticError):
    """The requested tolerance cannot be met within ``max_radius`` terms.

    ``best_bound`` is the smallest truncation bound that was reachable.
    """

    def __init__(self, message, best_bound=float("inf")):
        super().__init__(message)
        self.best_bound = best_bound


class PreconditionError(GibbsWilbrahamError):
    """A kernel fails the partition-of-unity hypothesis.

    ``defect`` carries the measured ``max |sum_n phi(t-n) - 1|``.
    """

    def __init__(self, message, defect=float("nan")):
        super().__init__(message)
        self.defect = defect


class SymbolNotInvertibleError(GibbsWilbrahamError, ArithmeticError):
    def __init__(self, message, min_modulus=float("nan")):
        super().__init__(message)
        self.min_modulus = min_modulus


class AccuracyError(GibbsWilbrahamError, ArithmeticError):
    def __init__(self, message, defect=float("nan")):
        super().__init__(message)
        self.defect = defect


class AdapterError(GibbsWilbrahamError):
    pass
