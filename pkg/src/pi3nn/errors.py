"""Exception hierarchy.

Every error carries a short ``category`` string, which the command line
front end prints verbatim so that failures are machine-parsable.
"""


class PI3NNError(Exception):
    category = "error"


class ConfigError(PI3NNError, ValueError):
    category = "config"


class DataError(PI3NNError, ValueError):
    category = "data"


class ShapeError(DataError):
    category = "shape"


class NormalizationError(DataError):
    category = "normalization"


class TieError(PI3NNError, ArithmeticError):
    """Duplicated values make an exact exceedance count unreachable."""

    category = "tie"

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class InfeasibleGammaError(PI3NNError, ArithmeticError):
    category = "infeasible_gamma"


class DivergenceError(PI3NNError, ArithmeticError):
    category = "divergence"

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch
