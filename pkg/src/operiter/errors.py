"""Exception hierarchy shared by every module of the package."""


class OperiterError(Exception):
    """Base class for all package errors."""


class InvalidVector(OperiterError, ValueError):
    """A vector contains NaN/Inf or has the wrong shape."""


class DimensionError(OperiterError, ValueError):
    """Operands live in spaces of different dimension."""


class NumericalError(OperiterError, ArithmeticError):
    """A numerical routine failed (non-finite state, no convergence)."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class RangeError(OperiterError, IndexError):
    """An index, window or schedule is out of its admissible range."""


class DegenerateSplit(OperiterError, ValueError):
    """Range and kernel bases do not give a well-conditioned direct sum."""


class NotLinear(OperiterError, ValueError):
    """A linear operator was required but the offset is nonzero."""


class NonContractive(OperiterError, ValueError):
    """``I - A`` is singular or too ill-conditioned to solve for a fixed point."""


class NoContractiveStrip(OperiterError):
    """No composite window of admissible length reaches the target norm."""

    def __init__(self, start, max_gap, best_norm):
        super().__init__(
            f"no contractive strip starting at index {start} within gap {max_gap}"
            f" (best composite norm {best_norm:.6g})"
        )
        self.start = start
        self.max_gap = max_gap
        self.best_norm = best_norm


class NotClustered(OperiterError):
    """A residue class of the projected iterates is not Cauchy."""

    def __init__(self, residue, residual):
        super().__init__(
            f"residue class {residue} is not Cauchy (residual {residual:.6g})"
        )
        self.residue = residue
        self.residual = residual


class ConfigError(OperiterError, ValueError):
    """Scenario configuration failed validation; ``field`` names the culprit."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
