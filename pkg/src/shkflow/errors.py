"""Exception hierarchy shared by all modules."""


class ShkError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(ShkError, ValueError):
    """Invalid user input: bad grid size, unknown config key, CFL violation, ..."""


class GridMismatchError(ConfigurationError):
    """Two fields that must share a grid do not."""


class SolverError(ShkError, RuntimeError):
    """The time integrator could not produce a valid density."""


class PositivityError(SolverError):
    def __init__(self, t: float, index: int, value: float):
        self.t = t
        self.index = index
        self.value = value
        super().__init__(
            f"density fell below the positivity floor at t={t:.6g}, cell {index} "
            f"(value {value:.3e}); reduce dt or smooth rho0"
        )


class MassDriftError(SolverError):
    def __init__(self, t: float, drift: float):
        self.t = t
        self.drift = drift
        super().__init__(f"mass drift {drift:.3e} exceeds 1e-10 at t={t:.6g}")
