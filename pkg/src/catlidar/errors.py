"""Exception types shared across the simulator."""


class SimulatorError(Exception):
    """Base class for all simulator-specific failures."""


class InvalidStateError(SimulatorError, ValueError):
    """A state specification is unusable, e.g. every weight is zero."""


class AmplitudeSolveError(SimulatorError, ArithmeticError):
    """No coherent amplitude reproduces the requested mean photon number."""


class OracleRangeError(SimulatorError, ValueError):
    """A brute-force oracle run was requested outside its guarded range."""


class InsufficientCutoffError(SimulatorError, ArithmeticError):
    """A truncated sum leaves more probability mass than tolerated."""


class FwhmUndefinedError(SimulatorError, ValueError):
    """A curve has no half-maximum crossings around the selected peak."""


class ResidueError(SimulatorError, ArithmeticError):
    """A quantity that must be real came out with a large imaginary part."""
