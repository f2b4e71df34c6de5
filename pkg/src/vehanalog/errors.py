"""Exception types raised by the package."""


class AnalogueError(Exception):
    """Base class for every error raised by vehanalog."""


class ParameterError(AnalogueError, ValueError):
    """A physical parameter violates its admissible range."""


class GeometryError(ParameterError):
    """Axle distances are mutually inconsistent."""


class UnsupportedTopologyError(AnalogueError):
    """The model cannot be expressed with the supported circuit elements."""


class DegenerateSourceError(AnalogueError):
    """A source transformation was requested with a zero admittance."""


class AssemblyError(AnalogueError):
    """The netlist cannot be stamped into a nodal admittance system."""


class SingularSystemError(AnalogueError, ArithmeticError):
    """A linear system is numerically singular.

    ``node`` names the offending unknown when it can be identified and
    ``omega`` the angular frequency at which the failure happened.
    """

    def __init__(self, message, node=None, omega=None):
        super().__init__(message)
        self.node = node
        self.omega = omega


class CoordinateMismatchError(AnalogueError):
    """Two results being compared do not describe the same coordinates."""


class ConfigError(AnalogueError):
    """A run configuration is missing keys or holds invalid values."""


class NetlistSyntaxError(AnalogueError):
    """A netlist text line could not be parsed."""
