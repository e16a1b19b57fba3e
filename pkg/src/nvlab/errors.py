"""Exception hierarchy shared by all nvlab modules.

Every failure mode named in the operation contracts maps to one of these;
the CLI turns ConfigurationError into exit code 2 and every other NVError
into exit code 3.
"""


class NVError(Exception):
    """Base class for all nvlab errors."""


class ConfigurationError(NVError):
    """Invalid parameters: bad radii, malformed config files, missing inputs."""


class NumericalDomainError(NVError):
    """An evaluation left the admissible domain (zeta = 0, non-finite integrand...).

    Carries ``point`` when the offending node is known.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConvergenceError(NVError):
    """An iteration (Newton polish, chart inverse) failed to reach tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DivergenceError(NVError):
    """Neumann-series increments stopped contracting."""

    def __init__(self, message, increments=None):
        super().__init__(message)
        self.increments = increments


class BudgetExceededError(NVError):
    """Oscillation control would need more nodes than the configured budget.

    ``worst_cell`` identifies the cell with the largest phase variation.
    """

    def __init__(self, message, worst_cell=None):
        super().__init__(message)
        self.worst_cell = worst_cell
