"""Exception types raised across the package."""


class GridResolutionError(ValueError):
    """The sampling grid is too coarse for the requested mode count."""


class ConfigError(ValueError):
    """Invalid run configuration.  Carries every problem found, not just the first."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class StageDivergenceError(RuntimeError):
    """The stage fixed-point iteration failed to converge."""

    def __init__(self, message, trace, stage_index=None, step_index=None):
        super().__init__(message)
        self.trace = trace
        self.stage_index = stage_index
        self.step_index = step_index


class GuardViolationError(RuntimeError):
    """The contraction guard rejected a step (guard_mode='reject')."""

    def __init__(self, message, gamma, step_index=None):
        super().__init__(message)
        self.gamma = gamma
        self.step_index = step_index
