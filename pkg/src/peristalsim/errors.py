"""Exception types shared across the device model."""


class DomainError(ValueError):
    """Input outside the physical domain an operation is defined on."""


class ConfigError(ValueError):
    """Device configuration is malformed or inconsistent."""


class ScheduleValidationError(ValueError):
    """A composed pattern violates actuator or safety bounds."""

    def __init__(self, msg, actuator=None, time=None):
        super().__init__(msg)
        self.actuator = actuator
        self.time = time


class StateError(RuntimeError):
    """A session command is illegal in the current state."""


class BusyError(StateError):
    """A session command arrived while a schedule is running."""


class InfeasibleError(ValueError):
    """A constrained search has an empty feasible set."""

    def __init__(self, msg, binding=()):
        super().__init__(msg)
        self.binding = tuple(binding)


class NumericError(RuntimeError):
    """A numerical routine failed to converge."""
