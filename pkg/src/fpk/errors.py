"""Exception types shared across the solver stack."""

from __future__ import annotations


class FpkError(Exception):
    """Base class for all package errors."""


class ConfigError(FpkError):
    """Malformed or inconsistent run configuration."""


class NonFiniteCoefficient(FpkError):
    """A coefficient evaluation produced NaN or infinity."""


class NegativeDiffusion(FpkError):
    """The diffusion coefficient a(t,x,r) is negative at a sample."""


class DegenerateBox(FpkError):
    """A sampling box has an empty or inverted range."""


class SolverDiverged(FpkError):
    """An iterative solve exhausted its iteration budget."""


class StepTooLarge(FpkError):
    """Requested step exceeds half the admissible resolvent threshold."""


class StepFailed(FpkError):
    """A time step failed; carries the partial trajectory up to the failure."""

    def __init__(self, step_index: int, partial_trajectory=None, cause: Exception | None = None):
        super().__init__(f"time step {step_index} failed: {cause}")
        self.step_index = step_index
        self.partial_trajectory = partial_trajectory
        self.cause = cause


class ParticleEscaped(FpkError):
    """A particle left the box while boundary handling is 'none'."""


class TestFunctionNotSupported(FpkError):
    """A weak-form test function's support touches the box boundary."""
