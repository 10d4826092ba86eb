"""Gain schedules for the stochastic-approximation loop."""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import InvalidGainError


@dataclass(frozen=True)
class GainSchedule:
    """The five hyperparameters (a, A, s, b, t) of the update rule.

    Step size alpha_k = a / (k + 1 + A)**s and perturbation strength
    beta_k = b / (k + 1)**t, both strictly decreasing in k.

    The defaults were calibrated once, by trial and error in simulation
    against the reference convergence curves and final-fidelity tables, and
    then frozen.  The exponents are the standard stochastic-approximation
    choices; the stability constant A damps the first ~20 steps, which both
    speeds up early convergence in d=5 and keeps a single update from a
    mid-fidelity state a descent step in expectation.
    """

    a: float = 2.5
    A: float = 20.0
    s: float = 0.602
    b: float = 0.175
    t: float = 0.101

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise InvalidGainError("gain amplitudes a and b must be positive")
        if self.A < 0:
            raise InvalidGainError("stability constant A must be nonnegative")
        if self.s <= 0 or self.t <= 0:
            raise InvalidGainError("decay exponents s and t must be positive")

    def alpha(self, k: int) -> float:
        """Step size at iteration k >= 0."""
        return self.a / (k + 1 + self.A) ** self.s

    def beta(self, k: int) -> float:
        """Perturbation strength at iteration k >= 0."""
        return self.b / (k + 1) ** self.t


DEFAULT_SCHEDULE = GainSchedule()
