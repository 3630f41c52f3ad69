"""Symmetric M-user Gaussian interference channel with perfect causal feedback.

Each receiver observes its own transmitter's signal plus the common cross
gain a times the sum of everyone else's, plus unit-variance Gaussian noise:

    y_m = x_m + a * sum_{k != m} x_k + z_m.

Feedback is perfect and causal: the receiver's output at step n is available
to its own transmitter before step n+1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class ChannelParams:
    """Symmetric channel: M users, cross gain a, per-user power budget P."""

    M: int
    a: float
    P: float

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.a < 0:
            raise ValueError("cross gain a must be >= 0")
        if self.P <= 0:
            raise ValueError("power budget P must be > 0")

    @property
    def snr(self) -> float:
        return self.P

    @property
    def inr(self) -> float:
        return self.a * self.a * self.P

    @property
    def alpha(self) -> float:
        """log INR / log SNR; nan when SNR = 1 and -inf when INR = 0."""
        if self.P == 1.0:
            return float("nan")
        with np.errstate(divide="ignore"):
            return float(np.log(self.inr) / np.log(self.P))


def transmit(x: np.ndarray, params: ChannelParams, z: np.ndarray) -> np.ndarray:
    """One channel use: y_m = x_m + a * sum_{k != m} x_k + z_m.

    x and z may be (M,) vectors or (T, M) batches of independent uses.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape[-1] != params.M or z.shape[-1] != params.M:
        raise DimensionMismatch(
            f"expected vectors of length {params.M}, got {x.shape} and {z.shape}"
        )
    total = x.sum(axis=-1, keepdims=True)
    return x + params.a * (total - x) + z


class NoiseSource:
    """Counter-based reproducible noise stream for one simulation trial.

    Streams are keyed by (seed, trial) on a Philox generator, so distinct
    trials are statistically independent and any trial can be regenerated in
    isolation, which keeps chunked or parallel runs reproducible.
    """

    def __init__(self, seed: int, trial: int = 0):
        self.seed = int(seed)
        self.trial = int(trial)
        self._gen = np.random.Generator(
            np.random.Philox(key=[self.seed & (2**64 - 1), self.trial & (2**64 - 1)])
        )

    def normals(self, steps: int, m: int) -> np.ndarray:
        """(steps, m) array of standard normal draws, step-major order."""
        return self._gen.standard_normal((steps, m))

    def uniforms(self, m: int) -> np.ndarray:
        """Length-m vector of uniform (0,1) draws (message points)."""
        return self._gen.random(m)
