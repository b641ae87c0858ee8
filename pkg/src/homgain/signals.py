"""Uniformly sampled signals."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class SampledSignal:
    """A uniformly sampled scalar or vector trajectory.

    ``values`` has shape (N,) for scalar signals or (N, k) for k-channel
    signals; sample k lives at time ``t0 + k * sample_time``.
    """

    values: np.ndarray
    sample_time: float
    t0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.sample_time <= 0.0:
            raise ConfigError("sample_time must be positive")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.sample_time * np.arange(self.values.shape[0])

    @property
    def duration(self) -> float:
        return self.sample_time * (self.values.shape[0] - 1)
