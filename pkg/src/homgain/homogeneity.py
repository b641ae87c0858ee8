"""Weighted-homogeneity primitives.

Everything here is built around the anisotropic scaling
``x_i -> kappa**r_i * x_i`` with positive weights ``r_i``.  For the
second-order differentiator family with degree ``d`` the weights are
``r_z = (1 - d, 1)`` for the state, ``r_u = (1 - d, 1 + d)`` for the inputs
(noise, disturbance), ``r_y = 1`` for the output and ``r_t = -d`` for time.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import ConfigError
from .signals import SampledSignal


def signed_power(x: float, p: float) -> float:
    """Sign-preserving power sign(x) * |x|**p.

    Odd in x and increasing for p > 0.  Raises for the indeterminate cases
    x = 0 with p <= 0.
    """
    if x == 0.0:
        if p <= 0.0:
            raise ConfigError("signed_power undefined for x = 0 with p <= 0")
        return 0.0
    return math.copysign(abs(x) ** p, x)


def _spow(x, p):
    # array-safe variant; 0**p with p > 0 is already 0
    return np.sign(x) * np.abs(x) ** p


@dataclass(frozen=True)
class WeightSystem:
    """Weight vectors of the degree-d differentiator error dynamics."""

    d: float

    def __post_init__(self):
        if not -1.0 < self.d < 1.0:
            raise ConfigError(f"homogeneity degree must lie in (-1, 1), got {self.d}")

    @property
    def r_z(self) -> tuple:
        return (1.0 - self.d, 1.0)

    @property
    def r_u(self) -> tuple:
        return (1.0 - self.d, 1.0 + self.d)

    @property
    def r_y(self) -> float:
        return 1.0

    @property
    def r_t(self) -> float:
        return -self.d

    @property
    def r_nu(self) -> float:
        return 1.0 - self.d

    @property
    def r_delta(self) -> float:
        return 1.0 + self.d


class SpherePoint2(NamedTuple):
    z1: float
    z2: float


class SpherePoint3(NamedTuple):
    z1: float
    z2: float
    third: float


def hom_qnorm(x: Sequence[float], r: Sequence[float], q: float = 2.0) -> float:
    """Weighted homogeneous q-norm (sum_i |x_i|**(q/r_i))**(1/q).

    Degree-1 homogeneous under the weighted dilation: scaling x by
    ``dilate_point(x, r, kappa)`` multiplies the result by kappa.
    """
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    if x.shape[-1] != r.shape[0]:
        raise ConfigError(f"weight/vector length mismatch: {x.shape[-1]} vs {r.shape[0]}")
    if np.any(r <= 0.0):
        raise ConfigError("weights must be positive")
    if q < 1.0:
        raise ConfigError("q must be >= 1")
    return float(np.sum(np.abs(x) ** (q / r), axis=-1) ** (1.0 / q))


def dilate_point(x: Sequence[float], r: Sequence[float], kappa: float) -> np.ndarray:
    """Apply the weighted dilation component-wise: x_i -> kappa**r_i * x_i."""
    if kappa <= 0.0:
        raise ConfigError("dilation parameter kappa must be positive")
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    return kappa ** r * x


def sphere_param2(phi: float, weights: WeightSystem) -> SpherePoint2:
    """Point on the homogeneous unit circle, via signed powers of (cos, sin).

    Since cos^2 + sin^2 = 1 and |signed_power(e, r)|**(2/r) = e^2, the result
    has homogeneous 2-norm exactly 1.
    """
    r1, r2 = weights.r_z
    e1, e2 = math.cos(phi), math.sin(phi)
    return SpherePoint2(
        math.copysign(abs(e1) ** r1, e1),
        math.copysign(abs(e2) ** r2, e2),
    )


def sphere_param3(
    phi1: float,
    phi2: float,
    weights: WeightSystem,
    third_weight: Optional[float] = None,
) -> SpherePoint3:
    """Point on the homogeneous unit 2-sphere in (z1, z2, third)-space.

    The third axis carries ``third_weight`` (noise weight by default, pass
    ``weights.r_delta`` for a disturbance axis).  Uses the Euclidean spherical
    parametrization (sin(phi1)cos(phi2), sin(phi1)sin(phi2), cos(phi1)) pulled
    back through component-wise signed powers.
    """
    r1, r2 = weights.r_z
    w3 = weights.r_nu if third_weight is None else third_weight
    s1 = math.sin(phi1)
    e1, e2, e3 = s1 * math.cos(phi2), s1 * math.sin(phi2), math.cos(phi1)
    return SpherePoint3(
        math.copysign(abs(e1) ** r1, e1),
        math.copysign(abs(e2) ** r2, e2),
        math.copysign(abs(e3) ** w3, e3),
    )


def dilate_signal(
    s: SampledSignal, r: Sequence[float], r_t: float, kappa: float
) -> SampledSignal:
    """Dilate a sampled signal in value and in time.

    Values are scaled component-wise by kappa**r_i; the time axis is stretched
    by kappa**r_t (sample count unchanged), so the result represents
    ``s_new(kappa**r_t * t) = dilation(s(t))``.
    """
    if kappa <= 0.0:
        raise ConfigError("dilation parameter kappa must be positive")
    if kappa == 1.0:
        return s
    r = np.asarray(r, dtype=float)
    if s.values.ndim == 1:
        if r.shape[0] != 1:
            raise ConfigError("scalar signal needs a single weight")
        values = kappa ** r[0] * s.values
    else:
        if r.shape[0] != s.values.shape[1]:
            raise ConfigError("weight/channel count mismatch")
        values = kappa ** r * s.values
    scale_t = kappa ** r_t
    return SampledSignal(values, s.sample_time * scale_t, s.t0 * scale_t)
