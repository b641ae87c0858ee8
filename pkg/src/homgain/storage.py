"""Storage scaling for the dissipation inequality.

The scaled Lyapunov function a * V with a = scale * L acts as a storage
function once ``scale`` exceeds the sphere maximum of the degree-zero ratio

    storage_ratio(z) = alpha1**2 |z2|**2 / (alpha1 * damping - (alpha2/alpha1) * coupling),

whose denominator is positive definite exactly when the gain-ratio condition
holds.  The maximum is independent of the gain scaling L.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AssumptionError, ConfigError
from .lyapunov import (
    DEFAULT_CIRCLE_GRID,
    LyapunovParams,
    _circle_points,
    coupling_term,
    damping_term,
)


@dataclass(frozen=True)
class StorageScale:
    """Chosen storage scaling: scale = sphere_max + margin."""

    sphere_max: float
    scale: float
    margin: float

    def __post_init__(self):
        if not self.scale > self.sphere_max > 0.0:
            raise AssumptionError(
                f"storage scale {self.scale} must exceed the sphere maximum {self.sphere_max}"
            )


def storage_ratio(z, alpha1: float, alpha2: float, params: LyapunovParams):
    """Degree-zero ratio whose sphere maximum bounds the storage scaling.

    Raises NumericError-style AssumptionError when the denominator is not
    positive, which signals a gain-ratio violation.
    """
    num = alpha1 ** 2 * np.abs(z[1]) ** 2
    den = alpha1 * damping_term(z, params.d) - (alpha2 / alpha1) * coupling_term(z, params)
    if np.any(den <= 0.0):
        raise AssumptionError(
            "storage ratio denominator not positive: gain-ratio condition violated"
        )
    return num / den


def compute_storage_scale(
    alpha1: float,
    alpha2: float,
    params: LyapunovParams,
    margin: float = 1.0,
    grid: int = DEFAULT_CIRCLE_GRID,
) -> StorageScale:
    """Sphere maximum of the storage ratio plus a positive margin.

    Circle grid with golden-section refinement in the best cell, mirroring the
    gain-ratio search; even symmetry halves the grid.
    """
    if margin <= 0.0:
        raise ConfigError("margin must be positive")
    phi, z1, z2 = _circle_points(params.d, grid)
    vals = storage_ratio((z1, z2), alpha1, alpha2, params)
    i = int(np.argmax(vals))

    def neg_ratio(p):
        pz1 = math.copysign(abs(math.cos(p)) ** (1.0 - params.d), math.cos(p))
        pz2 = math.sin(p)
        return -storage_ratio((pz1, pz2), alpha1, alpha2, params)

    h = np.pi / grid
    res = minimize_scalar(
        neg_ratio, bounds=(phi[i] - h, phi[i] + h), method="bounded",
        options={"xatol": 1e-12},
    )
    m_max = max(float(vals[i]), float(-res.fun))
    return StorageScale(sphere_max=m_max, scale=m_max + margin, margin=margin)
