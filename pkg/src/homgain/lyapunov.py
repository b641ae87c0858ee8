"""Lyapunov function of the unforced error dynamics and the gain-ratio check.

The function

    V(z1, z2) = (1-d)/(2-d) |z1|^((2-d)/(1-d)) - z1 z2 + (1+beta)/(2-d) |z2|^(2-d)

is positive definite for beta > 0 and homogeneous of degree 2 - d.  Along the
unforced dynamics its derivative splits as

    dV/dt = -k1_tilde * damping_term(z) + k2_tilde * coupling_term(z),

so the gains stabilize whenever k1_tilde / k2_tilde exceeds the sphere maximum
of the degree-zero ratio coupling/damping.  With gains (alpha1 * L,
alpha2 * L**2) that threshold is alpha1**2 / alpha2, independent of L.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigError
from .homogeneity import WeightSystem, _spow

#: grid points on the homogeneous circle for ratio maximization
DEFAULT_CIRCLE_GRID = 4096

#: damping values below this are treated as the removable singularity set,
#: where the coupling term is negative and cannot attain a positive maximum
DAMPING_FLOOR = 1e-14


@dataclass(frozen=True)
class LyapunovParams:
    d: float
    beta: float

    def __post_init__(self):
        if not -1.0 < self.d < 1.0:
            raise ConfigError(f"homogeneity degree must lie in (-1, 1), got {self.d}")
        if self.beta <= 0.0:
            raise ConfigError("beta must be positive")

    @property
    def degree(self) -> float:
        """Homogeneity degree of the Lyapunov function, 2 - d."""
        return 2.0 - self.d


@dataclass(frozen=True)
class GainRatioCheck:
    """Result of the stabilizing-gain check.

    satisfied is True iff ratio_max < bound, with bound = alpha1**2/alpha2.
    """

    ratio_max: float
    bound: float
    satisfied: bool
    argmax_phi: float


def lyapunov_value(z, params: LyapunovParams):
    """Evaluate V at z = (z1, z2); accepts scalars or arrays."""
    d, beta = params.d, params.beta
    z1, z2 = z[0], z[1]
    return (
        (1.0 - d) / (2.0 - d) * np.abs(z1) ** ((2.0 - d) / (1.0 - d))
        - z1 * z2
        + (1.0 + beta) / (2.0 - d) * np.abs(z2) ** (2.0 - d)
    )


def lyapunov_gradient(z, params: LyapunovParams):
    """Gradient of V: (spow(z1, 1/(1-d)) - z2, -z1 + (1+beta) spow(z2, 1-d))."""
    d, beta = params.d, params.beta
    z1, z2 = z[0], z[1]
    return (
        _spow(z1, 1.0 / (1.0 - d)) - z2,
        -z1 + (1.0 + beta) * _spow(z2, 1.0 - d),
    )


def damping_term(z, d: float):
    """|spow(z1, 1/(1-d)) - z2|**2; nonnegative, homogeneous of degree 2."""
    z1, z2 = z[0], z[1]
    return (_spow(z1, 1.0 / (1.0 - d)) - z2) ** 2


def coupling_term(z, params: LyapunovParams):
    """The indefinite part of dV/dt; homogeneous of degree 2.

    (1+beta)(z1 - spow(z2, 1-d)) spow(z1, (1+d)/(1-d)) - beta |z1|^(2/(1-d))
    """
    d, beta = params.d, params.beta
    z1, z2 = z[0], z[1]
    return (1.0 + beta) * (z1 - _spow(z2, 1.0 - d)) * _spow(
        z1, (1.0 + d) / (1.0 - d)
    ) - beta * np.abs(z1) ** (2.0 / (1.0 - d))


def _circle_points(d: float, n: int):
    phi = np.linspace(0.0, np.pi, n, endpoint=False)  # even symmetry halves the grid
    z1 = _spow(np.cos(phi), 1.0 - d)
    z2 = np.sin(phi)
    return phi, z1, z2


def gain_ratio_max(params: LyapunovParams, grid: int = DEFAULT_CIRCLE_GRID) -> Tuple[float, float]:
    """Maximum of coupling/damping on the homogeneous unit circle.

    Dense angular grid followed by golden-section refinement in the best
    cell.  Points with damping below DAMPING_FLOOR are excluded: there the
    coupling term is negative, so they cannot attain a positive maximum.
    Returns (maximum, maximizer angle).
    """
    phi, z1, z2 = _circle_points(params.d, grid)
    mu = damping_term((z1, z2), params.d)
    eta = coupling_term((z1, z2), params)
    mask = mu > DAMPING_FLOOR
    ratio = np.where(mask, eta / np.where(mask, mu, 1.0), -np.inf)
    i = int(np.argmax(ratio))

    def neg_ratio(p):
        pz1 = math.copysign(abs(math.cos(p)) ** (1.0 - params.d), math.cos(p))
        pz2 = math.sin(p)
        m = damping_term((pz1, pz2), params.d)
        if m <= DAMPING_FLOOR:
            return np.inf
        return -coupling_term((pz1, pz2), params) / m

    h = np.pi / grid
    res = minimize_scalar(
        neg_ratio, bracket=None, bounds=(phi[i] - h, phi[i] + h), method="bounded",
        options={"xatol": 1e-12},
    )
    if -res.fun >= ratio[i]:
        return float(-res.fun), float(res.x)
    return float(ratio[i]), float(phi[i])


def check_gain_condition(
    alpha1: float,
    alpha2: float,
    params: LyapunovParams,
    grid: int = DEFAULT_CIRCLE_GRID,
) -> GainRatioCheck:
    """Check that the scaled gains stabilize the unforced error dynamics.

    The requirement is ratio_max < alpha1**2 / alpha2; both sides are
    independent of the gain scaling L.
    """
    if alpha1 <= 0.0 or alpha2 <= 0.0:
        raise ConfigError("gains alpha1, alpha2 must be positive")
    ratio_max, arg = gain_ratio_max(params, grid)
    bound = alpha1 ** 2 / alpha2
    return GainRatioCheck(ratio_max, bound, ratio_max < bound, arg)


def unforced_derivative(z, k1_tilde: float, k2_tilde: float, params: LyapunovParams):
    """dV/dt along the unforced dynamics, via the two-term decomposition."""
    return -k1_tilde * damping_term(z, params.d) + k2_tilde * coupling_term(z, params)


#: weight system helper matching the Lyapunov parameters
def weights_of(params: LyapunovParams) -> WeightSystem:
    return WeightSystem(params.d)
