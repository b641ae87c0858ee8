"""Upper bound on the homogeneous L2-gain of the error dynamics.

The dissipation residual (storage derivative plus squared output norm minus
gamma^2 times the squared input norm, after substituting the scaled gains and
dividing by L^2)

    R(z, nu, delta; gamma) =
        a~ [ -a1 (spow(z1, 1/(1-d)) - z2)(spow(z1+nu, 1/(1-d)) - z2)
             + w(z) (-(a2/a1) spow(z1+nu, (1+d)/(1-d)) + delta/(L^2 a1)) ]
        + a1^2 z2^2 - (gamma/L)^2 (|nu|^(2/(1-d)) + |delta|^(2/(1+d)))

with w(z) = -z1 + (1+beta) spow(z2, 1-d) is jointly homogeneous of degree 2 in
(z, nu, delta).  The gain estimate is the smallest gamma for which the
residual, maximized over delta in closed form and then over the homogeneous
unit sphere in (z, nu), stays strictly negative; it is found by bisection.

Maximization over the delta channel is concave with maximizer

    delta* = spow(a~ (1+d) w(z) / (2 a1 gamma^2), (1+d)/(1-d)),

independent of L.  On a fixed sphere grid the residual therefore decomposes
into three gamma- and L-independent tables combined with scalar coefficients,
which makes the bisection and L-sweeps cheap; see _SphereTables.
"""

import functools
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .errors import AssumptionError, ConfigError, NumericError
from .homogeneity import WeightSystem, _spow, sphere_param3
from .lyapunov import DEFAULT_CIRCLE_GRID, LyapunovParams, check_gain_condition
from .storage import compute_storage_scale

#: bisection gives up (broken storage scaling) beyond this gain
GAMMA_CAP = 1e6


@dataclass(frozen=True)
class GridSpec:
    """Sphere-search resolution.

    n_phi1 x n_phi2 angular grid over the half-domain (phi2 in [0, pi), the
    other half is the image under the even symmetry R(-z, -nu) = R(z, nu)),
    followed by local simplex refinement from the best refine_starts cells.
    A non-None seed offsets the grid phases (independent-grid reproducibility
    checks).
    """

    n_phi1: int = 512
    n_phi2: int = 1024
    refine_starts: int = 16
    circle: int = DEFAULT_CIRCLE_GRID
    seed: Optional[int] = None

    def offsets(self) -> Tuple[float, float]:
        if self.seed is None:
            return 0.0, 0.0
        rng = np.random.default_rng(self.seed)
        return (
            float(rng.uniform(0.0, np.pi / self.n_phi1)),
            float(rng.uniform(0.0, np.pi / self.n_phi2)),
        )


DEFAULT_GRID = GridSpec()


@functools.lru_cache(maxsize=64)
def _stability_profile(alpha1, alpha2, beta, d, circle):
    """Cached gain-ratio check + storage-ratio sphere maximum."""
    params = LyapunovParams(d=d, beta=beta)
    chk = check_gain_condition(alpha1, alpha2, params, grid=circle)
    if not chk.satisfied:
        return chk, None
    scale = compute_storage_scale(alpha1, alpha2, params, margin=1.0, grid=circle)
    return chk, scale.sphere_max


@dataclass(frozen=True)
class DifferentiatorConfig:
    """Full parameter set of one tuned differentiator.

    Derived gains: k1 = alpha1 * L, k2 = alpha2 * L**2, k1_tilde = k1,
    k2_tilde = k2 / k1.  Construction validates the stabilizing gain-ratio
    condition and storage_scale > sphere maximum of the storage ratio.
    """

    alpha1: float
    alpha2: float
    beta: float
    d: float
    L: float
    storage_scale: float

    def __post_init__(self):
        if self.alpha1 <= 0.0 or self.alpha2 <= 0.0:
            raise ConfigError("gains alpha1, alpha2 must be positive")
        if self.beta <= 0.0:
            raise ConfigError("beta must be positive")
        if not -1.0 < self.d < 1.0:
            raise ConfigError(f"homogeneity degree must lie in (-1, 1), got {self.d}")
        if self.L <= 0.0:
            raise ConfigError("gain scaling L must be positive")
        if self.storage_scale <= 0.0:
            raise ConfigError("storage_scale must be positive")
        chk, sphere_max = _stability_profile(
            self.alpha1, self.alpha2, self.beta, self.d, DEFAULT_CIRCLE_GRID
        )
        if not chk.satisfied:
            raise AssumptionError(
                f"gain-ratio condition violated: ratio max {chk.ratio_max:.6g} "
                f">= bound {chk.bound:.6g}"
            )
        if self.storage_scale <= sphere_max:
            raise AssumptionError(
                f"storage_scale {self.storage_scale:.6g} does not exceed the "
                f"storage-ratio maximum {sphere_max:.6g}"
            )

    @classmethod
    def from_margin(
        cls,
        alpha1: float,
        alpha2: float,
        beta: float,
        d: float,
        L: float,
        margin: float = 1.0,
        circle: int = DEFAULT_CIRCLE_GRID,
    ) -> "DifferentiatorConfig":
        """Construct with storage_scale = sphere maximum + margin."""
        params = LyapunovParams(d=d, beta=beta)
        chk = check_gain_condition(alpha1, alpha2, params, grid=circle)
        if not chk.satisfied:
            raise AssumptionError(
                f"gain-ratio condition violated: ratio max {chk.ratio_max:.6g} "
                f">= bound {chk.bound:.6g}"
            )
        scale = compute_storage_scale(alpha1, alpha2, params, margin=margin, grid=circle)
        return cls(alpha1, alpha2, beta, d, L, scale.scale)

    def with_L(self, L: float) -> "DifferentiatorConfig":
        """Same parameters at a different gain scaling (storage scale is L-free)."""
        return replace(self, L=L)

    @property
    def k1(self) -> float:
        return self.alpha1 * self.L

    @property
    def k2(self) -> float:
        return self.alpha2 * self.L ** 2

    @property
    def k1_tilde(self) -> float:
        return self.k1

    @property
    def k2_tilde(self) -> float:
        return self.k2 / self.k1

    @property
    def weights(self) -> WeightSystem:
        return WeightSystem(self.d)

    @property
    def lyapunov(self) -> LyapunovParams:
        return LyapunovParams(d=self.d, beta=self.beta)


@dataclass(frozen=True)
class GainEstimate:
    """Certified gain estimate: residual_max < 0 at gamma on the sphere."""

    gamma: float
    residual_max: float
    argmax: Tuple[float, float]
    bracket: Tuple[float, float]
    iterations: int


def dissipation_residual(z, nu, delta, gamma: float, cfg: DifferentiatorConfig):
    """Evaluate the residual; scalars or broadcastable arrays."""
    if gamma < 0.0:
        raise ConfigError("gamma must be nonnegative")
    d, beta = cfg.d, cfg.beta
    a1, a2, at, L = cfg.alpha1, cfg.alpha2, cfg.storage_scale, cfg.L
    z1, z2 = z[0], z[1]
    zn = z1 + nu
    w = -z1 + (1.0 + beta) * _spow(z2, 1.0 - d)
    bracket = (
        -a1 * (_spow(z1, 1.0 / (1.0 - d)) - z2) * (_spow(zn, 1.0 / (1.0 - d)) - z2)
        + w * (-(a2 / a1) * _spow(zn, (1.0 + d) / (1.0 - d)) + delta / (L ** 2 * a1))
    )
    supply = np.abs(nu) ** (2.0 / (1.0 - d)) + np.abs(delta) ** (2.0 / (1.0 + d))
    return at * bracket + a1 ** 2 * z2 ** 2 - (gamma / L) ** 2 * supply


def worst_disturbance(z, gamma: float, cfg: DifferentiatorConfig):
    """Disturbance maximizing the residual pointwise; independent of L."""
    if gamma <= 0.0:
        raise ConfigError("gamma must be positive")
    d = cfg.d
    w = -z[0] + (1.0 + cfg.beta) * _spow(z[1], 1.0 - d)
    c = cfg.storage_scale * (1.0 + d) / (2.0 * cfg.alpha1 * gamma ** 2)
    return _spow(c * w, (1.0 + d) / (1.0 - d))


def reduced_residual(z, nu, gamma: float, cfg: DifferentiatorConfig):
    """Residual at the worst-case disturbance; non-increasing in gamma."""
    return dissipation_residual(z, nu, worst_disturbance(z, gamma, cfg), gamma, cfg)


# ---------------------------------------------------------------------------
# Sphere tables and channel evaluators
# ---------------------------------------------------------------------------

def _worst_delta_coefficient(d: float, a1: float, at: float) -> float:
    """Constant c0 with residual delta-part = c0 * |w|^(2/(1-d)) * gamma^(-2(1+d)/(1-d)) / L^2."""
    c_shape = ((1.0 - d) / (1.0 + d)) * ((1.0 + d) / 2.0) ** (2.0 / (1.0 - d))
    return c_shape * (at / a1) ** (2.0 / (1.0 - d))


class _SphereTables:
    """Gamma- and L-independent grid tables for the three channel problems."""

    def __init__(self, cfg: DifferentiatorConfig, grid: GridSpec):
        o1, o2 = grid.offsets()
        ph1 = np.linspace(0.0, np.pi, grid.n_phi1) + o1
        ph2 = np.linspace(0.0, np.pi, grid.n_phi2, endpoint=False) + o2
        P1, P2 = np.meshgrid(ph1, ph2, indexing="ij")
        self.ph1 = P1.ravel()
        self.ph2 = P2.ravel()
        args = (self.ph1, self.ph2, cfg.d, cfg.beta, cfg.alpha1, cfg.alpha2,
                cfg.storage_scale)
        self.base, self.noise_pow, self.wpow = _kernels.joint_tables(*args)
        self._dist = None
        self._args = args

    @property
    def dist(self):
        if self._dist is None:
            self._dist = _kernels.dist_tables(*self._args)
        return self._dist


_TABLE_CACHE: dict = {}


def _tables(cfg: DifferentiatorConfig, grid: GridSpec) -> _SphereTables:
    key = (cfg.alpha1, cfg.alpha2, cfg.beta, cfg.d, cfg.storage_scale,
           grid.n_phi1, grid.n_phi2, grid.seed)
    tab = _TABLE_CACHE.get(key)
    if tab is None:
        if len(_TABLE_CACHE) > 16:
            _TABLE_CACHE.clear()
        tab = _SphereTables(cfg, grid)
        _TABLE_CACHE[key] = tab
    return tab


def _refine(scalar_fn, starts, default):
    """Nelder-Mead ascent of scalar_fn from each start; returns (best, argmax)."""
    best_val, best_arg = default
    for p1, p2 in starts:
        res = minimize(
            lambda p: -scalar_fn(p[0], p[1]),
            np.array([p1, p2]),
            method="Nelder-Mead",
            options={"xatol": 1e-7, "fatol": 1e-12, "maxiter": 200},
        )
        if -res.fun > best_val:
            best_val = -res.fun
            best_arg = (float(res.x[0]), float(res.x[1]))
    return best_val, best_arg


def _grid_top(vals, tables, k):
    n = vals.shape[0]
    k = min(k, n)
    idx = np.argpartition(vals, n - k)[n - k:]
    order = idx[np.argsort(vals[idx])[::-1]]
    return [(tables.ph1[i], tables.ph2[i]) for i in order]


def _channel_max(cfg, grid, gamma, channel):
    """Grid + refined maximum for one channel problem.

    channel is 'joint', 'noise' or 'dist'; returns (max value, argmax angles).
    """
    tab = _tables(cfg, grid)
    L, at, a1, d = cfg.L, cfg.storage_scale, cfg.alpha1, cfg.d
    ws = cfg.weights
    if channel == "dist":
        dist_base, dist_pow = tab.dist
        c = gamma * L ** ((1.0 - d) / (1.0 + d))
        vals = dist_base - c ** 2 * dist_pow

        def scalar_fn(p1, p2):
            pt = sphere_param3(p1, p2, ws, third_weight=ws.r_delta)
            return float(
                dissipation_residual((pt.z1, pt.z2), 0.0, L ** 2 * pt.third, gamma, cfg)
            )
    else:
        vals = tab.base - (gamma / L) ** 2 * tab.noise_pow
        if channel == "joint":
            cw = _worst_delta_coefficient(d, a1, at)
            vals = vals + cw * gamma ** (-2.0 * (1.0 + d) / (1.0 - d)) / L ** 2 * tab.wpow

            def scalar_fn(p1, p2):
                pt = sphere_param3(p1, p2, ws)
                return float(reduced_residual((pt.z1, pt.z2), pt.third, gamma, cfg))
        else:

            def scalar_fn(p1, p2):
                pt = sphere_param3(p1, p2, ws)
                return float(
                    dissipation_residual((pt.z1, pt.z2), pt.third, 0.0, gamma, cfg)
                )

    i = int(np.argmax(vals))
    starts = _grid_top(vals, tab, grid.refine_starts)
    return _refine(scalar_fn, starts, (float(vals[i]), (float(tab.ph1[i]), float(tab.ph2[i]))))


def max_residual_on_sphere(
    gamma: float, cfg: DifferentiatorConfig, grid: Optional[GridSpec] = None
) -> Tuple[float, Tuple[float, float]]:
    """Maximum of the delta-eliminated residual over the homogeneous unit
    sphere in (z, nu), with local refinement; returns (value, argmax angles).

    The landscape is non-convex, so the dense grid does the heavy lifting and
    the simplex polish only sharpens the best cells.
    """
    if gamma <= 0.0:
        raise ConfigError("gamma must be positive")
    return _channel_max(cfg, grid or DEFAULT_GRID, gamma, "joint")


def _bisect_gain(feasible, tol):
    """Doubling-from-1 bracket plus bisection; returns certified upper end."""
    lo, hi = 0.0, 1.0
    iterations = 0
    while not feasible(hi):
        lo, hi = hi, 2.0 * hi
        iterations += 1
        if hi > GAMMA_CAP:
            raise NumericError(
                "no feasible gain below cap: storage scaling appears broken"
            )
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        iterations += 1
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi, iterations


def estimate_gain(
    cfg: DifferentiatorConfig, tol: float = 1e-3, grid: Optional[GridSpec] = None
) -> GainEstimate:
    """Bisection on gamma for the joint (noise and disturbance) channel.

    Returns the certified-feasible upper bracket end: the residual maximum at
    the returned gamma is strictly negative, so the value is a true upper
    bound at grid resolution.
    """
    grid = grid or DEFAULT_GRID
    cache = {}

    def feasible(g):
        cache[g] = _channel_max(cfg, grid, g, "joint")
        return cache[g][0] < 0.0

    lo, hi, iterations = _bisect_gain(feasible, tol)
    residual_max, argmax = cache[hi]
    return GainEstimate(
        gamma=hi, residual_max=residual_max, argmax=argmax,
        bracket=(lo, hi), iterations=iterations,
    )


def estimate_gain_noise_only(
    cfg: DifferentiatorConfig, tol: float = 1e-3, grid: Optional[GridSpec] = None
) -> float:
    """Gain estimate with the disturbance channel forced to zero.

    Feasibility depends on gamma only through gamma/L, so the result scales
    exactly linearly in L.
    """
    grid = grid or DEFAULT_GRID
    _, hi, _ = _bisect_gain(
        lambda g: _channel_max(cfg, grid, g, "noise")[0] < 0.0, tol
    )
    return hi


def estimate_gain_disturbance_only(
    cfg: DifferentiatorConfig, tol: float = 1e-3, grid: Optional[GridSpec] = None
) -> float:
    """Gain estimate with the noise channel forced to zero.

    The disturbance is searched directly on the homogeneous sphere in
    (z, delta/L^2) rather than through the joint-problem maximizer, and the
    result scales exactly as L**(-(1-d)/(1+d)).
    """
    grid = grid or DEFAULT_GRID
    _, hi, _ = _bisect_gain(
        lambda g: _channel_max(cfg, grid, g, "dist")[0] < 0.0, tol
    )
    return hi
