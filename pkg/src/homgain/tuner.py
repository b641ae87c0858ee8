"""Minimization of the gain estimate over the gain scaling L, and sweeps.

The estimate grows linearly in L through the noise channel and like
L**(-(1-d)/(1+d)) through the disturbance channel, so a minimizer exists.
Uniqueness is not guaranteed; the coarse grid guards the golden-section
refinement and multi-modal cases fall back to the finest grid argmin.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import AssumptionError, ConfigError
from .gain import (
    DifferentiatorConfig,
    GridSpec,
    estimate_gain,
    estimate_gain_disturbance_only,
    estimate_gain_noise_only,
)
from .linear import build_linear_system, hinf_norm

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OptimalScaling:
    L_star: float
    gamma_star: float
    bracket: Tuple[float, float]
    evaluations: int
    boundary_warning: bool = False


@dataclass(frozen=True)
class SweepRow:
    d: float
    L: float
    gamma_hat: float
    gamma_noise: float
    gamma_dist: float
    hinf: Optional[float] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class SweepTable:
    rows: List[SweepRow]


def default_L_grid(n: int = 17) -> np.ndarray:
    return np.geomspace(0.3, 2.0, n)


DEFAULT_D_LIST = (0.0, -0.25, -0.5, -0.75)


def optimize_L(
    cfg_template: DifferentiatorConfig,
    L_range: Tuple[float, float] = (0.3, 2.0),
    tol: float = 1e-2,
    coarse: int = 17,
    gamma_tol: float = 1e-3,
    grid: Optional[GridSpec] = None,
) -> OptimalScaling:
    """Locate the gain-scaling minimizer of the joint gain estimate.

    Coarse log-spaced grid over L_range, then golden-section search in log L
    inside the bracketing cell.  The storage scale comes from the template and
    is reused for every L (it is L-independent).  If the coarse minimum sits
    on the range boundary the result carries a warning flag and no interior
    refinement is attempted beyond that cell.
    """
    lo, hi = L_range
    if not 0.0 < lo <= hi:
        raise ConfigError("L_range must satisfy 0 < lo <= hi")
    evals = 0
    cache = {}

    def objective(L):
        nonlocal evals
        if L not in cache:
            cache[L] = estimate_gain(cfg_template.with_L(L), tol=gamma_tol, grid=grid).gamma
            evals += 1
        return cache[L]

    if lo == hi:
        return OptimalScaling(lo, objective(lo), (lo, hi), evals)

    Ls = np.geomspace(lo, hi, coarse)
    vals = [objective(L) for L in Ls]
    i = int(np.argmin(vals))
    if i == 0 or i == coarse - 1:
        return OptimalScaling(
            float(Ls[i]), vals[i], (float(Ls[max(i - 1, 0)]), float(Ls[min(i + 1, coarse - 1)])),
            evals, boundary_warning=True,
        )

    # golden-section in log L within the bracketing cell
    a, b = math.log(Ls[i - 1]), math.log(Ls[i + 1])
    c = b - _INV_PHI * (b - a)
    e = a + _INV_PHI * (b - a)
    fc, fe = objective(math.exp(c)), objective(math.exp(e))
    while b - a > tol:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(math.exp(c))
        else:
            a, c, fc = c, e, fe
            e = a + _INV_PHI * (b - a)
            fe = objective(math.exp(e))
    # multi-modality guard: never return worse than the best point seen
    L_best, g_best = min(cache.items(), key=lambda kv: kv[1])
    return OptimalScaling(
        float(L_best), float(g_best), (math.exp(a), math.exp(b)), evals
    )


def sweep(
    alpha1: float,
    alpha2: float,
    beta: float,
    margin: float = 1.0,
    d_list: Sequence[float] = DEFAULT_D_LIST,
    L_list: Optional[Sequence[float]] = None,
    with_linear_baseline: bool = True,
    gamma_tol: float = 1e-3,
    grid: Optional[GridSpec] = None,
) -> SweepTable:
    """Gain estimates over a (d, L) grid, with the H-infinity baseline at d = 0.

    Rows for a degree d that fails the gain-ratio condition are emitted with
    an error marker and NaN estimates rather than dropped.
    """
    if L_list is None:
        L_list = default_L_grid()
    rows: List[SweepRow] = []
    for d in sorted(d_list):
        try:
            template = DifferentiatorConfig.from_margin(
                alpha1, alpha2, beta, d, L=1.0, margin=margin
            )
        except AssumptionError:
            rows.extend(
                SweepRow(d, float(L), math.nan, math.nan, math.nan, error="assumption1")
                for L in sorted(L_list)
            )
            continue
        for L in sorted(L_list):
            cfg = template.with_L(float(L))
            row = SweepRow(
                d=d,
                L=float(L),
                gamma_hat=estimate_gain(cfg, tol=gamma_tol, grid=grid).gamma,
                gamma_noise=estimate_gain_noise_only(cfg, tol=gamma_tol, grid=grid),
                gamma_dist=estimate_gain_disturbance_only(cfg, tol=gamma_tol, grid=grid),
                hinf=(
                    hinf_norm(build_linear_system(cfg))
                    if with_linear_baseline and d == 0.0
                    else None
                ),
            )
            rows.append(row)
    return SweepTable(rows=rows)
