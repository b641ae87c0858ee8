"""Exact L2-gain of the d = 0 (linear) error dynamics.

At degree zero the error dynamics are LTI,

    dz/dt = A z + B (nu, delta),   y = C z,

and the true L2-gain is the H-infinity norm of C (sI - A)^{-1} B.  Two
independent computations are provided: the Hamiltonian-matrix bisection and a
dense frequency sweep of the largest singular value.  Each guards the other:
the sweep can under-resolve peaks, the Hamiltonian test hinges on the
imaginary-axis detection threshold.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericError
from .gain import DifferentiatorConfig

#: Hamiltonian eigenvalues with |Re| below this count as imaginary-axis
IMAG_AXIS_TOL = 1e-8


@dataclass(frozen=True)
class LinearErrorSystem:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def is_hurwitz(self) -> bool:
        return bool(np.all(np.linalg.eigvals(self.A).real < 0.0))


def build_linear_system(cfg: DifferentiatorConfig) -> LinearErrorSystem:
    """State-space matrices of the linear error dynamics.

    Input order (nu, delta); the disturbance enters scaled by 1/k1.
    """
    if cfg.d != 0.0:
        raise ConfigError("linear baseline requires d = 0")
    k1t, k2t, k1 = cfg.k1_tilde, cfg.k2_tilde, cfg.k1
    A = np.array([[-k1t, k1t], [-k2t, 0.0]])
    B = np.array([[-k1t, 0.0], [-k2t, 1.0 / k1]])
    C = np.array([[0.0, k1t]])
    return LinearErrorSystem(A=A, B=B, C=C)


def _hamiltonian_has_imaginary_eig(sys: LinearErrorSystem, gamma: float) -> bool:
    A, B, C = sys.A, sys.B, sys.C
    H = np.block([[A, B @ B.T / gamma ** 2], [-C.T @ C, -A.T]])
    ev = np.linalg.eigvals(H)
    return bool(np.any(np.abs(ev.real) <= IMAG_AXIS_TOL * np.maximum(1.0, np.abs(ev))))


def hinf_norm(sys: LinearErrorSystem, tol: float = 1e-6) -> float:
    """H-infinity norm by bisection on the Hamiltonian imaginary-axis test.

    gamma exceeds the norm iff the Hamiltonian has no imaginary-axis
    eigenvalues (D = 0 here, so any gamma > 0 is admissible in the test).
    """
    if not sys.is_hurwitz():
        raise NumericError("system matrix is not Hurwitz")
    lo, hi = 0.0, 1.0
    while _hamiltonian_has_imaginary_eig(sys, hi):
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise NumericError("H-infinity bisection failed to bracket")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if _hamiltonian_has_imaginary_eig(sys, mid):
            lo = mid
        else:
            hi = mid
    return hi


def hinf_norm_sweep(
    sys: LinearErrorSystem,
    omega_min: float = 1e-3,
    omega_max: float = 1e5,
    n: int = 20000,
) -> float:
    """Largest singular value of the transfer matrix over a log frequency grid.

    Lower-bounds the true norm up to grid resolution; used as the independent
    cross-check of hinf_norm.
    """
    if not sys.is_hurwitz():
        raise NumericError("system matrix is not Hurwitz")
    A, B, C = sys.A, sys.B, sys.C
    eye = np.eye(A.shape[0])
    best = 0.0
    for omega in np.geomspace(omega_min, omega_max, n):
        G = C @ np.linalg.solve(1j * omega * eye - A, B)
        best = max(best, float(np.linalg.norm(G)))  # 1 x m: spectral = Frobenius
    return best
