"""First and second moments, reference Gaussian states and the relative-entropy nG-degree.

Covariances use the convention without the factor 1/2,

    sigma_ij = <R_i R_j + R_j R_i> - 2 <R_i><R_j>,   R = (q, p),

with ``q = (a + a_dag)/sqrt(2 omega)`` and ``p = i sqrt(omega/2) (a_dag - a)``
(hbar = 1), so the vacuum has ``det(sigma) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import ContractViolation, DomainError, OutOfRangeError
from .hilbert import DensityMatrix, PureKet, partial_trace, von_neumann_entropy

UNCERTAINTY_TOL = 1e-10
NG_CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class GaussianMoments:
    d: np.ndarray
    sigma: np.ndarray
    omega: float = 1.0

    def __post_init__(self):
        d = np.array(self.d, dtype=float).reshape(2)
        sigma = np.array(self.sigma, dtype=float).reshape(2, 2)
        if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-12):
            raise ContractViolation("covariance matrix is not symmetric")
        if np.linalg.det(sigma) < 1.0 - UNCERTAINTY_TOL:
            raise ContractViolation(f"covariance violates the uncertainty bound: det = {np.linalg.det(sigma)!r}")
        d.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "sigma", sigma)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.sigma))


def moments_of_fock(n: int, omega: float) -> GaussianMoments:
    if n < 0:
        raise OutOfRangeError(f"Fock level must be >= 0, got {n}")
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega}")
    k = 2 * n + 1
    return GaussianMoments(np.zeros(2), np.diag([k / omega, k * omega]), omega)


def ladder_moments(mat: np.ndarray) -> tuple[complex, complex, float]:
    """``(<a>, <a^2>, <a_dag a>)`` of a single-mode density matrix.

    These three are exact in a truncated basis, unlike ``<q^2>`` formed
    from truncated quadrature matrices.
    """
    dim = mat.shape[0]
    s = np.sqrt(np.arange(1, dim, dtype=float))
    a1 = np.sum(s * np.diagonal(mat, offset=-1))
    a2 = np.sum(s[:-1] * s[1:] * np.diagonal(mat, offset=-2)) if dim > 2 else 0.0
    nbar = np.sum(np.arange(dim) * np.diagonal(mat).real)
    return complex(a1), complex(a2), float(nbar)


def moments_of_state(rho: DensityMatrix | PureKet, mode: int = 0) -> GaussianMoments:
    """Moments of one mode of ``rho`` (two-mode states are reduced first)."""
    if isinstance(rho, PureKet):
        rho = rho.density()
    if rho.n_modes == 2:
        rho = partial_trace(rho, mode)
    elif mode != 0:
        raise OutOfRangeError(f"single-mode state has no mode {mode}")
    w = rho.omega_per_mode[0]
    a1, a2, nbar = ladder_moments(rho.matrix)
    d = np.array([math.sqrt(2 / w) * a1.real, math.sqrt(2 * w) * a1.imag])
    s_qq = (2 * a2.real + 2 * nbar + 1) / w - 4 * a1.real**2 / w
    s_pp = w * (2 * nbar + 1 - 2 * a2.real) - 4 * w * a1.imag**2
    s_qp = 2 * a2.imag - 4 * a1.real * a1.imag
    return GaussianMoments(d, [[s_qq, s_qp], [s_qp, s_pp]], w)


def symplectic_nu(m: GaussianMoments) -> float:
    """Single-mode symplectic eigenvalue ``sqrt(det sigma)``; the Gaussian purity is ``1/nu``."""
    det = m.det
    if det < 1.0 - UNCERTAINTY_TOL:
        raise ContractViolation(f"det(sigma) = {det!r} < 1")
    return math.sqrt(max(det, 1.0))


def thermal_entropy(nbar):
    """``(n+1) ln(n+1) - n ln n``, the entropy of a thermal state with mean occupation ``n``."""
    nbar = np.asarray(nbar, dtype=float)
    out = xlogy(nbar + 1, nbar + 1) - xlogy(nbar, nbar)
    return out if out.ndim else float(out)


def gaussian_entropy_from_nu(nu) -> float:
    return thermal_entropy(np.maximum((np.asarray(nu, dtype=float) - 1) / 2, 0.0))


def reference_gaussian_entropy(m: GaussianMoments) -> float:
    return gaussian_entropy_from_nu(symplectic_nu(m))


def ng_degree(rho: DensityMatrix | PureKet, mode: int = 0) -> float:
    """Relative-entropy non-Gaussianity ``S(rho_G) - S(rho)`` of one mode."""
    if isinstance(rho, PureKet):
        rho = rho.density()
    if rho.n_modes == 2:
        rho = partial_trace(rho, mode)
        mode = 0
    delta = reference_gaussian_entropy(moments_of_state(rho, mode)) - von_neumann_entropy(rho)
    if delta < -NG_CLAMP_TOL:
        raise ContractViolation(f"negative nG-degree {delta!r}")
    return max(delta, 0.0)


def ng_degree_fock(n: int) -> float:
    """Closed form for ``|n><n|``; the frequency drops out."""
    if n < 0:
        raise OutOfRangeError(f"Fock level must be >= 0, got {n}")
    return thermal_entropy(n)
