"""Independent reference computations used only by the tests.

Nothing here calls into the code paths being checked: wavefunctions come
from scipy's Hermite polynomials, integrals from adaptive quadrature or
dense trapezoid grids, and derivatives from finite differences.
"""

import math

import numpy as np
from scipy import integrate
from scipy.special import eval_hermite


def psi_ref(n, omega, x):
    x = np.asarray(x, dtype=float)
    norm = (omega / math.pi) ** 0.25 / math.sqrt(2.0**n * math.factorial(n))
    return norm * eval_hermite(n, math.sqrt(omega) * x) * np.exp(-omega * x**2 / 2)


def dpsi_fd(n, omega, x, h=None):
    h = 1e-5 * omega if h is None else h
    return (psi_ref(n, omega + h, x) - psi_ref(n, omega - h, x)) / (2 * h)


def quad_line(f, omega=1.0):
    """``int f dx`` over the real line, split at the origin for oscillatory integrands."""
    width = 12.0 / math.sqrt(omega)
    left, _ = integrate.quad(f, -width * 4, 0, limit=400, epsabs=1e-13, epsrel=1e-12)
    right, _ = integrate.quad(f, 0, width * 4, limit=400, epsabs=1e-13, epsrel=1e-12)
    return left + right


def trapezoid_line(omega, n_levels_max, points=20001):
    half = (math.sqrt(2 * n_levels_max + 1) + 12) / math.sqrt(omega)
    return np.linspace(-half, half, points)


def wigner_transform(n, omega, q, p):
    """``(1/pi) int psi(q+y) psi(q-y) cos(2 p y) dy`` for real ``psi``."""
    f = lambda y: psi_ref(n, omega, q + y) * psi_ref(n, omega, q - y) * math.cos(2 * p * y)
    return quad_line(f, omega) / math.pi


def superposition_qfi_fd(levels, omega, points=40001):
    """Pure-state QFI of an equal-weight superposition, from a finite-difference
    frequency derivative integrated on a dense trapezoid grid."""
    x = trapezoid_line(omega, max(levels), points)
    dx = x[1] - x[0]
    amp = 1 / math.sqrt(len(levels))
    h = 1e-4 * omega

    def state(w):
        return amp * sum(psi_ref(k, w, x) for k in levels)

    # fourth-order stencil keeps truncation error far below 1e-6
    d = (state(omega - 2 * h) - 8 * state(omega - h) + 8 * state(omega + h) - state(omega + 2 * h)) / (12 * h)
    s = state(omega)
    dd = integrate.trapezoid(d * d, dx=dx)
    sd = integrate.trapezoid(s * d, dx=dx)
    return 4 * (dd - sd * sd)


def binary_entropy(p):
    return -sum(v * math.log(v) for v in (p, 1 - p) if v > 0)


def thermal_entropy(nbar):
    if nbar == 0:
        return 0.0
    return (nbar + 1) * math.log(nbar + 1) - nbar * math.log(nbar)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_density(rng, dim, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
