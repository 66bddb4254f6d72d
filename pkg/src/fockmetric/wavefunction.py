"""Position-space Fock wavefunctions of a harmonic mode and their frequency derivatives.

The n-th eigenfunction of a mode with frequency ``omega`` (hbar = 1, unit mass) is

    psi_n(x) = (omega/pi)**(1/4) / sqrt(2**n n!) * H_n(sqrt(omega) x) * exp(-omega x**2 / 2)

with ``H_n`` the physicists' Hermite polynomial. Integrals use Gauss-Hermite
quadrature rescaled to the mode width, which is exact for the
polynomial-times-Gaussian integrands met here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidDimensionError, OutOfRangeError

MAX_LEVEL = 40
DEFAULT_NODES = 200
FD_REL_STEP = 1e-6


@dataclass(frozen=True)
class WaveParams:
    n: int
    omega: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise OutOfRangeError(f"Fock level must be a non-negative integer, got {self.n}")
        if not self.omega > 0:
            raise DomainError(f"frequency must be positive, got {self.omega}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "omega", float(self.omega))


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and weights approximating ``int f(x) dx`` over the real line."""

    nodes: np.ndarray
    weights: np.ndarray
    scheme: str = "gauss-hermite"

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.size == 0:
            raise InvalidDimensionError("quadrature grid is empty")
        if nodes.shape != weights.shape:
            raise InvalidDimensionError("nodes and weights differ in length")
        if np.any(np.diff(nodes) <= 0) or np.any(weights <= 0):
            raise InvalidDimensionError("nodes must increase strictly and weights must be positive")
        if self.scheme not in ("gauss-hermite", "trapezoid"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def gauss_hermite(cls, omega: float = 1.0, count: int = DEFAULT_NODES) -> "QuadratureGrid":
        # int f dx = omega^-1/2 sum_i w_i e^{t_i^2} f(t_i / sqrt(omega))
        if not omega > 0:
            raise DomainError(f"frequency must be positive, got {omega}")
        t, w = _hermgauss(count)
        scale = 1.0 / math.sqrt(omega)
        return cls(t * scale, np.exp(np.log(w) + t**2) * scale, "gauss-hermite")

    @classmethod
    def trapezoid(cls, lo: float, hi: float, count: int) -> "QuadratureGrid":
        x = np.linspace(lo, hi, count)
        w = np.full(count, (hi - lo) / (count - 1))
        w[[0, -1]] *= 0.5
        return cls(x, w, "trapezoid")


@lru_cache(maxsize=16)
def _hermgauss(count: int):
    t, w = np.polynomial.hermite.hermgauss(count)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def hermite_physicists(n: int, x):
    """``H_n(x)`` from ``H_{k+1} = 2x H_k - 2k H_{k-1}``."""
    if n < 0:
        raise OutOfRangeError(f"Hermite degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    h_prev, h = np.zeros_like(x), np.ones_like(x)
    for k in range(n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def laguerre(n: int, x):
    """``L_n(x)`` from ``(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}``."""
    if n < 0:
        raise OutOfRangeError(f"Laguerre degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    l_prev, l = np.zeros_like(x), np.ones_like(x)
    for k in range(n):
        l_prev, l = l, ((2 * k + 1 - x) * l - k * l_prev) / (k + 1)
    return l if l.ndim else float(l)


def _psi_unchecked(n: int, omega: float, x):
    x = np.asarray(x, dtype=float)
    log_norm = 0.25 * math.log(omega / math.pi) - 0.5 * (n * math.log(2.0) + math.lgamma(n + 1))
    return hermite_physicists(n, math.sqrt(omega) * x) * np.exp(log_norm - 0.5 * omega * x**2)


def _check_level(n: int) -> None:
    if n > MAX_LEVEL:
        raise OutOfRangeError(f"Fock level {n} exceeds supported maximum {MAX_LEVEL}")


def psi(params: WaveParams, x):
    """Normalized eigenfunction ``psi_n(x; omega)``; vectorized over ``x``."""
    _check_level(params.n)
    return _psi_unchecked(params.n, params.omega, x)


def dpsi_domega(params: WaveParams, x):
    """Exact frequency derivative of ``psi_n``.

    Frequency acts as a dilation, whose generator is ``(a**2 - a_dag**2) / (4 omega)``:

        d/domega psi_n = [sqrt(n(n-1)) psi_{n-2} - sqrt((n+1)(n+2)) psi_{n+2}] / (4 omega)
    """
    _check_level(params.n)
    n, w = params.n, params.omega
    out = -math.sqrt((n + 1) * (n + 2)) * _psi_unchecked(n + 2, w, x)
    if n >= 2:
        out = out + math.sqrt(n * (n - 1)) * _psi_unchecked(n - 2, w, x)
    return out / (4.0 * w)


def dpsi_domega_fd(params: WaveParams, x, rel_step: float = FD_REL_STEP):
    """Central finite-difference frequency derivative; independent check on :func:`dpsi_domega`."""
    _check_level(params.n)
    h = rel_step * params.omega
    return (_psi_unchecked(params.n, params.omega + h, x) - _psi_unchecked(params.n, params.omega - h, x)) / (2 * h)


def ladder_derivative_coeffs(n: int, omega: float) -> dict[int, float]:
    """Fock-basis components of ``d/domega |n>``: ``{level: amplitude}``."""
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega}")
    out = {n + 2: -math.sqrt((n + 1) * (n + 2)) / (4 * omega)}
    if n >= 2:
        out[n - 2] = math.sqrt(n * (n - 1)) / (4 * omega)
    return out


def overlap(f: Callable, g: Callable, grid: QuadratureGrid | None = None) -> complex:
    """Quadrature estimate of ``int conj(f(x)) g(x) dx``.

    ``grid`` defaults to 200-node Gauss-Hermite at unit frequency; pass
    ``QuadratureGrid.gauss_hermite(omega)`` for other mode widths.
    """
    grid = grid if grid is not None else QuadratureGrid.gauss_hermite(1.0)
    fx = np.asarray(f(grid.nodes))
    gx = np.asarray(g(grid.nodes))
    return complex(np.sum(grid.weights * np.conj(fx) * gx))


def central_moment(params: WaveParams, order: int, grid: QuadratureGrid | None = None) -> float:
    """``<(x - <x>)**order>`` in the Fock state, by quadrature over ``|psi_n|**2``."""
    if order not in (1, 2, 3, 4):
        raise OutOfRangeError(f"central moment order must be 1..4, got {order}")
    grid = grid if grid is not None else QuadratureGrid.gauss_hermite(params.omega)
    dens = psi(params, grid.nodes) ** 2
    mean = np.sum(grid.weights * grid.nodes * dens)
    return float(np.sum(grid.weights * (grid.nodes - mean) ** order * dens))


def wigner_fock(params: WaveParams, q, p):
    """Wigner function of ``|n><n|``, normalized to unit phase-space integral."""
    _check_level(params.n)
    q, p = np.asarray(q, dtype=float), np.asarray(p, dtype=float)
    u = 0.5 * (params.omega * q**2 + p**2 / params.omega)
    sign = -1.0 if params.n % 2 else 1.0
    return sign / math.pi * np.exp(-2.0 * u) * laguerre(params.n, 4.0 * u)
