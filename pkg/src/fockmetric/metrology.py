"""Quantum Fisher information for frequency estimation with Fock-state probes.

Every QFI here carries units of ``omega**-2``. Closed forms sit next to
the numerical routes that check them: quadrature over wavefunction
derivatives, the Gaussian moment formula with finite-difference
derivatives, and an exact ladder-operator evaluation for superpositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import DomainError, NumericalError, OutOfRangeError, UnboundedVarianceError
from .wavefunction import (
    MAX_LEVEL,
    QuadratureGrid,
    WaveParams,
    dpsi_domega,
    _psi_unchecked,
    psi,
)

METHODS = (
    "closed-form",
    "derivative-numeric",
    "gaussian-formula",
    "superposition-formula",
    "superposition-exact",
)
# shared by every frequency derivative taken by stencil
STENCIL_REL_STEP = 1e-3
PURE_TOL = 1e-8
MAX_SUPERPOSITION_LEVEL = MAX_LEVEL - 2


@dataclass(frozen=True)
class QfiReport:
    omega: float
    probe: str
    qfi: float
    method: str
    crb: tuple[int, float] | None = None
    details: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown QFI method {self.method!r}")
        if self.qfi < 0:
            raise NumericalError(f"negative QFI {self.qfi!r} for {self.probe}")

    def with_crb(self, n_meas: int) -> "QfiReport":
        return replace(self, crb=(int(n_meas), cramer_rao(self.qfi, n_meas)))


def _check_omega(omega: float) -> None:
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega}")


def _check_level(n: int) -> None:
    if int(n) != n or n < 0:
        raise OutOfRangeError(f"Fock level must be a non-negative integer, got {n}")


def qfi_fock_closed(n: int, omega: float) -> QfiReport:
    _check_level(n)
    _check_omega(omega)
    return QfiReport(omega, f"fock:{n}", (n * n + n + 1) / (2 * omega**2), "closed-form")


def qfi_pure_numeric(
    n: int,
    omega: float,
    derivative: str = "analytic",
    grid: QuadratureGrid | None = None,
) -> QfiReport:
    """QFI of ``|n>`` from ``4(<dpsi|dpsi> - |<psi|dpsi>|^2)`` by quadrature.

    ``derivative`` selects the ladder-form derivative (``"analytic"``) or a
    fourth-order central difference in omega (``"finite-difference"``).
    """
    _check_level(n)
    _check_omega(omega)
    if n > MAX_LEVEL:
        raise OutOfRangeError(f"Fock level {n} exceeds supported maximum {MAX_LEVEL}")
    params = WaveParams(n, omega)
    grid = grid if grid is not None else QuadratureGrid.gauss_hermite(omega)
    x, w = grid.nodes, grid.weights
    if derivative == "analytic":
        dpsi = dpsi_domega(params, x)
    elif derivative == "finite-difference":
        dpsi = _central_diff(lambda v: _psi_unchecked(n, v, x), omega, STENCIL_REL_STEP * omega)
    else:
        raise ValueError(f"unknown derivative route {derivative!r}")
    p = psi(params, x)
    norm = float(np.sum(w * p * p))
    if abs(norm - 1.0) > 1e-8:
        raise NumericalError(f"quadrature does not resolve psi_{n} at omega={omega}: norm {norm!r}")
    dd = float(np.sum(w * dpsi * dpsi))
    pd = float(np.sum(w * p * dpsi))
    qfi = 4.0 * (dd - pd * pd)
    return QfiReport(
        omega, f"fock:{n}", qfi, "derivative-numeric",
        details={"deriv_norm": dd, "berry_term": pd * pd, "norm": norm},
    )


def _central_diff(fn: Callable, omega: float, h: float):
    # fourth-order stencil; truncation ~ (h/omega)^4, round-off ~ eps*omega/h
    return (fn(omega - 2 * h) - 8 * fn(omega - h) + 8 * fn(omega + h) - fn(omega + 2 * h)) / (12 * h)


def qfi_gaussian_formula(
    sigma_fn: Callable[[float], np.ndarray],
    d_fn: Callable[[float], np.ndarray],
    omega: float,
    rel_step: float = STENCIL_REL_STEP,
) -> QfiReport:
    """Single-mode Gaussian QFI from moment functions of the parameter.

        F = 1/2 Tr[(sigma^-1 sigma')^2] / (1 + P^2) + 2 P'^2 / (1 - P^4) + d'^T sigma^-1 d'

    with purity ``P = det(sigma)^(-1/2)``. Derivatives are central
    differences with step ``rel_step * omega``. For pure families
    (``P = 1``) the purity term is taken at its limit, zero.
    """
    _check_omega(omega)
    h = rel_step * omega
    sigma = np.asarray(sigma_fn(omega), dtype=float)
    det = np.linalg.det(sigma)
    if not det > 0 or np.linalg.cond(sigma) > 1e12:
        raise NumericalError(f"covariance matrix is singular at omega={omega}")
    sigma_inv = np.linalg.inv(sigma)
    dsigma = _central_diff(lambda w: np.asarray(sigma_fn(w), dtype=float), omega, h)
    dd = _central_diff(lambda w: np.asarray(d_fn(w), dtype=float), omega, h)
    purity = det**-0.5
    m = sigma_inv @ dsigma
    # Jacobi: d/dw det^-1/2 = -P/2 Tr(sigma^-1 sigma')
    dpurity = -0.5 * purity * np.trace(m)
    sigma_term = 0.5 * np.trace(m @ m) / (1 + purity**2)
    mixed = 1 - purity**4
    purity_term = 0.0 if mixed < PURE_TOL else 2 * dpurity**2 / mixed
    displacement_term = float(dd @ sigma_inv @ dd)
    qfi = float(sigma_term + purity_term + displacement_term)
    return QfiReport(
        omega, "gaussian", qfi, "gaussian-formula",
        details={
            "purity": float(purity),
            "sigma_term": float(sigma_term),
            "purity_term": float(purity_term),
            "displacement_term": displacement_term,
        },
    )


def qfi_gaussian_fock(n: int, omega: float) -> QfiReport:
    """Closed-form QFI of the Gaussian state sharing the moments of ``|n>``."""
    _check_level(n)
    _check_omega(omega)
    k2 = (2 * n + 1) ** 2
    return QfiReport(omega, f"gaussian-ref:{n}", k2 / ((k2 + 1) * omega**2), "closed-form")


def qfi_gaussian_fock_numeric(n: int, omega: float) -> QfiReport:
    """Moment formula applied to the Fock-state moments ``diag((2n+1)/w, (2n+1) w)``."""
    _check_level(n)
    k = 2 * n + 1
    rep = qfi_gaussian_formula(lambda w: np.diag([k / w, k * w]), lambda w: np.zeros(2), omega)
    return replace(rep, probe=f"gaussian-ref:{n}")


def cramer_rao(qfi: float, n_meas: int = 1) -> float:
    """Lower bound ``1/(N F)`` on the estimator variance."""
    if n_meas < 1:
        raise OutOfRangeError(f"number of measurements must be >= 1, got {n_meas}")
    if qfi <= 0:
        raise UnboundedVarianceError("zero Fisher information: no finite variance bound")
    return 1.0 / (n_meas * qfi)


def relative_advantage(n: int) -> tuple[float, float]:
    """``(F_n / F_0, 10 ln(F_n / F_0))``; both independent of frequency."""
    _check_level(n)
    ratio = float(n * n + n + 1)
    return ratio, 10.0 * math.log(ratio)


def qfi_per_energy(n: int, omega: float) -> float:
    """QFI per unit excitation energy ``omega n`` above the vacuum."""
    _check_level(n)
    _check_omega(omega)
    if n == 0:
        raise UnboundedVarianceError("vacuum probe has zero energy gap; ratio undefined")
    return (n * n + n + 1) / (2 * n * omega**3)


def _levels(levels: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(k) for k in levels)
    if not out:
        raise OutOfRangeError("superposition needs at least one Fock level")
    if len(set(out)) != len(out):
        raise OutOfRangeError(f"repeated level in {out}")
    for k in out:
        _check_level(k)
    return tuple(sorted(out))


def _quartic_pairs(levels: tuple[int, ...]) -> list[tuple[int, int]]:
    s = set(levels)
    return [(k, k + 4) for k in levels if k + 4 in s]


def qfi_superposition_paper(levels: Iterable[int], omega: float) -> QfiReport:
    """Mean of the single-Fock QFIs over the levels of an equal-weight superposition.

    This drops every cross term between distinct levels, which is only
    exact when no two levels differ by 4.
    """
    lv = _levels(levels)
    _check_omega(omega)
    qfi = sum(qfi_fock_closed(k, omega).qfi for k in lv) / len(lv)
    return QfiReport(omega, f"superposition:{','.join(map(str, lv))}", qfi, "superposition-formula")


def superposition_ket(levels: Iterable[int], dim: int) -> np.ndarray:
    lv = _levels(levels)
    if lv[-1] >= dim:
        raise OutOfRangeError(f"level {lv[-1]} outside truncation {dim}")
    c = np.zeros(dim)
    c[list(lv)] = 1 / math.sqrt(len(lv))
    return c


def _exact_ladder(lv: tuple[int, ...], omega: float) -> tuple[float, float]:
    dim = lv[-1] + 3
    c = superposition_ket(lv, dim)
    s = np.sqrt(np.arange(1, dim, dtype=float))
    a = np.diag(s, k=1)
    gen = (a @ a - a.T @ a.T) / (4 * omega)
    dc = gen @ c
    return float(dc @ dc), float(c @ dc)


def _exact_quadrature(lv: tuple[int, ...], omega: float) -> tuple[float, float]:
    grid = QuadratureGrid.gauss_hermite(omega)
    x, w = grid.nodes, grid.weights
    amp = 1 / math.sqrt(len(lv))
    p = amp * sum(psi(WaveParams(k, omega), x) for k in lv)
    dp = amp * sum(dpsi_domega(WaveParams(k, omega), x) for k in lv)
    return float(np.sum(w * dp * dp)), float(np.sum(w * p * dp))


def qfi_superposition_exact(levels: Iterable[int], omega: float, route: str = "ladder") -> QfiReport:
    """Exact pure-state QFI of ``sum_k |k> / sqrt(N)`` including all cross terms.

    ``route="ladder"`` works in the Fock basis with the dilation generator;
    ``route="quadrature"`` integrates the position-space derivative. The
    report's details carry the cross-term-free value and the level pairs
    (k, k+4) responsible for any disagreement with it.
    """
    lv = _levels(levels)
    _check_omega(omega)
    if lv[-1] > MAX_SUPERPOSITION_LEVEL:
        raise OutOfRangeError(f"level {lv[-1]} exceeds {MAX_SUPERPOSITION_LEVEL} (derivative needs level+2)")
    if route == "ladder":
        dd, pd = _exact_ladder(lv, omega)
    elif route == "quadrature":
        dd, pd = _exact_quadrature(lv, omega)
    else:
        raise ValueError(f"unknown route {route!r}")
    qfi = 4.0 * (dd - pd * pd)
    formula = qfi_superposition_paper(lv, omega).qfi
    pairs = _quartic_pairs(lv)
    return QfiReport(
        omega, f"superposition:{','.join(map(str, lv))}", qfi, "superposition-exact",
        details={
            "cross_term_free": formula,
            "relative_gap": (formula - qfi) / formula,
            "quartic_pairs": len(pairs),
            "berry_term": pd * pd,
        },
    )
