"""Transfer of non-Gaussianity from an ancilla mode to the probe by excitation exchange.

The probe S starts in the vacuum and the ancilla A in ``|m>``. They evolve under

    H = w_S a_dag a + w_A b_dag b + g (a_dag b + a b_dag)

and at each time we record the local nG-degrees, the mutual information,
the fidelity of the probe with ``|m>`` and the residual of the identity

    I_SA - I_SA,G = [S(rho_G) - S(rho)] - delta_S - delta_A.

The global reference Gaussian ``rho_G`` is built from the full 4x4
covariance matrix of the two-mode state; its entropy comes from the
symplectic spectrum, so exchange correlations are included.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ContractViolation, InvalidDimensionError, NumericalError, TruncationLeakageError
from .gaussian_ref import gaussian_entropy_from_nu, moments_of_state, ng_degree, reference_gaussian_entropy
from .hilbert import (
    DensityMatrix,
    OperatorMatrix,
    Spectral,
    annihilation_matrix,
    embed,
    fidelity,
    fock_ket,
    partial_trace,
    tensor,
    von_neumann_entropy,
)

LEAKAGE_TOL = 1e-8
SWAP_FIDELITY_TOL = 1e-9


@dataclass(frozen=True)
class ProtocolConfig:
    omega_s: float = 1.0
    omega_a: float = 1.0
    gamma: float = 0.1
    m: int = 1
    dim: int | None = None
    t_grid: Sequence[float] | None = None

    def __post_init__(self):
        if not (self.omega_s > 0 and self.omega_a > 0):
            raise ContractViolation("mode frequencies must be positive")
        if self.gamma < 0:
            raise ContractViolation(f"coupling must be >= 0, got {self.gamma}")
        if int(self.m) != self.m or self.m < 0:
            raise ContractViolation(f"ancilla level must be a non-negative integer, got {self.m}")
        dim = self.m + 4 if self.dim is None else int(self.dim)
        if dim <= self.m + 1:
            raise InvalidDimensionError(f"truncation {dim} too small for ancilla level {self.m}")
        if self.t_grid is None:
            t_end = math.pi / (2 * self.gamma) if self.gamma > 0 else 1.0
            grid = np.linspace(0.0, t_end, 201)
        else:
            grid = np.array(self.t_grid, dtype=float)
        if grid.size < 1 or grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise ContractViolation("time grid must start at 0 and increase strictly")
        grid.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "t_grid", grid)

    @property
    def swap_time(self) -> float:
        """Resonant full-exchange time ``pi / (2 gamma)``."""
        return math.pi / (2 * self.gamma)


class TraceRow(NamedTuple):
    t: float
    ng_system: float
    ng_ancilla: float
    mutual_info: float
    fidelity: float
    eq16_residual: float


@dataclass(frozen=True)
class EvolutionTrace:
    rows: tuple[TraceRow, ...]
    config: ProtocolConfig = field(repr=False)

    columns = TraceRow._fields

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def __len__(self):
        return len(self.rows)


def _ladders(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = annihilation_matrix(dim).matrix
    dims = (dim, dim)
    return embed(a, 0, dims), embed(a, 1, dims)


def build_hamiltonian(cfg: ProtocolConfig) -> OperatorMatrix:
    a, b = _ladders(cfg.dim)
    ad, bd = a.conj().T, b.conj().T
    h = cfg.omega_s * ad @ a + cfg.omega_a * bd @ b + cfg.gamma * (ad @ b + a @ bd)
    return OperatorMatrix(h, "hamiltonian")


def total_number(dim: int) -> OperatorMatrix:
    a, b = _ladders(dim)
    return OperatorMatrix(a.conj().T @ a + b.conj().T @ b, "number")


def initial_state(cfg: ProtocolConfig) -> DensityMatrix:
    return tensor(fock_ket(0, cfg.omega_s, cfg.dim), fock_ket(cfg.m, cfg.omega_a, cfg.dim))


def _evolve_matrix(rho0: DensityMatrix, spec: Spectral, t: float) -> DensityMatrix:
    u = spec.unitary(t)
    out = u @ rho0.matrix @ u.conj().T
    return DensityMatrix(0.5 * (out + out.conj().T), rho0.mode_dims, rho0.omega_per_mode)


def evolve(rho0: DensityMatrix, hamiltonian: OperatorMatrix | Spectral, t: float) -> DensityMatrix:
    """``U rho0 U_dag`` with ``U = exp(-i H t)`` from the eigendecomposition of ``H``."""
    spec = hamiltonian if isinstance(hamiltonian, Spectral) else Spectral.of(hamiltonian)
    if spec.evals.size != rho0.dim:
        raise InvalidDimensionError(f"Hamiltonian size {spec.evals.size} vs state size {rho0.dim}")
    if t == 0:
        return rho0
    return _evolve_matrix(rho0, spec, t)


def _require_two_modes(rho: DensityMatrix) -> None:
    if rho.n_modes != 2:
        raise InvalidDimensionError(f"expected a two-mode state, got {rho.n_modes} mode(s)")


def mutual_information(rho: DensityMatrix) -> float:
    _require_two_modes(rho)
    s = von_neumann_entropy(partial_trace(rho, 0)) + von_neumann_entropy(partial_trace(rho, 1))
    return s - von_neumann_entropy(rho)


def quadrature_ops(rho: DensityMatrix) -> list[np.ndarray]:
    """``(q_S, p_S, q_A, p_A)`` as matrices on the two-mode space."""
    out = []
    for k, (d, w) in enumerate(zip(rho.mode_dims, rho.omega_per_mode)):
        a = annihilation_matrix(d).matrix
        q = (a + a.conj().T) / math.sqrt(2 * w)
        p = 1j * math.sqrt(w / 2) * (a.conj().T - a)
        out += [embed(q, k, rho.mode_dims), embed(p, k, rho.mode_dims)]
    return out


def two_mode_covariance(rho: DensityMatrix) -> np.ndarray:
    """4x4 covariance (no-half convention) in the ordering ``(q_S, p_S, q_A, p_A)``.

    Diagonal blocks come from the truncation-exact single-mode ladder
    moments; cross-mode blocks are products of commuting operators and are
    exact in the truncated space as well.
    """
    _require_two_modes(rho)
    sigma = np.zeros((4, 4))
    means = np.zeros(4)
    for k in range(2):
        mk = moments_of_state(rho, k)
        sigma[2 * k:2 * k + 2, 2 * k:2 * k + 2] = mk.sigma
        means[2 * k:2 * k + 2] = mk.d
    ops = quadrature_ops(rho)
    for i in range(2):
        for j in range(2, 4):
            second = 2 * np.trace(ops[i] @ ops[j] @ rho.matrix).real
            sigma[i, j] = sigma[j, i] = second - 2 * means[i] * means[j]
    return sigma


def symplectic_spectrum(sigma: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a ``2n x 2n`` covariance matrix (moduli of eig(i Omega sigma))."""
    n = sigma.shape[0] // 2
    omega = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    ev = np.abs(np.linalg.eigvals(1j * omega @ sigma))
    return np.sort(ev)[::2]


def global_reference_entropy(rho: DensityMatrix) -> float:
    nus = symplectic_spectrum(two_mode_covariance(rho))
    if np.any(nus < 1 - 1e-9):
        raise ContractViolation(f"symplectic eigenvalues below 1: {nus}")
    return float(sum(gaussian_entropy_from_nu(nu) for nu in nus))


def identity_terms(rho: DensityMatrix) -> dict[str, float]:
    """All entropies entering the mutual-information/nG identity, evaluated term by term."""
    _require_two_modes(rho)
    rho_s, rho_a = partial_trace(rho, 0), partial_trace(rho, 1)
    s_s, s_a, s = von_neumann_entropy(rho_s), von_neumann_entropy(rho_a), von_neumann_entropy(rho)
    g_s = reference_gaussian_entropy(moments_of_state(rho_s))
    g_a = reference_gaussian_entropy(moments_of_state(rho_a))
    g = global_reference_entropy(rho)
    i_sa = s_s + s_a - s
    i_sa_g = g_s + g_a - g
    return {
        "I_SA": i_sa,
        "I_SA_G": i_sa_g,
        "delta_I": i_sa - i_sa_g,
        "delta_S": g - s,
        "ng_S": g_s - s_s,
        "ng_A": g_a - s_a,
    }


def eq16_residual(rho: DensityMatrix) -> float:
    t = identity_terms(rho)
    return abs(t["delta_I"] - (t["delta_S"] - t["ng_S"] - t["ng_A"]))


def _check_leakage(rho: DensityMatrix, t: float) -> None:
    da, db = rho.mode_dims
    pops = np.diagonal(rho.matrix).real.reshape(da, db)
    top = max(pops[-1, :].sum(), pops[:, -1].sum())
    if top > LEAKAGE_TOL:
        raise TruncationLeakageError(f"top-level population {top:.3e} at t={t}; raise the truncation")


def _row(rho0: DensityMatrix, spec: Spectral, target: DensityMatrix, t: float) -> TraceRow:
    rho = evolve(rho0, spec, t)
    _check_leakage(rho, t)
    rho_s = partial_trace(rho, 0)
    return TraceRow(
        t=float(t),
        ng_system=ng_degree(rho_s),
        ng_ancilla=ng_degree(partial_trace(rho, 1)),
        mutual_info=mutual_information(rho),
        fidelity=fidelity(rho_s, target),
        eq16_residual=eq16_residual(rho),
    )


def run_protocol(cfg: ProtocolConfig, max_workers: int | None = None) -> EvolutionTrace:
    """Evolve ``|0>_S |m>_A`` over ``cfg.t_grid`` and record one :class:`TraceRow` per time.

    The Hamiltonian is diagonalized once; rows are independent and may be
    computed on ``max_workers`` threads. Row order always follows the grid.
    """
    spec = Spectral.of(build_hamiltonian(cfg))
    rho0 = initial_state(cfg)
    target = fock_ket(cfg.m, cfg.omega_s, cfg.dim)
    times = [float(t) for t in cfg.t_grid]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            rows = tuple(pool.map(lambda t: _row(rho0, spec, target, t), times))
    else:
        rows = tuple(_row(rho0, spec, target, t) for t in times)
    return EvolutionTrace(rows, cfg)


def _probe_infidelity(cfg: ProtocolConfig, spec: Spectral, psi0: np.ndarray, t: float) -> float:
    # summed off-target populations: no 1 - F cancellation near the swap
    amp = (spec.unitary(t) @ psi0).reshape(cfg.dim, cfg.dim)
    pops = np.sum(np.abs(amp) ** 2, axis=1)
    return float(np.sum(np.delete(pops, cfg.m)))


@dataclass(frozen=True)
class SwapTime:
    t_star: float
    fidelity: float
    reached: bool
    grid_index: int


def find_swap_time(cfg: ProtocolConfig, trace: EvolutionTrace | None = None) -> SwapTime:
    """Time at which the probe first matches ``|m>``.

    Starts from the first grid time with fidelity >= 1 - 1e-9 (or, failing
    that, the first local fidelity maximum) and refines it by golden-section
    search between the neighboring grid points.
    """
    trace = trace if trace is not None else run_protocol(cfg)
    fid = trace.column("fidelity")
    t = trace.column("t")
    hits = np.flatnonzero(fid >= 1 - SWAP_FIDELITY_TOL)
    if hits.size:
        i = int(hits[0])
    else:
        peaks = [k for k in range(len(fid)) if fid[k] >= fid[max(k - 1, 0)] and (k + 1 == len(fid) or fid[k] >= fid[k + 1])]
        peaks = [k for k in peaks if k > 0] or [int(np.argmax(fid))]
        i = peaks[0]
    dt = t[1] - t[0] if len(t) > 1 else cfg.swap_time
    lo = t[i - 1] if i > 0 else 0.0
    hi = t[i + 1] if i + 1 < len(t) else t[i] + (t[i] - t[i - 1] if i > 0 else dt)
    spec = Spectral.of(build_hamiltonian(cfg))
    psi0 = np.kron(fock_ket(0, cfg.omega_s, cfg.dim).coeffs, fock_ket(cfg.m, cfg.omega_a, cfg.dim).coeffs)
    obj = lambda s: _probe_infidelity(cfg, spec, psi0, s)
    try:
        res = minimize_scalar(obj, bracket=(lo, t[i], hi), method="golden", options={"xtol": 1e-14})
        t_star = float(res.x)
    except ValueError:
        # t[i] is not strictly below both ends: fall back to the grid point
        t_star = float(t[i])
    if not lo <= t_star <= hi:
        raise NumericalError(f"swap-time refinement left its bracket [{lo}, {hi}]: {t_star}")
    f_star = 1.0 - obj(t_star)
    return SwapTime(t_star, f_star, f_star >= 1 - SWAP_FIDELITY_TOL, i)
