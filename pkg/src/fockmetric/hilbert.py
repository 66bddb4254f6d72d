"""Truncated Fock-space linear algebra.

Kets, density matrices and operators over one or two truncated bosonic
modes, plus the handful of information-theoretic quantities needed
elsewhere (entropy, fidelity, partial trace). Units: hbar = 1.

All containers are frozen dataclasses holding read-only numpy arrays, so
every function here is pure and safe to call from parallel sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import ContractViolation, InvalidDimensionError, OutOfRangeError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NEG_EIG_TOL = 1e-10
EIG_CLIP = 1e-14

OPERATOR_KINDS = ("annihilation", "number", "hamiltonian", "kraus", "generic")


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureKet:
    """Amplitude vector over Fock levels ``0..dim-1`` of a mode with frequency ``omega``."""

    coeffs: np.ndarray
    omega: float = 1.0

    def __post_init__(self):
        coeffs = _frozen(self.coeffs)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise InvalidDimensionError("ket coefficients must be a non-empty vector")
        if not self.omega > 0:
            raise ContractViolation(f"mode frequency must be positive, got {self.omega}")
        norm = np.vdot(coeffs, coeffs).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractViolation(f"ket is not normalized: |c|^2 = {norm!r}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "omega", float(self.omega))

    @property
    def dim(self) -> int:
        return self.coeffs.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.coeffs, self.coeffs.conj()), (self.dim,), (self.omega,))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix over one or two modes.

    ``mode_dims`` lists the truncation of each mode; their product must equal
    the matrix dimension. Validation happens at construction.
    """

    matrix: np.ndarray
    mode_dims: tuple = ()
    omega_per_mode: tuple = ()

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise InvalidDimensionError(f"density matrix must be square, got shape {mat.shape}")
        dims = tuple(int(d) for d in self.mode_dims) or (mat.shape[0],)
        if int(np.prod(dims)) != mat.shape[0]:
            raise InvalidDimensionError(f"mode dims {dims} do not match matrix size {mat.shape[0]}")
        omegas = tuple(float(w) for w in self.omega_per_mode) or (1.0,) * len(dims)
        if len(omegas) != len(dims) or any(not w > 0 for w in omegas):
            raise ContractViolation(f"need one positive frequency per mode, got {omegas}")
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERMITIAN_TOL:
            raise ContractViolation(f"density matrix is not Hermitian (deviation {herm:.3e})")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ContractViolation(f"density matrix trace is {tr!r}, expected 1")
        lam_min = np.linalg.eigvalsh(_hermitize(mat))[0]
        if lam_min < -NEG_EIG_TOL:
            raise ContractViolation(f"density matrix has negative eigenvalue {lam_min:.3e}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "mode_dims", dims)
        object.__setattr__(self, "omega_per_mode", omegas)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_modes(self) -> int:
        return len(self.mode_dims)

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray
    kind: str = "generic"

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidDimensionError(f"operator must be square, got shape {mat.shape}")
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dag(self) -> np.ndarray:
        return self.matrix.conj().T

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.dag), initial=0.0) <= tol)


StateLike = Union[DensityMatrix, PureKet]


def _hermitize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def _as_density(state: StateLike) -> DensityMatrix:
    return state.density() if isinstance(state, PureKet) else state


def annihilation_matrix(dim: int) -> OperatorMatrix:
    """Lowering operator with ``a[n-1, n] = sqrt(n)``; ``.dag`` gives the raising operator."""
    if dim < 1:
        raise InvalidDimensionError(f"truncation must be >= 1, got {dim}")
    return OperatorMatrix(np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1), "annihilation")


def number_matrix(dim: int) -> OperatorMatrix:
    if dim < 1:
        raise InvalidDimensionError(f"truncation must be >= 1, got {dim}")
    return OperatorMatrix(np.diag(np.arange(dim, dtype=float)), "number")


def fock_ket(n: int, omega: float = 1.0, dim: int = 32) -> PureKet:
    if dim < 1:
        raise InvalidDimensionError(f"truncation must be >= 1, got {dim}")
    if not 0 <= n < dim:
        raise OutOfRangeError(f"Fock level {n} outside truncation 0..{dim - 1}")
    coeffs = np.zeros(dim, dtype=complex)
    coeffs[n] = 1.0
    return PureKet(coeffs, omega)


def fock_density(n: int, omega: float = 1.0, dim: int = 32) -> DensityMatrix:
    return fock_ket(n, omega, dim).density()


def diagonal_state(populations: Sequence[float], omega: float = 1.0) -> DensityMatrix:
    """Fock-diagonal density matrix with the given level populations."""
    return DensityMatrix(np.diag(np.asarray(populations, dtype=float)), (len(populations),), (omega,))


def _entropy_of_matrix(mat: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(_hermitize(mat))
    lam = lam[lam > EIG_CLIP]
    return float(max(-np.sum(lam * np.log(lam)), 0.0))


def von_neumann_entropy(rho: StateLike) -> float:
    """Entropy in nats; eigenvalues below 1e-14 count as zero."""
    if isinstance(rho, PureKet):
        return 0.0
    if not isinstance(rho, DensityMatrix):
        mat = np.asarray(rho, dtype=complex)
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise ContractViolation("entropy requires a Hermitian matrix")
        return _entropy_of_matrix(mat)
    return _entropy_of_matrix(rho.matrix)


def _pure_vector(rho: DensityMatrix) -> np.ndarray | None:
    if abs(rho.purity() - 1.0) > 1e-10:
        return None
    lam, vecs = np.linalg.eigh(_hermitize(rho.matrix))
    return vecs[:, -1]


def fidelity_general(rho1: StateLike, rho2: StateLike) -> float:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))**2`` via eigendecompositions."""
    r1, r2 = _as_density(rho1), _as_density(rho2)
    if r1.dim != r2.dim:
        raise InvalidDimensionError(f"fidelity of states with dims {r1.dim} and {r2.dim}")
    # Tr sqrt(sqrt1 rho2 sqrt1) is the nuclear norm of sqrt1 @ sqrt2
    f = np.sum(np.linalg.svd(_psd_sqrt(r1.matrix) @ _psd_sqrt(r2.matrix), compute_uv=False)) ** 2
    return float(min(max(f, 0.0), 1.0))


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    lam, vecs = np.linalg.eigh(_hermitize(mat))
    lam = np.where(lam > EIG_CLIP, lam, 0.0)
    return (vecs * np.sqrt(lam)) @ vecs.conj().T


def fidelity(rho1: StateLike, rho2: StateLike) -> float:
    """Uhlmann fidelity; reduces to ``<psi|rho|psi>`` when either argument is pure."""
    r1, r2 = _as_density(rho1), _as_density(rho2)
    if r1.dim != r2.dim:
        raise InvalidDimensionError(f"fidelity of states with dims {r1.dim} and {r2.dim}")
    for pure, other in ((rho2, r1), (rho1, r2)):
        vec = pure.coeffs if isinstance(pure, PureKet) else _pure_vector(_as_density(pure))
        if vec is not None:
            f = np.vdot(vec, other.matrix @ vec).real
            return float(min(max(f, 0.0), 1.0))
    return fidelity_general(r1, r2)


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduced state of mode ``keep`` (0 or 1) of a two-mode density matrix."""
    if rho.n_modes != 2:
        raise InvalidDimensionError(f"partial trace needs a two-mode state, got {rho.n_modes} mode(s)")
    if keep not in (0, 1):
        raise OutOfRangeError(f"keep must be 0 or 1, got {keep}")
    da, db = rho.mode_dims
    t = rho.matrix.reshape(da, db, da, db)
    red = np.einsum("ijkj->ik", t) if keep == 0 else np.einsum("ijil->jl", t)
    return DensityMatrix(_hermitize(red), (rho.mode_dims[keep],), (rho.omega_per_mode[keep],))


def tensor(rho_a: StateLike, rho_b: StateLike) -> DensityMatrix:
    a, b = _as_density(rho_a), _as_density(rho_b)
    return DensityMatrix(
        np.kron(a.matrix, b.matrix),
        a.mode_dims + b.mode_dims,
        a.omega_per_mode + b.omega_per_mode,
    )


def expectation(op: OperatorMatrix | np.ndarray, rho: StateLike) -> complex:
    mat = op.matrix if isinstance(op, OperatorMatrix) else np.asarray(op)
    r = _as_density(rho)
    if mat.shape != r.matrix.shape:
        raise InvalidDimensionError(f"operator shape {mat.shape} vs state shape {r.matrix.shape}")
    return complex(np.trace(mat @ r.matrix))


def embed(op: np.ndarray, mode: int, mode_dims: Sequence[int]) -> np.ndarray:
    """Lift a single-mode operator onto the tensor space ``mode_dims``."""
    out = np.ones((1, 1), dtype=complex)
    for k, d in enumerate(mode_dims):
        out = np.kron(out, op if k == mode else np.eye(d))
    return out


@dataclass(frozen=True)
class Spectral:
    """Eigendecomposition of a Hermitian generator, cached for repeated exponentials."""

    evals: np.ndarray
    evecs: np.ndarray = field(repr=False)

    @classmethod
    def of(cls, hamiltonian: OperatorMatrix | np.ndarray) -> "Spectral":
        mat = hamiltonian.matrix if isinstance(hamiltonian, OperatorMatrix) else np.asarray(hamiltonian)
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > 1e-12:
            raise ContractViolation("generator is not Hermitian")
        lam, vecs = np.linalg.eigh(_hermitize(mat))
        lam.setflags(write=False)
        vecs.setflags(write=False)
        return cls(lam, vecs)

    def unitary(self, t: float) -> np.ndarray:
        """``exp(-i H t)``."""
        return (self.evecs * np.exp(-1j * self.evals * t)) @ self.evecs.conj().T


def unitary_from_hermitian(h: OperatorMatrix | np.ndarray, t: float = 1.0) -> np.ndarray:
    return Spectral.of(h).unitary(t)
