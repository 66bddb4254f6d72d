"""Photon-number POVM for measurement-based preparation of excited probe states.

Two Kraus operators with strength ``p``:

    M1 = sqrt(1-p) * I,    M2 = sqrt(p) * sum_n |n+1><n|

On a truncated space ``M2`` annihilates the top level instead of wrapping,
so completeness holds on levels ``0..dim-2``; inputs must leave the top
level empty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRangeError, InvalidDimensionError, TruncationLeakageError
from .gaussian_ref import ng_degree
from .hilbert import DensityMatrix, OperatorMatrix, fock_density
from .metrology import qfi_fock_closed

LEAKAGE_GUARD = 1e-10
DEFAULT_DIM = 8


@dataclass(frozen=True)
class KrausChannel:
    operators: tuple[OperatorMatrix, ...]
    p: float

    @property
    def dim(self) -> int:
        return self.operators[0].dim

    def completeness_residual(self) -> float:
        """Max deviation of ``sum M_dag M`` from identity on the guarded levels ``0..dim-2``."""
        total = sum(op.dag @ op.matrix for op in self.operators)
        keep = self.dim - 1
        return float(np.max(np.abs(total[:keep, :keep] - np.eye(keep))))


def build_channel(p: float, dim: int = DEFAULT_DIM) -> KrausChannel:
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"measurement strength must lie in [0, 1], got {p}")
    if dim < 2:
        raise InvalidDimensionError(f"truncation must be >= 2, got {dim}")
    m1 = np.sqrt(1 - p) * np.eye(dim)
    m2 = np.sqrt(p) * np.eye(dim, k=-1)  # |n+1><n|, top level sent to zero
    return KrausChannel((OperatorMatrix(m1, "kraus"), OperatorMatrix(m2, "kraus")), float(p))


def apply_channel(rho: DensityMatrix, ch: KrausChannel) -> DensityMatrix:
    if rho.n_modes != 1 or rho.dim != ch.dim:
        raise InvalidDimensionError(f"channel of size {ch.dim} applied to state of size {rho.dim}")
    top = rho.matrix[-1, -1].real
    if top > LEAKAGE_GUARD:
        raise TruncationLeakageError(f"top-level population {top:.3e} would leak out of the truncation")
    out = sum(op.matrix @ rho.matrix @ op.dag for op in ch.operators)
    return DensityMatrix(0.5 * (out + out.conj().T), rho.mode_dims, rho.omega_per_mode)


@dataclass(frozen=True)
class PreparedProbe:
    """Outcome of preparing a probe from the vacuum.

    ``qfi`` is set only at the endpoint ``p = 1``, where the output is the
    pure state ``|1>``. Any ``p < 1`` is flagged and carries the prepared
    state and its nG-degree instead of a QFI.
    """

    p: float
    omega: float
    state: DensityMatrix
    ng_degree: float
    flagged: bool
    qfi: float | None = None


def prepared_probe_qfi(p: float, omega: float = 1.0, dim: int = DEFAULT_DIM) -> PreparedProbe:
    vacuum = fock_density(0, omega, dim)
    state = apply_channel(vacuum, build_channel(p, dim))
    if p == 1.0:
        return PreparedProbe(p, omega, state, ng_degree(state), False, qfi_fock_closed(1, omega).qfi)
    return PreparedProbe(p, omega, state, ng_degree(state), True)
