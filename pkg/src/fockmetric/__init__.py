"""Frequency estimation with bosonic Fock-state probes.

Quantum Fisher information, relative-entropy non-Gaussianity, ancilla
transfer dynamics and measurement-based state preparation for a single
harmonic mode, with numerical cross-checks of every closed form.
"""

from .errors import (
    ContractViolation,
    DomainError,
    FockMetricError,
    InvalidDimensionError,
    NumericalError,
    OutOfRangeError,
    TruncationLeakageError,
    UnboundedVarianceError,
)
from .hilbert import DensityMatrix, OperatorMatrix, PureKet, fock_density, fock_ket
from .gaussian_ref import GaussianMoments, ng_degree, ng_degree_fock
from .metrology import QfiReport, qfi_fock_closed, qfi_gaussian_fock
from .dynamics import EvolutionTrace, ProtocolConfig, run_protocol
from .measurement import KrausChannel, apply_channel, build_channel

__version__ = "0.1.0"
