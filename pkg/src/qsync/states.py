"""Validated density matrices with subsystem bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ContractViolationError, DimensionError, PSDViolationError
from .linalg import as_complex_matrix, partial_trace

#: elementwise Hermiticity tolerance for states
STATE_HERMITICITY_TOL = 1e-9
#: allowed deviation of the trace from 1
STATE_TRACE_TOL = 1e-9
#: most negative eigenvalue a state may carry
STATE_EIG_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, PSD matrix tagged with subsystem dimensions.

    Construction from a matrix that violates any of the three invariants
    fails loudly; the stored array is an immutable copy.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = as_complex_matrix(self.matrix, "density matrix")
        dims = tuple(int(d) for d in (self.dims if isinstance(self.dims, (tuple, list)) else (self.dims,)))
        if any(d < 1 for d in dims):
            raise DimensionError(f"subsystem dims must be positive, got {dims}")
        total = int(np.prod(dims))
        if mat.shape != (total, total):
            raise DimensionError(
                f"matrix of shape {mat.shape} does not match dims {dims} (product {total})"
            )
        deviation = float(np.max(np.abs(mat - mat.conj().T)))
        if deviation > STATE_HERMITICITY_TOL:
            raise ContractViolationError(
                f"density matrix not Hermitian within {STATE_HERMITICITY_TOL:g} "
                f"(deviation {deviation:.3e})"
            )
        trace_err = abs(np.trace(mat) - 1.0)
        if trace_err > STATE_TRACE_TOL:
            raise ContractViolationError(
                f"density matrix trace deviates from 1 by {trace_err:.3e}"
            )
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -STATE_EIG_TOL:
            raise PSDViolationError(
                f"density matrix has eigenvalue {min_eig:.3e} < -{STATE_EIG_TOL:g}"
            )
        frozen = mat.copy()
        frozen.setflags(write=False)
        object.__setattr__(self, "matrix", frozen)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def populations(self) -> np.ndarray:
        """Diagonal of the state in the composite product basis."""
        return np.real(np.diag(self.matrix)).copy()

    def marginal(self, keep: Sequence[int]) -> "DensityMatrix":
        """Reduced state over the factors listed in ``keep``."""
        keep = tuple(sorted({int(k) for k in keep}))
        reduced = partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(reduced, tuple(self.dims[k] for k in keep))


def pure_state(amplitudes, dims) -> DensityMatrix:
    """Projector onto a normalized state vector."""
    vec_ = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(vec_)
    if norm == 0.0:
        raise ContractViolationError("state vector must be nonzero")
    vec_ = vec_ / norm
    return DensityMatrix(np.outer(vec_, vec_.conj()), dims)


def basis_state(index: int, dims) -> DensityMatrix:
    """Projector onto a single composite product-basis vector."""
    dims = tuple(int(d) for d in (dims if isinstance(dims, (tuple, list)) else (dims,)))
    total = int(np.prod(dims))
    vec_ = np.zeros(total, dtype=complex)
    vec_[index] = 1.0
    return pure_state(vec_, dims)


def maximally_mixed(dims) -> DensityMatrix:
    dims = tuple(int(d) for d in (dims if isinstance(dims, (tuple, list)) else (dims,)))
    total = int(np.prod(dims))
    return DensityMatrix(np.eye(total, dtype=complex) / total, dims)


def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Diagonal part of the state in the composite product eigenbasis.

    Idempotent and trace preserving; this is the dephasing basis for every
    model in the catalog (product eigenbasis of the undriven, uncoupled
    Hamiltonians).
    """
    return DensityMatrix(np.diag(np.diag(rho.matrix)), rho.dims)


def expectation(rho: DensityMatrix, op) -> complex:
    """``Tr[rho @ op]``."""
    mat = as_complex_matrix(op, "op")
    if mat.shape != rho.matrix.shape:
        raise DimensionError(
            f"operator shape {mat.shape} does not match state dimension {rho.dim}"
        )
    return complex(np.trace(rho.matrix @ mat))
