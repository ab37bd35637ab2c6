"""Dense complex linear-algebra kernel used by every other module.

Conventions, fixed project-wide:

* Operators and states are dense complex ``numpy`` arrays.
* Vectorization is column-stacking (Fortran order), so
  ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
* Logarithms are natural; every entropy in this package is in nats.
* Eigenvalues of numerical states in ``(-EIG_CLIP_TOL, 0)`` are clipped to
  zero; anything more negative is an error, never silently repaired.
"""
from __future__ import annotations

import warnings
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    ContractViolationError,
    DegenerateSteadyStateError,
    DimensionError,
    PSDViolationError,
)

#: elementwise tolerance for Hermiticity preconditions
HERMITICITY_TOL = 1e-10
#: eigenvalues in (-EIG_CLIP_TOL, 0) from numerical steady states are treated as 0
EIG_CLIP_TOL = 1e-10
#: default support cutoff for matrix logarithms
LOG_SUPPORT_CUTOFF = 1e-12


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    out = np.asarray(m, dtype=complex)
    if out.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ContractViolationError(f"{name} contains NaN or Inf entries")
    return out


def require_square(m, name: str = "matrix") -> np.ndarray:
    out = as_complex_matrix(m, name)
    if out.shape[0] != out.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {out.shape}")
    return out


def require_hermitian(m, tol: float = HERMITICITY_TOL, name: str = "matrix") -> np.ndarray:
    out = require_square(m, name)
    deviation = float(np.max(np.abs(out - out.conj().T))) if out.size else 0.0
    if deviation > tol:
        raise ContractViolationError(
            f"{name} is not Hermitian within {tol:g} (deviation {deviation:.3e})"
        )
    return out


def vec(m) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v, dim: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


def kron(a, b) -> np.ndarray:
    """Kronecker product of two complex matrices."""
    return np.kron(as_complex_matrix(a, "a"), as_complex_matrix(b, "b"))


class HermitianEigen(NamedTuple):
    values: np.ndarray   # real eigenvalues, ascending
    vectors: np.ndarray  # unitary matrix whose columns are the eigenvectors


def hermitian_eig(m, tol: float = HERMITICITY_TOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    checked = require_hermitian(m, tol)
    values, vectors = np.linalg.eigh(checked)
    return HermitianEigen(values, vectors)


class MatrixLogSupport(NamedTuple):
    logm: np.ndarray     # natural log on the support, zero elsewhere
    support: np.ndarray  # projector onto the retained eigenspace


def matrix_log_support(m, cutoff: float = LOG_SUPPORT_CUTOFF) -> MatrixLogSupport:
    """Natural matrix logarithm of a Hermitian PSD matrix on its support.

    Eigenvalues at or below ``cutoff`` are excluded from the support and
    contribute zero to the logarithm.  Eigenvalues below
    ``-max(cutoff, EIG_CLIP_TOL)`` violate positive semidefiniteness and
    raise :class:`PSDViolationError`.
    """
    values, vectors = hermitian_eig(m)
    if values.size and values[0] < -max(cutoff, EIG_CLIP_TOL):
        raise PSDViolationError(
            f"matrix has negative eigenvalue {values[0]:.3e}, not PSD within tolerance"
        )
    on_support = values > cutoff
    log_values = np.zeros_like(values)
    log_values[on_support] = np.log(values[on_support])
    logm = (vectors * log_values) @ vectors.conj().T
    support = (vectors * on_support.astype(float)) @ vectors.conj().T
    return MatrixLogSupport(logm, support)


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` lists the subsystem dimensions in Kronecker order; ``keep`` is a
    collection of factor indices to retain (original order preserved).
    """
    mat = require_square(m)
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"dims must be positive, got {dims}")
    total = int(np.prod(dims))
    if mat.shape != (total, total):
        raise DimensionError(f"matrix of shape {mat.shape} does not match dims {dims}")
    keep = sorted({int(k) for k in keep})
    if not keep:
        raise DimensionError("keep must name at least one factor")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise DimensionError(f"keep {keep} out of range for {len(dims)} factors")
    tensor = mat.reshape(dims + dims)
    nrow = len(dims)
    for site in sorted(set(range(len(dims))) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=site, axis2=nrow + site)
        nrow -= 1
    kept_dim = int(np.prod([dims[k] for k in keep]))
    return np.ascontiguousarray(tensor.reshape(kept_dim, kept_dim))


def trace_norm_hermitian(m, tol: float = HERMITICITY_TOL) -> float:
    """Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.

    The general singular-value path is deliberately out of scope: every use
    in this package is a Hermitian difference of states.
    """
    checked = require_hermitian(m, tol)
    return float(np.sum(np.abs(np.linalg.eigvalsh(checked))))


def clip_negative_eigenvalues(m, tol: float = EIG_CLIP_TOL) -> np.ndarray:
    """Zero eigenvalues in ``(-tol, 0)``; raise beyond ``-tol``."""
    values, vectors = hermitian_eig(m, tol=max(HERMITICITY_TOL, tol))
    if values.size and values[0] < -tol:
        raise PSDViolationError(
            f"eigenvalue {values[0]:.3e} below clipping tolerance -{tol:g}"
        )
    clipped = np.clip(values, 0.0, None)
    return (vectors * clipped) @ vectors.conj().T


class BorderedSolution(NamedTuple):
    x: np.ndarray
    residual: float  # Euclidean norm of a @ x


def solve_bordered(a, constraint_row, rhs_value) -> BorderedSolution:
    """Solve ``a @ x = 0`` subject to ``constraint_row @ x = rhs_value``.

    Fast path: replace the row of ``a`` holding the largest-magnitude diagonal
    entry (the most redundant population row of a trace-preserving generator)
    by the constraint row and solve the square system.  If that system is
    singular or leaves a poor residual, fall back to a stacked least-squares
    solve.  A rank-deficient stacked system means the solution is not unique
    and raises :class:`DegenerateSteadyStateError`.
    """
    mat = require_square(a, "a")
    n = mat.shape[0]
    c = np.asarray(constraint_row, dtype=complex).reshape(-1)
    if c.shape != (n,):
        raise DimensionError(f"constraint row of length {c.shape[0]} does not match n={n}")
    scale = max(float(np.linalg.norm(mat)), 1.0)

    replaced = mat.copy()
    row = int(np.argmax(np.abs(np.diag(mat)))) if n else 0
    replaced[row] = c
    b = np.zeros(n, dtype=complex)
    b[row] = rhs_value
    x = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # singular pivots surface as rcond = 0
        try:
            lu, piv = scipy.linalg.lu_factor(replaced, check_finite=False)
        except (ValueError, np.linalg.LinAlgError):
            lu = None
    if lu is not None:
        anorm = float(np.linalg.norm(replaced, 1))
        rcond, _ = scipy.linalg.lapack.zgecon(lu, anorm)
        # an ill-conditioned replaced system means the kernel is (nearly)
        # degenerate; defer to the least-squares rank decision below
        if np.isfinite(rcond) and rcond > 1e-13:
            x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    if x is not None and np.all(np.isfinite(x)):
        xnorm = max(float(np.linalg.norm(x)), 1.0)
        residual = float(np.linalg.norm(mat @ x))
        constraint_err = abs(c @ x - rhs_value)
        if residual <= 1e-10 * scale * xnorm and constraint_err <= 1e-10 * xnorm * max(abs(rhs_value), 1.0):
            return BorderedSolution(x, residual)

    stacked = np.vstack([mat, c[None, :]])
    rhs = np.zeros(n + 1, dtype=complex)
    rhs[n] = rhs_value
    x, _, rank, _ = np.linalg.lstsq(stacked, rhs, rcond=None)
    if rank < n:
        raise DegenerateSteadyStateError(
            f"bordered system has rank {rank} < {n}: solution is not unique"
        )
    residual = float(np.linalg.norm(mat @ x))
    return BorderedSolution(x, residual)
