"""Liouvillian superoperators, steady states, and a time-evolution oracle.

Under the column-stacking convention the Lindblad generator

    rho_dot = -i[H, rho] + sum_k rate_k * (2 O_k rho O_k^+ - {O_k^+ O_k, rho}) / 2

becomes the dense matrix

    L = -i (I (x) H - H^T (x) I)
        + sum_k rate_k * [ (O_k^* (x) O_k) - (I (x) O_k^+ O_k)/2 - ((O_k^+ O_k)^T (x) I)/2 ].

Rates enter exactly as stored on the :class:`DissipatorTerm`; any 1/2
prefactor printed with a model's dissipator belongs to the model catalog,
not to this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    ContractViolationError,
    DegenerateSteadyStateError,
    DimensionError,
    IntegrationError,
    PSDViolationError,
)
from .linalg import (
    as_complex_matrix,
    clip_negative_eigenvalues,
    require_square,
    solve_bordered,
    unvec,
    vec,
)
from .states import STATE_EIG_TOL, DensityMatrix

#: absolute (scale-relative) tolerance on trace preservation of a Liouvillian
TRACE_PRESERVATION_TOL = 1e-9
#: steady-state residual gate, relative to the Frobenius norm of L
STEADY_STATE_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DissipatorTerm:
    """Jump operator with its nonnegative rate (units of the reference decay rate)."""

    operator: np.ndarray
    rate: float

    def __post_init__(self):
        op = require_square(self.operator, "jump operator")
        rate = float(self.rate)
        if rate < 0.0:
            raise ContractViolationError(f"dissipator rate must be >= 0, got {rate}")
        object.__setattr__(self, "operator", op)
        object.__setattr__(self, "rate", rate)


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Dense d^2 x d^2 matrix acting on column-vectorized operators."""

    matrix: np.ndarray
    hilbert_dims: tuple[int, ...]

    def __post_init__(self):
        mat = as_complex_matrix(self.matrix, "superoperator")
        dims = tuple(int(d) for d in (self.hilbert_dims if isinstance(self.hilbert_dims, (tuple, list)) else (self.hilbert_dims,)))
        d = int(np.prod(dims))
        if mat.shape != (d * d, d * d):
            raise DimensionError(
                f"superoperator shape {mat.shape} does not match Hilbert dims {dims}"
            )
        # trace preservation: vec(I)^+ L = 0
        trace_row = vec(np.eye(d, dtype=complex)).conj() @ mat
        tol = TRACE_PRESERVATION_TOL * max(1.0, float(np.max(np.abs(mat))) if mat.size else 1.0)
        worst = float(np.max(np.abs(trace_row))) if trace_row.size else 0.0
        if worst > tol:
            raise ContractViolationError(
                f"superoperator is not trace preserving: max |vec(I)^+ L| = {worst:.3e}"
            )
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "hilbert_dims", dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.hilbert_dims))

    def apply(self, rho_matrix) -> np.ndarray:
        """Action on an operator given as a matrix."""
        mat = as_complex_matrix(rho_matrix, "rho")
        if mat.shape != (self.dim, self.dim):
            raise DimensionError("operator dimension does not match superoperator")
        return unvec(self.matrix @ vec(mat), self.dim)


def _dissipator_matrix(op: np.ndarray, rate: float) -> np.ndarray:
    d = op.shape[0]
    eye = np.eye(d, dtype=complex)
    opdop = op.conj().T @ op
    return rate * (
        np.kron(op.conj(), op)
        - 0.5 * np.kron(eye, opdop)
        - 0.5 * np.kron(opdop.T, eye)
    )


def dissipator_super(term: DissipatorTerm, dims: Sequence[int] | None = None) -> Superoperator:
    """Superoperator of a single Lindblad dissipator ``rate * D[O]``."""
    d = term.operator.shape[0]
    return Superoperator(_dissipator_matrix(term.operator, term.rate), tuple(dims) if dims else (d,))


def liouvillian(h, terms: Sequence[DissipatorTerm], dims: Sequence[int] | None = None) -> Superoperator:
    """Full generator ``-i[H, .] + sum of dissipators``."""
    ham = require_square(h, "Hamiltonian")
    d = ham.shape[0]
    eye = np.eye(d, dtype=complex)
    total = -1j * (np.kron(eye, ham) - np.kron(ham.T, eye))
    for term in terms:
        if term.operator.shape != (d, d):
            raise DimensionError(
                f"jump operator shape {term.operator.shape} does not match Hamiltonian dim {d}"
            )
        total += _dissipator_matrix(term.operator, term.rate)
    return Superoperator(total, tuple(dims) if dims else (d,))


class SteadyStateResult(NamedTuple):
    state: DensityMatrix
    residual: float  # ||L vec(rho)||_2


def solve_steady_state(l: Superoperator) -> SteadyStateResult:
    """Unique normalized kernel element of a trace-preserving Liouvillian.

    The redundant population row is replaced by the vectorized trace
    constraint (see :func:`qsync.linalg.solve_bordered`); the result is
    symmetrized and eigenvalue-clipped before validation.
    """
    d = l.dim
    trace_row = vec(np.eye(d, dtype=complex)).conj()
    solution = solve_bordered(l.matrix, trace_row, 1.0)
    scale = max(float(np.linalg.norm(l.matrix)), 1.0)
    if solution.residual > STEADY_STATE_RESIDUAL_TOL * scale:
        raise DegenerateSteadyStateError(
            f"steady-state residual {solution.residual:.3e} exceeds "
            f"{STEADY_STATE_RESIDUAL_TOL:g} * ||L||"
        )
    rho = unvec(solution.x, d)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    rho = clip_negative_eigenvalues(rho, tol=STATE_EIG_TOL)
    rho = rho / np.trace(rho).real
    return SteadyStateResult(DensityMatrix(rho, l.hilbert_dims), solution.residual)


def steady_state(l: Superoperator) -> DensityMatrix:
    return solve_steady_state(l).state


def evolve_rk4(rho0: DensityMatrix, l: Superoperator, t_final: float, dt: float) -> DensityMatrix:
    """Classical fixed-step RK4 integration of ``vec(rho_dot) = L vec(rho)``.

    The trace is renormalized every step; a drift beyond 1e-3 before
    renormalization signals instability and raises, suggesting a smaller dt.
    Serves as the independent oracle for :func:`steady_state`.
    """
    if dt <= 0.0:
        raise ContractViolationError(f"dt must be positive, got {dt}")
    if t_final < 0.0:
        raise ContractViolationError(f"t_final must be >= 0, got {t_final}")
    if rho0.dims != l.hilbert_dims:
        raise DimensionError("initial state dims do not match the Liouvillian")
    if t_final == 0.0:
        return rho0
    d = l.dim
    steps = max(1, math.ceil(t_final / dt - 1e-12))
    h = t_final / steps
    m = l.matrix
    v = vec(rho0.matrix)
    diag_idx = np.arange(d) * (d + 1)
    for _ in range(steps):
        k1 = m @ v
        k2 = m @ (v + (0.5 * h) * k1)
        k3 = m @ (v + (0.5 * h) * k2)
        k4 = m @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        trace = v[diag_idx].sum()
        if not np.isfinite(trace) or abs(trace - 1.0) > 1e-3:
            raise IntegrationError(
                f"trace drifted to {trace}: integration unstable, reduce dt below {h:g}"
            )
        v = v / trace
    rho = unvec(v, d)
    rho = 0.5 * (rho + rho.conj().T)
    try:
        rho = clip_negative_eigenvalues(rho, tol=STATE_EIG_TOL)
    except PSDViolationError as exc:
        raise IntegrationError(
            f"integrated state is not PSD ({exc}); reduce dt below {h:g}"
        ) from exc
    rho = rho / np.trace(rho).real
    return DensityMatrix(rho, l.hilbert_dims)


def suggested_timestep(l: Superoperator, safety: float = 0.7) -> float:
    """Stable RK4 step from a Gershgorin bound on the Liouvillian spectrum."""
    bound = float(np.max(np.sum(np.abs(l.matrix), axis=1)))
    if bound == 0.0:
        return 1.0
    return safety * 2.78 / bound


def spectral_gap(l: Superoperator) -> float:
    """Second-smallest |Re| over the Liouvillian spectrum; 0 signals degeneracy.

    Requires a full dense eigendecomposition, by far the most expensive
    diagnostic in the package, so it is strictly opt-in.
    """
    values = np.linalg.eigvals(l.matrix)
    magnitudes = np.sort(np.abs(values.real))
    if magnitudes.size < 2:
        return 0.0
    return float(magnitudes[1])
