"""Entropic, coherence, distance, and comparison measures on density matrices.

All entropies are natural-log (nats).  A relative entropy evaluated across
mismatched supports is the value ``inf``, not an error: the trace-distance
measure is the prescribed fallback in that regime.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from .errors import ContractViolationError, DimensionError
from .linalg import LOG_SUPPORT_CUTOFF, matrix_log_support, trace_norm_hermitian
from .operators import boson_ops
from .states import DensityMatrix, dephase, expectation

#: a state may place at most this much weight outside the reference support
#: before the relative entropy is reported as infinite
SUPPORT_TOL = 1e-10


def as_populations(values, tol: float = 1e-9) -> np.ndarray:
    """Validate and return a probability vector."""
    p = np.asarray(values, dtype=float).reshape(-1)
    if p.size == 0:
        raise DimensionError("population vector must be nonempty")
    if np.min(p) < -tol:
        raise ContractViolationError(f"negative population {np.min(p):.3e}")
    total = float(np.sum(p))
    if abs(total - 1.0) > tol:
        raise ContractViolationError(f"populations sum to {total}, expected 1")
    return np.clip(p, 0.0, None)


def _entropy_from_eigenvalues(values: np.ndarray) -> float:
    lam = np.clip(values, 0.0, None)
    return float(-np.sum(xlogy(lam, lam)))


def vn_entropy(rho: DensityMatrix) -> float:
    """von Neumann entropy -Tr[rho ln rho] in nats."""
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(rho.matrix))


def relative_entropy(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    support_cutoff: float = LOG_SUPPORT_CUTOFF,
    support_tol: float = SUPPORT_TOL,
) -> float:
    """Tr[rho ln rho - rho ln sigma]; ``inf`` when supp(rho) escapes supp(sigma)."""
    if rho.dims != sigma.dims:
        raise DimensionError(f"state dims differ: {rho.dims} vs {sigma.dims}")
    log_sigma, support = matrix_log_support(sigma.matrix, cutoff=support_cutoff)
    outside = 1.0 - float(np.real(np.trace(support @ rho.matrix)))
    if outside > support_tol:
        return math.inf
    tr_rho_log_rho = -_entropy_from_eigenvalues(np.linalg.eigvalsh(rho.matrix))
    tr_rho_log_sigma = float(np.real(np.trace(rho.matrix @ log_sigma)))
    return max(tr_rho_log_rho - tr_rho_log_sigma, 0.0)


def s_coh(rho: DensityMatrix) -> float:
    """Relative entropy of coherence S(rho_diag) - S(rho)."""
    return max(vn_entropy(dephase(rho)) - vn_entropy(rho), 0.0)


def l1_coherence(rho: DensityMatrix) -> float:
    """Sum of absolute off-diagonal entries."""
    mat = np.abs(rho.matrix)
    return float(np.sum(mat) - np.sum(np.diag(mat)))


def kl_populations(p, q) -> float:
    """Kullback-Leibler divergence of two probability vectors; may be ``inf``."""
    p = as_populations(p)
    q = as_populations(q)
    if p.shape != q.shape:
        raise DimensionError(f"population lengths differ: {p.size} vs {q.size}")
    active = p > 0.0
    if np.any(q[active] <= 0.0):
        return math.inf
    return max(float(np.sum(p[active] * np.log(p[active] / q[active]))), 0.0)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Full trace norm ||rho - sigma||_1 (orthogonal pure states give 2)."""
    if rho.dims != sigma.dims:
        raise DimensionError(f"state dims differ: {rho.dims} vs {sigma.dims}")
    return trace_norm_hermitian(rho.matrix - sigma.matrix)


def _require_bipartite(rho: DensityMatrix, what: str):
    if len(rho.dims) != 2:
        raise DimensionError(f"{what} needs exactly two subsystems, got dims {rho.dims}")


def mutual_information(rho: DensityMatrix) -> float:
    """S(rho_A) + S(rho_B) - S(rho)."""
    _require_bipartite(rho, "mutual information")
    return max(
        vn_entropy(rho.marginal((0,))) + vn_entropy(rho.marginal((1,))) - vn_entropy(rho),
        0.0,
    )


def classical_mutual_information(rho: DensityMatrix) -> float:
    """Mutual information of the dephased state."""
    _require_bipartite(rho, "classical mutual information")
    return mutual_information(dephase(rho))


def c1_measure(rho: DensityMatrix, boson_site: int = 0) -> float:
    """Amplitude synchronization measure |<a>| / sqrt(<a^+a>) of one Fock factor."""
    sub = rho.marginal((boson_site,))
    ops = boson_ops(sub.dim)
    mean_n = expectation(sub, ops.number).real
    if mean_n < 1e-14:
        return 0.0
    return abs(expectation(sub, ops.a)) / math.sqrt(mean_n)
