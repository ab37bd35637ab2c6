"""Distance-based synchronization measures over limit-cycle state families.

The synchronization of a steady state is the minimal distance to a declared
family of unsynchronized limit-cycle states.  Four families are supported:

* ``DiagonalCorrelated`` - all states diagonal in the composite product
  basis, classical correlations included.  The relative-entropy minimum is
  the relative entropy of coherence.
* ``DiagonalProduct`` - products of diagonal single-system states.  The
  minimum adds the classical mutual information.
* ``MarginalProduct`` - arbitrary products; the minimum is attained at the
  product of the marginals and equals the mutual information.
* ``PartiallyCoherentProduct`` - products of qutrit states that may carry
  coherence on exactly one declared level pair each, isolating mutual
  synchronization from local entrainment.

Every closed form has a Monte Carlo certificate: :func:`oracle_min` samples
random members of the family and can never undercut a correct minimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from .errors import ContractViolationError, DimensionError
from .linalg import kron, trace_norm_hermitian
from .measures import (
    classical_mutual_information,
    l1_coherence,
    mutual_information,
    relative_entropy,
    s_coh,
    vn_entropy,
)
from .randstates import dirichlet_populations, haar_unitaries
from .states import DensityMatrix, dephase


def project_to_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    y = np.asarray(y, dtype=float)
    descending = np.sort(y)[::-1]
    cumulative = np.cumsum(descending) - 1.0
    indices = np.arange(1, y.size + 1)
    support = descending - cumulative / indices > 0.0
    pivot = int(np.max(indices[support]))
    threshold = cumulative[pivot - 1] / pivot
    return np.clip(y - threshold, 0.0, None)


@dataclass(frozen=True)
class DiagonalCorrelated:
    """Diagonal limit cycles on the full composite basis."""


@dataclass(frozen=True)
class DiagonalProduct:
    """Products of locally diagonal limit cycles."""


@dataclass(frozen=True)
class MarginalProduct:
    """Unrestricted product limit cycles."""


@dataclass(frozen=True)
class PartiallyCoherentProduct:
    """Product limit cycles with one coherent level pair per qutrit factor.

    ``pairs`` lists, per subsystem, the matrix-basis index pair allowed to
    carry coherence (for the locally driven spin-1 models this is the
    E2 <-> E3 transition, matrix pair ``(0, 1)``).
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(tuple(int(i) for i in pair) for pair in self.pairs)
        for pair in pairs:
            if len(pair) != 2 or pair[0] == pair[1]:
                raise ContractViolationError(f"coherent pair {pair} must be two distinct indices")
        object.__setattr__(self, "pairs", pairs)


LimitCycleClass = Union[
    DiagonalCorrelated, DiagonalProduct, MarginalProduct, PartiallyCoherentProduct
]

DIAGONAL_CORRELATED = DiagonalCorrelated()
DIAGONAL_PRODUCT = DiagonalProduct()
MARGINAL_PRODUCT = MarginalProduct()


def spin1_partially_coherent() -> PartiallyCoherentProduct:
    """Class for two locally driven spin-1 atoms (both pairs E2 <-> E3)."""
    return PartiallyCoherentProduct(pairs=((0, 1), (0, 1)))


@dataclass(frozen=True)
class PartialCoherentParams:
    """Optimal limit-cycle parameters for one qutrit factor.

    ``q`` is ordered (spectator level, lower pair level, upper pair level);
    ``theta2`` mixes the pair levels and ``theta1`` sets the phase of the
    coherence.  ``theta3`` is retained for completeness but cancels from the
    objective and is always reported as 0.
    """

    q: tuple[float, float, float]
    theta1: float
    theta2: float
    theta3: float = 0.0
    degenerate: bool = False


@dataclass(frozen=True)
class OmegaResult:
    value: float
    lc_class: LimitCycleClass
    optimizer_state: tuple[PartialCoherentParams, ...] | None = None
    certificate: float | None = None  # min sampled distance minus value


def _require_bipartite(rho: DensityMatrix, label: str):
    if len(rho.dims) != 2:
        raise DimensionError(f"{label} requires a bipartite state, got dims {rho.dims}")


def _pair_and_spectator(pair: tuple[int, int]) -> tuple[int, int, int]:
    i, j = sorted(pair)
    if not (0 <= i < 3 and 0 <= j < 3):
        raise ContractViolationError(f"coherent pair {pair} out of range for a qutrit")
    (k,) = {0, 1, 2} - {i, j}
    return i, j, k


def _partial_objective(r11, r22, r33, abs_r23, q2, theta2):
    """Reduced objective over (q2, theta2) with the phase angle optimized out.

    The coherence contributes ``+ sin(2 theta2) ln(q2/q3) |rho_23|`` once the
    optimal phase is substituted; maximizing over theta2 in [0, pi) covers
    both signs of the prefactor.
    """
    subspace = 1.0 - r11
    q3 = subspace - q2
    sin2 = np.sin(theta2) ** 2
    cos2 = np.cos(theta2) ** 2
    w2 = cos2 * r22 + sin2 * r33
    w3 = sin2 * r22 + cos2 * r33
    log_q2 = np.log(q2)
    log_q3 = np.log(q3)
    return (
        xlogy(r11, r11)
        + w2 * log_q2
        + w3 * log_q3
        + np.sin(2.0 * theta2) * (log_q2 - log_q3) * abs_r23
    )


def omega_alpha(
    rho_alpha: DensityMatrix,
    pair: tuple[int, int],
    grid: int = 64,
    refine_tol: float = 1e-8,
) -> tuple[float, PartialCoherentParams]:
    """Maximal ``Tr[rho ln sigma]`` over partially coherent qutrit states.

    The spectator population is matched exactly (``q1 = rho_11``) and the
    coherence phase is eliminated analytically; the surviving ``(q2, theta2)``
    objective is not provably unimodal, so it is scanned on a coarse grid
    and the best cell is refined locally.  Ties break toward the smallest
    ``(q2, theta2)`` cell.
    """
    if rho_alpha.dim != 3:
        raise DimensionError(f"partially coherent factor must be a qutrit, got dim {rho_alpha.dim}")
    i, j, k = _pair_and_spectator(pair)
    mat = rho_alpha.matrix
    r11 = float(mat[k, k].real)
    r22 = float(mat[i, i].real)
    r33 = float(mat[j, j].real)
    r23 = complex(mat[i, j])
    phi23 = math.atan2(r23.imag, r23.real)
    subspace = 1.0 - r11
    if subspace <= 1e-12:
        params = PartialCoherentParams(q=(1.0, 0.0, 0.0), theta1=0.0, theta2=0.0, degenerate=True)
        return 0.0, params

    q2_cells = (np.arange(grid) + 0.5) / grid * subspace
    t2_cells = np.arange(grid) / grid * np.pi
    q2_mesh, t2_mesh = np.meshgrid(q2_cells, t2_cells, indexing="ij")
    objective = _partial_objective(r11, r22, r33, abs(r23), q2_mesh, t2_mesh)
    best_flat = int(np.argmax(objective))  # argmax takes the first = smallest (q2, theta2) cell
    bi, bj = np.unravel_index(best_flat, objective.shape)
    dq = subspace / grid
    dt = np.pi / grid
    lo_q = max(q2_cells[bi] - dq, subspace * 1e-12)
    hi_q = min(q2_cells[bi] + dq, subspace * (1.0 - 1e-12))
    lo_t = max(t2_cells[bj] - dt, 0.0)
    hi_t = min(t2_cells[bj] + dt, np.pi)

    def negated(x):
        q2 = min(max(x[0], lo_q), hi_q)
        t2 = min(max(x[1], lo_t), hi_t)
        return -_partial_objective(r11, r22, r33, abs(r23), q2, t2)

    result = minimize(
        negated,
        x0=[q2_cells[bi], t2_cells[bj]],
        method="Nelder-Mead",
        bounds=[(lo_q, hi_q), (lo_t, hi_t)],
        options={"xatol": refine_tol, "fatol": 1e-15, "maxiter": 600},
    )
    value = -float(result.fun)
    q2_opt = float(min(max(result.x[0], lo_q), hi_q))
    t2_opt = float(min(max(result.x[1], lo_t), hi_t))
    q3_opt = subspace - q2_opt
    # phase angle that realizes the +|rho_23| substitution at the optimum
    coeff = math.sin(2.0 * t2_opt) * (math.log(q2_opt) - math.log(q3_opt))
    if coeff >= 0.0:
        theta1 = (math.pi / 4.0 - phi23 / 2.0) % (2.0 * math.pi)
    else:
        theta1 = (3.0 * math.pi / 4.0 - phi23 / 2.0) % (2.0 * math.pi)
    params = PartialCoherentParams(q=(r11, q2_opt, q3_opt), theta1=theta1, theta2=t2_opt)
    return value, params


def brute_force_omega_alpha(
    rho_alpha: DensityMatrix, pair: tuple[int, int], resolution: int = 64
) -> float:
    """Dense 3-parameter grid over (q2, theta1, theta2); certification oracle.

    Scans the full objective including the explicit phase angle, so it can
    never exceed the phase-eliminated optimum by more than its grid error.
    """
    if rho_alpha.dim != 3:
        raise DimensionError("brute force expects a qutrit")
    i, j, k = _pair_and_spectator(pair)
    mat = rho_alpha.matrix
    r11 = float(mat[k, k].real)
    r22 = float(mat[i, i].real)
    r33 = float(mat[j, j].real)
    r23 = complex(mat[i, j])
    subspace = 1.0 - r11
    if subspace <= 1e-12:
        return 0.0
    q2 = (np.arange(resolution) + 0.5) / resolution * subspace
    t1 = np.arange(resolution) / resolution * np.pi
    t2 = np.arange(resolution) / resolution * np.pi
    q2_g, t1_g, t2_g = np.meshgrid(q2, t1, t2, indexing="ij")
    q3_g = subspace - q2_g
    sin2 = np.sin(t2_g) ** 2
    cos2 = np.cos(t2_g) ** 2
    cross = np.sin(2.0 * t2_g) * (np.log(q2_g) - np.log(q3_g)) * np.imag(
        np.exp(2j * t1_g) * r23
    )
    objective = (
        xlogy(r11, r11)
        + sin2 * (r22 * np.log(q3_g) + r33 * np.log(q2_g))
        + cos2 * (r22 * np.log(q2_g) + r33 * np.log(q3_g))
        + cross
    )
    return float(np.max(objective))


def _validate_partial_class(rho: DensityMatrix, lc_class: PartiallyCoherentProduct):
    _require_bipartite(rho, "partially coherent class")
    if len(lc_class.pairs) != len(rho.dims):
        raise DimensionError(
            f"{len(lc_class.pairs)} coherent pairs declared for {len(rho.dims)} subsystems"
        )
    for site, (dim, pair) in enumerate(zip(rho.dims, lc_class.pairs)):
        if dim != 3:
            raise DimensionError(
                f"partially coherent class needs qutrit factors, site {site} has dim {dim}"
            )
        _pair_and_spectator(pair)


def omega_r(
    rho: DensityMatrix,
    lc_class: LimitCycleClass,
    oracle_samples: int = 0,
    seed: int = 0,
) -> OmegaResult:
    """Relative-entropy synchronization measure, by closed-form dispatch.

    With ``oracle_samples > 0`` a seeded sampling certificate is attached:
    ``certificate = (min sampled relative entropy) - value``, which stays
    nonnegative up to optimizer tolerance when the closed form is correct.
    """
    optimizer_state = None
    if isinstance(lc_class, DiagonalCorrelated):
        value = s_coh(rho)
    elif isinstance(lc_class, DiagonalProduct):
        _require_bipartite(rho, "diagonal product class")
        value = s_coh(rho) + classical_mutual_information(rho)
    elif isinstance(lc_class, MarginalProduct):
        _require_bipartite(rho, "marginal product class")
        value = mutual_information(rho)
    elif isinstance(lc_class, PartiallyCoherentProduct):
        _validate_partial_class(rho, lc_class)
        total = -vn_entropy(rho)
        states = []
        for site, pair in enumerate(lc_class.pairs):
            contribution, params = omega_alpha(rho.marginal((site,)), pair)
            total -= contribution
            states.append(params)
        value = total
        optimizer_state = tuple(states)
    else:
        raise ContractViolationError(f"unknown limit-cycle class {lc_class!r}")

    certificate = None
    if oracle_samples > 0:
        certificate = oracle_min(rho, lc_class, oracle_samples, seed) - value
    return OmegaResult(
        value=float(value),
        lc_class=lc_class,
        optimizer_state=optimizer_state,
        certificate=certificate,
    )


def _rotated_log_weights(rho_marginal: np.ndarray, unitaries: np.ndarray) -> np.ndarray:
    """Diagonal weights <k|U^+ rho U|k> for a batch of unitaries."""
    return np.einsum(
        "sik,ij,sjk->sk", unitaries.conj(), rho_marginal, unitaries, optimize=True
    ).real


def _population_cross_terms(populations: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """sum_j p_j ln q_j per sample row, honoring 0 ln 0 = 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(samples > 0.0, np.log(np.where(samples > 0.0, samples, 1.0)), -np.inf)
        terms = np.where(populations[None, :] > 0.0, populations[None, :] * logs, 0.0)
    return terms.sum(axis=1)


def oracle_min(
    rho: DensityMatrix,
    lc_class: LimitCycleClass,
    samples: int,
    seed: int = 0,
    extra_candidates: tuple[DensityMatrix, ...] = (),
) -> float:
    """Minimum relative entropy to ``samples`` random members of the class.

    Deterministic given the seed.  Any explicitly supplied candidate states
    are included in the sample set, so injecting the exact minimizer
    reproduces the closed form.
    """
    if samples < 1:
        raise ContractViolationError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    lam = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, None)
    tr_rho_log_rho = float(np.sum(xlogy(lam, lam)))

    if isinstance(lc_class, DiagonalCorrelated):
        q = dirichlet_populations(rho.dim, samples, rng)
        cross = _population_cross_terms(rho.populations(), q)
    else:
        _require_bipartite(rho, "product-class oracle")
        dim_a, dim_b = rho.dims
        rho_a = rho.marginal((0,)).matrix
        rho_b = rho.marginal((1,)).matrix
        if isinstance(lc_class, DiagonalProduct):
            cross = _population_cross_terms(
                np.real(np.diag(rho_a)), dirichlet_populations(dim_a, samples, rng)
            ) + _population_cross_terms(
                np.real(np.diag(rho_b)), dirichlet_populations(dim_b, samples, rng)
            )
        elif isinstance(lc_class, MarginalProduct):
            cross = np.zeros(samples)
            for dim, marginal in ((dim_a, rho_a), (dim_b, rho_b)):
                unitaries = haar_unitaries(dim, samples, rng)
                weights = _rotated_log_weights(marginal, unitaries)
                cross += _population_cross_terms_batched(
                    weights, dirichlet_populations(dim, samples, rng)
                )
        elif isinstance(lc_class, PartiallyCoherentProduct):
            _validate_partial_class(rho, lc_class)
            cross = np.zeros(samples)
            for (dim, marginal), pair in zip(((dim_a, rho_a), (dim_b, rho_b)), lc_class.pairs):
                i, j, _ = _pair_and_spectator(pair)
                blocks = haar_unitaries(2, samples, rng)
                unitaries = np.tile(np.eye(3, dtype=complex), (samples, 1, 1))
                unitaries[:, i, i] = blocks[:, 0, 0]
                unitaries[:, i, j] = blocks[:, 0, 1]
                unitaries[:, j, i] = blocks[:, 1, 0]
                unitaries[:, j, j] = blocks[:, 1, 1]
                weights = _rotated_log_weights(marginal, unitaries)
                cross += _population_cross_terms_batched(
                    weights, dirichlet_populations(3, samples, rng)
                )
        else:
            raise ContractViolationError(f"unknown limit-cycle class {lc_class!r}")

    best = float(np.min(tr_rho_log_rho - cross))
    for candidate in extra_candidates:
        best = min(best, relative_entropy(rho, candidate))
    return best


def _population_cross_terms_batched(weights: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """Row-wise sum_k w_k ln q_k for paired batches of weights and simplex draws."""
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(samples > 0.0, np.log(np.where(samples > 0.0, samples, 1.0)), -np.inf)
        terms = np.where(weights > 0.0, weights * logs, 0.0)
    return terms.sum(axis=1)


def omega_d(
    rho: DensityMatrix,
    lc_class: LimitCycleClass = DIAGONAL_CORRELATED,
    iterations: int = 2000,
    step_scale: float = 0.1,
    certificate_samples: int = 256,
    seed: int = 0,
) -> OmegaResult:
    """Trace-distance synchronization measure over diagonal limit cycles.

    The objective ``||rho - diag(q)||_1`` is convex in ``q``; projected
    subgradient descent from ``q0 = diag(rho)`` with step ``c/sqrt(k)``
    keeps the best iterate, then seeded simplex samples provide an
    independent certificate.  The result never exceeds the l1 coherence.
    """
    if not isinstance(lc_class, DiagonalCorrelated):
        raise ContractViolationError(
            "the trace-distance measure is implemented for the diagonal class only"
        )
    mat = rho.matrix
    dim = rho.dim
    q = rho.populations()
    best_value = trace_norm_hermitian(mat - np.diag(q))
    for k in range(1, iterations + 1):
        difference = mat - np.diag(q)
        values, vectors = np.linalg.eigh(difference)
        sign_matrix = (vectors * np.sign(values)) @ vectors.conj().T
        gradient = -np.real(np.diag(sign_matrix))
        q = project_to_simplex(q - (step_scale / math.sqrt(k)) * gradient)
        value = float(np.sum(np.abs(np.linalg.eigvalsh(mat - np.diag(q)))))
        best_value = min(best_value, value)

    rng = np.random.default_rng(seed)
    sampled = dirichlet_populations(dim, max(1, certificate_samples), rng)
    sampled_values = [
        trace_norm_hermitian(mat - np.diag(row)) for row in sampled
    ]
    certificate = float(min(sampled_values)) - best_value

    bound = l1_coherence(rho)
    if best_value > bound + 1e-8:
        raise ContractViolationError(
            f"trace-distance minimum {best_value:.3e} exceeds the l1-coherence bound {bound:.3e}"
        )
    return OmegaResult(value=best_value, lc_class=lc_class, certificate=certificate)


def product_of_marginals(rho: DensityMatrix) -> DensityMatrix:
    """The product state built from the two marginals."""
    _require_bipartite(rho, "product of marginals")
    return DensityMatrix(
        kron(rho.marginal((0,)).matrix, rho.marginal((1,)).matrix), rho.dims
    )


def dephased_product_of_marginals(rho: DensityMatrix) -> DensityMatrix:
    _require_bipartite(rho, "product of dephased marginals")
    return DensityMatrix(
        kron(dephase(rho.marginal((0,))).matrix, dephase(rho.marginal((1,))).matrix),
        rho.dims,
    )
