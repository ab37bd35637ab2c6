import math

import numpy as np
import pytest

from qsync.errors import ContractViolationError, DimensionError
from qsync.linalg import kron
from qsync.measures import (
    as_populations,
    c1_measure,
    classical_mutual_information,
    kl_populations,
    l1_coherence,
    mutual_information,
    relative_entropy,
    s_coh,
    trace_distance,
    vn_entropy,
)
from qsync.randstates import (
    dirichlet_populations,
    random_bipartite_state,
    random_density_matrix,
)
from qsync.states import DensityMatrix, basis_state, dephase, pure_state

LN2 = 0.6931471805599453


def diag_state(probabilities, dims=None):
    p = np.asarray(probabilities, dtype=float)
    return DensityMatrix(np.diag(p).astype(complex), dims or (p.size,))


class TestVnEntropy:
    def test_pure_state(self, rng):
        from qsync.randstates import random_pure_state

        assert vn_entropy(random_pure_state((4,), rng)) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_qubit(self):
        assert vn_entropy(diag_state([0.5, 0.5])) == pytest.approx(LN2, abs=1e-14)

    def test_frozen_analytic_value(self):
        # -0.25 ln 0.25 - 0.75 ln 0.75
        assert vn_entropy(diag_state([0.25, 0.75])) == pytest.approx(
            0.5623351446188083, abs=1e-13
        )


class TestRelativeEntropy:
    def test_self_distance_is_zero(self, rng):
        rho = random_density_matrix(4, rng)
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_analytic_two_level(self):
        assert relative_entropy(diag_state([1.0, 0.0]), diag_state([0.5, 0.5])) == pytest.approx(
            LN2, abs=1e-12
        )

    def test_support_violation_is_infinite(self):
        assert relative_entropy(diag_state([0.5, 0.5]), diag_state([1.0, 0.0])) == math.inf

    def test_nonnegative_and_faithful(self, rng):
        for _ in range(10):
            rho = random_density_matrix(3, rng)
            sigma = random_density_matrix(3, rng)
            value = relative_entropy(rho, sigma)
            assert value >= 0.0
            assert (value == 0.0) == (trace_distance(rho, sigma) < 1e-8)

    def test_dims_mismatch(self, rng):
        with pytest.raises(DimensionError):
            relative_entropy(random_density_matrix(2, rng), random_density_matrix(3, rng))


class TestSCoh:
    def test_diagonal_state(self):
        assert s_coh(diag_state([0.3, 0.7])) == pytest.approx(0.0, abs=1e-14)

    def test_plus_state(self):
        assert s_coh(pure_state([1.0, 1.0], (2,))) == pytest.approx(LN2, abs=1e-12)

    def test_equals_relative_entropy_to_dephased(self, rng):
        for _ in range(10):
            rho = random_density_matrix(4, rng)
            assert s_coh(rho) == pytest.approx(
                relative_entropy(rho, dephase(rho)), abs=1e-10
            )


class TestL1Coherence:
    def test_diagonal_state(self):
        assert l1_coherence(diag_state([0.2, 0.8])) == 0.0

    def test_plus_state(self):
        assert l1_coherence(pure_state([1.0, 1.0], (2,))) == pytest.approx(1.0, abs=1e-12)

    def test_matches_double_loop(self, rng):
        rho = random_density_matrix(4, rng)
        direct = sum(
            abs(rho.matrix[j, k]) for j in range(4) for k in range(4) if j != k
        )
        assert l1_coherence(rho) == pytest.approx(direct, abs=1e-13)

    def test_vanishes_together_with_s_coh(self, rng):
        rho = dephase(random_density_matrix(5, rng))
        assert l1_coherence(rho) == 0.0
        assert s_coh(rho) == pytest.approx(0.0, abs=1e-12)


class TestKlPopulations:
    def test_identical_distributions(self):
        assert kl_populations([0.4, 0.6], [0.4, 0.6]) == pytest.approx(0.0, abs=1e-14)

    def test_analytic(self):
        assert kl_populations([1.0, 0.0], [0.5, 0.5]) == pytest.approx(LN2, abs=1e-14)

    def test_infinite_on_support_violation(self):
        assert kl_populations([0.5, 0.5], [1.0, 0.0]) == math.inf

    def test_equals_relative_entropy_of_diagonal_embeddings(self, rng):
        p = dirichlet_populations(4, 1, rng)[0]
        q = dirichlet_populations(4, 1, rng)[0]
        assert kl_populations(p, q) == pytest.approx(
            relative_entropy(diag_state(p), diag_state(q)), abs=1e-10
        )

    def test_validation(self):
        with pytest.raises(ContractViolationError):
            as_populations([0.5, 0.6])
        with pytest.raises(ContractViolationError):
            as_populations([1.5, -0.5])


class TestDecomposition:
    def test_relative_entropy_splits_into_coherence_plus_kl(self, rng):
        # S(rho||sigma) = S_coh(rho) + D_KL(populations) for diagonal sigma
        for _ in range(20):
            dim = int(rng.integers(2, 6))
            rho = random_density_matrix(dim, rng)
            sigma = diag_state(dirichlet_populations(dim, 1, rng)[0])
            lhs = relative_entropy(rho, sigma)
            rhs = s_coh(rho) + kl_populations(rho.populations(), sigma.populations())
            assert lhs == pytest.approx(rhs, abs=1e-10)


class TestTraceDistance:
    def test_identical_states(self, rng):
        rho = random_density_matrix(3, rng)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        assert trace_distance(basis_state(0, (2,)), basis_state(1, (2,))) == pytest.approx(
            2.0, abs=1e-12
        )

    def test_entrywise_l1_bound(self, rng):
        # ||rho - sigma||_1 <= sum_j |p_j - q_j| + sum_{j!=k} |rho_jk - sigma_jk|
        for _ in range(10):
            rho = random_density_matrix(4, rng)
            sigma = random_density_matrix(4, rng)
            difference = rho.matrix - sigma.matrix
            bound = float(np.sum(np.abs(difference)))
            assert trace_distance(rho, sigma) <= bound + 1e-12


class TestMutualInformation:
    def test_product_state(self, rng):
        rho_a = random_density_matrix(2, rng)
        rho_b = random_density_matrix(3, rng)
        joint = DensityMatrix(kron(rho_a.matrix, rho_b.matrix), (2, 3))
        assert mutual_information(joint) == pytest.approx(0.0, abs=1e-10)

    def test_bell_state(self):
        bell = pure_state([1.0, 0.0, 0.0, 1.0], (2, 2))
        assert mutual_information(bell) == pytest.approx(2.0 * LN2, abs=1e-12)

    def test_equals_relative_entropy_to_marginal_product(self, rng):
        from qsync.sync import product_of_marginals

        for _ in range(10):
            rho = random_bipartite_state((2, 3), rng)
            assert mutual_information(rho) == pytest.approx(
                relative_entropy(rho, product_of_marginals(rho)), abs=1e-10
            )

    def test_requires_bipartite(self, rng):
        with pytest.raises(DimensionError):
            mutual_information(random_density_matrix(4, rng))


class TestClassicalMutualInformation:
    def test_product_diagonal(self):
        joint = DensityMatrix(np.diag([0.12, 0.28, 0.18, 0.42]).astype(complex), (2, 2))
        assert classical_mutual_information(joint) == pytest.approx(0.0, abs=1e-12)

    def test_classically_correlated(self):
        rho = DensityMatrix(np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex), (2, 2))
        assert classical_mutual_information(rho) == pytest.approx(LN2, abs=1e-12)

    def test_splitting_identity(self, rng):
        # S_coh + I_c equals the distance to the dephased marginal product
        from qsync.sync import dephased_product_of_marginals

        for _ in range(10):
            rho = random_bipartite_state((3, 3), rng)
            lhs = s_coh(rho) + classical_mutual_information(rho)
            rhs = relative_entropy(rho, dephased_product_of_marginals(rho))
            assert lhs == pytest.approx(rhs, abs=1e-10)


class TestC1Measure:
    def test_fock_diagonal_state(self):
        rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]).astype(complex), (3,))
        assert c1_measure(rho) == 0.0

    def test_coherent_state(self):
        alpha = 0.5
        n = np.arange(15)
        amps = np.exp(-abs(alpha) ** 2 / 2) * alpha**n / np.sqrt(
            np.array([math.factorial(int(k)) for k in n], dtype=float)
        )
        rho = pure_state(amps, (15,))
        assert c1_measure(rho) == pytest.approx(1.0, abs=1e-6)

    def test_vacuum_returns_zero(self):
        assert c1_measure(basis_state(0, (4,))) == 0.0
