import numpy as np
import pytest

from qsync.errors import (
    ContractViolationError,
    DegenerateSteadyStateError,
    DimensionError,
    IntegrationError,
)
from qsync.lindblad import (
    DissipatorTerm,
    Superoperator,
    dissipator_super,
    evolve_rk4,
    liouvillian,
    solve_steady_state,
    spectral_gap,
    steady_state,
    suggested_timestep,
)
from qsync.measures import trace_distance
from qsync.models import DrivenVdp, model_liouvillian
from qsync.operators import boson_ops, spin1_ops
from qsync.randstates import complex_gaussian, random_density_matrix
from qsync.states import DensityMatrix, basis_state, maximally_mixed, pure_state

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
DECAY = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |0><1|


def dissipator_matrix_oracle(op, rho):
    """(2 O rho O^+ - O^+O rho - rho O^+O) / 2 computed matrix-wise."""
    opd = op.conj().T
    return op @ rho @ opd - 0.5 * (opd @ op @ rho + rho @ opd @ op)


class TestDissipatorSuper:
    def test_identity_jump_is_zero(self):
        sup = dissipator_super(DissipatorTerm(np.eye(3), 1.0))
        assert np.max(np.abs(sup.matrix)) < 1e-14

    def test_qubit_decay_steady_state(self):
        sup = dissipator_super(DissipatorTerm(DECAY, 1.0))
        rho = steady_state(sup)
        assert np.allclose(rho.matrix, np.diag([1.0, 0.0]), atol=1e-12)

    def test_matches_matrix_oracle(self, rng):
        op = complex_gaussian(rng, (4, 4))
        sup = dissipator_super(DissipatorTerm(op, 0.7))
        rho = random_density_matrix(4, rng).matrix
        assert np.max(np.abs(sup.apply(rho) - 0.7 * dissipator_matrix_oracle(op, rho))) < 1e-12

    def test_negative_rate_rejected(self):
        with pytest.raises(ContractViolationError):
            DissipatorTerm(DECAY, -0.1)


class TestLiouvillian:
    def test_zero_hamiltonian_no_terms(self):
        sup = liouvillian(np.zeros((2, 2)), [])
        assert np.max(np.abs(sup.matrix)) == 0.0

    def test_commutator_oracle(self):
        sup = liouvillian(SIGMA_Z, [])
        plus = pure_state([1.0, 1.0], (2,))
        expected = -1j * (SIGMA_Z @ plus.matrix - plus.matrix @ SIGMA_Z)
        assert np.max(np.abs(sup.apply(plus.matrix) - expected)) < 1e-13

    def test_annihilates_own_steady_state(self):
        sup = model_liouvillian(DrivenVdp(detuning=0.1, drive=0.0, gain=1.0, damp=0.5, n_fock=12))
        result = solve_steady_state(sup)
        assert result.residual < 1e-10 * np.linalg.norm(sup.matrix)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            liouvillian(np.eye(2), [DissipatorTerm(np.eye(3), 1.0)])

    def test_trace_preservation_validated(self):
        bad = np.zeros((4, 4), dtype=complex)
        bad[0, 0] = 1.0  # feeds the trace
        with pytest.raises(ContractViolationError):
            Superoperator(bad, (2,))

    def test_preserves_trace_and_hermiticity_on_random_states(self, rng):
        sup = model_liouvillian(DrivenVdp(detuning=0.3, drive=0.4, gain=1.0, damp=0.5, n_fock=8))
        for _ in range(100):
            rho = random_density_matrix(8, rng).matrix
            image = sup.apply(rho)
            assert abs(np.trace(image)) < 1e-10
            assert np.max(np.abs(image - image.conj().T)) < 1e-10


class TestSteadyState:
    def test_undriven_spin_pure_middle_level(self):
        spin = spin1_ops()
        sup = liouvillian(
            np.zeros((3, 3)),
            [
                DissipatorTerm(spin.s_plus @ spin.s_z, 0.5),
                DissipatorTerm(spin.s_minus @ spin.s_z, 5.0),
            ],
        )
        rho = steady_state(sup)
        fidelity = rho.matrix[1, 1].real
        assert fidelity > 1.0 - 1e-8

    def test_undriven_vdp_is_diagonal(self):
        sup = model_liouvillian(DrivenVdp(detuning=0.1, drive=0.0, gain=1.0, damp=0.5, n_fock=20))
        rho = steady_state(sup)
        off_diagonal = rho.matrix - np.diag(np.diag(rho.matrix))
        assert np.max(np.abs(off_diagonal)) < 1e-8

    def test_matches_integrator_for_driven_qubit(self):
        h = 0.2 * SIGMA_X
        sup = liouvillian(h, [DissipatorTerm(DECAY, 1.0)])
        rho_ss = steady_state(sup)
        rho_t = evolve_rk4(basis_state(0, (2,)), sup, t_final=50.0, dt=0.002)
        assert trace_distance(rho_t, rho_ss) < 1e-6

    def test_degenerate_is_an_error(self):
        sup = liouvillian(np.zeros((2, 2)), [])
        with pytest.raises(DegenerateSteadyStateError):
            steady_state(sup)


class TestEvolveRk4:
    def test_zero_generator_is_identity_map(self, rng):
        sup = liouvillian(np.zeros((3, 3)), [])
        rho0 = random_density_matrix(3, rng)
        out = evolve_rk4(rho0, sup, t_final=2.0, dt=0.1)
        assert np.max(np.abs(out.matrix - rho0.matrix)) < 1e-12

    def test_sigma_z_rotation_quarter_period(self):
        # e^{-i sigma_z t}|+> reaches |-> at t = pi/2 (phases e^{-i pi/2}, e^{+i pi/2})
        sup = liouvillian(SIGMA_Z, [])
        plus = pure_state([1.0, 1.0], (2,))
        minus = pure_state([1.0, -1.0], (2,))
        out = evolve_rk4(plus, sup, t_final=np.pi / 2, dt=1e-3)
        assert np.max(np.abs(out.matrix - minus.matrix)) < 1e-8

    def test_converges_to_steady_state(self):
        sup = model_liouvillian(DrivenVdp(detuning=0.1, drive=0.5, gain=1.0, damp=0.5, n_fock=10))
        rho_ss = steady_state(sup)
        out = evolve_rk4(basis_state(0, (10,)), sup, t_final=50.0, dt=suggested_timestep(sup))
        assert trace_distance(out, rho_ss) < 1e-6

    def test_unstable_step_raises(self):
        sup = model_liouvillian(DrivenVdp(detuning=0.0, drive=0.0, gain=1.0, damp=10.0, n_fock=10))
        with pytest.raises(IntegrationError):
            evolve_rk4(maximally_mixed((10,)), sup, t_final=50.0, dt=1.0)

    def test_rejects_bad_steps(self):
        sup = liouvillian(np.zeros((2, 2)), [])
        with pytest.raises(ContractViolationError):
            evolve_rk4(maximally_mixed((2,)), sup, t_final=1.0, dt=0.0)


class TestSpectralGap:
    def test_qubit_decay_gap(self):
        sup = dissipator_super(DissipatorTerm(DECAY, 1.0))
        assert spectral_gap(sup) == pytest.approx(0.5, abs=1e-9)

    def test_zero_liouvillian(self):
        sup = liouvillian(np.zeros((2, 2)), [])
        assert spectral_gap(sup) == 0.0

    def test_undriven_spin_unique(self):
        spin = spin1_ops()
        sup = liouvillian(
            np.zeros((3, 3)),
            [
                DissipatorTerm(spin.s_plus @ spin.s_z, 0.5),
                DissipatorTerm(spin.s_minus @ spin.s_z, 5.0),
            ],
        )
        assert spectral_gap(sup) > 0.1
