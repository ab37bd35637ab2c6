import numpy as np
import pytest

from qsync.errors import DimensionError
from qsync.models import DrivenVdp, model_liouvillian
from qsync.lindblad import steady_state
from qsync.phasespace import (
    fock_tail_weight,
    husimi_q_spin1,
    s_phase_spin1,
    spin1_coherent_amplitudes,
    wigner,
    wigner_grid,
)
from qsync.randstates import dirichlet_populations
from qsync.states import DensityMatrix, basis_state, pure_state


def qutrit_with_top_coherence(c):
    """Populations (0.4, 0.4, 0.2) plus coherence c between m=+1 and m=0."""
    mat = np.diag([0.4, 0.4, 0.2]).astype(complex)
    mat[0, 1] = mat[1, 0] = c
    return DensityMatrix(mat, (3,))


class TestSpinCoherentStates:
    def test_normalized_everywhere(self):
        thetas = np.linspace(0.0, np.pi, 25)
        phis = np.linspace(0.0, 2 * np.pi, 25)
        grid_t, grid_p = np.meshgrid(thetas, phis, indexing="ij")
        amps = spin1_coherent_amplitudes(grid_t, grid_p)
        norms = np.sum(np.abs(amps) ** 2, axis=-1)
        assert np.max(np.abs(norms - 1.0)) < 1e-12

    def test_poles_are_extremal_levels(self):
        north = spin1_coherent_amplitudes(0.0, 0.0)
        south = spin1_coherent_amplitudes(np.pi, 0.0)
        assert np.allclose(north, [1.0, 0.0, 0.0], atol=1e-12)
        assert np.allclose(south, [0.0, 0.0, 1.0], atol=1e-12)


class TestHusimi:
    def test_nonnegative_and_normalized(self, rng):
        p = dirichlet_populations(3, 1, rng)[0]
        rho = DensityMatrix(np.diag(p).astype(complex), (3,))
        thetas = np.linspace(0.0, np.pi, 181)
        phis = np.linspace(0.0, 2 * np.pi, 90, endpoint=False)
        q = husimi_q_spin1(rho, 0, thetas, phis)
        assert np.min(q) >= -1e-14
        # polar trapezoid carries an O(h^2) error; it is phi-independent to
        # leading order, which is what the phase measure relies on
        integral = np.trapezoid(q * np.sin(thetas)[:, None], thetas, axis=0).mean() * 2 * np.pi
        assert integral == pytest.approx(1.0, abs=1e-4)

    def test_requires_qutrit(self, rng):
        with pytest.raises(DimensionError):
            husimi_q_spin1(basis_state(0, (2,)), 0, [0.0], [0.0])


class TestSPhase:
    def test_diagonal_states_give_zero(self, rng):
        for _ in range(5):
            p = dirichlet_populations(3, 1, rng)[0]
            rho = DensityMatrix(np.diag(p).astype(complex), (3,))
            assert abs(s_phase_spin1(rho)) < 1e-10

    def test_monotone_in_single_coherence(self):
        values = [s_phase_spin1(qutrit_with_top_coherence(c)) for c in (0.05, 0.1, 0.2)]
        assert values[0] > 0.0
        assert values[0] < values[1] < values[2]

    def test_stable_under_resolution_doubling(self):
        rho = qutrit_with_top_coherence(0.15)
        coarse = s_phase_spin1(rho, n_theta=181, n_phi=360)
        fine = s_phase_spin1(rho, n_theta=361, n_phi=720)
        assert coarse == pytest.approx(fine, abs=1e-6)


class TestWigner:
    def test_vacuum_peak(self):
        vac = basis_state(0, (12,))
        assert wigner(vac, 0, np.array(0.0j)) == pytest.approx(2 / np.pi, abs=1e-6)

    def test_vacuum_gaussian_profile(self):
        vac = basis_state(0, (15,))
        alphas = np.array([0.3 + 0.0j, 0.5 - 0.2j, 1.0j])
        expected = 2 / np.pi * np.exp(-2 * np.abs(alphas) ** 2)
        assert np.allclose(wigner(vac, 0, alphas), expected, atol=1e-8)

    def test_fock_one_is_negative_at_origin(self):
        one = basis_state(1, (12,))
        assert wigner(one, 0, np.array(0.0j)) == pytest.approx(-2 / np.pi, abs=1e-8)

    def test_coherent_state_is_displaced_vacuum(self):
        import math

        alpha0 = 0.8 + 0.4j
        n = np.arange(18)
        amps = np.exp(-abs(alpha0) ** 2 / 2) * alpha0**n / np.sqrt(
            np.array([math.factorial(int(k)) for k in n], dtype=float)
        )
        rho = pure_state(amps, (18,))
        assert wigner(rho, 0, np.array(alpha0)) == pytest.approx(2 / np.pi, abs=1e-6)


@pytest.fixture(scope="module")
def undriven_vdp_state():
    spec = DrivenVdp(detuning=0.1, drive=0.0, gain=1.0, damp=0.5, n_fock=20)
    return steady_state(model_liouvillian(spec))


class TestWignerGrid:

    def test_rotationally_symmetric_when_undriven(self, undriven_vdp_state):
        phis = np.linspace(0.0, 2 * np.pi, 72, endpoint=False)
        for radius in (0.5, 1.5, 2.5, 3.5):
            ring = wigner(undriven_vdp_state, 0, radius * np.exp(1j * phis))
            assert np.var(ring) < 1e-6

    def test_integrates_to_one(self, undriven_vdp_state):
        xs = np.linspace(-4.5, 4.5, 121)
        grid = wigner_grid(undriven_vdp_state, 0, xs, xs)
        integral = np.trapezoid(np.trapezoid(grid.values, xs, axis=1), xs)
        assert integral == pytest.approx(1.0, abs=0.02)
        assert not grid.truncation_warning

    def test_driven_state_is_displaced(self):
        spec = DrivenVdp(detuning=0.1, drive=3.0, gain=1.0, damp=0.5, n_fock=20)
        rho = steady_state(model_liouvillian(spec))
        xs = np.linspace(-4.5, 4.5, 61)
        grid = wigner_grid(rho, 0, xs, xs)
        peak = np.unravel_index(np.argmax(grid.values), grid.values.shape)
        displacement = np.hypot(xs[peak[0]], xs[peak[1]])
        assert displacement > 1.0

    def test_truncation_warning_for_cramped_state(self):
        import math

        alpha0 = 1.6
        n = np.arange(5)
        amps = alpha0**n / np.sqrt(np.array([math.factorial(int(k)) for k in n], dtype=float))
        rho = pure_state(amps, (5,))
        assert fock_tail_weight(rho, 0) > 1e-6
        grid = wigner_grid(rho, 0, np.linspace(-2, 2, 11), np.linspace(-2, 2, 11))
        assert grid.truncation_warning
