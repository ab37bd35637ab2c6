"""Phase-space diagnostics: spin-1 Husimi phase measure and Wigner functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DimensionError
from .states import DensityMatrix

#: tail weight near the Fock cutoff above which phase-space output is flagged
TRUNCATION_TAIL_TOL = 1e-6


def spin1_coherent_amplitudes(theta, phi) -> np.ndarray:
    """Spin-1 coherent-state components on the (m=+1, 0, -1) basis.

    ``|theta, phi> = cos^2(theta/2)|+1> + (e^{i phi}/sqrt(2)) sin(theta)|0>
    + e^{2 i phi} sin^2(theta/2)|-1>``; broadcasting over grids is supported.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c0 = np.cos(theta / 2.0) ** 2 * np.ones_like(phi, dtype=complex)
    c1 = np.exp(1j * phi) / np.sqrt(2.0) * np.sin(theta)
    c2 = np.exp(2j * phi) * np.sin(theta / 2.0) ** 2
    return np.stack(np.broadcast_arrays(c0, c1, c2), axis=-1)


def husimi_q_spin1(rho: DensityMatrix, spin_site: int, thetas, phis) -> np.ndarray:
    """Husimi distribution Q(theta, phi) = (3/4pi) <theta,phi|rho|theta,phi>."""
    sub = rho.marginal((spin_site,))
    if sub.dim != 3:
        raise DimensionError(f"site {spin_site} has dimension {sub.dim}, expected 3")
    grid_t, grid_p = np.meshgrid(np.asarray(thetas, float), np.asarray(phis, float), indexing="ij")
    amps = spin1_coherent_amplitudes(grid_t, grid_p)
    q = np.einsum("tpi,ij,tpj->tp", amps.conj(), sub.matrix, amps).real
    return 3.0 / (4.0 * np.pi) * q


def s_phase_spin1(
    rho: DensityMatrix,
    spin_site: int = 0,
    n_theta: int = 181,
    n_phi: int = 360,
) -> float:
    """Phase-locking measure: max over phi of the polar-integrated Husimi excess.

    ``S(phi) = int_0^pi dtheta sin(theta) Q(theta, phi) - 1/(2 pi)`` by
    trapezoidal quadrature.  The normalization is subtracted as the phi-grid
    mean of the same quadrature, which is exact for the (at most second)
    phi harmonics of a qutrit, so any phase-diffused (diagonal) state gives
    zero to machine precision rather than to quadrature accuracy.
    """
    thetas = np.linspace(0.0, np.pi, int(n_theta))
    phis = np.linspace(0.0, 2.0 * np.pi, int(n_phi), endpoint=False)
    q = husimi_q_spin1(rho, spin_site, thetas, phis)
    integral = np.trapezoid(q * np.sin(thetas)[:, None], thetas, axis=0)
    s_of_phi = integral - np.mean(integral)
    return float(np.max(s_of_phi))


def _displacement_block(betas: np.ndarray, dim: int) -> np.ndarray:
    """Exact matrix elements ``<m|D(beta)|n>`` for ``m, n < dim``.

    Uses the normally ordered factorization
    ``D(beta) = e^{-|beta|^2/2} e^{beta a^+} e^{-conj(beta) a}``,
    whose triangular factors have closed-form entries; restricted to the
    lowest ``dim`` levels the internal contraction is finite, so the block
    carries no truncation error.
    """
    betas = np.asarray(betas, dtype=complex).reshape(-1)
    idx = np.arange(dim)
    delta = idx[:, None] - idx[None, :]
    lower = delta >= 0
    # sqrt(m!/n!)/(m-n)! on the lower triangle
    logc = 0.5 * (gammaln(idx[:, None] + 1) - gammaln(idx[None, :] + 1)) - gammaln(
        np.where(lower, delta, 0) + 1
    )
    coeff = np.where(lower, np.exp(logc), 0.0)
    power = np.where(lower, delta, 0)
    with np.errstate(invalid="ignore"):
        up = np.where(lower, betas[:, None, None] ** power, 0.0) * coeff
        down_arg = -betas.conj()
        down = np.transpose(
            np.where(lower, down_arg[:, None, None] ** power, 0.0) * coeff, (0, 2, 1)
        )
    gauss = np.exp(-0.5 * np.abs(betas) ** 2)
    return gauss[:, None, None] * (up @ down)


def wigner(rho: DensityMatrix, boson_site: int, alphas) -> np.ndarray:
    """Wigner function from the displaced parity operator.

    ``W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^+]`` with P the Fock
    parity; the displaced parity collapses to ``P D(-2 alpha)``, which is
    evaluated through exact displacement matrix elements on the state's
    support.
    """
    alphas = np.asarray(alphas, dtype=complex)
    sub = rho.marginal((boson_site,))
    dim = sub.dim
    blocks = _displacement_block(-2.0 * alphas.reshape(-1), dim)
    parity = (-1.0) ** np.arange(dim)
    weights = parity[:, None] * sub.matrix.T  # entry (m, n) = (-1)^m rho_{nm}
    values = 2.0 / np.pi * np.real(np.einsum("mn,kmn->k", weights, blocks))
    return values.reshape(alphas.shape)


@dataclass(frozen=True)
class WignerGrid:
    xs: np.ndarray
    ps: np.ndarray
    values: np.ndarray  # shape (len(xs), len(ps))
    truncation_warning: bool


def fock_tail_weight(rho: DensityMatrix, boson_site: int, levels: int = 2) -> float:
    """Population of the top ``levels`` Fock states of one factor."""
    sub = rho.marginal((boson_site,))
    return float(np.sum(sub.populations()[-levels:]))


def wigner_grid(rho: DensityMatrix, boson_site: int, xs, ps) -> WignerGrid:
    """Wigner function on a Cartesian grid ``alpha = x + i p``.

    The output integrates to ~1 over a grid that covers the state; the
    warning flag is raised when the state itself presses against its Fock
    cutoff, which is the only truncation that can corrupt the values.
    """
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    grid_x, grid_p = np.meshgrid(xs, ps, indexing="ij")
    values = wigner(rho, boson_site, grid_x + 1j * grid_p)
    warn = fock_tail_weight(rho, boson_site) > TRUNCATION_TAIL_TOL
    return WignerGrid(xs=xs, ps=ps, values=values, truncation_warning=warn)
