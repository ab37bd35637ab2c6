"""Seeded random states, unitaries, and simplex draws.

Shared by the sampling oracles and the test suite; everything is a pure
function of the supplied generator, so runs are reproducible given a seed.
"""
from __future__ import annotations

import numpy as np

from .states import DensityMatrix


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def haar_unitaries(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Batch of Haar-distributed unitaries via QR of Gaussian matrices."""
    g = complex_gaussian(rng, (count, dim, dim))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :].conj()


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return haar_unitaries(dim, 1, rng)[0]


def dirichlet_populations(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Flat-Dirichlet probability vectors, one per row."""
    return rng.dirichlet(np.ones(dim), size=count)


def random_density_matrix(dim: int, rng: np.random.Generator, dims=None) -> DensityMatrix:
    """Hilbert-Schmidt random full-rank state ``G G^+ / Tr``."""
    g = complex_gaussian(rng, (dim, dim))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    return DensityMatrix(rho, dims if dims is not None else (dim,))


def random_bipartite_state(dims, rng: np.random.Generator) -> DensityMatrix:
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    return random_density_matrix(total, rng, dims=dims)


def random_pure_state(dims, rng: np.random.Generator) -> DensityMatrix:
    dims = tuple(int(d) for d in (dims if isinstance(dims, (tuple, list)) else (dims,)))
    total = int(np.prod(dims))
    vec = complex_gaussian(rng, total)
    vec = vec / np.linalg.norm(vec)
    return DensityMatrix(np.outer(vec, vec.conj()), dims)
