"""Bosonic and spin-1 operator sets and multipartite embedding.

Basis conventions, fixed project-wide:

* Fock space: number basis ``|0>, ..., |N-1>`` at truncation ``N``.
* Spin-1: basis ordered ``(m=+1, m=0, m=-1)``, so ``S_z = diag(+1, 0, -1)``.
  Energy labels count bottom-up, ``E1 = m=-1``, ``E2 = m=0``, ``E3 = m=+1``;
  matrix index 0 is the top level E3 and index 2 the bottom level E1.  The
  transition addressed by the nonlinear drive ``S_z S_+ + S_- S_z`` is
  E2 <-> E3, i.e. the matrix index pair :data:`SPIN1_DRIVEN_PAIR`.
* Composite spaces follow the Kronecker order of the ``dims`` list.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .linalg import as_complex_matrix, kron

#: matrix index pair of the locally driven E2 <-> E3 spin-1 transition
SPIN1_DRIVEN_PAIR = (0, 1)


@dataclass(frozen=True, eq=False)
class BosonOperators:
    """Truncated annihilation/creation algebra on an N-dimensional Fock space."""

    dim: int
    a: np.ndarray
    adag: np.ndarray
    number: np.ndarray
    identity: np.ndarray


@dataclass(frozen=True, eq=False)
class Spin1Operators:
    """Spin-1 ladder algebra in the (m=+1, 0, -1) basis."""

    s_plus: np.ndarray
    s_minus: np.ndarray
    s_z: np.ndarray
    s_y: np.ndarray
    identity: np.ndarray
    dim: int = field(default=3)


def boson_ops(cutoff: int) -> BosonOperators:
    """Fock-space operators with ``a|n> = sqrt(n)|n-1>`` at truncation ``cutoff``."""
    cutoff = int(cutoff)
    if cutoff < 2:
        raise DimensionError(f"Fock cutoff must be >= 2, got {cutoff}")
    a = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1).astype(complex)
    adag = a.conj().T
    return BosonOperators(
        dim=cutoff,
        a=a,
        adag=adag,
        number=adag @ a,
        identity=np.eye(cutoff, dtype=complex),
    )


def spin1_ops() -> Spin1Operators:
    """Spin-1 operators with raising/lowering matrix elements sqrt(2)."""
    s_z = np.diag([1.0, 0.0, -1.0]).astype(complex)
    s_plus = np.zeros((3, 3), dtype=complex)
    s_plus[0, 1] = np.sqrt(2.0)
    s_plus[1, 2] = np.sqrt(2.0)
    s_minus = s_plus.conj().T
    s_y = (s_plus - s_minus) / 2j
    return Spin1Operators(
        s_plus=s_plus,
        s_minus=s_minus,
        s_z=s_z,
        s_y=s_y,
        identity=np.eye(3, dtype=complex),
    )


def embed(op, site: int, dims: Sequence[int]) -> np.ndarray:
    """Act with ``op`` on factor ``site`` and the identity everywhere else."""
    mat = as_complex_matrix(op, "op")
    dims = tuple(int(d) for d in dims)
    if site < 0 or site >= len(dims):
        raise DimensionError(f"site {site} out of range for dims {dims}")
    if mat.shape != (dims[site], dims[site]):
        raise DimensionError(
            f"operator of shape {mat.shape} does not fit factor of dimension {dims[site]}"
        )
    out = np.eye(1, dtype=complex)
    for k, d in enumerate(dims):
        out = kron(out, mat if k == site else np.eye(d, dtype=complex))
    return out
