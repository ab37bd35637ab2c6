"""Catalog of limit-cycle master-equation models.

Each model maps physical parameters to ``(Hamiltonian, dissipator list,
dims)``.  Dissipator rates are stored with their literal prefactors: the
van der Pol oscillator uses ``rate * D[.]`` while the driven spin-1 atom
uses ``(rate/2) * D[.]``, and the hybrid model uses bare rates on both
factors.  All detunings and strengths are in units of a reference decay
rate; lab-frame carrier frequencies are absorbed by the rotating frames
and never appear at runtime.

Models
------
* ``DrivenVdp`` - oscillator with one-photon gain and two-photon damping,
  harmonically driven: ``H = -detuning a^+a + i drive (a - a^+)``.
* ``CoupledVdpCoherent`` - two such oscillators (no local drives) with
  ``H_int = coupling (a1^+ a2 + a1 a2^+)``.
* ``CoupledVdpDissipative`` - same oscillators coupled through the shared
  jump operator ``a1 - a2`` at rate ``coupling``.
* ``DrivenSpin1`` - spin-1 atom with nonlinear gain/damping funnelling
  population into m=0, driven via ``H = detuning S_z + drive S_y``.
* ``CoupledSpin1`` - two spin-1 atoms, detuning on the second atom,
  ``H_int = i coupling (S-^A S+^B - S+^A S-^B)``.
* ``CoupledDrivenSpin1`` - two coupled spin-1 atoms, each also driven
  locally across the E2 <-> E3 transition by ``drive (S_z S+ + S- S_z)``.
* ``HybridVdpSpin1`` - oscillator exchanging excitations with a spin-1
  atom, ``H = detuning S_z + coupling (a S+ + a^+ S-)`` in the frame
  rotating at the oscillator frequency.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import ContractViolationError, DimensionError
from .lindblad import DissipatorTerm, Superoperator, liouvillian
from .operators import boson_ops, embed, spin1_ops


def _default_fock_cutoff(gain: float, damp: float) -> int:
    # low occupation at strong two-photon damping; see the truncation gate
    return 10 if damp >= 10.0 * gain else 20


def _require_rates(name_values: dict[str, float]):
    for name, value in name_values.items():
        if value < 0.0:
            raise ContractViolationError(f"{name} must be >= 0, got {value}")


def _require_limit_cycle(gain: float, damp: float, label: str):
    if gain <= 0.0 or damp <= 0.0:
        raise ContractViolationError(
            f"{label} needs positive gain and damping for a limit cycle "
            f"(gain={gain}, damp={damp})"
        )


def _require_cutoff(n_fock: int, label: str):
    if n_fock < 2:
        raise ContractViolationError(f"{label} Fock cutoff must be >= 2, got {n_fock}")


@dataclass(frozen=True)
class DrivenVdp:
    detuning: float
    drive: float
    gain: float
    damp: float
    n_fock: int = 0  # 0 selects the occupation-based default cutoff

    def __post_init__(self):
        _require_rates({"gain": self.gain, "damp": self.damp})
        _require_limit_cycle(self.gain, self.damp, "driven oscillator")
        if self.n_fock == 0:
            object.__setattr__(self, "n_fock", _default_fock_cutoff(self.gain, self.damp))
        _require_cutoff(self.n_fock, "driven oscillator")


@dataclass(frozen=True)
class CoupledVdpCoherent:
    coupling: float
    detuning1: float
    gain1: float
    damp1: float
    n_fock1: int
    detuning2: float
    gain2: float
    damp2: float
    n_fock2: int

    def __post_init__(self):
        _require_rates({"gain1": self.gain1, "damp1": self.damp1,
                        "gain2": self.gain2, "damp2": self.damp2})
        _require_limit_cycle(self.gain1, self.damp1, "oscillator 1")
        _require_limit_cycle(self.gain2, self.damp2, "oscillator 2")
        _require_cutoff(self.n_fock1, "oscillator 1")
        _require_cutoff(self.n_fock2, "oscillator 2")


@dataclass(frozen=True)
class CoupledVdpDissipative:
    coupling: float
    detuning1: float
    gain1: float
    damp1: float
    n_fock1: int
    detuning2: float
    gain2: float
    damp2: float
    n_fock2: int

    def __post_init__(self):
        _require_rates({"coupling": self.coupling,
                        "gain1": self.gain1, "damp1": self.damp1,
                        "gain2": self.gain2, "damp2": self.damp2})
        _require_limit_cycle(self.gain1, self.damp1, "oscillator 1")
        _require_limit_cycle(self.gain2, self.damp2, "oscillator 2")
        _require_cutoff(self.n_fock1, "oscillator 1")
        _require_cutoff(self.n_fock2, "oscillator 2")


@dataclass(frozen=True)
class DrivenSpin1:
    detuning: float
    drive: float
    gain: float
    damp: float

    def __post_init__(self):
        _require_rates({"gain": self.gain, "damp": self.damp})
        _require_limit_cycle(self.gain, self.damp, "driven spin")


@dataclass(frozen=True)
class CoupledSpin1:
    detuning: float
    coupling: float
    gain_a: float
    damp_a: float
    gain_b: float
    damp_b: float

    def __post_init__(self):
        _require_rates({"gain_a": self.gain_a, "damp_a": self.damp_a,
                        "gain_b": self.gain_b, "damp_b": self.damp_b})
        _require_limit_cycle(self.gain_a, self.damp_a, "spin A")
        _require_limit_cycle(self.gain_b, self.damp_b, "spin B")


@dataclass(frozen=True)
class CoupledDrivenSpin1:
    drive_detuning: float
    atom_detuning: float
    drive: float
    coupling: float
    gain_a: float
    damp_a: float
    gain_b: float
    damp_b: float

    def __post_init__(self):
        _require_rates({"gain_a": self.gain_a, "damp_a": self.damp_a,
                        "gain_b": self.gain_b, "damp_b": self.damp_b})
        _require_limit_cycle(self.gain_a, self.damp_a, "spin A")
        _require_limit_cycle(self.gain_b, self.damp_b, "spin B")


@dataclass(frozen=True)
class HybridVdpSpin1:
    detuning: float
    coupling: float
    osc_gain: float
    osc_damp: float
    spin_gain: float
    spin_damp: float
    n_fock: int = 0

    def __post_init__(self):
        _require_rates({"osc_gain": self.osc_gain, "osc_damp": self.osc_damp,
                        "spin_gain": self.spin_gain, "spin_damp": self.spin_damp})
        _require_limit_cycle(self.osc_gain, self.osc_damp, "oscillator")
        _require_limit_cycle(self.spin_gain, self.spin_damp, "spin")
        if self.n_fock == 0:
            object.__setattr__(self, "n_fock", _default_fock_cutoff(self.osc_gain, self.osc_damp))
        _require_cutoff(self.n_fock, "oscillator")


ModelSpec = Union[
    DrivenVdp,
    CoupledVdpCoherent,
    CoupledVdpDissipative,
    DrivenSpin1,
    CoupledSpin1,
    CoupledDrivenSpin1,
    HybridVdpSpin1,
]

MODEL_TYPES: dict[str, type] = {
    "driven_vdp": DrivenVdp,
    "coupled_vdp_coherent": CoupledVdpCoherent,
    "coupled_vdp_dissipative": CoupledVdpDissipative,
    "driven_spin1": DrivenSpin1,
    "coupled_spin1": CoupledSpin1,
    "coupled_driven_spin1": CoupledDrivenSpin1,
    "hybrid_vdp_spin1": HybridVdpSpin1,
}

MODEL_NAMES: dict[type, str] = {cls: name for name, cls in MODEL_TYPES.items()}


class BuiltModel(NamedTuple):
    hamiltonian: np.ndarray
    dissipators: tuple[DissipatorTerm, ...]
    dims: tuple[int, ...]


def _spin_dissipators(dims, site, gain, damp) -> list[DissipatorTerm]:
    spin = spin1_ops()
    s_plus = embed(spin.s_plus, site, dims)
    s_minus = embed(spin.s_minus, site, dims)
    s_z = embed(spin.s_z, site, dims)
    # nonlinear gain/damping: both jumps funnel population into m=0
    return [
        DissipatorTerm(s_plus @ s_z, gain / 2.0),
        DissipatorTerm(s_minus @ s_z, damp / 2.0),
    ]


def build_model(spec: ModelSpec) -> BuiltModel:
    """Hamiltonian, dissipator list, and subsystem dims for a catalog model."""
    if isinstance(spec, DrivenVdp):
        ops = boson_ops(spec.n_fock)
        h = -spec.detuning * ops.number + 1j * spec.drive * (ops.a - ops.adag)
        terms = (
            DissipatorTerm(ops.adag, spec.gain),
            DissipatorTerm(ops.a @ ops.a, spec.damp),
        )
        return BuiltModel(h, terms, (spec.n_fock,))

    if isinstance(spec, (CoupledVdpCoherent, CoupledVdpDissipative)):
        dims = (spec.n_fock1, spec.n_fock2)
        a1 = embed(boson_ops(spec.n_fock1).a, 0, dims)
        a2 = embed(boson_ops(spec.n_fock2).a, 1, dims)
        h = (
            -spec.detuning1 * (a1.conj().T @ a1)
            - spec.detuning2 * (a2.conj().T @ a2)
        )
        terms = [
            DissipatorTerm(a1.conj().T, spec.gain1),
            DissipatorTerm(a1 @ a1, spec.damp1),
            DissipatorTerm(a2.conj().T, spec.gain2),
            DissipatorTerm(a2 @ a2, spec.damp2),
        ]
        if isinstance(spec, CoupledVdpCoherent):
            h = h + spec.coupling * (a1.conj().T @ a2 + a1 @ a2.conj().T)
        else:
            terms.append(DissipatorTerm(a1 - a2, spec.coupling))
        return BuiltModel(h, tuple(terms), dims)

    if isinstance(spec, DrivenSpin1):
        spin = spin1_ops()
        h = spec.detuning * spin.s_z + spec.drive * spin.s_y
        terms = (
            DissipatorTerm(spin.s_plus @ spin.s_z, spec.gain / 2.0),
            DissipatorTerm(spin.s_minus @ spin.s_z, spec.damp / 2.0),
        )
        return BuiltModel(h, terms, (3,))

    if isinstance(spec, CoupledSpin1):
        dims = (3, 3)
        spin = spin1_ops()
        sp_a = embed(spin.s_plus, 0, dims)
        sm_a = embed(spin.s_minus, 0, dims)
        sp_b = embed(spin.s_plus, 1, dims)
        sm_b = embed(spin.s_minus, 1, dims)
        sz_b = embed(spin.s_z, 1, dims)
        h = spec.detuning * sz_b + 1j * spec.coupling * (sm_a @ sp_b - sp_a @ sm_b)
        terms = tuple(
            _spin_dissipators(dims, 0, spec.gain_a, spec.damp_a)
            + _spin_dissipators(dims, 1, spec.gain_b, spec.damp_b)
        )
        return BuiltModel(h, terms, dims)

    if isinstance(spec, CoupledDrivenSpin1):
        dims = (3, 3)
        spin = spin1_ops()
        sp_a = embed(spin.s_plus, 0, dims)
        sm_a = embed(spin.s_minus, 0, dims)
        sz_a = embed(spin.s_z, 0, dims)
        sp_b = embed(spin.s_plus, 1, dims)
        sm_b = embed(spin.s_minus, 1, dims)
        sz_b = embed(spin.s_z, 1, dims)
        local_drive = (sz_a @ sp_a + sm_a @ sz_a) + (sz_b @ sp_b + sm_b @ sz_b)
        h = (
            spec.drive_detuning * sz_a
            + (spec.drive_detuning + spec.atom_detuning) * sz_b
            + spec.drive * local_drive
            + 1j * spec.coupling * (sp_a @ sm_b - sm_a @ sp_b)
        )
        terms = tuple(
            _spin_dissipators(dims, 0, spec.gain_a, spec.damp_a)
            + _spin_dissipators(dims, 1, spec.gain_b, spec.damp_b)
        )
        return BuiltModel(h, terms, dims)

    if isinstance(spec, HybridVdpSpin1):
        dims = (spec.n_fock, 3)
        spin = spin1_ops()
        a = embed(boson_ops(spec.n_fock).a, 0, dims)
        s_plus = embed(spin.s_plus, 1, dims)
        s_minus = embed(spin.s_minus, 1, dims)
        s_z = embed(spin.s_z, 1, dims)
        # excitation exchange commutes with the free part, so in the frame
        # rotating at the oscillator frequency only the detuning survives
        h = spec.detuning * s_z + spec.coupling * (a @ s_plus + a.conj().T @ s_minus)
        terms = (
            DissipatorTerm(a.conj().T, spec.osc_gain),
            DissipatorTerm(a @ a, spec.osc_damp),
            DissipatorTerm(s_plus @ s_z, spec.spin_gain),
            DissipatorTerm(s_minus @ s_z, spec.spin_damp),
        )
        return BuiltModel(h, terms, dims)

    raise DimensionError(f"unknown model spec {type(spec).__name__}")


def model_liouvillian(spec: ModelSpec) -> Superoperator:
    built = build_model(spec)
    return liouvillian(built.hamiltonian, built.dissipators, built.dims)


def model_dims(spec: ModelSpec) -> tuple[int, ...]:
    if isinstance(spec, DrivenVdp):
        return (spec.n_fock,)
    if isinstance(spec, (CoupledVdpCoherent, CoupledVdpDissipative)):
        return (spec.n_fock1, spec.n_fock2)
    if isinstance(spec, DrivenSpin1):
        return (3,)
    if isinstance(spec, (CoupledSpin1, CoupledDrivenSpin1)):
        return (3, 3)
    if isinstance(spec, HybridVdpSpin1):
        return (spec.n_fock, 3)
    raise DimensionError(f"unknown model spec {type(spec).__name__}")


_FOCK_FIELDS = {
    DrivenVdp: ("n_fock",),
    CoupledVdpCoherent: ("n_fock1", "n_fock2"),
    CoupledVdpDissipative: ("n_fock1", "n_fock2"),
    DrivenSpin1: (),
    CoupledSpin1: (),
    CoupledDrivenSpin1: (),
    HybridVdpSpin1: ("n_fock",),
}

_DRIVE_FIELDS = {
    DrivenVdp: ("drive",),
    CoupledVdpCoherent: ("coupling",),
    CoupledVdpDissipative: ("coupling",),
    DrivenSpin1: ("drive",),
    CoupledSpin1: ("coupling",),
    CoupledDrivenSpin1: ("drive", "coupling"),
    HybridVdpSpin1: ("coupling",),
}


def has_oscillator(spec: ModelSpec) -> bool:
    return bool(_FOCK_FIELDS[type(spec)])


def fock_sites(spec: ModelSpec) -> tuple[int, ...]:
    """Indices of Fock-truncated factors in the model's dims."""
    if isinstance(spec, HybridVdpSpin1):
        return (0,)
    return tuple(range(len(_FOCK_FIELDS[type(spec)])))


def qutrit_sites(spec: ModelSpec) -> tuple[int, ...]:
    """Indices of spin-1 factors in the model's dims."""
    return tuple(site for site, d in enumerate(model_dims(spec)) if d == 3 and site not in fock_sites(spec))


def fock_padded(spec: ModelSpec, extra: int) -> ModelSpec:
    """Same model with every Fock cutoff enlarged by ``extra`` levels."""
    fields = _FOCK_FIELDS[type(spec)]
    if not fields or extra == 0:
        return spec
    return dataclasses.replace(
        spec, **{name: getattr(spec, name) + extra for name in fields}
    )


def decoupled(spec: ModelSpec) -> ModelSpec:
    """Same model with every drive and coupling set to zero."""
    return dataclasses.replace(spec, **{name: 0.0 for name in _DRIVE_FIELDS[type(spec)]})


def sweepable_parameters(model_type: type) -> tuple[str, ...]:
    """Float-valued fields that a sweep axis may scan (cutoffs excluded)."""
    return tuple(
        f.name
        for f in dataclasses.fields(model_type)
        if f.name not in _FOCK_FIELDS[model_type]
    )


def with_parameter(spec: ModelSpec, name: str, value: float) -> ModelSpec:
    if name not in sweepable_parameters(type(spec)):
        raise DimensionError(
            f"{type(spec).__name__} has no sweepable parameter '{name}'"
        )
    return dataclasses.replace(spec, **{name: float(value)})


def default_catalog() -> dict[str, ModelSpec]:
    """One representative, well-conditioned instance of every model.

    Parameters are chosen so that every steady state is reached from the
    maximally mixed state within 50 units of the reference rate, which keeps
    the integrator cross-check cheap.
    """
    return {
        "driven_vdp": DrivenVdp(detuning=0.1, drive=0.5, gain=1.0, damp=0.5, n_fock=12),
        "coupled_vdp_coherent": CoupledVdpCoherent(
            coupling=0.3,
            detuning1=0.0, gain1=1.0, damp1=1.0, n_fock1=6,
            detuning2=0.2, gain2=1.0, damp2=1.0, n_fock2=6,
        ),
        "coupled_vdp_dissipative": CoupledVdpDissipative(
            coupling=0.3,
            detuning1=0.0, gain1=1.0, damp1=1.0, n_fock1=6,
            detuning2=0.2, gain2=1.0, damp2=1.0, n_fock2=6,
        ),
        "driven_spin1": DrivenSpin1(detuning=0.2, drive=0.3, gain=1.0, damp=10.0),
        "coupled_spin1": CoupledSpin1(
            detuning=0.2, coupling=0.5, gain_a=10.0, damp_a=1.0, gain_b=1.0, damp_b=10.0
        ),
        "coupled_driven_spin1": CoupledDrivenSpin1(
            drive_detuning=0.0, atom_detuning=0.2, drive=0.1, coupling=0.5,
            gain_a=10.0, damp_a=1.0, gain_b=1.0, damp_b=10.0,
        ),
        "hybrid_vdp_spin1": HybridVdpSpin1(
            detuning=0.1, coupling=0.3,
            osc_gain=1.0, osc_damp=0.5, spin_gain=10.0, spin_damp=1.0, n_fock=8,
        ),
    }
