"""Parameter-grid sweep engine with deterministic CSV/JSON emission.

Grid cells are independent tasks; results land in pre-indexed slots so the
emitted bytes are identical for any worker count.  Per-cell failures are
recorded as error strings and never abort the grid.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import AxisSpec, MeasureSpec, SweepConfig, WignerSpec
from .errors import ContractViolationError, DimensionError
from .lindblad import solve_steady_state, spectral_gap
from .measures import (
    c1_measure,
    classical_mutual_information,
    l1_coherence,
    mutual_information,
    s_coh,
    vn_entropy,
)
from .models import (
    ModelSpec,
    decoupled,
    fock_padded,
    fock_sites,
    has_oscillator,
    model_liouvillian,
    with_parameter,
)
from .operators import boson_ops
from .phasespace import s_phase_spin1, wigner_grid
from .states import expectation
from .sync import (
    DIAGONAL_CORRELATED,
    DIAGONAL_PRODUCT,
    MARGINAL_PRODUCT,
    PartiallyCoherentProduct,
    omega_d,
    omega_r,
)

#: a convergence-checked sweep fails its quality gate beyond this delta
CONVERGENCE_GATE_TOL = 1e-6
#: extra Fock levels used by the truncation re-run
CONVERGENCE_PADDING = 4


def limit_cycle_from_name(name: str, pairs=None):
    if name == "diagonal_correlated":
        return DIAGONAL_CORRELATED
    if name == "diagonal_product":
        return DIAGONAL_PRODUCT
    if name == "marginal_product":
        return MARGINAL_PRODUCT
    if name == "partially_coherent_product":
        if pairs is None:
            raise ContractViolationError("partially_coherent_product requires coherent pairs")
        return PartiallyCoherentProduct(pairs=tuple(tuple(p) for p in pairs))
    raise ContractViolationError(f"unknown limit-cycle class '{name}'")


def measure_labels(measures: tuple[MeasureSpec, ...]) -> tuple[str, ...]:
    labels: list[str] = []
    for m in measures:
        labels.append(m.label)
        if m.id == "omega_r" and m.oracle_samples:
            labels.append(f"{m.label}_certificate")
    return tuple(labels)


def evaluate_measures(spec: ModelSpec, measures, seed: int = 0) -> tuple[dict[str, float], float]:
    """Steady state of one model instance and every requested measure on it."""
    liouville = model_liouvillian(spec)
    solved = solve_steady_state(liouville)
    rho = solved.state
    values: dict[str, float] = {}
    for m in measures:
        if m.id == "omega_r":
            lc_class = limit_cycle_from_name(m.limit_cycle, m.pairs)
            result = omega_r(rho, lc_class, oracle_samples=m.oracle_samples, seed=seed)
            values[m.label] = result.value
            if m.oracle_samples:
                values[f"{m.label}_certificate"] = result.certificate
        elif m.id == "omega_d":
            values[m.label] = omega_d(rho, seed=seed).value
        elif m.id == "s_coh":
            values[m.label] = s_coh(rho)
        elif m.id == "l1_coherence":
            values[m.label] = l1_coherence(rho)
        elif m.id == "vn_entropy":
            values[m.label] = vn_entropy(rho)
        elif m.id == "mutual_information":
            values[m.label] = mutual_information(rho)
        elif m.id == "classical_mutual_information":
            values[m.label] = classical_mutual_information(rho)
        elif m.id == "c1":
            values[m.label] = c1_measure(rho, boson_site=m.site)
        elif m.id == "s_phase":
            values[m.label] = s_phase_spin1(rho, spin_site=m.site, n_theta=m.n_theta, n_phi=m.n_phi)
        elif m.id == "spectral_gap":
            values[m.label] = spectral_gap(liouville)
        else:
            raise ContractViolationError(f"unknown measure id '{m.id}'")
    return values, solved.residual


@dataclass
class CellResult:
    values: dict[str, float]
    residual: float
    truncation_delta: float
    error: str | None = None


@dataclass
class SweepGrid:
    axis1: AxisSpec
    axis2: AxisSpec
    labels: tuple[str, ...]
    cells: list[list[CellResult]]

    def value_grid(self, label: str) -> np.ndarray:
        out = np.full((self.axis1.count, self.axis2.count), np.nan)
        for i, row in enumerate(self.cells):
            for j, cell in enumerate(row):
                if cell.error is None:
                    out[i, j] = cell.values.get(label, np.nan)
        return out


def _evaluate_cell(payload) -> tuple[int, int, CellResult]:
    i, j, spec, measures, convergence, seed = payload
    try:
        values, residual = evaluate_measures(spec, measures, seed=seed)
        delta = 0.0
        if convergence and has_oscillator(spec):
            padded_values, _ = evaluate_measures(
                fock_padded(spec, CONVERGENCE_PADDING), measures, seed=seed
            )
            delta = max(
                (abs(values[k] - padded_values[k]) for k in values), default=0.0
            )
        return i, j, CellResult(values=values, residual=residual, truncation_delta=delta)
    except Exception as exc:
        return i, j, CellResult(values={}, residual=math.nan, truncation_delta=math.nan,
                                error=f"{type(exc).__name__}: {exc}")


def run_sweep(config: SweepConfig, seed: int = 0) -> SweepGrid:
    """Evaluate every grid cell; deterministic output for any worker count."""
    if config.axis1 is None or config.axis2 is None:
        raise ContractViolationError("sweep requires both axes")
    if not config.measures:
        raise ContractViolationError("sweep requires at least one measure")
    values1 = config.axis1.values()
    values2 = config.axis2.values()
    payloads = []
    placeholders: list[list[CellResult | None]] = [
        [None] * config.axis2.count for _ in range(config.axis1.count)
    ]
    for i, v1 in enumerate(values1):
        for j, v2 in enumerate(values2):
            try:
                spec = with_parameter(
                    with_parameter(config.model, config.axis1.param, v1),
                    config.axis2.param,
                    v2,
                )
            except Exception as exc:
                placeholders[i][j] = CellResult(
                    values={}, residual=math.nan, truncation_delta=math.nan,
                    error=f"{type(exc).__name__}: {exc}",
                )
                continue
            payloads.append((i, j, spec, config.measures, config.convergence_check, seed))

    if config.workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_evaluate_cell, payloads, chunksize=4))
    else:
        results = [_evaluate_cell(p) for p in payloads]
    for i, j, cell in results:
        placeholders[i][j] = cell
    cells = [[cell for cell in row] for row in placeholders]
    return SweepGrid(
        axis1=config.axis1,
        axis2=config.axis2,
        labels=measure_labels(config.measures),
        cells=cells,
    )


def failed_cells(grid: SweepGrid) -> list[tuple[int, int, str]]:
    return [
        (i, j, cell.error)
        for i, row in enumerate(grid.cells)
        for j, cell in enumerate(row)
        if cell.error is not None
    ]


def quality_gate_violations(grid: SweepGrid, tol: float = CONVERGENCE_GATE_TOL) -> list[tuple[int, int, float]]:
    """Cells whose truncation delta exceeds the gate."""
    return [
        (i, j, cell.truncation_delta)
        for i, row in enumerate(grid.cells)
        for j, cell in enumerate(row)
        if cell.error is None and cell.truncation_delta > tol
    ]


def _fmt(value) -> str:
    return repr(float(value))


def emit(grid: SweepGrid, fmt: str) -> bytes:
    """Bit-stable CSV or JSON rendering of a complete grid."""
    values1 = grid.axis1.values()
    values2 = grid.axis2.values()
    if fmt == "csv":
        header = "axis1,axis2," + ",".join(grid.labels) + ",residual,truncation_delta"
        lines = [header]
        for i, v1 in enumerate(values1):
            for j, v2 in enumerate(values2):
                cell = grid.cells[i][j]
                fields = [_fmt(v1), _fmt(v2)]
                fields += [_fmt(cell.values.get(label, math.nan)) for label in grid.labels]
                fields += [_fmt(cell.residual), _fmt(cell.truncation_delta)]
                lines.append(",".join(fields))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        cells = []
        for i, v1 in enumerate(values1):
            for j, v2 in enumerate(values2):
                cell = grid.cells[i][j]
                cells.append({
                    "axis1": float(v1),
                    "axis2": float(v2),
                    "values": {label: float(cell.values.get(label, math.nan))
                               for label in grid.labels},
                    "residual": float(cell.residual),
                    "truncation_delta": float(cell.truncation_delta),
                    "error": cell.error,
                })
        document = {
            "schema_version": "1",
            "axis1": {"param": grid.axis1.param, "values": [float(v) for v in values1]},
            "axis2": {"param": grid.axis2.param, "values": [float(v) for v in values2]},
            "measures": list(grid.labels),
            "cells": cells,
        }
        return (json.dumps(document, indent=2) + "\n").encode("utf-8")
    raise ContractViolationError(f"unknown output format '{fmt}'")


def reference_mean_occupation(spec: ModelSpec, site: int) -> float:
    """Mean photon number of the undriven, uncoupled model at one Fock site."""
    reference = solve_steady_state(model_liouvillian(decoupled(spec))).state
    sub = reference.marginal((site,))
    return expectation(sub, boson_ops(sub.dim).number).real


def wigner_command(spec: ModelSpec, wspec: WignerSpec) -> bytes:
    """CSV phase-space map with the undriven-population metadata line."""
    if wspec.site not in fock_sites(spec):
        raise DimensionError(f"model has no Fock factor at site {wspec.site}")
    rho = solve_steady_state(model_liouvillian(spec)).state
    xs = np.linspace(wspec.x_lo, wspec.x_hi, wspec.x_count)
    ps = np.linspace(wspec.p_lo, wspec.p_hi, wspec.p_count)
    grid = wigner_grid(rho, wspec.site, xs, ps)
    mean_n = reference_mean_occupation(spec, wspec.site)
    warning = "true" if grid.truncation_warning else "false"
    lines = [
        f"# schema_version=1 site={wspec.site} reference_mean_occupation={_fmt(mean_n)} "
        f"truncation_warning={warning}",
        "x,p,w",
    ]
    for i, x in enumerate(xs):
        for j, p in enumerate(ps):
            lines.append(f"{_fmt(x)},{_fmt(p)},{_fmt(grid.values[i, j])}")
    return ("\n".join(lines) + "\n").encode("utf-8")
