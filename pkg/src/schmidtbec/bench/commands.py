"""Subcommand bodies of the ``schmidtbec`` command line."""

import csv
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.config import RunConfig
from ..physics.regimes import RegimeReport, regime_report
from ..solver.decomposition import purity_by_density_matrix, purity_of, schmidt_decompose
from ..solver.field_io import FieldCheck, verify_field, write_field
from ..solver.relaxation import GroundState, average_density_of, relax_ground_state
from .sweep import (
    build_grid,
    build_numerics,
    build_problem,
    check_grid_memory,
    resolve_atom_numbers,
    run_sweep,
    write_csv,
)

logger = logging.getLogger(__name__)

MICRON = 1e-6

SCALES_COLUMNS = (
    "N",
    "N_over_NT",
    "regime",
    "epsilon",
    "N_L",
    "N_T",
    "rho0_um",
    "r0_um",
    "aspect_ratio",
    "R_L0_um",
    "R_L0_at_NT_um",
)


def _scales_row(N: float, report: RegimeReport) -> Dict[str, Any]:
    return {
        "N": N,
        "N_over_NT": N / report.N_T,
        "regime": report.regime_label.value,
        "epsilon": report.epsilon,
        "N_L": report.N_L,
        "N_T": report.N_T,
        "rho0_um": report.rho0 / MICRON,
        "r0_um": report.r0 / MICRON,
        "aspect_ratio": report.aspect_ratio,
        "R_L0_um": report.R_L0 / MICRON,
        "R_L0_at_NT_um": report.R_L0_at_NT / MICRON,
    }


def cmd_scales(run: RunConfig, out: Optional[Union[str, Path]] = None) -> List[Dict[str, Any]]:
    """Regime scales for every atom number of the sweep.

    Rows are printed, and also written as CSV when ``out`` is given.
    """
    run.validate()
    numbers, N_T = resolve_atom_numbers(run)
    rows = [_scales_row(N, regime_report(build_problem(run, N))) for N in numbers]

    first = rows[0]
    print(f"rho0 = {first['rho0_um']:.4f} um, r0 = {first['r0_um']:.4f} um, "
          f"r0/rho0 = {first['aspect_ratio']:.4f}")
    print(f"N_L = {first['N_L']:.2f}, N_T = {N_T:.2f}, "
          f"R_L0(N_T) = {first['R_L0_at_NT_um']:.3f} um")
    for row in rows:
        print(f"  N = {row['N']:>12.2f}  N/N_T = {row['N_over_NT']:.4f}  "
              f"eps = {row['epsilon']:.4f}  {row['regime']}")

    if out is not None:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=SCALES_COLUMNS)
            writer.writeheader()
            writer.writerows(rows)
        logger.info(f"Wrote {path}")
    return rows


def cmd_sweep(run: RunConfig, out: Optional[Union[str, Path]] = None,
              workers: Optional[int] = None, mem_cap_gib: Optional[float] = None) -> Path:
    """Run the configured sweep and write its CSV."""
    rows = run_sweep(run, workers=workers, mem_cap_gib=mem_cap_gib)
    return write_csv(rows, out or run.output.out, run)


def ground_state_scalars(state: GroundState) -> Dict[str, Any]:
    """Sidecar scalars of a relaxed state: mu, energy split, purity and density."""
    grid = state.grid
    spectrum = schmidt_decompose(state, grid)
    report = purity_of(spectrum)
    return {
        "atom_number": state.atom_number,
        "mu": state.mu,
        "energy_parts": state.energy_parts.as_dict(),
        "energy": state.energy_parts.total,
        "purity": report.purity,
        "purity_density_matrix": purity_by_density_matrix(state, grid),
        "lambda1": report.lambda1_estimate,
        "schmidt_coefficients": [float(x) for x in spectrum.lambdas[:8]],
        "N_eta": average_density_of(state, grid),
        "iterations": state.iterations,
        "residual": state.residual,
    }


def cmd_ground_state(run: RunConfig, atom_number: float, out: Union[str, Path],
                     mem_cap_gib: Optional[float] = None) -> Dict[str, Any]:
    """Relax one ground state and store it as a field file with a JSON sidecar."""
    run.validate()
    spec = build_problem(run, float(round(atom_number)))
    grid = build_grid(run, spec)
    check_grid_memory(grid, mem_cap_gib if mem_cap_gib is not None else run.output.mem_cap_gib)
    state = relax_ground_state(spec, grid, build_numerics(run))
    scalars = ground_state_scalars(state)
    write_field(out, state, grid, run.config_hash(), spec.units.length, scalars)
    print(f"mu = {state.mu:.10g} hbar*omega_T, purity = {scalars['purity']:.8f}, "
          f"iterations = {state.iterations}")
    return scalars


def cmd_verify(path: Union[str, Path]) -> FieldCheck:
    """Check norm and reflection symmetry of a stored field."""
    check = verify_field(path)
    status = "OK" if check.ok() else "FAILED"
    print(f"{path}: norm = {check.norm:.12f}, max asymmetry = {check.max_asymmetry:.3e}, "
          f"min = {check.min_value:.3e} [{status}]")
    return check
