"""N-sweeps across estimators and their CSV output."""

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from .. import __version__
from ..core.config import ConfigError, MemoryBudgetError, RunConfig
from ..core.errors import DomainError, SchmidtBecError
from ..core.performance import PerformanceMonitor
from ..physics.regimes import upper_critical_N, upper_critical_N_balance
from ..physics.schmidt import (
    RadiusMode,
    average_density,
    chemical_potential,
    purity_first_order,
    solve_RL,
)
from ..physics.units import AtomSpecies, ProblemSpec, TrapSpec, species_by_name
from ..physics.variational import solve_variational, variational_average_density, variational_purity
from ..solver.decomposition import purity_of, schmidt_decompose
from ..solver.grid import Grid
from ..solver.relaxation import Numerics, average_density_of, relax_ground_state

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "N",
    "N_over_NT",
    "method",
    "mu_over_hbar_omegaT",
    "N_eta",
    "N_eta_dominant",
    "purity",
    "R_L",
    "runtime_s",
    "error",
)


@dataclass
class SweepRow:
    """One (N, method) result; N_eta in units of 1/(rho0^2 a), R_L in rho0."""
    N: float
    N_over_NT: float
    method: str
    mu_over_hbar_omegaT: Optional[float] = None
    N_eta: Optional[float] = None
    N_eta_dominant: Optional[float] = None
    purity: Optional[float] = None
    R_L: Optional[float] = None
    runtime_s: float = 0.0
    error: Optional[str] = None

    def sort_key(self) -> Tuple[float, str]:
        return (self.N, self.method)

    def to_csv_row(self) -> Dict[str, str]:
        out = {}
        for name, value in asdict(self).items():
            if value is None:
                out[name] = ""
            elif isinstance(value, float):
                out[name] = repr(value)
            else:
                out[name] = str(value)
        return out


def build_species(run: RunConfig) -> AtomSpecies:
    cfg = run.species
    if cfg.mass_u is not None and cfg.scattering_length_a0 is not None:
        return AtomSpecies.from_atomic_units(cfg.mass_u, cfg.scattering_length_a0,
                                             cfg.name or "custom")
    return species_by_name(cfg.name)


def build_problem(run: RunConfig, atom_number: float) -> ProblemSpec:
    """ProblemSpec for ``atom_number`` under the run's species and trap.

    Raises:
        ConfigError: If the species or trap sections describe no valid problem.
    """
    trap = run.trap
    try:
        species = build_species(run)
    except DomainError as e:
        raise ConfigError(str(e), field_path="species") from e
    try:
        trap_spec = TrapSpec.from_hz(trap.omega_T_hz, trap.omega_L_hz, trap.d, trap.q, trap.k)
    except DomainError as e:
        raise ConfigError(str(e), field_path="trap") from e
    return ProblemSpec(species, trap_spec, atom_number)


def build_grid(run: RunConfig, spec: ProblemSpec) -> Grid:
    g = run.grid
    return Grid.for_spec(spec, g.points, g.transverse_half_width, g.longitudinal_half_width)


def build_numerics(run: RunConfig) -> Numerics:
    n = run.numerics
    return Numerics(
        dt=n.dt,
        tol=n.tol,
        max_iters=n.max_iters,
        initial_state=n.initial_state,
        fixed_iterations=n.fixed_iterations,
        energy_every=n.energy_every,
        fft_workers=n.fft_workers,
        n_max=run.methods.n_max,
    )


def resolve_atom_numbers(run: RunConfig) -> Tuple[List[float], float]:
    """Absolute atom numbers of the sweep, ascending, and N_T."""
    spec = build_problem(run, 2.0)
    N_T = upper_critical_N(spec) if spec.trap.is_harmonic else upper_critical_N_balance(spec)
    sweep = run.sweep
    scale = N_T if sweep.relative_to_NT else 1.0
    if sweep.atom_numbers is not None:
        values = [float(n) * scale for n in sweep.atom_numbers]
    else:
        lo = sweep.n_min * scale if sweep.n_min is not None else max(2.0, 0.01 * N_T)
        hi = sweep.n_max * scale if sweep.n_max is not None else N_T
        if sweep.n_points == 1:
            values = [lo]
        else:
            values = list(np.geomspace(lo, hi, sweep.n_points))
    return sorted(set(values)), N_T


def check_memory_budget(run: RunConfig, mem_cap_gib: Optional[float] = None) -> None:
    """Refuse solver sweeps whose grid would exceed the memory cap.

    Raises:
        MemoryBudgetError: If the estimate exceeds the cap.
    """
    if "solver-3d" not in run.methods.enabled:
        return
    numbers, _ = resolve_atom_numbers(run)
    check_grid_memory(build_grid(run, build_problem(run, max(numbers))),
                      mem_cap_gib if mem_cap_gib is not None else run.output.mem_cap_gib)


def check_grid_memory(grid: Grid, cap: float) -> None:
    """Raise MemoryBudgetError when ``grid`` needs more than ``cap`` GiB."""
    estimate = grid.memory_estimate_bytes() / 2 ** 30
    if estimate > cap:
        raise MemoryBudgetError(
            f"solver grid {grid.points} needs about {estimate:.2f} GiB, above the {cap:g} GiB cap",
            field_path="output.mem_cap_gib",
        )


def _formula(spec: ProblemSpec, mode: RadiusMode) -> Dict[str, Optional[float]]:
    density = average_density(spec, mode)
    R_L, _ = solve_RL(spec, mode)
    return {
        "mu_over_hbar_omegaT": chemical_potential(spec, mode),
        "N_eta": density.N_eta * spec.a,
        "N_eta_dominant": density.N_eta_dominant * spec.a,
        "purity": purity_first_order(spec),
        "R_L": R_L,
    }


def _variational(spec: ProblemSpec, n_points: int) -> Dict[str, Optional[float]]:
    sol = solve_variational(spec, n_points)
    return {
        "mu_over_hbar_omegaT": sol.mu_d,
        "N_eta": variational_average_density(sol, n_points) * spec.a,
        "purity": variational_purity(sol, n_points),
        "R_L": sol.R_dL,
    }


def _solver(spec: ProblemSpec, run: RunConfig) -> Dict[str, Optional[float]]:
    if spec.atom_number != round(spec.atom_number):
        spec = spec.with_atom_number(float(round(spec.atom_number)))
        logger.info(f"solver-3d rounds N to {spec.atom_number:g}")
    grid = build_grid(run, spec)
    state = relax_ground_state(spec, grid, build_numerics(run))
    spectrum = schmidt_decompose(state, grid)
    return {
        "mu_over_hbar_omegaT": state.mu,
        "N_eta": average_density_of(state, grid) * spec.a,
        "purity": purity_of(spectrum).purity,
    }


def evaluate_point(run: RunConfig, atom_number: float, N_T: float, method: str,
                   monitor: Optional[PerformanceMonitor] = None) -> SweepRow:
    """Run one method at one atom number; failures land in the row's error field."""
    row = SweepRow(N=atom_number, N_over_NT=atom_number / N_T, method=method)
    monitor = monitor or PerformanceMonitor()
    with monitor.measure(method) as timing:
        try:
            spec = build_problem(run, atom_number)
            if method == "formula-first-order":
                values = _formula(spec, RadiusMode.FIRST_ORDER)
            elif method == "formula-exact-RL":
                values = _formula(spec, RadiusMode.EXACT)
            elif method == "variational":
                values = _variational(spec, run.methods.quadrature_points)
            elif method == "solver-3d":
                values = _solver(spec, run)
            else:
                raise DomainError(f"unknown method {method!r}")
            for name, value in values.items():
                setattr(row, name, value)
        except SchmidtBecError as e:
            logger.warning(f"{method} failed at N={atom_number:g}: {e}")
            row.error = f"{type(e).__name__}: {e}"
    row.runtime_s = timing.seconds
    return row


def _evaluate_task(task: Tuple[RunConfig, float, float, str]) -> SweepRow:
    return evaluate_point(*task)


def run_sweep(run: RunConfig, workers: Optional[int] = None,
              mem_cap_gib: Optional[float] = None) -> List[SweepRow]:
    """Evaluate every (N, method) pair; rows come back sorted by N then method."""
    run.validate()
    check_memory_budget(run, mem_cap_gib)
    numbers, N_T = resolve_atom_numbers(run)
    methods = sorted(run.methods.enabled)
    tasks = [(run, N, N_T, method) for N in numbers for method in methods]
    workers = workers or run.output.workers

    logger.info(f"Sweep: {len(numbers)} atom numbers x {len(methods)} methods, N_T={N_T:.6g}, "
                f"workers={workers}")
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_task, tasks))
    else:
        rows = [_evaluate_task(task) for task in tasks]
    rows.sort(key=SweepRow.sort_key)

    monitor = PerformanceMonitor()
    for row in rows:
        monitor.record(row.method, row.runtime_s)
    logger.info("Sweep timing:\n" + monitor.get_report())
    failures = sum(1 for row in rows if row.error)
    if failures:
        logger.warning(f"{failures} of {len(rows)} sweep rows failed")
    return rows


def header_line(run: RunConfig) -> str:
    return f"# schmidtbec {__version__} config_hash={run.config_hash()}"


def write_csv(rows: Iterable[SweepRow], out: Union[str, Path], run: RunConfig) -> Path:
    """Write sweep rows with a leading comment line carrying version and config hash."""
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(header_line(run) + "\n")
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_csv_row())
    logger.info(f"Wrote {path}")
    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Rows of a sweep CSV as dictionaries (comment line skipped)."""
    with open(path, newline="") as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))


def collapse_deviation(curves: List[List[SweepRow]], column: str) -> float:
    """Largest relative spread of ``column`` across curves at matched N/N_T.

    Curves are interpolated in log(N/N_T) onto the first curve's points that
    lie inside every curve's range.
    """
    def series(rows: List[SweepRow]) -> Tuple[np.ndarray, np.ndarray]:
        good = [r for r in rows if getattr(r, column) is not None and not r.error]
        x = np.log([r.N_over_NT for r in good])
        y = np.array([getattr(r, column) for r in good], dtype=float)
        return x, y

    data = [series(c) for c in curves]
    lo = max(x.min() for x, _ in data)
    hi = min(x.max() for x, _ in data)
    ref_x = data[0][0]
    shared_x = ref_x[(ref_x >= lo) & (ref_x <= hi)]
    worst = 0.0
    for x0 in shared_x:
        values = [np.interp(x0, x, y) for x, y in data]
        centre = float(np.mean(values))
        spread = (max(values) - min(values)) / abs(centre) if centre else math.inf
        worst = max(worst, spread)
    return worst
