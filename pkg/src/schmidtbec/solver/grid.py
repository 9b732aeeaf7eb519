"""Uniform midpoint grids for the 3D solver (internal units)."""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.fft import fftfreq, rfftfreq

from ..core.errors import DomainError, GridCoverageError
from ..physics.regimes import tf_radius_zero
from ..physics.units import ProblemSpec

logger = logging.getLogger(__name__)

DEFAULT_POINTS = {
    1: (64, 64, 512),
    2: (256, 256, 64),
}
DEFAULT_LONGITUDINAL_AXES = {
    1: (2,),
    2: (0, 1),
}
TRANSVERSE_BOX = 6.0
MIN_TRANSVERSE_COVERAGE = 4.0
LONGITUDINAL_BOX_FACTOR = 1.5
# working arrays held by a relaxation run, in units of one real field
FIELD_COPIES = 8


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and not n & (n - 1)


@dataclass(frozen=True)
class Grid:
    """Cell-centered grid x_j = -L + (j + 1/2) h on each axis, lengths in rho0."""
    points: Tuple[int, int, int]
    half_widths: Tuple[float, float, float]
    longitudinal_axes: Tuple[int, ...] = (2,)

    def __post_init__(self) -> None:
        if len(self.points) != 3 or len(self.half_widths) != 3:
            raise DomainError("a grid needs three axes")
        for n in self.points:
            if not _is_power_of_two(n):
                raise DomainError(f"grid points must be powers of two, got {n}")
        if not self.longitudinal_axes or len(self.longitudinal_axes) > 2:
            raise DomainError(f"need one or two longitudinal axes, got {self.longitudinal_axes}")
        if any(ax not in (0, 1, 2) for ax in self.longitudinal_axes):
            raise DomainError(f"invalid longitudinal axes {self.longitudinal_axes}")
        if any(not L > 0 for L in self.half_widths):
            raise DomainError("half-widths must be positive")

    @classmethod
    def for_spec(cls, spec: ProblemSpec, points: Optional[Sequence[int]] = None,
                 transverse_half_width: Optional[float] = None,
                 longitudinal_half_width: Optional[float] = None,
                 longitudinal_axes: Optional[Sequence[int]] = None) -> "Grid":
        """Default box for ``spec``: 6 rho0 across, 1.5 max(R_L0, 3 r0) along.

        Raises:
            GridCoverageError: If an override leaves the cloud uncovered.
        """
        d = spec.d
        axes = (tuple(longitudinal_axes) if longitudinal_axes is not None
                else DEFAULT_LONGITUDINAL_AXES[d])
        if len(axes) != d:
            raise DomainError(f"d={d} needs {d} longitudinal axes, got {axes}")
        R_L0 = tf_radius_zero(spec) if spec.atom_number > 1 else 0.0
        L_T = transverse_half_width if transverse_half_width is not None else TRANSVERSE_BOX
        L_L = (longitudinal_half_width if longitudinal_half_width is not None
               else LONGITUDINAL_BOX_FACTOR * max(R_L0, 3.0 * spec.r0))
        if points is None:
            default = DEFAULT_POINTS[d]
            transverse_n = default[0] if d == 1 else default[2]
            longitudinal_n = default[2] if d == 1 else default[0]
            points = tuple(longitudinal_n if ax in axes else transverse_n for ax in range(3))
        half_widths = tuple(L_L if ax in axes else L_T for ax in range(3))
        grid = cls(tuple(int(n) for n in points), half_widths, axes)
        grid.check_coverage(R_L0)
        return grid

    @property
    def transverse_axes(self) -> Tuple[int, ...]:
        return tuple(ax for ax in range(3) if ax not in self.longitudinal_axes)

    @property
    def d(self) -> int:
        return len(self.longitudinal_axes)

    @property
    def spacing(self) -> Tuple[float, float, float]:
        return tuple(2.0 * L / n for L, n in zip(self.half_widths, self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def transverse_cell_volume(self) -> float:
        return float(np.prod([self.spacing[ax] for ax in self.transverse_axes]))

    @property
    def longitudinal_cell_volume(self) -> float:
        return float(np.prod([self.spacing[ax] for ax in self.longitudinal_axes]))

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    def axis(self, ax: int) -> np.ndarray:
        n, L = self.points[ax], self.half_widths[ax]
        h = 2.0 * L / n
        return -L + (np.arange(n) + 0.5) * h

    def coordinates(self) -> List[np.ndarray]:
        """Per-axis coordinates shaped for broadcasting against the field."""
        out = []
        for ax in range(3):
            shape = [1, 1, 1]
            shape[ax] = self.points[ax]
            out.append(self.axis(ax).reshape(shape))
        return out

    def radii(self) -> Tuple[np.ndarray, np.ndarray]:
        """Broadcastable transverse radius rho and longitudinal radius r."""
        coords = self.coordinates()
        rho = np.sqrt(sum(coords[ax] ** 2 for ax in self.transverse_axes))
        r = np.sqrt(sum(coords[ax] ** 2 for ax in self.longitudinal_axes))
        return rho, r

    def wavenumbers(self) -> List[np.ndarray]:
        """Angular wavenumbers matching ``scipy.fft.rfftn`` output (last axis halved)."""
        out = []
        for ax in range(3):
            n, h = self.points[ax], self.spacing[ax]
            k = 2 * math.pi * (rfftfreq(n, h) if ax == 2 else fftfreq(n, h))
            shape = [1, 1, 1]
            shape[ax] = k.size
            out.append(k.reshape(shape))
        return out

    def memory_estimate_bytes(self) -> int:
        """Rough peak memory of a relaxation run on this grid."""
        return FIELD_COPIES * 8 * self.size

    def check_coverage(self, R_L: float) -> None:
        """Raise GridCoverageError unless the box holds the Gaussian and the TF cloud."""
        for ax in self.transverse_axes:
            if self.half_widths[ax] < MIN_TRANSVERSE_COVERAGE:
                raise GridCoverageError(
                    f"transverse half-width {self.half_widths[ax]:.3g} rho0 on axis {ax} "
                    f"is below {MIN_TRANSVERSE_COVERAGE} rho0"
                )
        needed = LONGITUDINAL_BOX_FACTOR * R_L
        for ax in self.longitudinal_axes:
            if self.half_widths[ax] < needed:
                raise GridCoverageError(
                    f"longitudinal half-width {self.half_widths[ax]:.4g} rho0 on axis {ax} "
                    f"is below 1.5 R_L = {needed:.4g} rho0"
                )

    def to_matrix(self, field: np.ndarray) -> np.ndarray:
        """Reshape a field to (transverse points) x (longitudinal points)."""
        moved = np.moveaxis(field, self.transverse_axes + self.longitudinal_axes, (0, 1, 2))
        n_T = int(np.prod([self.points[ax] for ax in self.transverse_axes]))
        return moved.reshape(n_T, -1)
