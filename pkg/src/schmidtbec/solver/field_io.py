"""Binary field files and their JSON sidecars.

Layout (see docs/FIELD_FORMAT.md): a 128-byte header followed by the field
as row-major float64 in the byte order named by the header.
"""

import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np

from ..core.errors import SchmidtBecError
from .grid import Grid
from .relaxation import GroundState

logger = logging.getLogger(__name__)

MAGIC = b"GPEFLD01"
HEADER_DTYPE = np.dtype([
    ("magic", "S8"),
    ("endian", "S1"),
    ("pad", "S7"),
    ("dims", "<i8", (3,)),
    ("half_widths", "<f8", (3,)),
    ("spec_hash", "S64"),
])


class FieldFormatError(SchmidtBecError):
    """Raised when a field file is truncated or not a field file."""
    pass


@dataclass
class FieldFile:
    psi: np.ndarray
    half_widths_m: Tuple[float, float, float]
    spec_hash: str
    sidecar: Dict[str, Any]

    @property
    def rho0_m(self) -> float:
        return float(self.sidecar["rho0_m"])

    @property
    def cell_volume(self) -> float:
        """Cell volume in rho0^3."""
        spacing = [2.0 * L / self.rho0_m / n for L, n in zip(self.half_widths_m, self.psi.shape)]
        return float(np.prod(spacing))


@dataclass(frozen=True)
class FieldCheck:
    norm: float
    max_asymmetry: float
    min_value: float

    def ok(self, norm_tol: float = 1e-8, symmetry_tol: float = 1e-6,
           sign_tol: float = 1e-10) -> bool:
        """Unit norm, reflection symmetric and nodeless (psi >= 0 up to rounding)."""
        return (abs(self.norm - 1.0) < norm_tol
                and self.max_asymmetry < symmetry_tol
                and self.min_value >= -sign_tol)


def sidecar_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_suffix(path.suffix + ".json")


def write_field(path: Union[str, Path], state: GroundState, grid: Grid, spec_hash: str,
                rho0_m: float, scalars: Dict[str, Any]) -> Path:
    """Write the field file and its sidecar; returns the sidecar path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tag = b"<" if sys.byteorder == "little" else b">"
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = MAGIC
    header["endian"] = tag
    header["dims"] = grid.points
    header["half_widths"] = [L * rho0_m for L in grid.half_widths]
    header["spec_hash"] = spec_hash.encode("ascii")
    data = np.ascontiguousarray(state.psi, dtype=np.dtype(tag.decode() + "f8"))
    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(data.tobytes(order="C"))

    side = sidecar_path(path)
    payload = dict(scalars)
    payload.update({
        "rho0_m": rho0_m,
        "dims": list(grid.points),
        "longitudinal_axes": list(grid.longitudinal_axes),
        "spec_hash": spec_hash,
    })
    with open(side, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Wrote field {path} ({data.nbytes / 2**20:.1f} MiB) and {side}")
    return side


def read_field(path: Union[str, Path]) -> FieldFile:
    """Read a field file and its sidecar (when present)."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise FieldFormatError(f"{path}: shorter than the header")
    header = np.frombuffer(raw[:HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    if header["magic"] != MAGIC:
        raise FieldFormatError(f"{path}: bad magic {header['magic']!r}")
    tag = header["endian"].decode()
    if tag not in ("<", ">"):
        raise FieldFormatError(f"{path}: bad byte-order tag {tag!r}")
    dims = tuple(int(n) for n in header["dims"])
    expected = int(np.prod(dims)) * 8
    body = raw[HEADER_DTYPE.itemsize:]
    if len(body) != expected:
        raise FieldFormatError(f"{path}: expected {expected} data bytes, found {len(body)}")
    psi = np.frombuffer(body, dtype=np.dtype(tag + "f8")).reshape(dims).astype(np.float64)

    side = sidecar_path(path)
    sidecar: Dict[str, Any] = {}
    if side.exists():
        with open(side) as f:
            sidecar = json.load(f)
    return FieldFile(
        psi=psi,
        half_widths_m=tuple(float(L) for L in header["half_widths"]),
        spec_hash=header["spec_hash"].decode("ascii"),
        sidecar=sidecar,
    )


def verify_field(path: Union[str, Path]) -> FieldCheck:
    """Norm, reflection symmetry and sign of a stored ground state."""
    field = read_field(path)
    if "rho0_m" not in field.sidecar:
        raise FieldFormatError(f"{path}: sidecar with rho0_m is required for verification")
    psi = field.psi
    norm = float(np.sum(psi ** 2)) * field.cell_volume
    peak = float(np.max(np.abs(psi))) or 1.0
    asymmetry = max(float(np.max(np.abs(psi - np.flip(psi, axis=ax)))) for ax in range(3)) / peak
    return FieldCheck(norm=norm, max_asymmetry=asymmetry, min_value=float(psi.min()))
