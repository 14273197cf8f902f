"""Grids, cell-centered fields, quadrature, norms, and level-set measures.

Layout conventions:
  * periodic (torus) grids store interior cells only and cover [0, L)^N
    with cell centers at (i + 1/2) h;
  * box grids reserve one ghost layer per face (storage shape n + 2 per
    axis) and are centered on the origin, x in (-L/2, L/2)^N.

All reductions use numpy's pairwise summation over the fixed row-major
cell order, so results are reproducible run to run and independent of
thread settings.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .params import ModelParams


class FieldCorruptionError(RuntimeError):
    """A field holds non-finite samples."""


class PositivityError(RuntimeError):
    """A density field violates strict positivity."""


class Topology(enum.Enum):
    PERIODIC = "P"
    BOX = "B"


@dataclass(frozen=True)
class Grid:
    """Uniform rectilinear mesh on a torus or an origin-centered box."""

    dim: int
    extent: tuple[int, ...]
    length: tuple[float, ...]
    topology: Topology

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2, or 3")
        if len(self.extent) != self.dim or len(self.length) != self.dim:
            raise ValueError("extent/length must have one entry per axis")
        if any(n < 4 for n in self.extent):
            raise ValueError("need at least 4 cells per axis")
        if any(L <= 0.0 for L in self.length):
            raise ValueError("axis lengths must be positive")

    @classmethod
    def torus(cls, dim: int, n, length=1.0) -> "Grid":
        ns = (n,) * dim if isinstance(n, int) else tuple(n)
        Ls = (float(length),) * dim if np.isscalar(length) else tuple(length)
        return cls(dim, ns, Ls, Topology.PERIODIC)

    @classmethod
    def box(cls, dim: int, n, length) -> "Grid":
        ns = (n,) * dim if isinstance(n, int) else tuple(n)
        Ls = (float(length),) * dim if np.isscalar(length) else tuple(length)
        return cls(dim, ns, Ls, Topology.BOX)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / n for L, n in zip(self.length, self.extent))

    @property
    def min_spacing(self) -> float:
        return min(self.spacing)

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    @property
    def volume(self) -> float:
        return math.prod(self.length)

    @property
    def storage_shape(self) -> tuple[int, ...]:
        if self.topology is Topology.BOX:
            return tuple(n + 2 for n in self.extent)
        return self.extent

    @property
    def interior_slices(self) -> tuple[slice, ...]:
        if self.topology is Topology.BOX:
            return tuple(slice(1, -1) for _ in range(self.dim))
        return tuple(slice(None) for _ in range(self.dim))

    def axes(self) -> list[np.ndarray]:
        """Cell-center coordinates per axis (interior cells)."""
        out = []
        for n, L, h in zip(self.extent, self.length, self.spacing):
            x = (np.arange(n) + 0.5) * h
            if self.topology is Topology.BOX:
                x -= L / 2.0
            out.append(x)
        return out

    def meshgrid(self) -> list[np.ndarray]:
        return list(np.meshgrid(*self.axes(), indexing="ij"))


@dataclass
class ScalarField:
    """Cell-centered scalar samples; box grids include ghost storage."""

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != self.grid.storage_shape:
            raise ValueError(
                f"data shape {self.data.shape} != storage {self.grid.storage_shape}")

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.storage_shape))

    @classmethod
    def full(cls, grid: Grid, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.storage_shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "ScalarField":
        f = cls.zeros(grid)
        f.interior[...] = fn(*grid.meshgrid())
        return f

    @classmethod
    def from_interior(cls, grid: Grid, values: np.ndarray) -> "ScalarField":
        f = cls.zeros(grid)
        f.interior[...] = values
        return f

    @property
    def interior(self) -> np.ndarray:
        return self.data[self.grid.interior_slices]

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.data.copy())

    def check_finite(self, what: str = "scalar field") -> None:
        if not np.all(np.isfinite(self.interior)):
            raise FieldCorruptionError(f"{what} contains non-finite samples")


@dataclass
class VectorField:
    """Cell-centered vector samples, one component array per spatial axis."""

    grid: Grid
    data: np.ndarray  # shape (dim, *storage_shape)

    def __post_init__(self):
        want = (self.grid.dim,) + self.grid.storage_shape
        if self.data.shape != want:
            raise ValueError(f"data shape {self.data.shape} != {want}")

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        return cls(grid, np.zeros((grid.dim,) + grid.storage_shape))

    @classmethod
    def from_functions(cls, grid: Grid, fns) -> "VectorField":
        u = cls.zeros(grid)
        mesh = grid.meshgrid()
        for d, fn in enumerate(fns):
            u.interior[d] = fn(*mesh)
        return u

    @classmethod
    def from_interior(cls, grid: Grid, values: np.ndarray) -> "VectorField":
        u = cls.zeros(grid)
        u.interior[...] = values
        return u

    @property
    def interior(self) -> np.ndarray:
        return self.data[(slice(None),) + self.grid.interior_slices]

    def component(self, d: int) -> ScalarField:
        return ScalarField(self.grid, self.data[d])

    def copy(self) -> "VectorField":
        return VectorField(self.grid, self.data.copy())

    def check_finite(self, what: str = "vector field") -> None:
        if not np.all(np.isfinite(self.interior)):
            raise FieldCorruptionError(f"{what} contains non-finite samples")


@dataclass
class State:
    """One (rho, u, t) snapshot of the evolving system."""

    rho: ScalarField
    u: VectorField
    t: float
    params: ModelParams

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    def copy(self) -> "State":
        return State(self.rho.copy(), self.u.copy(), self.t, self.params)

    def validate(self, rho_floor: float = 0.0) -> None:
        self.rho.check_finite("density")
        self.u.check_finite("velocity")
        lo = float(self.rho.interior.min())
        if lo <= rho_floor:
            raise PositivityError(
                f"density reached {lo:.3e} at t={self.t:.6g} "
                f"(floor {rho_floor:.3e})")


# ---------------------------------------------------------------------------
# quadrature and norms


def integrate(f: ScalarField | np.ndarray, grid: Grid | None = None) -> float:
    """Midpoint-rule integral over the domain; exact for constants."""
    if isinstance(f, ScalarField):
        grid = f.grid
        vals = f.interior
    else:
        assert grid is not None
        vals = f
    if not np.all(np.isfinite(vals)):
        raise FieldCorruptionError("integrand contains non-finite samples")
    return float(vals.sum()) * grid.cell_volume


def lp_norm(f: ScalarField | np.ndarray, p: float,
            grid: Grid | None = None) -> float:
    """L^p norm by quadrature; p = inf gives the max norm."""
    if isinstance(f, ScalarField):
        grid = f.grid
        vals = f.interior
    else:
        assert grid is not None
        vals = f
    if math.isinf(p):
        return float(np.abs(vals).max())
    if p < 1.0:
        raise ValueError("p must be >= 1 or inf")
    if not np.all(np.isfinite(vals)):
        raise FieldCorruptionError("integrand contains non-finite samples")
    return float((np.abs(vals) ** p).sum() * grid.cell_volume) ** (1.0 / p)


def level_set_measure(f: ScalarField, k: float, side: str = "above") -> float:
    """Lebesgue measure estimate of {f > k} (resp. {f < k}): cell count x volume."""
    vals = f.interior
    if side == "above":
        count = int((vals > k).sum())
    elif side == "below":
        count = int((vals < k).sum())
    else:
        raise ValueError("side must be 'above' or 'below'")
    return count * f.grid.cell_volume


# ---------------------------------------------------------------------------
# snapshot format
#
# One ASCII header line, then row-major little-endian float64 of the
# interior samples:
#   DEGVISC-FIELD v1 dim=<N> n=<n1,..> L=<L1,..> topo=<P|B> kind=<scalar|vector> t=<time>

_MAGIC = "DEGVISC-FIELD v1"


def _header(grid: Grid, kind: str, t: float) -> str:
    n = ",".join(str(v) for v in grid.extent)
    L = ",".join(format(v, ".17g") for v in grid.length)
    return (f"{_MAGIC} dim={grid.dim} n={n} L={L} "
            f"topo={grid.topology.value} kind={kind} t={format(t, '.17g')}\n")


def write_field(path, field: ScalarField | VectorField, t: float = 0.0) -> None:
    kind = "scalar" if isinstance(field, ScalarField) else "vector"
    payload = np.ascontiguousarray(field.interior, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_header(field.grid, kind, t).encode("ascii"))
        fh.write(payload.tobytes())


def read_field(path) -> tuple[ScalarField | VectorField, float]:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii", errors="replace").rstrip("\n")
        raw = fh.read()
    if not header.startswith(_MAGIC):
        raise ValueError(f"{path}: not a DEGVISC-FIELD v1 file")
    kv = dict(item.split("=", 1) for item in header[len(_MAGIC):].split())
    dim = int(kv["dim"])
    extent = tuple(int(v) for v in kv["n"].split(","))
    length = tuple(float(v) for v in kv["L"].split(","))
    topo = Topology(kv["topo"])
    t = float(kv["t"])
    grid = Grid(dim, extent, length, topo)
    count = math.prod(extent)
    if kv["kind"] == "vector":
        count *= dim
    data = np.frombuffer(raw, dtype="<f8")
    if data.size != count:
        raise ValueError(
            f"{path}: expected {count} samples, found {data.size} (truncated?)")
    if kv["kind"] == "vector":
        vals = data.reshape((dim,) + extent).astype(np.float64)
        return VectorField.from_interior(grid, vals), t
    vals = data.reshape(extent).astype(np.float64)
    return ScalarField.from_interior(grid, vals), t


def export_csv(path, field: ScalarField, t: float = 0.0) -> None:
    """Write a 1D/2D scalar field as coordinate/value rows."""
    grid = field.grid
    if grid.dim > 2:
        raise ValueError("CSV export covers 1D/2D fields only")
    mesh = grid.meshgrid()
    vals = field.interior
    with open(path, "w", newline="") as fh:
        if grid.dim == 1:
            fh.write("x,value\n")
            for x, v in zip(mesh[0], vals):
                fh.write(f"{x:.17g},{v:.17g}\n")
        else:
            fh.write("x,y,value\n")
            for idx in np.ndindex(vals.shape):
                fh.write(f"{mesh[0][idx]:.17g},{mesh[1][idx]:.17g},"
                         f"{vals[idx]:.17g}\n")
