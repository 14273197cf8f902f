"""Analytic initial-data profiles and manufactured solutions.

Raw profiles keep their densities in [0, 1] so the mollifier's upper clamp
never bites at desk scale, and momenta are proportional to the density so
they vanish identically on vacuum sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Grid, ScalarField, VectorField
from .params import ModelParams, SystemVariant

PRESET_NAMES = ("uniform", "gaussian-bump", "vacuum-patch", "two-bump",
                "random-smooth")


@dataclass
class RawData:
    """Raw (rho0, m0) samples; momentum must vanish on the vacuum set."""

    rho0: ScalarField
    m0: VectorField

    def __post_init__(self):
        if self.rho0.grid != self.m0.grid:
            raise ValueError("rho0 and m0 must share a grid")
        if np.any(self.rho0.interior < 0.0):
            raise ValueError("raw density must be nonnegative")
        vacuum = self.rho0.interior == 0.0
        if np.any(vacuum):
            m_mag = np.abs(self.m0.interior).max(axis=0)
            if np.any(m_mag[vacuum] != 0.0):
                raise ValueError("momentum must vanish on the vacuum set")

    @property
    def grid(self) -> Grid:
        return self.rho0.grid

    def vacuum_measure(self) -> float:
        return float((self.rho0.interior == 0.0).sum()) * self.grid.cell_volume


def _radius2(mesh, center) -> np.ndarray:
    r2 = np.zeros_like(mesh[0])
    for x, c in zip(mesh, center):
        r2 += (x - c) ** 2
    return r2


def _smoothstep(t: np.ndarray) -> np.ndarray:
    """C^1 ramp: 0 for t<=0, 1 for t>=1."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * (3.0 - 2.0 * t)


def _velocity_profile(grid: Grid, amplitude: float) -> np.ndarray:
    """Smooth periodic test velocity with per-axis phase shifts."""
    mesh = grid.meshgrid()
    out = np.zeros((grid.dim,) + grid.extent)
    for d in range(grid.dim):
        x = mesh[(d + 1) % grid.dim] if grid.dim > 1 else mesh[0]
        L = grid.length[(d + 1) % grid.dim] if grid.dim > 1 else grid.length[0]
        out[d] = amplitude * np.sin(2 * np.pi * x / L + 0.5 * d)
    return out


def preset(name: str, grid: Grid, seed: int = 0) -> RawData:
    """Sample a named analytic profile on `grid`."""
    mesh = grid.meshgrid()
    center = [0.5 * L if grid.topology.value == "P" else 0.0
              for L in grid.length]
    Lmin = min(grid.length)

    if name == "uniform":
        rho = np.ones(grid.extent)
        vel = np.zeros((grid.dim,) + grid.extent)
    elif name == "gaussian-bump":
        w = Lmin / 6.0
        r2 = _radius2(mesh, center)
        rho = 0.5 + 0.5 * np.exp(-r2 / (2.0 * w * w))
        vel = _velocity_profile(grid, 0.25)
    elif name == "vacuum-patch":
        r0 = Lmin / 6.0
        delta = Lmin / 8.0
        r = np.sqrt(_radius2(mesh, center))
        rho = 0.8 * _smoothstep((r - r0) / delta)
        vel = _velocity_profile(grid, 0.2)
    elif name == "two-bump":
        c1 = [0.3 * L if grid.topology.value == "P" else -0.2 * L
              for L in grid.length]
        c2 = [0.7 * L if grid.topology.value == "P" else 0.2 * L
              for L in grid.length]
        w = Lmin / 8.0
        rho = (0.4 + 0.3 * np.exp(-_radius2(mesh, c1) / (2 * w * w))
               + 0.3 * np.exp(-_radius2(mesh, c2) / (2 * w * w)))
        vel = _velocity_profile(grid, 0.2)
    elif name == "random-smooth":
        rng = np.random.default_rng(seed)
        rho = np.zeros(grid.extent)
        vel = np.zeros((grid.dim,) + grid.extent)
        # band-limited: first three modes per axis, seeded coefficients
        for d_field in range(grid.dim + 1):
            acc = np.zeros(grid.extent)
            for axis in range(grid.dim):
                x = mesh[axis] / grid.length[axis]
                for k in range(1, 4):
                    a, b = rng.normal(size=2)
                    acc += a * np.sin(2 * np.pi * k * x) + b * np.cos(
                        2 * np.pi * k * x)
            acc /= max(1.0, np.abs(acc).max())
            if d_field == 0:
                rho = 0.65 + 0.35 * acc
            else:
                vel[d_field - 1] = 0.2 * acc
    else:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")

    rho_f = ScalarField.from_interior(grid, rho)
    m_f = VectorField.from_interior(grid, rho * vel)
    return RawData(rho_f, m_f)


# ---------------------------------------------------------------------------
# manufactured solutions
#
# rho*(x, t) = 1 + a sin(2 pi x), u*_j(x, t) = amp_j sin(2 pi x) tau(t) with
# tau(t) = 1 + sin(2 pi t) / 2.  The fields vary along one axis only, which
# keeps the forcing one-dimensional while still distinguishing the symmetric
# from the full-gradient stress through the tangential velocity component.
# The forcing closures come from a generated module derived offline by the
# high-precision differentiation script in tools/.


@dataclass
class ManufacturedCase:
    """Closed-form state plus the forcing that makes it an exact solution."""

    variant: SystemVariant
    params: ModelParams
    a: float      # density amplitude
    b: float      # axial velocity amplitude
    c: float      # tangential velocity amplitude (2D only)
    axis: int

    def _coords(self, grid: Grid) -> np.ndarray:
        return grid.meshgrid()[self.axis]

    def state_fields(self, grid: Grid, t: float):
        from . import _mms_forcing as mms
        x = self._coords(grid)
        rho = ScalarField.from_interior(grid, mms.rho_star(x, t, self))
        comps = mms.u_star(x, t, self, grid.dim)
        vel = VectorField.from_interior(grid, self._orient(comps, grid))
        return rho, vel

    def time_derivatives(self, grid: Grid, t: float):
        from . import _mms_forcing as mms
        x = self._coords(grid)
        drho = mms.drho_dt_star(x, t, self)
        du = self._orient(mms.du_dt_star(x, t, self, grid.dim), grid)
        return drho, du

    def forcing(self, grid: Grid, t: float):
        from . import _mms_forcing as mms
        x = self._coords(grid)
        f_rho = mms.forcing_rho(x, t, self, grid.dim)
        f_u = self._orient(mms.forcing_u(x, t, self, grid.dim), grid)
        return f_rho, f_u

    def _orient(self, comps: np.ndarray, grid: Grid) -> np.ndarray:
        """Map (axial, tangential, ...) components onto grid axes."""
        out = np.zeros((grid.dim,) + grid.extent)
        out[self.axis] = comps[0]
        if grid.dim > 1:
            out[(self.axis + 1) % grid.dim] = comps[1]
        return out


def manufactured(variant: SystemVariant, params: ModelParams,
                 a: float = 0.1, b: float = 0.1, c: float = 0.05,
                 axis: int = 0) -> ManufacturedCase:
    """Manufactured-solution case for `variant`; supports 1D and 2D grids."""
    if params.system is not variant:
        raise ValueError("params.system must match the requested variant")
    return ManufacturedCase(variant=variant, params=params, a=a, b=b, c=c,
                            axis=axis)
