"""Right-hand-side assembly for the three regularized systems and time
integration with stability control.

All spatial terms are built from the centered operators in `calculus`,
nested where the continuous expression nests them.  That choice makes the
discrete mass and energy exchange identities close exactly (the budgets
then see only time-discretization and chain-rule error), at the cost of a
wide effective stencil.

The momentum equation is advanced in primitive form (divided through by
rho), which keeps the damping term exactly as written and presumes the
strict positivity the regularized system guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import (
    BCMode,
    bc_for_grid,
    divergence_array,
    gradient_array,
    sym_gradient,
    velocity_gradient,
)
from .constitutive import (
    CoefficientOverflowError,
    cold_diffusion_G,
    damping_coefficient,
    eval_coeffs,
    power_log_domain,
)
from .fields import (
    FieldCorruptionError,
    Grid,
    PositivityError,
    ScalarField,
    State,
    VectorField,
)
from .params import ModelParams, SystemVariant


class StiffnessError(RuntimeError):
    """The stable explicit step underflowed; use the IMEX scheme."""


SCHEMES = ("rk2", "imex")


@dataclass
class RunControls:
    """Knobs for a single integration run."""

    cfl: float = 0.9
    scheme: str = "rk2"
    fixed_dt: float | None = None
    t_end: float = 1.0
    snapshot_stride: int = 100
    diagnostic_stride: int = 1
    max_steps: int = 2_000_000
    disable_cold_diffusion: bool = False  # negative-control ablation
    record_vanishing_terms: bool = True
    k_grid_v: tuple[float, ...] = ()
    k_grid_w: tuple[float, ...] = ()

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if not (0.0 < self.cfl <= 1.0):
            raise ValueError("cfl must lie in (0, 1]")


@dataclass
class Trajectory:
    """Time-ordered snapshots plus the diagnostic series of one run."""

    snapshots: list[State]
    diagnostics: "object"  # DiagnosticSeries; untyped to avoid an import cycle
    aborted: bool = False
    abort_reason: str = ""
    damping_underflow: bool = False
    steps: int = 0

    @property
    def grid(self) -> Grid:
        return self.snapshots[0].grid

    @property
    def params(self) -> ModelParams:
        return self.snapshots[0].params

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])


@dataclass
class RHSResult:
    drho_dt: np.ndarray
    du_dt: np.ndarray
    damping_underflow: bool = False


def rhs(state: State, variant: SystemVariant | None = None,
        bc: BCMode | None = None, *, g_off: bool = False) -> RHSResult:
    """Assemble (d rho/dt, d u/dt) for the state's system.

    `g_off` removes the density regularization (ablation switch for the
    entropy-budget negative control).
    """
    params = state.params
    variant = variant or params.system
    grid = state.grid
    bc = bc or bc_for_grid(grid)
    r = state.rho.interior
    uvals = state.u.interior
    if not np.all(r > 0.0):
        raise PositivityError("rhs called with nonpositive density")

    eps = params.epsilon
    sqrt_eps = params.sqrt_epsilon
    dim = grid.dim

    grad_u = velocity_gradient(state.u, bc)
    div_u = np.trace(grad_u)
    advect = np.einsum("i...,ij...->j...", uvals, grad_u)
    mass_flux = r * uvals
    drho = -divergence_array(mass_flux, grid, bc)

    coeffs = eval_coeffs(state.rho, params)
    grad_P = gradient_array(coeffs.P, grid, bc)
    underflow = False

    if variant in (SystemVariant.A2D, SystemVariant.B3D):
        if not g_off and eps > 0.0:
            G = cold_diffusion_G(state.rho, params, bc).interior
            drho = drho + G
        sym = 0.5 * (grad_u + np.swapaxes(grad_u, 0, 1))
        if variant is SystemVariant.A2D:
            tensor = coeffs.h_eps * (sym + sqrt_eps * grad_u)
            iso = (1.0 + sqrt_eps) * coeffs.g_eps * div_u
        else:
            tensor = coeffs.h_eps * grad_u
            iso = coeffs.g_eps * div_u
        force = np.empty_like(uvals)
        for j in range(dim):
            force[j] = divergence_array(tensor[:, j], grid, bc)
        force += gradient_array(iso, grid, bc)
        damp, underflow = damping_coefficient(state.rho, params)
        force -= grad_P + damp * uvals
        du = -advect + force / r
    elif variant is SystemVariant.C3D_ALPHA1:
        v = np.sqrt(r)
        grad_v = gradient_array(v, grid, bc)
        grad_v2 = np.einsum("d...,d...->...", grad_v, grad_v)
        lap_v = divergence_array(grad_v, grid, bc)
        rho_neg_p0, _ = power_log_domain(r, -float(params.p0))
        if not g_off and eps > 0.0:
            drho = (drho + eps * v * lap_v
                    + eps * v * divergence_array(grad_v2 * grad_v, grid, bc)
                    + eps * rho_neg_p0)
        sym = 0.5 * (grad_u + np.swapaxes(grad_u, 0, 1))
        tensor = r * (sym + sqrt_eps * grad_u)
        force = np.empty_like(uvals)
        for j in range(dim):
            force[j] = divergence_array(tensor[:, j], grid, bc)
        speed = np.sqrt(np.einsum("d...,d...->...", uvals, uvals))
        transport = np.einsum("i...,ij...->j...", grad_v, grad_u)
        force += eps * v * grad_v2 * transport
        force -= grad_P
        force -= eps * rho_neg_p0 * uvals
        force -= eps * r * speed ** 3 * uvals
        du = -advect + force / r
    else:
        raise ValueError(f"unknown system variant {variant}")

    return RHSResult(drho_dt=drho, du_dt=du, damping_underflow=underflow)


def stable_dt(state: State, variant: SystemVariant | None = None,
              cfl: float = 0.9, scheme: str = "rk2") -> float:
    """Explicit step bound: advective/acoustic, momentum- and density-diffusion.

    The IMEX scheme integrates the density diffusion implicitly, so that
    constraint is dropped for it.
    """
    if not (0.0 < cfl <= 1.0):
        raise ValueError("cfl must lie in (0, 1]")
    params = state.params
    variant = variant or params.system
    grid = state.grid
    bc = bc_for_grid(grid)
    r = state.rho.interior
    if not np.all(r > 0.0):
        raise PositivityError("stable_dt called with nonpositive density")
    h = grid.min_spacing
    n = grid.dim
    eps = params.epsilon
    speed = np.sqrt(np.einsum("d...,d...->...", state.u.interior,
                              state.u.interior))
    sound = np.sqrt(params.gamma * np.exp((params.gamma - 1.0) * np.log(r)))
    dt_adv = h / float((speed + sound).max())
    coeffs = eval_coeffs(state.rho, params)
    dt_mom = float((h * h * r / (2.0 * n * (1.0 + params.sqrt_epsilon)
                                 * coeffs.h_eps)).min())
    dt = min(dt_adv, dt_mom)
    if eps > 0.0 and scheme == "rk2":
        grad_v = gradient_array(np.sqrt(r), grid, bc)
        grad_v2 = np.einsum("d...,d...->...", grad_v, grad_v)
        stiff = np.maximum(coeffs.h_eps_prime, 1.0 + grad_v2)
        dt_dens = float((h * h / (2.0 * n * eps * stiff)).min())
        dt = min(dt, dt_dens)
    dt *= cfl
    if not math.isfinite(dt) or dt < 1e-14:
        raise StiffnessError(
            f"stable step {dt:.3e} is beyond explicit range; "
            "use the IMEX scheme")
    return dt


def _check_state(state: State, rho_floor: float) -> None:
    state.validate(rho_floor=rho_floor)


def step(state: State, dt: float, scheme: str = "rk2", *,
         bc: BCMode | None = None, g_off: bool = False,
         rho_floor: float = 0.0) -> tuple[State, bool]:
    """Advance one step; returns (new state, damping-underflow flag).

    rk2 is Heun's method, fully explicit.  imex treats the density
    diffusion with a linearized backward-Euler solve (frozen coefficients)
    and everything else explicitly.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    bc = bc or bc_for_grid(state.grid)
    if scheme == "rk2":
        k1 = rhs(state, bc=bc, g_off=g_off)
        mid = State(
            ScalarField.from_interior(state.grid, state.rho.interior + dt * k1.drho_dt),
            VectorField.from_interior(state.grid, state.u.interior + dt * k1.du_dt),
            state.t + dt, state.params)
        _check_state(mid, rho_floor)
        k2 = rhs(mid, bc=bc, g_off=g_off)
        new = State(
            ScalarField.from_interior(
                state.grid,
                state.rho.interior + 0.5 * dt * (k1.drho_dt + k2.drho_dt)),
            VectorField.from_interior(
                state.grid,
                state.u.interior + 0.5 * dt * (k1.du_dt + k2.du_dt)),
            state.t + dt, state.params)
        _check_state(new, rho_floor)
        return new, (k1.damping_underflow or k2.damping_underflow)
    return _step_imex(state, dt, bc=bc, g_off=g_off, rho_floor=rho_floor)


def _step_imex(state: State, dt: float, *, bc: BCMode, g_off: bool,
               rho_floor: float) -> tuple[State, bool]:
    from scipy.sparse.linalg import LinearOperator, bicgstab

    params = state.params
    grid = state.grid
    r0 = state.rho.interior
    full = rhs(state, bc=bc, g_off=g_off)

    if params.epsilon == 0.0 or g_off:
        new = State(
            ScalarField.from_interior(grid, r0 + dt * full.drho_dt),
            VectorField.from_interior(grid, state.u.interior + dt * full.du_dt),
            state.t + dt, state.params)
        _check_state(new, rho_floor)
        return new, full.damping_underflow

    # frozen-coefficient linearization of the density diffusion about r0
    eps = params.epsilon
    if params.system is SystemVariant.C3D_ALPHA1:
        v0 = np.sqrt(r0)

        def lin_op(delta: np.ndarray) -> np.ndarray:
            # eps v0 Lap(delta / (2 v0)): linearization of eps v Lap v
            inner = delta / (2.0 * v0)
            return eps * v0 * divergence_array(
                gradient_array(inner, grid, bc), grid, bc)
    else:
        coeffs = eval_coeffs(state.rho, params)
        bcoef = coeffs.h_eps_prime / np.sqrt(r0)
        sq = np.sqrt(r0)

        def lin_op(delta: np.ndarray) -> np.ndarray:
            return eps * sq * divergence_array(
                bcoef * gradient_array(delta, grid, bc), grid, bc)

    shape = r0.shape
    size = r0.size

    def matvec(vec: np.ndarray) -> np.ndarray:
        delta = vec.reshape(shape)
        return (delta - dt * lin_op(delta)).ravel()

    A = LinearOperator((size, size), matvec=matvec)
    rhs_vec = (dt * full.drho_dt).ravel()
    sol, info = bicgstab(A, rhs_vec, rtol=1e-10, atol=0.0, maxiter=500)
    if info != 0:
        raise RuntimeError(f"IMEX density solve did not converge (info={info})")
    r_new = r0 + sol.reshape(shape)
    new = State(
        ScalarField.from_interior(grid, r_new),
        VectorField.from_interior(grid, state.u.interior + dt * full.du_dt),
        state.t + dt, state.params)
    _check_state(new, rho_floor)
    return new, full.damping_underflow


def run(initial: State, controls: RunControls,
        bc: BCMode | None = None) -> Trajectory:
    """Integrate to controls.t_end, recording snapshots and diagnostics.

    Aborts (positivity loss, overflow, corruption) return the partial
    trajectory with `aborted` set instead of raising.
    """
    from .diagnostics import DiagnosticSeries

    bc = bc or bc_for_grid(initial.grid)
    t_end = controls.t_end
    if t_end < initial.t:
        raise ValueError("t_end must not precede the initial time")
    rho_floor = 1e-12 * float(np.mean(initial.rho.interior))
    series = DiagnosticSeries.for_run(initial, controls)
    snapshots = [initial.copy()]
    series.capture(initial)
    traj = Trajectory(snapshots=snapshots, diagnostics=series)

    state = initial
    step_index = 0
    try:
        while state.t < t_end - 1e-14 and step_index < controls.max_steps:
            if controls.fixed_dt is not None:
                dt = controls.fixed_dt
            else:
                dt = stable_dt(state, cfl=controls.cfl,
                               scheme=controls.scheme)
            dt = min(dt, t_end - state.t)
            state, under = step(state, dt, controls.scheme, bc=bc,
                                g_off=controls.disable_cold_diffusion,
                                rho_floor=rho_floor)
            traj.damping_underflow |= under
            step_index += 1
            last = state.t >= t_end - 1e-14
            if step_index % controls.diagnostic_stride == 0 or last:
                series.capture(state)
            if step_index % controls.snapshot_stride == 0 or last:
                snapshots.append(state.copy())
    except (PositivityError, FieldCorruptionError, StiffnessError,
            CoefficientOverflowError) as err:
        traj.aborted = True
        traj.abort_reason = f"{type(err).__name__}: {err}"
        snapshots.append(state.copy())
    traj.steps = step_index
    return traj
