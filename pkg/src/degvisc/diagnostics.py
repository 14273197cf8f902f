"""Functionals of the a priori estimates and inequality monitors.

`record` evaluates every monitored functional on one state; budgets then
check the discrete inequalities along a diagnostic series.  Tolerances are
calibrated, not taken from the analysis: each budget allows
C_tol (dt + h^2) x scale and the refinement suite checks that violations
shrink under refinement.  Exotic terms carrying exp(-1/eps^3) prefactors
are evaluated in the log domain and reported as log-values when they sit
below the underflow threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields as dc_fields

import numpy as np

from .calculus import bc_for_grid, gradient_array, sym_gradient
from .constitutive import damping_coefficient, eval_coeffs, power_log_domain
from .fields import Grid, ScalarField, State, level_set_measure
from .params import ModelParams, SystemVariant

_LOG_MIN = math.log(np.finfo(np.float64).tiny)

E_CONST = math.e


@dataclass
class FunctionalRecord:
    """Every monitored functional, evaluated at one instant."""

    t: float
    mass: float
    kinetic: float
    internal: float
    energy: float
    mv: float
    mom4: float
    mom5_rate: float
    moment_hi: float          # int rho + rho^(4 gamma - 1)
    visc_sym: float           # int h |Du|^2
    visc_grad: float          # int h |grad u|^2
    visc_div: float           # int g (div u)^2
    damp_dissip: float
    cold_dissip: float        # eps int rho^-1 h' |grad rho|^2
    pgrad_dissip: float       # int rho^(gamma-3) h |grad rho|^2
    pgrad_energy: float       # exact pressure-exchange term of the budget
    energy_exchange: float    # regularization work on the kinetic energy
    bd_core: float            # int rho^-1 (h')^2 |grad rho|^2
    bd_cross: float           # int rho u . grad phi(rho)
    bd_exotic: float
    bd_exotic_log: float
    mass_rate_diss: float     # nonnegative mass-identity dissipation
    mass_rate_src: float      # mass-identity source (system C)
    qc_dissip_grad: float
    qc_dissip_p: float
    van_e135p: float
    van_e153: float
    van_e153p: float
    van_e152: float
    van_e52p: float
    van_e52: float
    van_e53: float
    coercivity_margin: float
    rho_min: float
    rho_max: float
    u_max: float
    damping_underflow: bool
    nu_v: tuple[float, ...] = ()
    nu_w: tuple[float, ...] = ()


SCALAR_COLUMNS = tuple(f.name for f in dc_fields(FunctionalRecord)
                       if f.name not in ("nu_v", "nu_w"))


def phi_of_rho(rho_vals: np.ndarray, params: ModelParams) -> np.ndarray:
    """Antiderivative of phi'(s) = s^-1 h_eps'(s) from the reference s = 1.

    The additive constant is irrelevant: only grad phi enters the monitors.
    """

    def primitive(p: float, coef: float) -> np.ndarray:
        if abs(p) < 1e-14:
            return coef * np.log(rho_vals)
        return coef * (np.exp(p * np.log(rho_vals)) - 1.0) / p

    if params.system is SystemVariant.C3D_ALPHA1:
        return np.log(rho_vals)
    a = params.alpha
    out = primitive(a - 1.0, a)
    c = params.epsilon ** (1.0 / 3.0)
    if c > 0.0:
        out = out + c * (primitive(-0.125, 0.875)
                         + primitive(params.gamma_tilde - 1.0,
                                     params.gamma_tilde))
    return out


def default_k_grids(state: State, count: int = 6):
    """Level grids spanning sqrt(rho0) and its reciprocal range."""
    v = np.sqrt(state.rho.interior)
    v_lo, v_hi = float(v.min()), float(v.max())
    w_lo, w_hi = 1.0 / v_hi, 1.0 / v_lo
    k_v = tuple(np.linspace(0.95 * v_lo, 1.1 * v_hi + 1e-12, count))
    k_w = tuple(np.linspace(0.95 * w_lo, 1.1 * w_hi + 1e-12, count))
    return k_v, k_w


def record(state: State, *, controls=None, k_grid_v=(), k_grid_w=(),
           include_vanishing: bool | None = None) -> FunctionalRecord:
    """Evaluate all monitored functionals on `state` by quadrature."""
    if controls is not None:
        k_grid_v = k_grid_v or controls.k_grid_v
        k_grid_w = k_grid_w or controls.k_grid_w
        if include_vanishing is None:
            include_vanishing = controls.record_vanishing_terms
    if include_vanishing is None:
        include_vanishing = True

    params = state.params
    grid = state.grid
    bc = bc_for_grid(grid)
    vol = grid.cell_volume
    r = state.rho.interior
    uvals = state.u.interior
    eps = params.epsilon
    sqrt_eps = params.sqrt_epsilon
    gamma = params.gamma
    is_c = params.system is SystemVariant.C3D_ALPHA1

    def quad(arr) -> float:
        return float(arr.sum()) * vol

    ln_r = np.log(r)
    u2 = np.einsum("d...,d...->...", uvals, uvals)
    speed = np.sqrt(u2)
    mass = quad(r)
    kinetic = 0.5 * quad(r * u2)
    r_gamma = np.exp(gamma * ln_r)
    internal = quad(r_gamma) / (gamma - 1.0)
    energy = kinetic + internal
    e_plus = E_CONST + u2
    mv = quad(r * e_plus * np.log(e_plus))
    mom4 = quad(r * u2 * u2)
    moment_hi = mass + quad(np.exp((4.0 * gamma - 1.0) * ln_r))

    coeffs = eval_coeffs(state.rho, params, grid=grid)
    vg = sym_gradient(state.u, bc)
    grad_r = gradient_array(r, grid, bc)
    grad_r2 = np.einsum("d...,d...->...", grad_r, grad_r)

    visc_sym = quad(coeffs.h_eps * vg.sym_norm2)
    visc_grad = quad(coeffs.h_eps * vg.grad_norm2)
    visc_div = quad(coeffs.g_eps * vg.div ** 2)
    cold_dissip = eps * quad(coeffs.h_eps_prime / r * grad_r2)
    pgrad_dissip = quad(np.exp((gamma - 3.0) * ln_r) * coeffs.h_eps * grad_r2)
    bd_core = quad(coeffs.h_eps_prime ** 2 / r * grad_r2)

    phi_vals = phi_of_rho(r, params)
    grad_phi = gradient_array(phi_vals, grid, bc)
    bd_cross = quad(r * np.einsum("d...,d...->...", uvals, grad_phi))

    # exotic BD terms, log-domain
    if eps > 0.0:
        pref = (13.0 / 3.0) * math.log(eps) - eps ** -3.0
        inv_e2 = eps ** -2.0
        log_i1 = _log_integral((inv_e2 + params.gamma_tilde - 1.0) * ln_r, vol)
        log_i2 = _log_integral((-inv_e2 - 0.125) * ln_r, vol)
        bd_exotic_log = pref + np.logaddexp(log_i1, log_i2)
        bd_exotic = math.exp(bd_exotic_log) if bd_exotic_log >= _LOG_MIN else 0.0
    else:
        bd_exotic_log = -math.inf
        bd_exotic = 0.0

    underflow = False
    mom5_rate = 0.0
    qc_dissip_grad = 0.0
    qc_dissip_p = 0.0
    if is_c:
        v = np.sqrt(r)
        grad_v = gradient_array(v, grid, bc)
        grad_v2 = np.einsum("d...,d...->...", grad_v, grad_v)
        rho_neg_p0, _ = power_log_domain(r, -float(params.p0))
        damp_dissip = eps * quad(rho_neg_p0 * u2)
        mom5_rate = eps * quad(r * speed ** 5)
        grad_mix = grad_v2 + grad_v2 ** 2
        qc_dissip_grad = eps * quad(grad_mix * (1.0 + u2))
        rho_2p1, under_p = power_log_domain(r, -(2.0 * float(params.p0) + 1.0))
        qc_dissip_p = eps * eps * quad(rho_2p1)
        underflow |= under_p
        mass_rate_diss = eps * quad(grad_mix)
        mass_rate_src = eps * quad(rho_neg_p0)
        if gamma != 1.0:
            coef = gamma * (2.0 * gamma - 1.0) * eps / (gamma - 1.0)
            pgrad_energy = (coef * quad(np.exp((gamma - 1.0) * ln_r)
                                        * grad_mix)
                            - gamma * eps / (gamma - 1.0)
                            * quad(np.exp((gamma - 1.0) * ln_r) * rho_neg_p0))
        else:
            pgrad_energy = 0.0
        # regularization work on the kinetic energy
        from .constitutive import qsystem_terms
        terms = qsystem_terms(state.rho, state.u, params, bc)
        g_c = eps * (terms["v_lap_v"] + terms["v_div_quartic"] + rho_neg_p0)
        transport = np.einsum("i...,ij...->j...", grad_v, vg.grad)
        energy_exchange = (
            0.5 * quad(g_c * u2)
            + eps * quad(v * grad_v2
                         * np.einsum("j...,j...->...", transport, uvals)))
    else:
        damp_field, underflow = damping_coefficient(state.rho, params)
        damp_dissip = quad(damp_field * u2)
        mass_rate_src = 0.0
        if eps > 0.0:
            from .constitutive import cold_diffusion_G
            G = cold_diffusion_G(state.rho, params, bc).interior
        else:
            G = np.zeros_like(r)
        mass_rate_diss = -quad(G)
        coef = gamma * (2.0 * gamma - 1.0) * eps / (2.0 * (gamma - 1.0))
        pgrad_energy = coef * quad(np.exp((gamma - 2.0) * ln_r)
                                   * coeffs.h_eps_prime * grad_r2)
        energy_exchange = 0.5 * quad(G * u2)

    # pointwise stress coercivity margin
    n = grid.dim
    c_coerc = min(n * params.alpha - (n - 1), 1.0)
    quad_form = 4.0 * (coeffs.h_eps * vg.sym_norm2 + coeffs.g_eps * vg.div ** 2)
    scale = float(np.abs(quad_form).max())
    if scale == 0.0:
        coercivity_margin = 0.0
    else:
        margin = quad_form - c_coerc * coeffs.h_eps * vg.sym_norm2
        coercivity_margin = float(margin.min()) / scale

    if include_vanishing and not is_c and eps > 0.0:
        grad_r_norm = np.sqrt(grad_r2)
        grad_u_norm = np.sqrt(vg.grad_norm2)
        van_e135p = eps * quad(coeffs.h_eps_prime * grad_r_norm)
        van_e153 = cold_dissip
        van_e153p = eps * quad(coeffs.h_eps_prime / r * grad_r2 * speed)
        van_e152 = eps * quad(coeffs.h_eps_prime * grad_r_norm * speed)
        if not underflow:
            damp_field, _ = damping_coefficient(state.rho, params)
            van_e52p = quad(damp_field * speed)
        else:
            van_e52p = 0.0
        van_e52 = sqrt_eps * quad((coeffs.h_eps + np.abs(coeffs.g_eps))
                                  * grad_u_norm)
        e13 = eps ** (1.0 / 3.0)
        van_e53 = e13 * quad((np.exp(0.875 * ln_r)
                              + np.exp(params.gamma_tilde * ln_r))
                             * grad_u_norm)
    else:
        van_e135p = van_e153 = van_e153p = van_e152 = 0.0
        van_e52p = van_e52 = van_e53 = 0.0

    v_field = ScalarField.from_interior(grid, np.sqrt(r))
    w_field = ScalarField.from_interior(grid, 1.0 / np.sqrt(r))
    nu_v = tuple(level_set_measure(v_field, k, "above") for k in k_grid_v)
    nu_w = tuple(level_set_measure(w_field, k, "above") for k in k_grid_w)

    return FunctionalRecord(
        t=state.t, mass=mass, kinetic=kinetic, internal=internal,
        energy=energy, mv=mv, mom4=mom4, mom5_rate=mom5_rate,
        moment_hi=moment_hi, visc_sym=visc_sym, visc_grad=visc_grad,
        visc_div=visc_div, damp_dissip=damp_dissip, cold_dissip=cold_dissip,
        pgrad_dissip=pgrad_dissip, pgrad_energy=pgrad_energy,
        energy_exchange=energy_exchange, bd_core=bd_core, bd_cross=bd_cross,
        bd_exotic=bd_exotic, bd_exotic_log=bd_exotic_log,
        mass_rate_diss=mass_rate_diss, mass_rate_src=mass_rate_src,
        qc_dissip_grad=qc_dissip_grad, qc_dissip_p=qc_dissip_p,
        van_e135p=van_e135p, van_e153=van_e153, van_e153p=van_e153p,
        van_e152=van_e152, van_e52p=van_e52p, van_e52=van_e52,
        van_e53=van_e53, coercivity_margin=coercivity_margin,
        rho_min=float(r.min()), rho_max=float(r.max()),
        u_max=float(speed.max()), damping_underflow=bool(underflow),
        nu_v=nu_v, nu_w=nu_w)


def _log_integral(log_pointwise: np.ndarray, vol: float) -> float:
    """log of integral exp(log_pointwise) dV via a stable logsumexp."""
    m = float(log_pointwise.max())
    return m + math.log(float(np.exp(log_pointwise - m).sum())) + math.log(vol)


@dataclass
class DiagnosticSeries:
    """Time series of functional records with run-level metadata."""

    params: ModelParams
    grid_spacing: float
    k_grid_v: tuple[float, ...]
    k_grid_w: tuple[float, ...]
    include_vanishing: bool
    records: list[FunctionalRecord] = field(default_factory=list)

    @classmethod
    def for_run(cls, initial: State, controls) -> "DiagnosticSeries":
        if controls.k_grid_v and controls.k_grid_w:
            k_v, k_w = tuple(controls.k_grid_v), tuple(controls.k_grid_w)
        else:
            k_v, k_w = default_k_grids(initial)
        return cls(params=initial.params,
                   grid_spacing=initial.grid.min_spacing,
                   k_grid_v=k_v, k_grid_w=k_w,
                   include_vanishing=controls.record_vanishing_terms)

    def capture(self, state: State) -> FunctionalRecord:
        rec = record(state, k_grid_v=self.k_grid_v, k_grid_w=self.k_grid_w,
                     include_vanishing=self.include_vanishing)
        self.records.append(rec)
        return rec

    def append(self, rec: FunctionalRecord) -> None:
        self.records.append(rec)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    def __len__(self) -> int:
        return len(self.records)


@dataclass
class InequalityReport:
    """Pass/flag outcome of one monitored inequality."""

    name: str
    status: str              # "pass" | "flag"
    worst: float
    worst_time: float
    tolerance: float
    details: dict

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _dissipation_total(series: DiagnosticSeries) -> np.ndarray:
    """The variant's energy-budget dissipation, per record."""
    p = series.params
    se = p.sqrt_epsilon
    if p.system is SystemVariant.A2D:
        D = (series.column("visc_sym") + se * series.column("visc_grad")
             + (1.0 + se) * series.column("visc_div")
             + series.column("damp_dissip"))
    elif p.system is SystemVariant.B3D:
        D = (series.column("visc_grad") + series.column("visc_div")
             + series.column("damp_dissip"))
    else:
        D = (series.column("visc_sym") + se * series.column("visc_grad")
             + series.column("damp_dissip") + series.column("mom5_rate"))
    return (D + series.column("pgrad_energy")
            - series.column("energy_exchange"))


def energy_budget(traj, c_tol: float = 10.0) -> InequalityReport:
    """Per-step energy inequality: dE/dt + dissipations <= calibrated tol."""
    series: DiagnosticSeries = traj.diagnostics
    if len(series) < 2:
        raise ValueError("energy budget needs at least two records")
    t = series.times
    E = series.column("energy")
    D = _dissipation_total(series)
    dt = np.diff(t)
    resid = np.diff(E) / dt + D[:-1]
    h2 = series.grid_spacing ** 2
    tol = c_tol * (dt + h2) * E[0]
    excess = resid - tol
    worst_idx = int(np.argmax(excess))
    status = "pass" if np.all(excess <= 0.0) else "flag"
    return InequalityReport(
        name="energy_budget", status=status,
        worst=float(resid[worst_idx]), worst_time=float(t[worst_idx]),
        tolerance=float(tol[worst_idx]),
        details={
            "max_residual": float(resid.max()),
            "max_abs_residual": float(np.abs(resid).max()),
            "energy_initial": float(E[0]),
            "energy_final": float(E[-1]),
            "c_tol": c_tol,
        })


def bd_entropy_budget(traj, core_ratio_tol: float = 5.0) -> InequalityReport:
    """Boundedness of the entropy combination and of its dissipation."""
    series: DiagnosticSeries = traj.diagnostics
    if len(series) < 2:
        raise ValueError("entropy budget needs at least two records")
    p = series.params
    t = series.times
    core = series.column("bd_core")
    cross = series.column("bd_cross")
    B = 0.5 * (1.0 + p.sqrt_epsilon) * core + cross
    E0 = float(series.column("energy")[0])
    acc_visc = _trapezoid_accumulate(t, series.column("visc_grad"))
    acc_pgrad = _trapezoid_accumulate(t, series.column("pgrad_dissip"))
    core0 = max(core[0], 1e-12 * max(E0, 1.0))
    core_ratio = float(core.max()) / core0
    growth = B - B[0]
    c_obs = float(growth.max()) / max(E0, 1e-30)
    superlinear = _superlinear_growth(t, growth, scale=max(E0, 1e-30))
    flag = core_ratio > core_ratio_tol or superlinear
    worst_idx = int(np.argmax(core))
    return InequalityReport(
        name="bd_entropy_budget", status="flag" if flag else "pass",
        worst=float(core.max()), worst_time=float(t[worst_idx]),
        tolerance=core_ratio_tol * core0,
        details={
            "core_initial": float(core[0]),
            "core_sup": float(core.max()),
            "core_ratio": core_ratio,
            "combination_growth_over_scale": c_obs,
            "superlinear_growth": bool(superlinear),
            "accumulated_visc_dissip": float(acc_visc[-1]),
            "accumulated_pgrad_dissip": float(acc_pgrad[-1]),
            "accumulated_nondecreasing": bool(
                np.all(np.diff(acc_visc) >= -1e-300)
                and np.all(np.diff(acc_pgrad) >= -1e-300)),
        })


def mv_budget(traj, c_tol: float = 10.0) -> InequalityReport:
    """Velocity-log-moment growth check, gated on gamma >= (1+alpha)/2."""
    series: DiagnosticSeries = traj.diagnostics
    if len(series) < 2:
        raise ValueError("mv budget needs at least two records")
    p = series.params
    gate = p.gamma >= 0.5 * (1.0 + p.alpha)
    t = series.times
    mv = series.column("mv")
    visc = (series.column("visc_sym") + series.column("visc_grad"))
    scale = visc + series.column("moment_hi") + mv
    dt = np.diff(t)
    rate = np.diff(mv) / dt
    c_obs_arr = rate / scale[:-1]
    worst_idx = int(np.argmax(c_obs_arr))
    c_obs = float(c_obs_arr[worst_idx])
    flag = gate and c_obs > c_tol
    return InequalityReport(
        name="mv_budget", status="flag" if flag else "pass",
        worst=c_obs, worst_time=float(t[worst_idx]),
        tolerance=c_tol,
        details={
            "gate_satisfied": bool(gate),
            "mv_initial": float(mv[0]),
            "mv_sup": float(mv.max()),
            "c_obs": c_obs,
        })


def mass_budget(traj, c_tol: float = 10.0) -> InequalityReport:
    """Per-step mass identity against the regularization dissipation/source.

    Valid when the diagnostic stride is one step; wider strides dilute the
    O(dt^2) claim.
    """
    series: DiagnosticSeries = traj.diagnostics
    if len(series) < 2:
        raise ValueError("mass budget needs at least two records")
    t = series.times
    mass = series.column("mass")
    rate = series.column("mass_rate_src") - series.column("mass_rate_diss")
    dt = np.diff(t)
    resid = np.abs(np.diff(mass) - dt * rate[:-1])
    tol = c_tol * dt * dt * mass[0]
    excess = resid - tol
    worst_idx = int(np.argmax(excess))
    status = "pass" if np.all(excess <= 0.0) else "flag"
    return InequalityReport(
        name="mass_budget", status=status,
        worst=float(resid[worst_idx]), worst_time=float(t[worst_idx]),
        tolerance=float(tol[worst_idx]),
        details={
            "max_residual": float(resid.max()),
            "mass_initial": float(mass[0]),
            "mass_final": float(mass[-1]),
        })


@dataclass
class DeGiorgiReport:
    """Density bound tracking and level-set decay tables."""

    rho_max_sup: float
    inv_rho_min_sup: float
    k_grid_v: tuple[float, ...]
    k_grid_w: tuple[float, ...]
    nu_v: tuple[float, ...]          # sup over time per level
    nu_w: tuple[float, ...]
    monotone_in_k: bool
    decay_rate: float                # fitted c in rho_min(t) >= rho_min(0) e^{-ct}
    floor_triggered: bool


def density_bounds(traj) -> DeGiorgiReport:
    series: DiagnosticSeries = traj.diagnostics
    t = series.times
    rho_min = series.column("rho_min")
    rho_max = series.column("rho_max")
    nu_v_rows = np.array([r.nu_v for r in series.records])
    nu_w_rows = np.array([r.nu_w for r in series.records])
    monotone = True
    for rows in (nu_v_rows, nu_w_rows):
        if rows.size and rows.shape[1] > 1:
            monotone &= bool(np.all(np.diff(rows, axis=1) <= 1e-300))
    nu_v = tuple(nu_v_rows.max(axis=0)) if nu_v_rows.size else ()
    nu_w = tuple(nu_w_rows.max(axis=0)) if nu_w_rows.size else ()
    decay = 0.0
    if len(t) > 1:
        later = t > t[0]
        ratios = np.log(rho_min[0] / rho_min[later]) / (t[later] - t[0])
        decay = float(max(0.0, ratios.max())) if ratios.size else 0.0
    return DeGiorgiReport(
        rho_max_sup=float(rho_max.max()),
        inv_rho_min_sup=float(1.0 / rho_min.min()),
        k_grid_v=series.k_grid_v, k_grid_w=series.k_grid_w,
        nu_v=nu_v, nu_w=nu_w, monotone_in_k=monotone,
        decay_rate=decay,
        floor_triggered=bool(rho_min.min() <= 0.0))


def _trapezoid_accumulate(t: np.ndarray, values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values)
    if len(t) > 1:
        seg = 0.5 * (values[1:] + values[:-1]) * np.diff(t)
        out[1:] = np.cumsum(seg)
    return out


def _superlinear_growth(t: np.ndarray, growth: np.ndarray,
                        scale: float) -> bool:
    """Crude super-linearity probe: late-half growth rate far above early."""
    if len(t) < 4 or t[-1] <= t[0]:
        return False
    total = growth[-1]
    if total <= 0.05 * scale:
        return False
    mid = len(t) // 2
    dt1 = t[mid] - t[0]
    dt2 = t[-1] - t[mid]
    if dt1 <= 0 or dt2 <= 0:
        return False
    rate1 = (growth[mid] - growth[0]) / dt1
    rate2 = (growth[-1] - growth[mid]) / dt2
    return rate2 > 2.0 * max(rate1, 0.0) + 0.05 * scale / (t[-1] - t[0])
