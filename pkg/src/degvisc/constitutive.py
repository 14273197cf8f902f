"""Viscosity laws, pressure, regularized coefficients, damping, and the
cold-diffusion operator.

Every power with a large or epsilon-dependent exponent is evaluated in the
log domain: the damping coefficient multiplies exp(-1/eps^3) by powers
rho^(1/eps^2), and naive evaluation would turn a well-defined product into
inf * 0.  Underflow of the damping coefficient clamps to zero and raises a
flag for the monitors; overflow means epsilon is too small for the density
range and is a hard error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import (
    BCMode,
    divergence_array,
    gradient_array,
    sym_gradient,
    velocity_gradient,
)
from .fields import Grid, PositivityError, ScalarField, VectorField
from .params import ModelParams, SystemVariant

# exp argument bounds for float64
_LOG_MIN = math.log(np.finfo(np.float64).tiny)   # ~ -708.4
_LOG_MAX = math.log(np.finfo(np.float64).max)    # ~ +709.8


class CoefficientOverflowError(RuntimeError):
    """A coefficient exceeded the representable range; carries the worst cell."""

    def __init__(self, message: str, cell: tuple[int, ...]):
        super().__init__(message)
        self.cell = cell


def _require_positive(rho: np.ndarray) -> None:
    if not np.all(rho > 0.0):
        idx = np.unravel_index(int(np.argmin(rho)), rho.shape)
        raise PositivityError(
            f"nonpositive density {rho[idx]:.3e} at cell {idx}")


def power(rho: np.ndarray, exponent: float) -> np.ndarray:
    """rho**exponent via exp(e ln rho) for non-integer exponents, rho > 0."""
    if exponent == 0.0:
        return np.ones_like(rho)
    if float(exponent).is_integer() and abs(exponent) <= 30:
        return rho ** int(exponent)
    return np.exp(exponent * np.log(rho))


@dataclass
class CoeffSet:
    """Pointwise coefficient fields evaluated on one density field."""

    grid: Grid
    h: np.ndarray           # rho^alpha (or rho for system C)
    g: np.ndarray           # (alpha-1) rho^alpha
    h_eps: np.ndarray       # regularized viscosity
    h_eps_prime: np.ndarray
    g_eps: np.ndarray       # rho h_eps' - h_eps
    P: np.ndarray           # rho^gamma
    phi_prime: np.ndarray   # rho^{-1} h_eps'


def eval_coeffs(rho: ScalarField | np.ndarray, params: ModelParams,
                grid: Grid | None = None) -> CoeffSet:
    """Evaluate all coefficient laws pointwise.

    For system C the viscosity is the unregularized h = rho, g = 0; the
    extra sqrt(eps)-gradient stress lives in the dynamics assembly.
    """
    if isinstance(rho, ScalarField):
        grid = rho.grid
        r = rho.interior
    else:
        assert grid is not None
        r = rho
    _require_positive(r)
    ln_r = np.log(r)
    a, gt = params.alpha, params.gamma_tilde
    P = np.exp(params.gamma * ln_r)
    if params.system is SystemVariant.C3D_ALPHA1:
        h = r.copy()
        ones = np.ones_like(r)
        return CoeffSet(grid=grid, h=h, g=np.zeros_like(r), h_eps=r.copy(),
                        h_eps_prime=ones, g_eps=np.zeros_like(r), P=P,
                        phi_prime=1.0 / r)
    r_a = np.exp(a * ln_r)
    h = r_a
    g = (a - 1.0) * r_a
    c = params.epsilon ** (1.0 / 3.0)
    if c > 0.0:
        r_78 = np.exp(0.875 * ln_r)
        r_gt = np.exp(gt * ln_r)
        h_eps = r_a + c * (r_78 + r_gt)
        h_eps_prime = (a * r_a + c * (0.875 * r_78 + gt * r_gt)) / r
        g_eps = (a - 1.0) * r_a + c * (-0.125 * r_78 + (gt - 1.0) * r_gt)
    else:
        h_eps = r_a.copy()
        h_eps_prime = a * r_a / r
        g_eps = g.copy()
    return CoeffSet(grid=grid, h=h, g=g, h_eps=h_eps,
                    h_eps_prime=h_eps_prime, g_eps=g_eps, P=P,
                    phi_prime=h_eps_prime / r)


def damping_coefficient(rho: ScalarField | np.ndarray, params: ModelParams,
                        grid: Grid | None = None) -> tuple[np.ndarray, bool]:
    """exp(-1/eps^3) (rho^(1/eps^2) + rho^(-1/eps^2)) in the log domain.

    Returns (coefficient, underflow_flag).  Underflow clamps to zero and
    flags; overflow raises with the offending cell.
    """
    if isinstance(rho, ScalarField):
        grid = rho.grid
        r = rho.interior
    else:
        r = rho
    _require_positive(r)
    if params.epsilon == 0.0:
        return np.zeros_like(r), True
    inv_e3 = params.epsilon ** -3.0
    inv_e2 = params.epsilon ** -2.0
    a = inv_e2 * np.abs(np.log(r))
    log_val = -inv_e3 + a + np.log1p(np.exp(-2.0 * a))
    worst = float(log_val.max())
    if worst > _LOG_MAX:
        idx = np.unravel_index(int(np.argmax(log_val)), log_val.shape)
        raise CoefficientOverflowError(
            f"damping coefficient overflows (log {worst:.1f}) at cell {idx}; "
            f"epsilon={params.epsilon:g} is too small for this density range",
            cell=idx)
    underflow = bool(log_val.min() < _LOG_MIN)
    out = np.where(log_val < _LOG_MIN, 0.0, np.exp(np.minimum(log_val, _LOG_MAX)))
    return out, underflow


def power_log_domain(rho: np.ndarray, exponent: float,
                     prefactor_log: float = 0.0) -> tuple[np.ndarray, bool]:
    """exp(prefactor_log) * rho**exponent with underflow clamped to zero."""
    _require_positive(rho)
    log_val = prefactor_log + exponent * np.log(rho)
    worst = float(log_val.max())
    if worst > _LOG_MAX:
        idx = np.unravel_index(int(np.argmax(log_val)), log_val.shape)
        raise CoefficientOverflowError(
            f"power rho^{exponent:g} overflows (log {worst:.1f}) at cell {idx}",
            cell=idx)
    underflow = bool(log_val.min() < _LOG_MIN)
    return np.where(log_val < _LOG_MIN, 0.0, np.exp(log_val)), underflow


def cold_diffusion_G(rho: ScalarField, params: ModelParams,
                     bc: BCMode) -> ScalarField:
    """eps rho^(1/2) div(rho^(-1/2) h_eps'(rho) grad rho).

    Built from nested centered operators so that its integral pairs exactly
    with the discrete gradient in the mass and energy budgets.
    """
    grid = rho.grid
    r = rho.interior
    _require_positive(r)
    if params.epsilon == 0.0:
        return ScalarField.zeros(grid)
    coeffs = eval_coeffs(rho, params)
    sqrt_r = np.sqrt(r)
    grad_r = gradient_array(r, grid, bc)
    flux = (coeffs.h_eps_prime / sqrt_r) * grad_r
    G = params.epsilon * sqrt_r * divergence_array(flux, grid, bc)
    return ScalarField.from_interior(grid, G)


def qsystem_terms(rho: ScalarField, u: VectorField, params: ModelParams,
                  bc: BCMode) -> dict[str, np.ndarray]:
    """The five system-C coefficient fields, separately retrievable.

    Keys: v_lap_v, v_div_quartic, rho_neg_p0, cubic_drag (vector),
    quartic_transport (vector).
    """
    if params.system is not SystemVariant.C3D_ALPHA1:
        raise ValueError("quartic-gradient terms are specific to system C")
    grid = rho.grid
    r = rho.interior
    _require_positive(r)
    v = np.sqrt(r)
    grad_v = gradient_array(v, grid, bc)
    grad_v2 = np.einsum("d...,d...->...", grad_v, grad_v)
    lap_v = divergence_array(grad_v, grid, bc)
    v_lap_v = v * lap_v
    v_div_quartic = v * divergence_array(grad_v2 * grad_v, grid, bc)
    rho_neg_p0, _ = power_log_domain(r, -float(params.p0))
    speed = np.sqrt(np.einsum("d...,d...->...", u.interior, u.interior))
    cubic_drag = r * speed ** 3 * u.interior
    grad_u = velocity_gradient(u, bc)
    # components: v |grad v|^2 sum_i d_i v d_i u_j
    quartic_transport = v * grad_v2 * np.einsum("i...,ij...->j...",
                                                grad_v, grad_u)
    return {
        "v_lap_v": v_lap_v,
        "v_div_quartic": v_div_quartic,
        "rho_neg_p0": rho_neg_p0,
        "cubic_drag": cubic_drag,
        "quartic_transport": quartic_transport,
    }


def stress_coercivity_check(u: VectorField, rho: ScalarField,
                            params: ModelParams, bc: BCMode) -> float:
    """Normalized worst-cell margin of the pointwise stress lower bound.

    Computes min over cells of
        4 (h_eps |Du|^2 + g_eps (div u)^2) - min{N alpha - (N-1), 1} h_eps |Du|^2
    divided by the pointwise scale; nonnegative (to round-off) in every
    admissible regime.
    """
    grid = u.grid
    coeffs = eval_coeffs(rho, params)
    vg = sym_gradient(u, bc)
    n = grid.dim
    c = min(n * params.alpha - (n - 1), 1.0)
    quad = 4.0 * (coeffs.h_eps * vg.sym_norm2 + coeffs.g_eps * vg.div ** 2)
    margin = quad - c * coeffs.h_eps * vg.sym_norm2
    scale = float(np.abs(quad).max())
    if scale == 0.0:
        return 0.0
    return float(margin.min()) / scale
