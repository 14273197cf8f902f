#!/usr/bin/env python3
"""Derive the manufactured-solution forcing terms symbolically and emit
src/degvisc/_mms_forcing.py.

The forcing is computed from the continuum equations by sympy, entirely
independently of the package's discrete assembly, so agreement between
`rhs + forcing` and the exact time derivative is a genuine cross-check.

The manufactured fields vary along a single coordinate:
    rho*(x,t)   = 1 + a sin(2 pi x)
    u*_ax(x,t)  = b sin(2 pi x) tau(t)
    u*_tan(x,t) = c sin(2 pi x) tau(t)      (2D only)
    tau(t)      = 1 + sin(2 pi t)/2

Run from the repository root:  python3 tools/gen_mms_forcing.py
"""

from __future__ import annotations

import pathlib
import textwrap

import sympy as sp
from sympy.printing.numpy import NumPyPrinter

x, t = sp.symbols("x t", real=True)
al, ga, gt, ep = sp.symbols("al ga gt ep", positive=True)
a, b, c = sp.symbols("a b c", real=True)
P0 = 50

TAU = 1 + sp.sin(2 * sp.pi * t) / 2
RHO = 1 + a * sp.sin(2 * sp.pi * x)
U_AX = b * sp.sin(2 * sp.pi * x) * TAU
U_TAN = c * sp.sin(2 * sp.pi * x) * TAU

DX = lambda e: sp.diff(e, x)
DT = lambda e: sp.diff(e, t)


_rr = sp.Symbol("_rr", positive=True)
_H_EPS = (_rr ** al
          + ep ** sp.Rational(1, 3) * (_rr ** sp.Rational(7, 8) + _rr ** gt))
_H_EPS_PRIME = sp.diff(_H_EPS, _rr)
_G_EPS = _rr * _H_EPS_PRIME - _H_EPS


def h_eps(r):
    return _H_EPS.subs(_rr, r)


def g_eps(r):
    return _G_EPS.subs(_rr, r)


def h_eps_prime(r):
    return _H_EPS_PRIME.subs(_rr, r)


def damping(r):
    # exp(-1/ep^3) (r^(1/ep^2) + r^(-1/ep^2)) written through logs so
    # numpy evaluation underflows to zero instead of producing inf * 0
    return (sp.exp(-ep ** -3 + sp.log(r) / ep ** 2)
            + sp.exp(-ep ** -3 - sp.log(r) / ep ** 2))


def cold_diffusion(r):
    return ep * sp.sqrt(r) * DX(h_eps_prime(r) / sp.sqrt(r) * DX(r))


def velocity(dim):
    return [U_AX, U_TAN] if dim == 2 else [U_AX]


def grad_tensor(u, dim):
    """grad[i][j] = d_i u_j; only d_x (= axis 0) survives."""
    g = [[sp.Integer(0)] * dim for _ in range(dim)]
    for j in range(dim):
        g[0][j] = DX(u[j])
    return g


def sym_tensor(g, dim):
    return [[(g[i][j] + g[j][i]) / 2 for j in range(dim)] for i in range(dim)]


def div_tensor(T, dim):
    """(div T)_j = sum_i d_i T_{ij}; only i = 0 contributes."""
    return [DX(T[0][j]) for j in range(dim)]


def momentum_rhs(variant, dim):
    """Primitive-form du/dt for the chosen system, as a list of components."""
    u = velocity(dim)
    r = RHO
    grad = grad_tensor(u, dim)
    div_u = sum(grad[i][i] for i in range(dim))
    sym = sym_tensor(grad, dim)
    sqrt_ep = sp.sqrt(ep)
    pressure = [DX(r ** ga)] + [sp.Integer(0)] * (dim - 1)

    if variant in ("A2D", "B3D"):
        he, ge = h_eps(r), g_eps(r)
        if variant == "A2D":
            stress = div_tensor([[he * sym[i][j] for j in range(dim)]
                                 for i in range(dim)], dim)
            stress = [stress[j] + (DX(ge * div_u) if j == 0 else 0)
                      for j in range(dim)]
            aug = div_tensor([[he * grad[i][j] for j in range(dim)]
                              for i in range(dim)], dim)
            aug = [aug[j] + (DX(ge * div_u) if j == 0 else 0)
                   for j in range(dim)]
            total = [stress[j] + sqrt_ep * aug[j] for j in range(dim)]
        else:
            stress = div_tensor([[he * grad[i][j] for j in range(dim)]
                                 for i in range(dim)], dim)
            total = [stress[j] + (DX(ge * div_u) if j == 0 else 0)
                     for j in range(dim)]
        damp = damping(r)
        force = [total[j] - pressure[j] - damp * u[j] for j in range(dim)]
    else:  # C3D
        v = sp.sqrt(r)
        grad_v2 = DX(v) ** 2
        stress = div_tensor([[r * sym[i][j] for j in range(dim)]
                             for i in range(dim)], dim)
        aug = div_tensor([[r * grad[i][j] for j in range(dim)]
                          for i in range(dim)], dim)
        speed2 = sum(ui ** 2 for ui in u)
        force = []
        for j in range(dim):
            f = stress[j] + sqrt_ep * aug[j] - pressure[j]
            f += ep * v * grad_v2 * DX(v) * DX(u[j])
            f -= ep * r ** (-P0) * u[j]
            f -= ep * r * sp.sqrt(speed2) ** 3 * u[j]
            force.append(f)

    advect = [u[0] * DX(u[j]) for j in range(dim)]
    return [-advect[j] + force[j] / r for j in range(dim)]


def continuity_rhs(variant, dim):
    u = velocity(dim)
    r = RHO
    transport = -DX(r * u[0])
    if variant in ("A2D", "B3D"):
        return transport + cold_diffusion(r)
    v = sp.sqrt(r)
    return (transport + ep * v * DX(DX(v)) + ep * v * DX(DX(v) ** 3)
            + ep * r ** (-P0))


def check_stress_difference(dim):
    """A2D and B3D forcings must differ exactly by the stress difference."""
    u = velocity(dim)
    r = RHO
    grad = grad_tensor(u, dim)
    div_u = sum(grad[i][i] for i in range(dim))
    sym = sym_tensor(grad, dim)
    he, ge = h_eps(r), g_eps(r)
    diff_sym = div_tensor([[he * (sym[i][j] - grad[i][j]) for j in range(dim)]
                           for i in range(dim)], dim)
    aug = div_tensor([[he * grad[i][j] for j in range(dim)]
                      for i in range(dim)], dim)
    aug = [aug[j] + (DX(ge * div_u) if j == 0 else 0) for j in range(dim)]
    for j in range(dim):
        expected = (diff_sym[j] + sp.sqrt(ep) * aug[j]) / r
        got = momentum_rhs("A2D", dim)[j] - momentum_rhs("B3D", dim)[j]
        if sp.simplify(got - expected) != 0:
            raise AssertionError(
                f"stress-difference identity failed (dim={dim}, comp={j})")


def emit_function(name, exprs, printer):
    """Emit one forcing function with common subexpressions hoisted."""
    repl, reduced = sp.cse(exprs, optimizations="basic")
    lines = [f"def {name}(x, t, case):",
             "    al, ga, gt, ep, a, b, c = _unpack(case)",
             "    zero = np.zeros_like(x)"]
    for sym, sub in repl:
        lines.append(f"    {sym} = {printer.doprint(sub)}")
    outs = []
    for i, e in enumerate(reduced):
        if e == 0:
            outs.append("zero")
        else:
            # adding zero broadcasts spatially-constant results to x.shape
            lines.append(f"    _out{i} = zero + {printer.doprint(e)}")
            outs.append(f"_out{i}")
    if len(outs) == 1:
        lines.append(f"    return {outs[0]}")
    else:
        lines.append(f"    return np.stack([{', '.join(outs)}])")
    return "\n".join(lines) + "\n"


def main():
    for dim in (1, 2):
        check_stress_difference(dim)
    printer = NumPyPrinter()

    blocks = [textwrap.dedent('''\
        """Manufactured-solution fields and forcing terms.

        Generated by tools/gen_mms_forcing.py; do not edit by hand.
        """

        import numpy
        import numpy as np


        def _unpack(case):
            p = case.params
            return (p.alpha, p.gamma, p.gamma_tilde, p.epsilon,
                    case.a, case.b, case.c)

        ''')]

    blocks.append(emit_function("rho_star", [RHO], printer))
    blocks.append(emit_function("drho_dt_star", [DT(RHO)], printer))

    # state velocity and its exact time derivative: always two rows
    # (axial, tangential); 1D callers use the first row only
    def u_rows(which):
        rows = [U_AX, U_TAN]
        return [DT(r) for r in rows] if which == "dt" else rows

    blocks.append(textwrap.dedent('''\
        def u_star(x, t, case, dim):
            return _u_rows(x, t, case)


        def du_dt_star(x, t, case, dim):
            return _du_rows(x, t, case)

        '''))
    blocks.append(emit_function("_u_rows", u_rows("val"), printer))
    blocks.append(emit_function("_du_rows", u_rows("dt"), printer))

    # continuity forcing: same expression for dim 1 and 2 (fields vary
    # along one axis only)
    for variant in ("A2D", "B3D", "C3D"):
        expr = DT(RHO) - continuity_rhs(variant, 1)
        blocks.append(emit_function(f"_forcing_rho_{variant}", [expr], printer))

    for variant in ("A2D", "B3D", "C3D"):
        for dim in (1, 2):
            u = velocity(dim)
            rhs = momentum_rhs(variant, dim)
            exprs = [DT(u[j]) - rhs[j] for j in range(dim)]
            if dim == 1:
                exprs.append(sp.Integer(0))
            blocks.append(emit_function(f"_forcing_u_{variant}_{dim}d",
                                        exprs, printer))

    blocks.append(textwrap.dedent('''\
        _RHO_DISPATCH = {
            "A2D": _forcing_rho_A2D,
            "B3D": _forcing_rho_B3D,
            "C3D_alpha1": _forcing_rho_C3D,
        }

        _U_DISPATCH = {
            ("A2D", 1): _forcing_u_A2D_1d,
            ("A2D", 2): _forcing_u_A2D_2d,
            ("B3D", 1): _forcing_u_B3D_1d,
            ("B3D", 2): _forcing_u_B3D_2d,
            ("C3D_alpha1", 1): _forcing_u_C3D_1d,
            ("C3D_alpha1", 2): _forcing_u_C3D_2d,
        }


        def forcing_rho(x, t, case, dim):
            return _RHO_DISPATCH[case.variant.value](x, t, case)


        def forcing_u(x, t, case, dim):
            return _U_DISPATCH[(case.variant.value, dim)](x, t, case)
        '''))

    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "degvisc" / "_mms_forcing.py"
    out.write_text("\n\n".join(blocks))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
