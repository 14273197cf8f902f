import numpy as np
import pytest

from degvisc.calculus import (
    BCMode,
    apply_bc,
    bc_for_grid,
    boundary_mass_flux,
    divergence,
    gradient,
    laplacian,
    sym_gradient,
)
from degvisc.fields import Grid, ScalarField, State, VectorField, integrate
from degvisc.params import ModelParams, SystemVariant


def params():
    return ModelParams(alpha=1.0, gamma=2.0, epsilon=0.05, eta0=1.0,
                       system=SystemVariant.A2D)


def observed_order(errors):
    return [np.log2(a / b) for a, b in zip(errors, errors[1:])]


class TestGradient:
    def test_constant_field(self):
        g = Grid.torus(2, 16)
        out = gradient(ScalarField.full(g, 3.7), BCMode.PERIODIC)
        assert np.max(np.abs(out.interior)) == 0.0

    def test_analytic_order_two(self):
        errors = []
        for n in (32, 64, 128):
            g = Grid.torus(1, n)
            f = ScalarField.from_function(g, lambda x: np.sin(2 * np.pi * x))
            out = gradient(f, BCMode.PERIODIC)
            exact = 2 * np.pi * np.cos(2 * np.pi * g.axes()[0])
            errors.append(np.max(np.abs(out.interior[0] - exact)))
        assert all(o > 1.9 for o in observed_order(errors))

    def test_neumann_face_derivative_zero(self):
        # even-about-each-face data: cos(pi (x + 1)) on (-1,1) has zero
        # normal derivative at both walls; the even ghost extension makes
        # the discrete face-normal derivative vanish identically
        g = Grid.box(1, 64, 2.0)
        h = g.spacing[0]
        f = ScalarField.from_function(g, lambda x: np.cos(np.pi * (x + 1.0)))
        padded = f.copy()
        padded.data[0] = padded.data[1]
        padded.data[-1] = padded.data[-2]
        face_lo = (padded.data[1] - padded.data[0]) / h
        face_hi = (padded.data[-1] - padded.data[-2]) / h
        assert face_lo == 0.0 and face_hi == 0.0
        # the cell-centered gradient next to the wall is first-order small
        out = gradient(f, BCMode.SLIP_BOX)
        assert abs(out.interior[0][0]) < np.pi ** 2 * h
        assert abs(out.interior[0][-1]) < np.pi ** 2 * h

    def test_topology_mismatch_rejected(self):
        g = Grid.torus(1, 8)
        with pytest.raises(ValueError):
            gradient(ScalarField.full(g, 1.0), BCMode.SLIP_BOX)


class TestDivergence:
    def test_constant_vector(self):
        g = Grid.torus(2, 16)
        u = VectorField.from_functions(
            g, [lambda x, y: np.full_like(x, 2.0),
                lambda x, y: np.full_like(x, -1.0)])
        out = divergence(u, BCMode.PERIODIC)
        assert np.max(np.abs(out.interior)) == 0.0

    def test_analytic(self):
        errors = []
        for n in (32, 64, 128):
            g = Grid.torus(2, n)
            u = VectorField.from_functions(
                g, [lambda x, y: np.sin(2 * np.pi * x),
                    lambda x, y: np.zeros_like(x)])
            out = divergence(u, BCMode.PERIODIC)
            exact = 2 * np.pi * np.cos(2 * np.pi * g.meshgrid()[0])
            errors.append(np.max(np.abs(out.interior - exact)))
        assert all(o > 1.9 for o in observed_order(errors))

    def test_div_of_gradient_close_to_laplacian(self):
        g = Grid.torus(2, 64)
        f = ScalarField.from_function(
            g, lambda x, y: np.sin(2 * np.pi * x) * np.cos(4 * np.pi * y))
        lap_wide = divergence(gradient(f, BCMode.PERIODIC), BCMode.PERIODIC)
        lap = laplacian(f, BCMode.PERIODIC)
        # both are O(h^2) approximations of the same operator
        diff = np.max(np.abs(lap_wide.interior - lap.interior))
        scale = np.max(np.abs(lap.interior))
        assert diff < 0.05 * scale


class TestLaplacian:
    def test_constant(self):
        g = Grid.torus(3, 8)
        out = laplacian(ScalarField.full(g, 5.0), BCMode.PERIODIC)
        assert np.max(np.abs(out.interior)) == 0.0

    def test_analytic_order_two(self):
        errors = []
        for n in (32, 64, 128):
            g = Grid.torus(1, n)
            f = ScalarField.from_function(g, lambda x: np.sin(2 * np.pi * x))
            out = laplacian(f, BCMode.PERIODIC)
            exact = -(2 * np.pi) ** 2 * np.sin(2 * np.pi * g.axes()[0])
            errors.append(np.max(np.abs(out.interior - exact)))
        assert all(o > 1.9 for o in observed_order(errors))

    def test_integral_vanishes_on_torus(self):
        g = Grid.torus(2, 32)
        rng = np.random.default_rng(3)
        f = ScalarField.from_interior(g, rng.normal(size=(32, 32)))
        assert abs(integrate(laplacian(f, BCMode.PERIODIC))) < 1e-10


class TestSymGradient:
    def test_rigid_rotation_kills_sym_part(self):
        g = Grid.box(2, 32, 2.0)
        u = VectorField.from_functions(g, [lambda x, y: -y, lambda x, y: x])
        vg = sym_gradient(u, BCMode.SLIP_BOX)
        inner = (slice(2, -2), slice(2, -2))
        assert np.max(np.abs(vg.sym[(slice(None), slice(None)) + inner])) < 1e-12
        anti = vg.grad + np.swapaxes(vg.grad, 0, 1)
        assert np.max(np.abs(anti[(slice(None), slice(None)) + inner])) < 1e-12

    def test_pure_strain(self):
        g = Grid.box(2, 32, 2.0)
        u = VectorField.from_functions(g, [lambda x, y: x, lambda x, y: -y])
        vg = sym_gradient(u, BCMode.SLIP_BOX)
        inner = (slice(2, -2), slice(2, -2))
        assert np.allclose(vg.sym[(0, 0) + inner], 1.0, atol=1e-12)
        assert np.allclose(vg.sym[(1, 1) + inner], -1.0, atol=1e-12)
        assert np.max(np.abs(vg.div[inner])) < 1e-12

    def test_pointwise_div_bound(self):
        # (div u)^2 <= N |D u|^2 pointwise
        for dim in (1, 2, 3):
            g = Grid.torus(dim, 12)
            rng = np.random.default_rng(dim)
            u = VectorField.from_interior(
                g, rng.normal(size=(dim,) + g.extent))
            vg = sym_gradient(u, BCMode.PERIODIC)
            lhs = vg.div ** 2
            rhs = dim * vg.sym_norm2
            assert np.all(lhs <= rhs * (1 + 1e-12) + 1e-12)


class TestIntegrationByParts:
    def test_torus_adjointness(self):
        g = Grid.torus(2, 24)
        rng = np.random.default_rng(11)
        f = ScalarField.from_interior(g, rng.normal(size=g.extent))
        F = VectorField.from_interior(g, rng.normal(size=(2,) + g.extent))
        lhs = integrate(ScalarField.from_interior(
            g, f.interior * divergence(F, BCMode.PERIODIC).interior))
        grad_f = gradient(f, BCMode.PERIODIC)
        rhs = integrate(ScalarField.from_interior(
            g, np.einsum("d...,d...->...", grad_f.interior, F.interior)))
        assert abs(lhs + rhs) < 1e-10

    def test_linearity(self):
        g = Grid.torus(1, 32)
        rng = np.random.default_rng(12)
        a, b = 1.7, -0.4
        f1 = ScalarField.from_interior(g, rng.normal(size=32))
        f2 = ScalarField.from_interior(g, rng.normal(size=32))
        combo = ScalarField.from_interior(
            g, a * f1.interior + b * f2.interior)
        g1 = gradient(f1, BCMode.PERIODIC).interior
        g2 = gradient(f2, BCMode.PERIODIC).interior
        gc = gradient(combo, BCMode.PERIODIC).interior
        assert np.allclose(gc, a * g1 + b * g2, atol=1e-12)


class TestApplyBC:
    def test_uniform_state_ghosts(self):
        g = Grid.box(2, 8, 2.0)
        s = State(ScalarField.full(g, 1.0), VectorField.zeros(g), 0.0, params())
        out = apply_bc(s, BCMode.SLIP_BOX)
        assert np.all(out.rho.data == 1.0)
        assert np.all(out.u.data == 0.0)

    def test_tangential_even_normal_odd(self):
        g = Grid.box(2, 8, 2.0)
        s = State(ScalarField.full(g, 1.0), VectorField.zeros(g), 0.0, params())
        s.u.interior[0] = 0.5   # normal to x-faces
        s.u.interior[1] = 0.25  # tangential to x-faces
        out = apply_bc(s, BCMode.SLIP_BOX)
        assert np.all(out.u.data[0][0, 1:-1] == -0.5)
        assert np.all(out.u.data[1][0, 1:-1] == 0.25)
        # discrete tangential vorticity at the x-face: d1 u2 - d2 u1 = 0
        # for constant tangential flow
        d1u2 = (out.u.data[1][1, 1:-1] - out.u.data[1][0, 1:-1])
        assert np.max(np.abs(d1u2)) == 0.0

    def test_boundary_mass_flux_zero(self):
        g = Grid.box(2, 8, 2.0)
        rng = np.random.default_rng(4)
        rho = ScalarField.from_interior(g, 1.0 + 0.3 * rng.random(g.extent))
        u = VectorField.from_interior(g, rng.normal(size=(2,) + g.extent))
        s = apply_bc(State(rho, u, 0.0, params()), BCMode.SLIP_BOX)
        assert abs(boundary_mass_flux(s)) < 1e-14

    def test_periodic_rejected(self):
        g = Grid.torus(2, 8)
        s = State(ScalarField.full(g, 1.0), VectorField.zeros(g), 0.0, params())
        with pytest.raises(ValueError):
            apply_bc(s, BCMode.SLIP_BOX)

    def test_bc_for_grid(self):
        assert bc_for_grid(Grid.torus(1, 8)) is BCMode.PERIODIC
        assert bc_for_grid(Grid.box(1, 8, 1.0)) is BCMode.SLIP_BOX


class TestBoxInteriorOrder:
    def test_gradient_order_interior(self):
        errors = []
        for n in (32, 64, 128):
            g = Grid.box(1, n, 2.0)
            f = ScalarField.from_function(g, lambda x: np.cos(np.pi * (x + 1.0)))
            out = gradient(f, BCMode.SLIP_BOX)
            x = g.axes()[0]
            exact = -np.pi * np.sin(np.pi * (x + 1.0))
            m = n // 8
            errors.append(np.max(np.abs(out.interior[0][m:-m] - exact[m:-m])))
        assert all(o > 1.9 for o in observed_order(errors))
