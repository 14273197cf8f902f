import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from degvisc.calculus import BCMode
from degvisc.constitutive import (
    CoefficientOverflowError,
    cold_diffusion_G,
    damping_coefficient,
    eval_coeffs,
    qsystem_terms,
    stress_coercivity_check,
)
from degvisc.fields import Grid, PositivityError, ScalarField, VectorField, integrate
from degvisc.params import ModelParams, SystemVariant


def make_params(alpha=1.0, gamma=2.0, eps=0.05, system=SystemVariant.A2D):
    return ModelParams(alpha=alpha, gamma=gamma, epsilon=eps, eta0=1.0,
                       system=system)


def params_c(eps=0.05):
    return ModelParams(alpha=1.0, gamma=2.0, epsilon=eps, eta0=1.0,
                       system=SystemVariant.C3D_ALPHA1)


class TestEvalCoeffs:
    def test_unit_density_closed_forms(self):
        p = make_params(alpha=0.8, gamma=1.7, eps=0.05)
        g = Grid.torus(1, 8)
        c = eval_coeffs(ScalarField.full(g, 1.0), p)
        e13 = 0.05 ** (1 / 3)
        assert np.allclose(c.h_eps, 1.0 + 2.0 * e13)
        g_expected = (0.8 + e13 * (7 / 8 + p.gamma_tilde)) - (1.0 + 2.0 * e13)
        assert np.allclose(c.g_eps, g_expected)

    def test_eps_zero_recovers_power_law(self):
        p = make_params(alpha=0.7, gamma=2.0, eps=0.0)
        g = Grid.torus(1, 16)
        rho = ScalarField.from_function(g, lambda x: 1.0 + 0.5 * np.sin(2 * np.pi * x))
        c = eval_coeffs(rho, p)
        r = rho.interior
        assert np.allclose(c.h_eps, r ** 0.7, rtol=1e-13)
        assert np.allclose(c.g_eps, -0.3 * r ** 0.7, rtol=1e-13)

    def test_alpha_one_g_vanishes(self):
        p = make_params(alpha=1.0, eps=0.0)
        g = Grid.torus(1, 8)
        c = eval_coeffs(ScalarField.full(g, 2.0), p)
        assert np.allclose(c.g, 0.0)
        assert np.allclose(c.g_eps, 0.0)

    def test_system_c_bypasses_regularization(self):
        g = Grid.torus(1, 8)
        c = eval_coeffs(ScalarField.full(g, 4.0), params_c())
        assert np.allclose(c.h_eps, 4.0)
        assert np.allclose(c.h_eps_prime, 1.0)
        assert np.allclose(c.g_eps, 0.0)

    def test_nonpositive_density_rejected(self):
        g = Grid.torus(1, 8)
        rho = ScalarField.full(g, 1.0)
        rho.interior[0] = 0.0
        with pytest.raises(PositivityError):
            eval_coeffs(rho, make_params())

    @settings(max_examples=30, deadline=None)
    @given(alpha=st.floats(0.51, 2.5), gamma=st.floats(1.01, 4.0),
           eps=st.floats(0.0, 0.3), seed=st.integers(0, 99))
    def test_bd_compatibility_identity(self, alpha, gamma, eps, seed):
        # g_eps = rho h_eps' - h_eps pointwise
        p = make_params(alpha=alpha, gamma=gamma, eps=eps)
        g = Grid.torus(1, 16)
        rng = np.random.default_rng(seed)
        rho = ScalarField.from_interior(g, 0.2 + 2.0 * rng.random(16))
        c = eval_coeffs(rho, p)
        r = rho.interior
        assert np.allclose(c.g_eps, r * c.h_eps_prime - c.h_eps,
                           rtol=1e-12, atol=1e-12)
        assert np.all(c.h_eps >= c.h)
        if eps > 1e-10:  # below this the augmentation is under float ulp
            assert np.all(c.h_eps > c.h)
        assert np.all(c.phi_prime >= 0.0)

    def test_h_eps_converges_to_h(self):
        g = Grid.torus(1, 16)
        rho = ScalarField.from_interior(
            g, np.linspace(0.1, 3.0, 16))
        gaps = []
        for eps in (0.1, 0.01, 0.001, 1e-6):
            c = eval_coeffs(rho, make_params(eps=eps))
            gaps.append(np.max(np.abs(c.h_eps - c.h)))
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-1 * gaps[0]


class TestDamping:
    def test_unit_density(self):
        g = Grid.torus(1, 8)
        p = make_params(eps=1.0)
        coeff, flag = damping_coefficient(ScalarField.full(g, 1.0), p)
        assert np.allclose(coeff, 2.0 * math.exp(-1.0))
        assert not flag

    def test_hand_value(self):
        g = Grid.torus(1, 8)
        p = make_params(eps=1.0)
        coeff, _ = damping_coefficient(ScalarField.full(g, 2.0), p)
        assert np.allclose(coeff, (2.0 + 0.5) * math.exp(-1.0))

    def test_desk_epsilon_underflows_with_flag(self):
        g = Grid.torus(1, 8)
        p = make_params(eps=0.1)
        coeff, flag = damping_coefficient(ScalarField.full(g, 1.1), p)
        assert flag
        assert np.all(coeff == 0.0)

    def test_overflow_is_hard_error(self):
        g = Grid.torus(1, 8)
        p = make_params(eps=0.5)
        rho = ScalarField.full(g, 1e80)
        with pytest.raises(CoefficientOverflowError) as err:
            damping_coefficient(rho, p)
        assert err.value.cell is not None

    @settings(max_examples=30, deadline=None)
    @given(r=st.floats(0.05, 20.0))
    def test_am_gm_lower_bound(self, r):
        g = Grid.torus(1, 4)
        p = make_params(eps=1.0)
        coeff, _ = damping_coefficient(ScalarField.full(g, r), p)
        floor = 2.0 * math.exp(-1.0)
        assert np.all(coeff >= floor * (1 - 1e-12))
        if abs(r - 1.0) > 1e-3:
            assert np.all(coeff > floor)


class TestColdDiffusion:
    def test_constant_density_zero(self):
        g = Grid.torus(2, 16)
        G = cold_diffusion_G(ScalarField.full(g, 1.3), make_params(), BCMode.PERIODIC)
        assert np.max(np.abs(G.interior)) == 0.0

    def test_integral_identity(self):
        # integrate(G) = -(eps/2) integrate(rho^{-1} h_eps' |grad rho|^2)
        # up to the discrete chain-rule gap, which is below 1e-9 here
        p = make_params(eps=0.01)
        g = Grid.torus(1, 512)
        rho = ScalarField.from_function(
            g, lambda x: 1.0 + 0.01 * np.sin(2 * np.pi * x))
        G = cold_diffusion_G(rho, p, BCMode.PERIODIC)
        lhs = integrate(G)
        from degvisc.calculus import gradient
        from degvisc.constitutive import eval_coeffs
        grad = gradient(rho, BCMode.PERIODIC)
        c = eval_coeffs(rho, p)
        grad2 = np.einsum("d...,d...->...", grad.interior, grad.interior)
        rhs = -0.5 * p.epsilon * integrate(
            ScalarField.from_interior(g, c.h_eps_prime / rho.interior * grad2))
        assert lhs <= 0.0
        assert abs(lhs - rhs) < 1e-9

    def test_integral_nonpositive_on_random_data(self):
        p = make_params(eps=0.05)
        for seed in range(5):
            g = Grid.torus(2, 24)
            rng = np.random.default_rng(seed)
            rho = ScalarField.from_interior(g, 0.5 + rng.random((24, 24)))
            G = cold_diffusion_G(rho, p, BCMode.PERIODIC)
            assert integrate(G) <= 1e-14

    def test_against_one_sided_difference_oracle(self):
        # independently discretized G with half-point fluxes; the two
        # schemes agree to O(h) or better on smooth data
        p = make_params(alpha=1.0, gamma=2.0, eps=0.01)
        errors = []
        for n in (128, 256):
            g = Grid.torus(1, n)
            h = g.spacing[0]
            x = g.axes()[0]
            rho = ScalarField.from_interior(g, 1.0 + 0.1 * np.sin(2 * np.pi * x))
            G = cold_diffusion_G(rho, p, BCMode.PERIODIC).interior

            r = rho.interior
            e13 = p.epsilon ** (1 / 3)
            hprime = (p.alpha * r ** (p.alpha - 1)
                      + e13 * (0.875 * r ** -0.125
                               + p.gamma_tilde * r ** (p.gamma_tilde - 1)))
            b = hprime / np.sqrt(r)
            b_half = 0.5 * (b + np.roll(b, -1))
            flux = b_half * (np.roll(r, -1) - r) / h
            G_oracle = p.epsilon * np.sqrt(r) * (flux - np.roll(flux, 1)) / h
            errors.append(np.max(np.abs(G - G_oracle)))
        scale = 0.01  # eps * O(|grad rho|^2) magnitude
        assert errors[0] < scale
        assert errors[1] < 0.6 * errors[0]

    def test_eps_zero_gives_zero(self):
        g = Grid.torus(1, 32)
        rho = ScalarField.from_function(g, lambda x: 1 + 0.3 * np.sin(2 * np.pi * x))
        G = cold_diffusion_G(rho, make_params(eps=0.0), BCMode.PERIODIC)
        assert np.max(np.abs(G.interior)) == 0.0


class TestQSystemTerms:
    def test_uniform_rest_state(self):
        g = Grid.torus(2, 16)
        terms = qsystem_terms(ScalarField.full(g, 1.0), VectorField.zeros(g),
                              params_c(), BCMode.PERIODIC)
        assert np.allclose(terms["rho_neg_p0"], 1.0)
        for key in ("v_lap_v", "v_div_quartic", "cubic_drag",
                    "quartic_transport"):
            assert np.max(np.abs(terms[key])) == 0.0

    def test_power_evaluation(self):
        g = Grid.torus(2, 8)
        terms = qsystem_terms(ScalarField.full(g, 4.0), VectorField.zeros(g),
                              params_c(), BCMode.PERIODIC)
        assert np.allclose(terms["rho_neg_p0"], 4.0 ** -50, rtol=1e-12)
        assert np.max(np.abs(terms["v_lap_v"])) == 0.0

    def test_unit_speed_drag(self):
        g = Grid.torus(3, 8)
        u = VectorField.zeros(g)
        u.interior[0] = 1.0
        terms = qsystem_terms(ScalarField.full(g, 1.0), u, params_c(),
                              BCMode.PERIODIC)
        assert np.allclose(terms["cubic_drag"][0], 1.0)
        assert np.allclose(terms["cubic_drag"][1:], 0.0)

    def test_overflow_reported(self):
        g = Grid.torus(1, 8)
        rho = ScalarField.full(g, 1e-8)  # 1e-8^-50 = 1e400 overflows
        with pytest.raises(CoefficientOverflowError):
            qsystem_terms(rho, VectorField.zeros(g), params_c(), BCMode.PERIODIC)

    def test_wrong_system_rejected(self):
        g = Grid.torus(1, 8)
        with pytest.raises(ValueError):
            qsystem_terms(ScalarField.full(g, 1.0), VectorField.zeros(g),
                          make_params(), BCMode.PERIODIC)


class TestCoercivity:
    def test_zero_velocity(self):
        g = Grid.torus(2, 16)
        m = stress_coercivity_check(VectorField.zeros(g),
                                    ScalarField.full(g, 1.0),
                                    make_params(), BCMode.PERIODIC)
        assert m == 0.0

    def test_random_smooth_2d(self):
        g = Grid.torus(2, 32)
        rng = np.random.default_rng(20)
        u = VectorField.from_functions(
            g, [lambda x, y: 0.3 * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y),
                lambda x, y: 0.2 * np.cos(2 * np.pi * x)])
        rho = ScalarField.from_interior(g, 0.5 + rng.random((32, 32)))
        m = stress_coercivity_check(u, rho, make_params(), BCMode.PERIODIC)
        assert m >= -1e-12

    def test_3d_alpha_three_quarters(self):
        # coercivity constant min{9/4 - 2, 1} = 1/4
        p = ModelParams(alpha=0.75, gamma=1.4, epsilon=0.05, eta0=1.0,
                        system=SystemVariant.B3D)
        g = Grid.torus(3, 8)
        rng = np.random.default_rng(21)
        u = VectorField.from_interior(g, 0.1 * rng.normal(size=(3,) + g.extent))
        rho = ScalarField.from_interior(g, 0.5 + rng.random(g.extent))
        m = stress_coercivity_check(u, rho, p, BCMode.PERIODIC)
        assert m >= -1e-12
