import math

import pytest
from hypothesis import given, strategies as st

from degvisc.params import (
    ModelParams,
    RegimeReport,
    SystemVariant,
    Theorem,
    derive_constants,
    validate_regime,
)


class TestValidateRegime:
    def test_2d_symmetric_baseline(self):
        # alpha=1, gamma=2 is the shallow-water-adjacent regime.
        rep = validate_regime(1.0, 2.0, 2, SystemVariant.A2D)
        assert rep.admissible
        assert rep.theorem is Theorem.THM_2D_S2
        assert rep.violated_conditions == ()

    def test_3d_open_interval_boundary_excluded(self):
        # gamma = 3/2 sits exactly on the open endpoint of (1, 6*3/4 - 3).
        rep = validate_regime(0.75, 1.5, 3, SystemVariant.B3D)
        assert not rep.admissible
        assert "gamma<6*alpha-3" in rep.violated_conditions
        assert rep.theorem is Theorem.NONE

    def test_gamma_one_excluded(self):
        rep = validate_regime(1.0, 1.0, 2, SystemVariant.A2D)
        assert not rep.admissible
        assert "gamma>1" in rep.violated_conditions

    def test_2d_full_gradient_maps_to_s1(self):
        rep = validate_regime(1.0, 2.0, 2, SystemVariant.B3D)
        assert rep.admissible
        assert rep.theorem is Theorem.THM_2D_S1

    def test_3d_alpha_above_one_requires_l4_data(self):
        rep = validate_regime(1.5, 2.5, 3, SystemVariant.B3D)
        assert rep.admissible
        assert rep.theorem is Theorem.THM_3D_S1
        assert rep.needs_L4_data

    def test_3d_alpha_one_prefers_closed_branch(self):
        # gamma=2.5 is outside [2*1.0-1, 3*1.0-1] = [1,2] but inside (1,3).
        rep = validate_regime(1.0, 2.5, 3, SystemVariant.B3D)
        assert rep.admissible
        assert not rep.needs_L4_data

    def test_a2d_rejected_in_3d(self):
        rep = validate_regime(1.0, 2.0, 3, SystemVariant.A2D)
        assert not rep.admissible

    def test_system_c_requires_alpha_one(self):
        rep = validate_regime(0.9, 2.0, 3, SystemVariant.C3D_ALPHA1)
        assert not rep.admissible
        assert "alpha=1" in rep.violated_conditions
        ok = validate_regime(1.0, 2.0, 3, SystemVariant.C3D_ALPHA1)
        assert ok.admissible
        assert ok.theorem is Theorem.THM_3D_S2_ALPHA1

    def test_dim_one_is_flagged_extension(self):
        rep = validate_regime(1.0, 2.0, 1, SystemVariant.A2D)
        assert rep.admissible
        assert rep.theorem is Theorem.NONE
        assert any("desk-scale" in n for n in rep.notes)

    @given(alpha=st.floats(0.51, 3.0), gamma=st.floats(1.01, 5.0),
           dim=st.sampled_from([1, 2, 3]),
           system=st.sampled_from(list(SystemVariant)))
    def test_pure_and_consistent(self, alpha, gamma, dim, system):
        a = validate_regime(alpha, gamma, dim, system)
        b = validate_regime(alpha, gamma, dim, system)
        assert a == b
        assert a.admissible == (len(a.violated_conditions) == 0)
        if a.needs_L4_data:
            assert a.theorem is Theorem.THM_3D_S1 and alpha > 1.0


class TestDeriveConstants:
    def test_epsilon0_formula(self):
        p = derive_constants(1.0, 2.0, 1.0, SystemVariant.A2D,
                             epsilon=0.05, dim=2)
        # (2a-1) * (16(a+g))**-10 = 48**-10, evaluated through exact ints.
        expected = 1.0 / float(48 ** 10)
        assert p.epsilon0 == pytest.approx(expected, rel=1e-15)
        assert abs(p.epsilon0 - 1.53e-17) / 1.53e-17 < 0.01

    def test_system_c_constants(self):
        p = derive_constants(1.0, 2.0, 1.0, SystemVariant.C3D_ALPHA1,
                             epsilon=0.05, dim=3)
        assert p.epsilon0 == 1e-10
        assert p.sigma0 == 1e-10
        assert p.p0 == 50

    def test_sigma0_formula(self):
        p = derive_constants(1.0, 2.0, 1.0, SystemVariant.A2D,
                             epsilon=0.05, dim=2)
        assert p.sigma0 == pytest.approx(40.0 ** -8, rel=1e-15)

    def test_eta0_can_bind(self):
        p = derive_constants(1.0, 2.0, 1e-20, SystemVariant.A2D,
                             epsilon=0.05, dim=2)
        assert p.epsilon0 == 1e-20

    def test_rejects_inadmissible(self):
        with pytest.raises(ValueError, match="gamma>1"):
            derive_constants(1.0, 1.0, 1.0, SystemVariant.A2D,
                             epsilon=0.05, dim=2)

    @given(alpha=st.floats(0.51, 3.0), gamma=st.floats(1.01, 5.0),
           eta0=st.floats(1e-12, 10.0))
    def test_epsilon0_positive_and_bounded(self, alpha, gamma, eta0):
        rep = validate_regime(alpha, gamma, 2, SystemVariant.A2D)
        if not rep.admissible:
            return
        p = derive_constants(alpha, gamma, eta0, SystemVariant.A2D,
                             epsilon=0.01, dim=2)
        assert 0.0 < p.epsilon0 <= eta0

    @given(gamma=st.floats(1.01, 5.0))
    def test_gamma_tilde_offset(self, gamma):
        p = ModelParams(alpha=1.0, gamma=gamma, epsilon=0.05, eta0=1.0,
                        system=SystemVariant.A2D)
        assert abs(p.gamma_tilde - p.gamma - 1.0 / 6.0) < 1e-15


class TestModelParams:
    def test_epsilon_bound_reported_not_enforced(self):
        p = ModelParams(alpha=1.0, gamma=2.0, epsilon=0.05, eta0=1.0,
                        system=SystemVariant.A2D)
        assert not p.epsilon_within_bound
        tiny = ModelParams(alpha=1.0, gamma=2.0, epsilon=1e-18, eta0=1.0,
                           system=SystemVariant.A2D)
        assert tiny.epsilon_within_bound

    def test_epsilon_zero_admitted(self):
        p = ModelParams(alpha=1.0, gamma=2.0, epsilon=0.0, eta0=1.0,
                        system=SystemVariant.A2D)
        assert p.epsilon == 0.0
        assert not p.epsilon_within_bound

    def test_system_c_gate(self):
        with pytest.raises(ValueError, match="alpha = 1"):
            ModelParams(alpha=0.9, gamma=2.0, epsilon=0.05, eta0=1.0,
                        system=SystemVariant.C3D_ALPHA1)

    def test_variant_parse(self):
        assert SystemVariant.parse("a2d") is SystemVariant.A2D
        assert SystemVariant.parse("C3D_alpha1") is SystemVariant.C3D_ALPHA1
        with pytest.raises(ValueError):
            SystemVariant.parse("what")
