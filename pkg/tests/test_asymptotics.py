import numpy as np
import pytest

from nvlab.asymptotics import (
    build_chart,
    constant_C,
    f_prime_limits,
    gelfand_leray_integrals,
    optimality_check,
    phase_in_chart,
)
from nvlab.errors import ConfigurationError, NumericalDomainError
from nvlab.phase import phase_value
from nvlab.scattering import profile

P1 = profile("P1")
ZERO = profile("P1", theta=0.0)


class TestChart:
    @pytest.mark.parametrize("c", [1, -1])
    def test_p_vanishes_at_center(self, c):
        assert abs(build_chart(c).P(complex(c))) < 1e-14

    def test_p_value_at_plus_one(self):
        # -9 - 9 + 1 + 1 + 16 = 0
        assert build_chart(1).P(1.0 + 0j) == 0

    @pytest.mark.parametrize("c", [1, -1])
    def test_derivative_at_center(self, c):
        ch = build_chart(c)
        h = 1e-6
        d = (ch.eta(c + h) - ch.eta(c - h)) / (2.0 * h)
        assert abs(d - 6.0 ** 0.25) < 1e-8

    @pytest.mark.parametrize("c", [1, -1])
    def test_factorization(self, c):
        ch = build_chart(c)
        rng = np.random.default_rng(5)
        z = c + 0.4 * (rng.random(40) - 0.5) + 0.4j * (rng.random(40) - 0.5)
        lhs = ch.P(z)
        rhs = ch.rho(z) * (z - c) ** 4
        assert np.max(np.abs(lhs - rhs) / np.abs(lhs)) < 1e-10

    @pytest.mark.parametrize("c", [1, -1])
    def test_round_trip(self, c):
        ch = build_chart(c)
        for dz in (0.1, -0.07 + 0.05j, 0.02j, -0.1j):
            z = c + dz
            assert abs(ch.phi(ch.eta(z)) - z) < 1e-10

    def test_bad_center(self):
        with pytest.raises(ConfigurationError):
            build_chart(2)


class TestPhaseInChart:
    def test_zero_at_origin(self):
        assert phase_in_chart(build_chart(1), 0.0) == 0

    def test_real_eta_gives_zero(self):
        ch = build_chart(1)
        for x in (0.1, -0.3, 0.55):
            assert abs(phase_in_chart(ch, x + 0j)) < 1e-15

    @pytest.mark.parametrize("c", [1, -1])
    def test_consistency_with_phase(self, c):
        ch = build_chart(c)
        rng = np.random.default_rng(11)
        z = c + 0.3 * (rng.random(30) - 0.5) + 0.3j * (rng.random(30) - 0.5)
        s1 = phase_in_chart(ch, ch.eta(z))
        s2 = phase_value(-18.0, z)
        assert np.max(np.abs(s1 - s2) / (1e-30 + np.abs(s2))) < 1e-8

    def test_outside_validity(self):
        with pytest.raises(NumericalDomainError):
            phase_in_chart(build_chart(1), 5.0 + 0j)


class TestLevelSetIntegrals:
    def test_signs(self):
        lv = gelfand_leray_integrals("left")
        assert lv.J_plus < 0 and lv.J_minus < 0

    def test_half_plane_antisymmetry(self):
        left = gelfand_leray_integrals("left")
        right = gelfand_leray_integrals("right")
        assert abs(left.J_plus + right.J_plus) < 1e-12
        assert abs(left.J_minus + right.J_minus) < 1e-12

    def test_refinement_stability(self):
        a = gelfand_leray_integrals("left", n=5000)
        b = gelfand_leray_integrals("left", n=10000)
        assert abs(a.J_plus - b.J_plus) < 1e-4 * abs(b.J_plus)
        assert a.estimated_error < 1e-4


class TestFPrimeLimits:
    def test_plus_one_value(self):
        got = f_prime_limits(P1, +1)
        want = -(np.pi / 2.0) * P1.b(1.0 + 0j)
        assert abs(got - want) < 1e-14

    def test_ratio_identity(self):
        b1 = P1.b(1.0 + 0j)
        ratio = f_prime_limits(P1, +1) / f_prime_limits(P1, -1)
        assert abs(ratio + b1 / np.conj(b1)) < 1e-12   # = −1 for real b

    def test_one_sided_finite_difference(self):
        from nvlab.scattering import f_weight
        h = 1e-6
        fd = (f_weight(P1, (1.0 - h) + 0j) - f_weight(P1, (1.0 - 2 * h) + 0j)) / h
        # f is real, so the radial derivative is ∂ζf + ∂ζ̄f = 2·∂ζf here
        assert abs(fd - 2.0 * f_prime_limits(P1, +1)) < 1e-4

    def test_zero_data(self):
        assert f_prime_limits(ZERO, +1) == 0


class TestConstantC:
    def test_zero_data(self):
        assert constant_C(ZERO) == 0

    def test_nonzero_for_p1(self):
        C = constant_C(P1)
        assert abs(C) > 0.01
        assert abs(C.imag) < 1e-12 * abs(C)

    def test_zero_when_b_vanishes_at_centers(self):
        assert abs(constant_C(profile("P2"))) < 1e-15

    def test_linearity_in_theta(self):
        C1 = constant_C(profile("P1", theta=0.1))
        C2 = constant_C(profile("P1", theta=0.2))
        assert abs(C2 - 2.0 * C1) < 1e-12 * abs(C1)


class TestOptimalityCheck:
    def test_zero_data(self):
        rows = optimality_check(ZERO, [8.0, 16.0])
        assert all(r.scaled_I == 0 and r.C == 0 for r in rows)

    def test_input_validation(self):
        with pytest.raises(ConfigurationError):
            optimality_check(P1, [16.0, 8.0])
        with pytest.raises(ConfigurationError):
            optimality_check(P1, [2.0, 16.0])

    def test_small_t_sanity(self):
        rows = optimality_check(P1, [8.0, 16.0])
        assert rows[0].C == rows[1].C != 0
        assert rows[1].rel_gap < rows[0].rel_gap
