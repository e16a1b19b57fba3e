import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvlab.errors import ConfigurationError, NumericalDomainError
from nvlab.scattering import (
    angular_modes,
    evolution_multiplier,
    evolve,
    extend_by_symmetry,
    f_weight,
    load_sampled,
    profile,
    r_weight,
)

lam_c = st.complex_numbers(min_magnitude=0.2, max_magnitude=5.0,
                           allow_nan=False, allow_infinity=False)


def sym_defect(data, lam):
    lam = np.asarray(lam)
    d1 = np.abs(data.b(-1.0 / np.conj(lam)) - data.b(lam))
    d2 = np.abs(data.b(1.0 / np.conj(lam)) - np.conj(data.b(lam)))
    return max(np.max(d1), np.max(d2))


class TestSymmetries:
    @pytest.mark.parametrize("name", ["P1", "P2", "unit"])
    @given(lam=lam_c)
    @settings(max_examples=40, deadline=None)
    def test_both_identities(self, name, lam):
        data = profile(name)
        assert sym_defect(data, np.array([lam])) < 1e-12

    def test_real_on_unit_circle(self):
        data = profile("P1")
        lam = np.exp(1j * np.linspace(0, 2 * np.pi, 33))
        assert np.max(np.abs(np.imag(data.b(lam)))) < 1e-14

    def test_extension_zero_base(self):
        assert extend_by_symmetry(lambda z: np.zeros_like(z), 1.7 - 0.3j) == 0

    def test_extension_rejects_origin(self):
        with pytest.raises(NumericalDomainError):
            extend_by_symmetry(lambda z: np.ones_like(z), 0.0)

    def test_p1_values_at_pm1(self):
        data = profile("P1", theta=0.1)
        assert abs(data.b(1.0 + 0j) - 0.15) < 1e-14
        assert abs(data.b(-1.0 + 0j) - 0.15) < 1e-14

    def test_p2_vanishes_at_pm1(self):
        data = profile("P2", theta=0.1)
        assert abs(data.b(1.0 + 0j)) < 1e-15
        assert abs(data.b(-1.0 + 0j)) < 1e-15

    def test_unknown_profile(self):
        with pytest.raises(ConfigurationError):
            profile("P3")


class TestEvolve:
    def test_unit_circle_fixed(self):
        data = profile("P1")
        lam = np.exp(1j * np.linspace(0.1, 6.0, 17))
        assert np.max(np.abs(evolve(data, 5.0, lam) - data.b(lam))) < 1e-12

    def test_real_lambda_fixed(self):
        data = profile("P1")
        for lam in (0.5, 2.0, -3.0):
            assert abs(evolve(data, 7.0, lam + 0j) - data.b(lam + 0j)) < 1e-12

    def test_known_multiplier(self):
        # lambda = 2i: lambda^3 = -8i, 1/lambda^3 = i/8 -> exponent -16i + i/4
        m = evolution_multiplier(1.0, 2.0j)
        assert abs(m - np.exp(-1j * 63.0 / 4.0)) < 1e-12

    @given(lam=lam_c, t=st.floats(-20, 20))
    @settings(max_examples=40, deadline=None)
    def test_modulus_preserved(self, lam, t):
        data = profile("P1")
        assert abs(abs(evolve(data, t, lam)) - abs(data.b(lam))) < 1e-12

    @given(lam=lam_c)
    @settings(max_examples=40, deadline=None)
    def test_symmetry_persists(self, lam):
        data = profile("P1")
        t = 3.0
        lam = np.array([lam])
        d1 = abs(evolve(data, t, -1.0 / np.conj(lam))[0] - evolve(data, t, lam)[0])
        d2 = abs(evolve(data, t, 1.0 / np.conj(lam))[0]
                 - np.conj(evolve(data, t, lam)[0]))
        assert max(d1, d2) < 1e-12


class TestWeights:
    def test_r_zero_on_circle(self):
        data = profile("unit")
        lam = np.exp(1j * np.linspace(0, 2 * np.pi, 13))
        assert np.max(np.abs(r_weight(data, lam))) == 0.0

    def test_r_unit_values(self):
        data = profile("unit")
        assert abs(r_weight(data, 2.0 + 0j) + np.pi / 2.0) < 1e-14
        assert abs(r_weight(data, 0.5 + 0j) - 2.0 * np.pi) < 1e-14

    def test_f_zero_on_circle(self):
        data = profile("P1")
        lam = np.exp(1j * np.linspace(0, 2 * np.pi, 13))
        assert np.max(np.abs(f_weight(data, lam))) == 0.0

    def test_f_unit_value(self):
        data = profile("unit")
        assert abs(f_weight(data, 2.0 + 0j) - 3.0 * np.pi / 8.0) < 1e-14

    def test_f_continuity_at_circle(self):
        data = profile("P1")
        eps = 1e-8
        for th in (0.0, 0.7, 2.1):
            z = np.exp(1j * th)
            inner = f_weight(data, (1 - eps) * z)
            outer = f_weight(data, (1 + eps) * z)
            assert abs(inner) < 1e-6 and abs(outer) < 1e-6

    @given(lam=lam_c)
    @settings(max_examples=40, deadline=None)
    def test_f_reality_pairing(self, lam):
        # symmetric real data: f(-zeta) = conj(f(zeta))
        data = profile("P1")
        a = f_weight(data, np.array([lam]))[0]
        b = f_weight(data, np.array([-lam]))[0]
        assert abs(b - np.conj(a)) < 1e-12


class TestSupport:
    def test_p1_support_brackets_unit_circle(self):
        r0, r1 = profile("P1").support()
        assert r0 < 1.0 < r1
        assert abs(r0 * r1 - 1.0) < 1e-9

    def test_p1_envelope_outside(self):
        data = profile("P1")
        r0, r1 = data.support(tol=1e-14)
        assert abs(data.b(np.array([1.1 * r1 + 0j]))[0]) < 1e-13 * abs(data.b(1.0 + 0j))


class TestModesAndCSV:
    def test_p1_modes(self):
        data = profile("P1")
        got = angular_modes(data.b, 1.3)
        assert set(got) == {-2, 0, 2}

    def test_csv_roundtrip(self, tmp_path):
        src = profile("P1")
        r = np.geomspace(1.0, 5.0, 60)
        th = 2.0 * np.pi * np.arange(48) / 48
        lam = (r[:, None] * np.exp(1j * th[None, :])).ravel()
        vals = src.b(lam)
        path = tmp_path / "b.csv"
        with open(path, "w") as fh:
            for L, v in zip(lam, vals):
                fh.write(f"{L.real},{L.imag},{v.real},{v.imag}\n")
        data = load_sampled(str(path))
        probe = np.array([1.4 * np.exp(0.4j), 2.0 * np.exp(2.0j), 0.6 * np.exp(-1.0j)])
        err = np.max(np.abs(data.b(probe) - src.b(probe)))
        assert err < 5e-3 * abs(src.b(1.0 + 0j))
        assert sym_defect(data, probe) < 1e-10

    def test_csv_rejects_ragged(self, tmp_path):
        path = tmp_path / "bad.csv"
        with open(path, "w") as fh:
            fh.write("1.0,0.0,1.0,0.0\n2.0,0.0,0.5,0.0\n2.0,1.0,0.2,0.0\n")
        with pytest.raises(ConfigurationError):
            load_sampled(str(path))
