import numpy as np
import pytest

from nvlab.oracles import finite_difference, midpoint_integrate, refine_until


class TestRefineUntil:
    def test_annulus_area(self):
        res = refine_until(lambda z: np.ones_like(z), 0.5, 2.0, rel_tol=1e-10)
        area = np.pi * (4.0 - 0.25)
        assert res.converged
        assert abs(res.value - area) < 1e-10 * area

    def test_divergent_budget_report(self):
        res = refine_until(lambda z: 1.0 / np.abs(z) ** 2, 1e-12, 1.0,
                           rel_tol=1e-8, max_nodes=200_000)
        assert not res.converged
        assert res.achieved_tol > 1e-8

    def test_rel_tol_floor(self):
        with pytest.raises(ValueError):
            refine_until(lambda z: np.ones_like(z), 0.5, 2.0, rel_tol=1e-13)


class TestMidpoint:
    def test_gaussian(self):
        val = midpoint_integrate(lambda z: np.exp(-np.abs(z) ** 2), 1e-4, 8.0,
                                 2000, 64)
        assert abs(val - np.pi) < 1e-5


class TestFiniteDifference:
    def test_square(self):
        d = finite_difference(lambda z: z * z, 1.0, h=1e-4)
        assert abs(d - 2.0) < 1e-8

    def test_direction(self):
        d = finite_difference(lambda z: z * z, 1.0, direction=1j, h=1e-4)
        assert abs(d - 2j) < 1e-8

    def test_h_range(self):
        with pytest.raises(ValueError):
            finite_difference(lambda z: z, 0.0, h=1e-8)
