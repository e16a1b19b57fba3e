"""Acceptance gate: one criterion per test, one printed PASS/FAIL line each.

Reference values marked "frozen" were produced by the independent midpoint
oracles in nvlab.oracles (deliberately different quadrature family) and are
kept literal here so regressions show up as value drift, not just as broken
properties.
"""

import numpy as np
import pytest

from nvlab.asymptotics import gelfand_leray_integrals, optimality_check
from nvlab.dbar import reconstruct_v, reconstruction_grid
from nvlab.linearized import decay_fit, sup_series
from nvlab.phase import Case, boundary_curve, phase_d1, phase_value, stationary_points
from nvlab.quadrature import GridSpec, build_grid, cauchy_transform
from nvlab.scattering import evolve, profile

P1 = profile("P1")
ZERO = profile("P1", theta=0.0)

# frozen oracle/regression references
I_2_M18 = 0.078792204781105726       # I(2, -18, P1); midpoint oracle gap 6e-8
I_16_M18 = 0.021866917845598223      # I(16, -18, P1) regression value
C_P1 = 0.19746210333770403           # sharp constant for P1 (real part; Im = 0)
J_LEVEL = -0.428195                  # J^+ = J^- left-half-plane level integrals


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"{name}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"{name}: {detail}"


def test_A1_phase_algebra():
    rng = np.random.default_rng(42)
    n = 10_000
    u = (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)) * 40.0
    zeta = (rng.uniform(0.1, 5.0, n)
            * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n)))
    S = phase_value(u, zeta)
    re_ok = np.max(np.abs(S.real) / (1.0 + np.abs(S))) < 1e-12

    worst_fac = 0.0
    worst_prod = 0.0
    for uu in u[:200]:
        sp = stationary_points(uu)
        x1, x2, x3 = sp.xi_roots
        worst_prod = max(worst_prod, abs(x1 * x2 * x3 - 1.0))
        zz = zeta[:50]
        lhs = phase_d1(uu, zz)
        rhs = 3.0 / zz ** 4 * (zz ** 2 - x1) * (zz ** 2 - x2) * (zz ** 2 - x3)
        worst_fac = max(worst_fac, float(np.max(
            np.abs(lhs - rhs) / (1.0 + np.abs(lhs)))))
    _report("A1", re_ok and worst_fac < 1e-8 and worst_prod < 1e-9,
            f"|Re S| ok={re_ok}, factorization err={worst_fac:.2e}, "
            f"root product err={worst_prod:.2e}")


def test_A2_classification():
    ok = True
    notes = []
    for k in range(3):
        u = -18.0 * np.exp(2j * np.pi * k / 3.0)
        sp = stationary_points(u)
        want = np.exp(-1j * np.pi * k / 3.0)
        hit = min(abs(p - want) for p in sp.zeta_points)
        hit2 = min(abs(p + want) for p in sp.zeta_points)
        good = sp.case == Case.TripleDegenerate and max(hit, hit2) < 1e-4
        ok &= good
        notes.append(f"cusp{k}:{good}")
    for j in range(36):
        phi = 2.0 * np.pi * (j + 0.5) / 36.0
        sp = stationary_points(boundary_curve(phi))
        roots = sorted(sp.xi_roots, key=lambda x: -abs(x - np.exp(-2j * phi)))
        good = (sp.case == Case.BoundaryDegenerate
                and abs(roots[0] - np.exp(1j * phi)) < 1e-6
                and abs(roots[1] - np.exp(1j * phi)) < 1e-6
                and abs(roots[2] - np.exp(-2j * phi)) < 1e-6)
        ok &= good
    sp0 = stationary_points(0.0)
    cube = sorted(np.angle(sp0.xi_roots) % (2 * np.pi))
    good0 = (sp0.case == Case.InteriorNondegenerate
             and np.allclose(cube, [0.0, 2 * np.pi / 3, 4 * np.pi / 3],
                             atol=1e-9))
    ok &= good0
    _report("A2", ok, f"{', '.join(notes)}, 36 boundary samples, "
            f"u=0 cube roots={good0}")


def test_A3_scattering_dynamics():
    rng = np.random.default_rng(3)
    lam = (rng.uniform(0.2, 4.0, 1000)
           * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, 1000)))
    t = 5.5
    bt = evolve(P1, t, lam)
    mod = np.max(np.abs(np.abs(bt) - np.abs(P1.b(lam))))
    circ = np.max(np.abs(evolve(P1, t, lam / np.abs(lam))
                         - P1.b(lam / np.abs(lam))))
    sym1 = np.max(np.abs(evolve(P1, t, -1.0 / np.conj(lam)) - bt))
    sym2 = np.max(np.abs(evolve(P1, t, 1.0 / np.conj(lam)) - np.conj(bt)))
    worst = max(mod, circ, sym1, sym2)
    _report("A3", worst < 1e-12,
            f"modulus={mod:.2e}, circle={circ:.2e}, "
            f"symmetries={max(sym1, sym2):.2e}")


@pytest.mark.slow
def test_A4_linearized_decay():
    ts = [8.0, 16.0, 32.0, 64.0, 128.0]
    series = sup_series(P1, ts)
    samples = [(t, sup) for t, _, sup in series]
    fit = decay_fit(samples)
    plain_ok = -0.85 <= fit.exponent <= -0.65
    # On a 5-point dyadic series the two log-corrected regressors are nearly
    # collinear, so the identifiable quantity of the with_log fit is the local
    # slope e + c · d log ln(3+t) / d log(1+t), evaluated at the geometric
    # midpoint t = 32; the raw (e, c) coordinates individually are not.
    logfit = decay_fit(samples, with_log=True)
    t_mid = 32.0
    dx = (1.0 + t_mid) / ((3.0 + t_mid) * np.log(3.0 + t_mid))
    slope = logfit.exponent + logfit.log_coefficient * dx
    log_ok = -0.85 <= slope <= -0.65
    _report("A4", plain_ok and log_ok,
            f"sup exponent = {fit.exponent:.4f} in [-0.85, -0.65], "
            f"log-corrected local slope = {slope:.4f} in [-0.85, -0.65], "
            f"sups = {[f'{s:.3e}' for _, _, s in series]}")


@pytest.mark.slow
def test_A5_optimality_constant():
    rows = optimality_check(P1, [16.0, 32.0, 64.0, 128.0])
    gaps = [r.rel_gap for r in rows]
    C = rows[0].C
    i16 = rows[0].scaled_I / 16.0 ** 0.75
    frozen_ok = (abs(i16 - I_16_M18) < 1e-9
                 and abs(C - C_P1) < 1e-9)
    ok = (all(b < a for a, b in zip(gaps, gaps[1:]))
          and gaps[-1] < 0.15 and abs(C) > 0.01 and frozen_ok)
    _report("A5", ok, f"gaps={[f'{g:.3f}' for g in gaps]} decreasing, "
            f"final={gaps[-1]:.3f} < 0.15, C={C.real:.6f}, frozen refs ok={frozen_ok}")


def test_A6_level_set_integrals():
    left = gelfand_leray_integrals("left")
    right = gelfand_leray_integrals("right")
    anti = max(abs(left.J_plus + right.J_plus),
               abs(left.J_minus + right.J_minus))
    ok = (left.J_plus < 0 and left.J_minus < 0
          and anti < 1e-6 * abs(left.J_plus)
          and abs(left.J_plus - J_LEVEL) < 1e-5)
    _report("A6", ok, f"J+={left.J_plus:.6f} J-={left.J_minus:.6f} < 0, "
            f"antisymmetry={anti:.2e}")


@pytest.mark.slow
def test_A7_nonlinear_reconstruction():
    zero = reconstruct_v(ZERO, -72.0, 4.0, depth=2)
    zero_ok = zero.v == 0.0

    samples = [(-72.0, 4.0), (72.0, 4.0), (0.0, 6.0), (-144.0, 8.0),
               (-288.0, 16.0)]
    imag_ratio = 0.0
    for z, t in samples:
        res = reconstruct_v(P1, z, t, depth=2)
        imag_ratio = max(imag_ratio, abs(res.v.imag) / abs(res.v))
    imag_ok = imag_ratio < 1e-3

    grid = reconstruction_grid(P1, -288.0, 16.0)
    v_lin = -2.0 * reconstruct_v(P1, -288.0, 16.0, grid=grid, depth=2,
                                 theta=1.0).beta1
    errs = [abs(reconstruct_v(P1, -288.0, 16.0, grid=grid, depth=2,
                              theta=th).v - th * v_lin)
            for th in (1e-2, 1e-3)]
    ratio = errs[0] / errs[1]
    ratio_ok = 50.0 <= ratio <= 200.0

    v2 = reconstruct_v(P1, -288.0, 16.0, grid=grid, depth=2).v
    v3 = reconstruct_v(P1, -288.0, 16.0, grid=grid, depth=3).v
    depth_ok = abs(v3 - v2) < 1e-3 * abs(v3)

    ok = zero_ok and imag_ok and ratio_ok and depth_ok
    _report("A7", ok, f"zero data exact={zero_ok}, max |Im v|/|v|="
            f"{imag_ratio:.2e} < 1e-3, amplitude-decade error ratio="
            f"{ratio:.1f} in [50,200], depth 2 vs 3 rel diff="
            f"{abs(v3 - v2) / abs(v3):.2e} < 1e-3")


@pytest.mark.slow
def test_A8_full_solution_decay():
    ts = [8.0, 16.0, 32.0, 64.0, 128.0]
    samples = []
    scaled = []
    for t in ts:
        v = reconstruct_v(P1, -18.0 * t, t, depth=2).v
        samples.append((t, abs(v)))
        scaled.append(t ** 0.75 * abs(v))
    fit = decay_fit(samples, with_log=False)
    ok = fit.exponent <= -0.65 and min(scaled) > 0.05
    _report("A8", ok, f"|v(-18t,t)| exponent = {fit.exponent:.4f} <= -0.65, "
            f"t^0.75|v| = {[f'{s:.4f}' for s in scaled]} bounded away from 0")


@pytest.mark.slow
def test_A9_cauchy_transform_round_trip():
    g = lambda z: np.exp(-2.0 * np.abs(z - 1.2) ** 2)
    rng = np.random.default_rng(7)
    pts = 1.2 + 0.45 * (rng.random(12) - 0.5) + 0.45j * (rng.random(12) - 0.5)
    h = 1e-5
    results = []
    for (nr, nt), tol in (((64, 128), 1e-2), ((128, 256), 3e-3)):
        grid = build_grid(GridSpec(r_min=0.05, r_max=6.0,
                                   radial_panels=nr, angular_panels=nt))
        worst = 0.0
        for lam in pts:
            fx = (cauchy_transform(g, grid, lam + h)
                  - cauchy_transform(g, grid, lam - h)) / (2 * h)
            fy = (cauchy_transform(g, grid, lam + 1j * h)
                  - cauchy_transform(g, grid, lam - 1j * h)) / (2 * h)
            rec = 0.5 * (fx + 1j * fy)
            worst = max(worst, abs(rec - g(np.array([lam]))[0]))
        results.append((worst, tol))
    ok = all(w < tol for w, tol in results)
    _report("A9", ok, "residuals " + ", ".join(
        f"{w:.2e} < {tol:g}" for w, tol in results))
