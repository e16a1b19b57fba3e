"""Linearized oscillatory integrals I(t,u), J(t,u) and decay-rate fits.

    I(t,u) = ∬ f(ζ) · exp(t·S(u,ζ)) dA,
    J(t,u) = ∬ 3(ζ/ζ̄) f(ζ) · exp(t·S(u,ζ)) dA,

with f from `scattering.f_weight` and S the purely imaginary phase of module
`phase`.  In polar coordinates the exponent is i·Φ with

    Φ(ρ,θ) = (ρ − 1/ρ)|z| sin(θ − arg z) + 2t(ρ³ − 1/ρ³) sin 3θ,   z = t·u,

which is what the ring-grid kernels consume; the factor 3ζ/ζ̄ = 3e^{2iθ} of J
is a shift of the angular modes by +2.  Two evaluation paths exist:

* grid = None (default): frequency-adapted `RingGrid`, exact angular mode
  handling, scales to t ~ 10³;
* an explicit `AnnularGrid`: direct node summation, with an automatic
  refine-until-resolved loop driven by the per-cell phase-variation
  estimator (stationary points of S and the unit circle get refinement
  zones).  Intended for cross-checks at small t.

`sup_scan` maximizes |I| over a u-grid; `decay_fit` regresses log-magnitudes
against log(1+t), optionally with a log ln(3+t) regressor, to measure decay
exponents; the reference behavior is t^{-3/4} up to a possible log factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceededError, ConfigurationError
from .phase import boundary_curve, phase_value, stationary_points
from .quadrature import (
    AnnularGrid,
    GridSpec,
    RingGrid,
    build_grid,
    build_ring_grid,
    phase_variation,
)
from .scattering import ScatteringData

__all__ = [
    "DecayFit",
    "integral_I",
    "integral_J",
    "ring_integral",
    "sup_scan",
    "decay_fit",
    "default_u_grid",
]


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    with_log_correction: bool
    intercept: float
    log_coefficient: float
    max_residual: float
    t_range: tuple[float, float]
    n_points: int


def _f_radial_factor(rho: np.ndarray) -> np.ndarray:
    return np.pi * np.abs(1.0 - rho ** 2) / (2.0 * rho ** 2)


def ring_integral(data: ScatteringData, t: float, u: complex,
                  mode_shift: int = 0, prefactor: float = 1.0,
                  rel_support_tol: float = 1e-12, budget: float = 6.0,
                  grid: RingGrid | None = None,
                  max_nodes: int = 20_000_000_000) -> complex:
    """∬ prefactor·e^{i·mode_shift·θ}·f(ζ)·exp(tS(u,ζ)) on a ring grid."""
    z = complex(t) * complex(u)
    if grid is None:
        r0, r1 = data.support(tol=rel_support_tol)
        r0 = max(r0, 1e-3)
        grid = build_ring_grid(z, t, r_min=r0, r_max=r1, budget=budget,
                               max_nodes=max_nodes)
    rho = grid.rho
    a = np.abs(z) * (rho - 1.0 / rho)
    b = 2.0 * t * (rho ** 3 - rho ** -3)
    alpha = float(np.angle(z)) if z != 0 else 0.0
    ctab = np.ascontiguousarray(
        data.mode_table(rho) * (prefactor * _f_radial_factor(rho))[:, None])
    modes = np.asarray(data.modes, dtype=np.int64) + mode_shift
    part = _kernels.ring_osc_partials_paired(grid.ntheta, grid.offsets, a, b,
                                             alpha, modes, ctab)
    return complex(np.sum(part * grid.w_ring * grid.angle_weight()))


def _annular_integral(data: ScatteringData, t: float, u: complex,
                      grid: AnnularGrid, mode_shift: int, prefactor: float,
                      max_nodes: int) -> complex:
    """Direct node summation with refine-until-resolved on the given grid."""
    z = complex(t) * complex(u)
    spec = grid.spec
    # dense node storage: keep annular grids within memory-sane bounds
    max_nodes = min(max_nodes, 100_000_000)
    est = phase_variation(grid, z, t)
    if np.max(est) > 1.5:
        # size the uniform refinement directly from the estimator bounds
        # rather than doubling blindly; stationary points and the unit
        # circle get local subdivision zones on top
        r0, r1 = spec.r_min, spec.r_max
        az, at_ = abs(z), abs(t)
        slope_r = max(az * (1.0 + r ** -2) + 6.0 * at_ * (r ** 2 + r ** -4)
                      for r in (r0, r1))
        slope_t = max(az * (r + 1.0 / r) + 6.0 * at_ * (r ** 3 + r ** -3)
                      for r in (r0, r1))
        nr = max(spec.radial_panels, int(np.ceil((r1 - r0) * slope_r / 0.7)))
        nt = max(spec.angular_panels, int(np.ceil(2.0 * np.pi * slope_t / 0.7)))
        if nr * nt * spec.gauss_order ** 2 > max_nodes:
            raise BudgetExceededError(
                "oscillation check not satisfiable within the node budget",
                worst_cell=complex(r1))
        zones = [(zc, 0.15, 1) for zc in stationary_points(u).zeta_points]
        zones += [(complex(np.exp(1j * ang)), 0.2, 1)
                  for ang in np.linspace(0.0, 2.0 * np.pi, 12, endpoint=False)]
        spec = GridSpec(r_min=r0, r_max=r1, radial_panels=nr,
                        angular_panels=nt, gauss_order=spec.gauss_order,
                        refinement_zones=tuple(zones))
        grid = build_grid(spec)
        est = phase_variation(grid, z, t)
        if np.max(est) > 1.5:
            k = int(np.argmax(est))
            c0, c1, a0, a1 = grid.cell_bounds[k]
            raise BudgetExceededError(
                "oscillation check failed after refinement",
                worst_cell=complex(0.5 * (c0 + c1) * np.exp(0.5j * (a0 + a1))))
    acc = 0.0j
    step = 4_000_000
    for lo in range(0, grid.points.shape[0], step):
        pts = grid.points[lo:lo + step]
        vals = data.b(pts) * _f_radial_factor(np.abs(pts)) * prefactor
        if mode_shift:
            vals = vals * np.exp(1j * mode_shift * np.angle(pts))
        vals = vals * np.exp(t * phase_value(u, pts))
        acc += np.sum(grid.weights[lo:lo + step] * vals)
    return complex(acc)


def integral_I(data: ScatteringData, t: float, u: complex,
               grid: AnnularGrid | None = None,
               rel_support_tol: float = 1e-12, budget: float = 6.0,
               max_nodes: int = 20_000_000_000) -> complex:
    """I(t,u) = ∬ f·exp(tS); real to roundoff for real symmetric data."""
    if grid is not None:
        return _annular_integral(data, t, u, grid, 0, 1.0, max_nodes)
    return ring_integral(data, t, u, 0, 1.0, rel_support_tol=rel_support_tol,
                         budget=budget, max_nodes=max_nodes)


def integral_J(data: ScatteringData, t: float, u: complex,
               grid: AnnularGrid | None = None,
               max_nodes: int = 20_000_000_000) -> complex:
    """J(t,u) = ∬ 3(ζ/ζ̄)·f·exp(tS)."""
    if grid is not None:
        return _annular_integral(data, t, u, grid, 2, 3.0, max_nodes)
    return ring_integral(data, t, u, 2, 3.0, max_nodes=max_nodes)


def default_u_grid(r_max: float = 30.0) -> np.ndarray:
    """Scan grid: polar bulk + the three cusps + the degenerate curve."""
    rads = np.linspace(1.5, r_max, 24)
    angs = 2.0 * np.pi * np.arange(20) / 20.0
    bulk = (rads[:, None] * np.exp(1j * angs[None, :])).ravel()
    cusps = -18.0 * np.exp(2j * np.pi * np.arange(3) / 3.0)
    curve = np.array([boundary_curve(p)
                      for p in np.linspace(0.0, 2.0 * np.pi, 36, endpoint=False)])
    return np.concatenate([bulk, cusps, curve])


def sup_scan(data: ScatteringData, t: float, u_grid: Sequence[complex],
             prune_from: Sequence[complex] | None = None,
             prune_factor: float = 8.0) -> tuple[complex, float]:
    """(maximizing u, max |I(t,u)|) over the grid.

    With `prune_from` (typically the near-maximizers found at a smaller t)
    only grid points within `prune_factor` of it matter and the rest of the
    grid is skipped; the maximizer of the decaying sup moves continuously,
    so this is a safe large-t accelerator.
    """
    u_grid = np.asarray(u_grid, dtype=np.complex128)
    if u_grid.size == 0:
        raise ConfigurationError("empty u grid")
    if prune_from is not None:
        keep = np.zeros(u_grid.size, dtype=bool)
        anchors = np.asarray(prune_from, dtype=np.complex128)
        for a in anchors:
            keep |= np.abs(u_grid - a) < 1e-9
        u_grid = u_grid[keep] if keep.any() else u_grid
    best_u, best = u_grid[0], -1.0
    for u in u_grid:
        v = abs(integral_I(data, t, complex(u), rel_support_tol=1e-9, budget=8.0))
        if v > best:
            best_u, best = u, v
    return complex(best_u), float(best)


def sup_series(data: ScatteringData, ts: Sequence[float],
               u_grid: Sequence[complex] | None = None,
               prune_factor: float = 8.0) -> list[tuple[float, complex, float]]:
    """[(t, maximizer, sup |I|)] over increasing t with candidate pruning.

    The full grid is scanned at the smallest t; afterwards only points whose
    |I| stayed within `prune_factor` of the running maximum are kept.  The
    maximizer of the sup moves continuously with t, so the pruned set keeps
    covering it while the per-t cost drops by an order of magnitude.
    """
    ts = sorted(float(t) for t in ts)
    cand = np.asarray(default_u_grid() if u_grid is None else u_grid,
                      dtype=np.complex128)
    out = []
    for t in ts:
        vals = np.array([abs(integral_I(data, t, complex(u),
                                        rel_support_tol=1e-9, budget=8.0))
                         for u in cand])
        k = int(np.argmax(vals))
        out.append((t, complex(cand[k]), float(vals[k])))
        cand = cand[vals >= vals[k] / prune_factor]
    return out


def top_candidates(data: ScatteringData, t: float, u_grid: Sequence[complex],
                   factor: float = 8.0) -> list[complex]:
    """Grid points whose |I| is within `factor` of the maximum at this t."""
    u_grid = np.asarray(u_grid, dtype=np.complex128)
    vals = np.array([abs(integral_I(data, t, complex(u),
                                    rel_support_tol=1e-9, budget=8.0))
                     for u in u_grid])
    return [complex(u) for u, v in zip(u_grid, vals) if v >= vals.max() / factor]


def decay_fit(samples: Sequence[tuple[float, float]],
              with_log: bool = False) -> DecayFit:
    """Least squares of log(value) on log(1+t) (+ optional log ln(3+t)).

    Exact for the model family value = A·(1+t)^e·ln(3+t)^c; the exponent is
    the quantity of interest, the max log-residual is always reported.
    """
    if len(samples) < 5:
        raise ConfigurationError("need at least 5 samples for a decay fit")
    ts = np.array([s[0] for s in samples], dtype=float)
    vs = np.array([s[1] for s in samples], dtype=float)
    if np.any(ts < 1.0):
        raise ConfigurationError("decay fits require t >= 1")
    if np.any(vs <= 0.0):
        raise ConfigurationError("decay fits require positive values")
    y = np.log(vs)
    cols = [np.ones_like(ts), np.log1p(ts)]
    if with_log:
        cols.append(np.log(np.log(3.0 + ts)))
    A = np.stack(cols, axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = np.max(np.abs(A @ coef - y))
    return DecayFit(exponent=float(coef[1]), with_log_correction=with_log,
                    intercept=float(coef[0]),
                    log_coefficient=float(coef[2]) if with_log else 0.0,
                    max_residual=float(resid),
                    t_range=(float(ts.min()), float(ts.max())),
                    n_points=len(samples))
