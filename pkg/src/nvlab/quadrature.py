"""Annular grids over the complex plane and 2D integration primitives.

Two grid families live here:

* :class:`AnnularGrid` — a general-purpose tensor Gauss–Legendre grid on an
  annulus with optional local refinement zones.  It backs :func:`integrate`
  and the singular-aware :func:`cauchy_transform`, and is the reference path
  used by the inverse-property tests.

* :class:`RingGrid` — a frequency-aware grid for highly oscillatory
  integrands of the form  h(ρ,θ)·exp(i[a(ρ)sin(θ−α) + b(ρ)sin3θ]):
  Gauss–Legendre panels in ρ sized by the radial phase budget, and per-ring
  uniform angles sized by the angular bandwidth (trapezoid rule, spectrally
  accurate for periodic smooth integrands).  Ring node counts are kept even
  so that ζ → −ζ node pairing is exact.

All integrals are over Lebesgue measure d Re ζ d Im ζ = ρ dρ dθ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.fft import next_fast_len

from .errors import BudgetExceededError, ConfigurationError, NumericalDomainError

__all__ = [
    "ComplexSample",
    "GridSpec",
    "AnnularGrid",
    "RingGrid",
    "build_grid",
    "build_ring_grid",
    "integrate",
    "cauchy_transform",
    "phase_variation",
]


@dataclass(frozen=True)
class ComplexSample:
    """A quadrature node: a point in the complex plane with its weight."""

    point: complex
    weight: float


@dataclass(frozen=True)
class GridSpec:
    r_min: float = 0.05
    r_max: float = 6.0
    radial_panels: int = 16
    angular_panels: int = 32
    gauss_order: int = 4
    # each zone: (center, radius, depth) — cells meeting the disk are
    # subdivided 2x2 `depth` times
    refinement_zones: Sequence[tuple[complex, float, int]] = ()

    def validate(self) -> None:
        if not (0.0 < self.r_min < self.r_max):
            raise ConfigurationError(
                f"need 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if self.radial_panels < 4 or self.angular_panels < 4:
            raise ConfigurationError("panel counts must be >= 4")
        if self.gauss_order < 1:
            raise ConfigurationError("gauss order must be >= 1")


@dataclass(frozen=True)
class AnnularGrid:
    """Tensor Gauss–Legendre grid on {r_min <= |ζ| <= r_max}.

    Nodes are stored flat, cell-major; ``cell_bounds[k] = (r_lo, r_hi,
    th_lo, th_hi)`` and nodes of cell k occupy ``[k*q, (k+1)*q)`` with
    q = gauss_order².
    """

    spec: GridSpec
    points: np.ndarray          # complex128[n]
    weights: np.ndarray         # float64[n]
    cell_bounds: np.ndarray     # float64[ncell, 4]

    @property
    def nodes(self) -> list[ComplexSample]:
        return [ComplexSample(complex(p), float(w))
                for p, w in zip(self.points, self.weights)]

    @property
    def nodes_per_cell(self) -> int:
        return self.spec.gauss_order ** 2

    def locate_cell(self, lam: complex) -> int:
        """Index of the cell containing lam, or -1 if outside the annulus."""
        r = abs(lam)
        th = np.angle(lam) % (2.0 * np.pi)
        b = self.cell_bounds
        hit = (b[:, 0] <= r) & (r <= b[:, 1]) & (b[:, 2] <= th) & (th <= b[:, 3])
        idx = np.nonzero(hit)[0]
        return int(idx[0]) if idx.size else -1


def _subdivide(cell, zones, depth_left):
    """Recursive 2x2 split of polar cells meeting a refinement disk."""
    r0, r1, t0, t1 = cell
    for center, radius, depth in zones:
        if depth <= depth_left:
            continue
        # distance from the disk center to the polar box, conservatively via
        # the box's bounding disk
        rc = 0.5 * (r0 + r1) * np.exp(0.5j * (t0 + t1))
        half_diag = abs(0.5 * (r1 * np.exp(1j * t1) - r0 * np.exp(1j * t0)))
        if abs(complex(center) - rc) <= radius + half_diag:
            rm, tm = 0.5 * (r0 + r1), 0.5 * (t0 + t1)
            out = []
            for sub in ((r0, rm, t0, tm), (r0, rm, tm, t1),
                        (rm, r1, t0, tm), (rm, r1, tm, t1)):
                out.extend(_subdivide(sub, zones, depth_left + 1))
            return out
    return [cell]


def build_grid(spec: GridSpec) -> AnnularGrid:
    spec.validate()
    base = []
    r_edges = np.linspace(spec.r_min, spec.r_max, spec.radial_panels + 1)
    t_edges = np.linspace(0.0, 2.0 * np.pi, spec.angular_panels + 1)
    for i in range(spec.radial_panels):
        for j in range(spec.angular_panels):
            base.append((r_edges[i], r_edges[i + 1], t_edges[j], t_edges[j + 1]))
    if spec.refinement_zones:
        # vectorized preselection: only cells whose bounding disk meets a
        # zone enter the (recursive) subdivision path
        ba = np.asarray(base)
        rc = 0.5 * (ba[:, 0] + ba[:, 1]) * np.exp(0.5j * (ba[:, 2] + ba[:, 3]))
        hd = np.abs(0.5 * (ba[:, 1] * np.exp(1j * ba[:, 3])
                           - ba[:, 0] * np.exp(1j * ba[:, 2])))
        hit = np.zeros(len(base), dtype=bool)
        for center, radius, _ in spec.refinement_zones:
            hit |= np.abs(complex(center) - rc) <= radius + hd
        cells = [c for c, h in zip(base, hit) if not h]
        for c, h in zip(base, hit):
            if h:
                cells.extend(_subdivide(c, spec.refinement_zones, 0))
    else:
        cells = base

    x, w = np.polynomial.legendre.leggauss(spec.gauss_order)
    x = 0.5 * (x + 1.0)           # map to [0, 1]
    w = 0.5 * w
    bounds = np.asarray(cells)
    r0, r1, t0, t1 = (bounds[:, i] for i in range(4))
    rr = r0[:, None] + (r1 - r0)[:, None] * x[None, :]       # (ncell, q)
    wr = (r1 - r0)[:, None] * w[None, :]
    tt = t0[:, None] + (t1 - t0)[:, None] * x[None, :]
    wt = (t1 - t0)[:, None] * w[None, :]
    R = rr[:, :, None]
    pts = (R * np.exp(1j * tt[:, None, :])).reshape(-1)
    wts = (wr[:, :, None] * wt[:, None, :] * R).reshape(-1)
    pts.setflags(write=False)
    wts.setflags(write=False)
    bounds.setflags(write=False)
    return AnnularGrid(spec=spec, points=pts, weights=wts, cell_bounds=bounds)


def _eval_on(g: Callable, points: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(g(points), dtype=np.complex128)
        if vals.shape != points.shape:
            raise TypeError
    except Exception:
        vals = np.array([g(complex(p)) for p in points], dtype=np.complex128)
    return vals


def integrate(g: Callable, grid: AnnularGrid) -> complex:
    """Σ wᵢ g(ζᵢ) ≈ ∬ g dA; g may be vectorized over a complex array."""
    vals = _eval_on(g, grid.points)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.nonzero(bad)[0][0])
        raise NumericalDomainError(
            f"non-finite integrand value {vals[i]}", point=complex(grid.points[i]))
    return complex(np.sum(grid.weights * vals))


def cauchy_transform(g: Callable, grid: AnnularGrid, lam: complex) -> complex:
    """−(1/π) ∬ g(ζ)/(ζ−λ) dA with a singular-cell correction.

    The cell containing λ is dropped from the node sum; its contribution is
    rebuilt on a 16×16 midpoint subgrid of the cell, with the subcell owning
    λ handled analytically by the bounding-disk rule

        −(1/π) ∬_disk g(c)/(ζ−λ) dA = g(c) · conj(λ − c),

    which is exact for constant density and independent of the disk radius.
    The residual of the discrete ∂̄ ∘ ∂̄⁻¹ identity therefore scales with the
    subcell size, not the cell size.
    """
    vals = _eval_on(g, grid.points)
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.nonzero(bad)[0][0])
        raise NumericalDomainError(
            f"non-finite density value {vals[i]}", point=complex(grid.points[i]))
    lam = complex(lam)
    mask = np.ones(grid.points.shape[0], dtype=bool)
    corr = 0.0j
    k = grid.locate_cell(lam)
    if k >= 0:
        q = grid.nodes_per_cell
        mask[k * q:(k + 1) * q] = False
        r0, r1, t0, t1 = grid.cell_bounds[k]
        ns = 16
        rs = r0 + (r1 - r0) * (np.arange(ns) + 0.5) / ns
        ts = t0 + (t1 - t0) * (np.arange(ns) + 0.5) / ns
        R, T = np.meshgrid(rs, ts, indexing="ij")
        Zs = R * np.exp(1j * T)
        Ws = (r1 - r0) / ns * (t1 - t0) / ns * R
        gs = _eval_on(g, Zs.ravel()).reshape(ns, ns)
        rl = abs(lam)
        tl = np.angle(lam) % (2.0 * np.pi)
        i = min(ns - 1, max(0, int((rl - r0) / (r1 - r0) * ns)))
        j = min(ns - 1, max(0, int((tl - t0) / (t1 - t0) * ns)))
        sub = np.ones((ns, ns), dtype=bool)
        sub[i, j] = False
        corr = complex(-np.sum(Ws[sub] * gs[sub] / (Zs[sub] - lam)) / np.pi
                       + gs[i, j] * np.conj(lam - Zs[i, j]))
    acc = np.sum(grid.weights[mask] * vals[mask] / (grid.points[mask] - lam))
    return complex(-acc / np.pi + corr)


def phase_variation(grid: AnnularGrid, z: complex, t: float) -> np.ndarray:
    """Per-cell estimate of the oscillatory-phase variation.

    The phase is Φ(ρ,θ) = (ρ−1/ρ)|z| sin(θ−arg z) + 2t(ρ³−1/ρ³) sin 3θ.
    The estimate is |∂Φ/∂ρ|·Δρ + |∂Φ/∂θ|·Δθ at each cell center, bounded
    with the angular factors replaced by 1.  Drivers should refine any cell
    whose estimate exceeds ~1.5.
    """
    b = grid.cell_bounds
    rho = 0.5 * (b[:, 0] + b[:, 1])
    dr = b[:, 1] - b[:, 0]
    dt = b[:, 3] - b[:, 2]
    az = abs(z)
    dphi_dr = az * (1.0 + rho ** -2) + 6.0 * abs(t) * (rho ** 2 + rho ** -4)
    dphi_dt = az * (rho + 1.0 / rho) + 6.0 * abs(t) * (rho ** 3 + rho ** -3)
    return dphi_dr * dr + dphi_dt * dt


# ---------------------------------------------------------------------------
# oscillation-adapted ring grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingGrid:
    """Rings of uniform angles with Gauss–Legendre radial panels.

    ``rho[i]`` is the ring radius, ``w_ring[i]`` the radial weight already
    multiplied by ρ (so a full integral is Σᵢ w_ring[i]·(2π/nθᵢ)·Σⱼ g(ζᵢⱼ)),
    ``ntheta[i]`` the (even) number of angles θⱼ = 2πj/nθᵢ, and
    ``offsets[i]`` the flat index of the ring's first node.
    """

    r_min: float
    r_max: float
    rho: np.ndarray       # float64[nr]
    w_ring: np.ndarray    # float64[nr]
    ntheta: np.ndarray    # int64[nr]
    offsets: np.ndarray   # int64[nr]
    size: int

    def angle_weight(self) -> np.ndarray:
        return 2.0 * np.pi / self.ntheta

    def points(self) -> np.ndarray:
        """Materialize all nodes (flat, ring-major); intended for small grids."""
        out = np.empty(self.size, dtype=np.complex128)
        for i in range(self.rho.shape[0]):
            n = int(self.ntheta[i])
            th = 2.0 * np.pi * np.arange(n) / n
            out[self.offsets[i]:self.offsets[i] + n] = self.rho[i] * np.exp(1j * th)
        return out


_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)


def _radial_edges(z: complex, t: float, r_min: float, r_max: float,
                  budget: float) -> np.ndarray:
    """March panel edges so each Gauss panel sees <= `budget` radians of
    radial phase change (with a hard cap on panel width near ρ=1)."""
    az, at = abs(z), abs(t)

    def dphi(r):
        return az * (1.0 + r ** -2) + 6.0 * at * (r ** 2 + r ** -4)

    edges = [r_min]
    r = r_min
    while r < r_max:
        slope = max(dphi(r), dphi(min(r_max, r + 1e-3)))
        h = min(0.08, budget / max(slope, 1e-30), r_max - r)
        h = max(h, 1e-6)
        nxt = r + h
        if r < 1.0 < nxt:          # break panels at the unit circle: the
            nxt = 1.0              # scattering weights may kink there
        edges.append(nxt)
        r = nxt
    edges[-1] = r_max
    return np.asarray(edges)


def build_ring_grid(z: complex, t: float, r_min: float = 0.05,
                    r_max: float = 6.0, extra_modes: int = 8,
                    budget: float = 6.0, max_nodes: int = 20_000_000_000,
                    min_ntheta: int = 16, fft_friendly: bool = False) -> RingGrid:
    """Grid resolving exp(iΦ) for the given (z, t), Φ as in phase_variation.

    Ring angle counts follow the angular bandwidth |a(ρ)| + 3|b(ρ)| of the
    phase factor (plus `extra_modes` for the smooth prefactor), rounded up
    to an even FFT-friendly length.  Raises a budget error rather than
    silently under-resolving if the plan exceeds `max_nodes`.
    """
    if not (0.0 < r_min < 1.0 < r_max):
        raise ConfigurationError(f"need 0 < r_min < 1 < r_max, got [{r_min}, {r_max}]")
    edges = _radial_edges(z, t, r_min, r_max, budget)
    npan = edges.shape[0] - 1
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    rho = (mid[:, None] + half[:, None] * _GL8_X[None, :]).ravel()
    w = (half[:, None] * _GL8_W[None, :]).ravel() * rho

    band = (abs(z) * np.abs(rho - 1.0 / rho)
            + 6.0 * abs(t) * np.abs(rho ** 3 - rho ** -3))
    raw = np.maximum(min_ntheta,
                     np.ceil(2.15 * band).astype(np.int64) + 2 * extra_modes)
    if fft_friendly:
        ntheta = np.empty(rho.shape[0], dtype=np.int64)
        for i, n in enumerate(raw):
            n = next_fast_len(int(n))
            while n % 2:
                n = next_fast_len(n + 1)
            ntheta[i] = n
    else:
        ntheta = raw + (raw & 1)          # just keep it even
    total = int(ntheta.sum())
    if total > max_nodes:
        worst = int(np.argmax(ntheta))
        raise BudgetExceededError(
            f"ring grid for z={z}, t={t} needs {total} nodes (> {max_nodes})",
            worst_cell=complex(rho[worst]))
    offsets = np.concatenate(([0], np.cumsum(ntheta)[:-1]))
    for a in (rho, w, ntheta, offsets):
        a.setflags(write=False)
    return RingGrid(r_min=r_min, r_max=r_max, rho=rho, w_ring=w,
                    ntheta=ntheta, offsets=offsets, size=total)
