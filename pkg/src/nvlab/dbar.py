"""Nonlinear reconstruction of the potential from scattering data.

The reconstruction runs through a conjugate-linear integral equation in the
spectral variable λ: the normalized solution field μ(z, λ, t) satisfies

    μ = 1 + ∂̄⁻¹[ R(z, ·, t) · conj(μ) ],

where R = r·exp(tS) couples the static scattering weight r to the oscillatory
phase, and ∂̄⁻¹ is the solid Cauchy transform over the spectral annulus.  Two
operators drive everything here:

    (A f)(λ) = ∂̄⁻¹[ r e^{tS} · conj f ],
    (B f)(λ) = ∂̄⁻¹[ ½(ζ − 1/ζ̄) r e^{tS} · conj f ],

B differing from A by the spatial-derivative factor of the weight.  μ is the
contraction series Σₙ Aⁿ·1; the potential comes from the 1/λ coefficient of
the companion series ν = Σᵢⱼ AⁱBAʲ·1 as v = −2·Σ coefficients, split into the
leading term β₁ (B·1), the first correction α₁ (AB·1), and a remainder q.

Representation.  Every field and density is stored per ring of a `RingGrid`
as a truncated set of angular Fourier modes (|m| ≤ 96 for fields).  The three
angular factors of a density — the scattering modes of b, the conjugated
field modes, and the oscillator exp(iΦ) — are combined by banded convolution
in mode space: the oscillator's spectrum is computed once per (z, t) grid by
per-ring FFT and only its central band is kept (the band is sized so every
retained density mode is assembled exactly from exact inputs).  The Cauchy
transform then acts mode-by-mode through `mode_cauchy_scan`, an O(rings ×
modes) scaled recursion, never touching an O(N²) dense kernel.

The mode truncation of *fields* is the one genuine approximation: products of
operators see a low-pass-filtered version of the highly oscillatory
intermediate fields, so nonlinear coefficients beyond β₁ are smoothed
approximations (β₁ itself is exact to quadrature tolerance, and is validated
against the independent linearized path in the tests).  Amplitude
bookkeeping is exact: every operator application is homogeneous of degree 1
in the data amplitude θ, so `reconstruct_v(..., theta=...)` re-evaluates the
whole series at a different amplitude by pure rescaling of the computed
coefficients — no re-integration, and amplitude-convergence studies are free
of quadrature noise.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from ._kernels import mode_cauchy_scan, ring_density_fill
from .errors import ConfigurationError, DivergenceError
from .quadrature import RingGrid, build_ring_grid
from .scattering import ScatteringData

__all__ = [
    "DEFAULT_MODES",
    "LambdaField",
    "RingDensity",
    "MuExpansion",
    "ReconstructionResult",
    "reconstruction_grid",
    "constant_field",
    "operator_density",
    "apply_A",
    "apply_B",
    "coeff_at_infinity",
    "solve_mu",
    "reconstruct_v",
]

DEFAULT_MODES = 96            # field truncation: modes k with |k| <= this
_DENSITY_BAND = 99            # density modes retained after assembly
_CONTRACTION = 1.1            # required shrink factor between increments
_FILL_CHUNK = 8_000_000       # nodes per oscillator-fill block


# --------------------------------------------------------------------------
# field and density containers


@dataclass
class LambdaField:
    """Angular-mode field on the rings of a `RingGrid`.

    values(λ on ring i) = offset + Σ_k coeff[i, M+k]·exp(ikθ); `offset`
    carries an added constant (the "1" of μ) that is not a Cauchy transform
    and therefore does not decay at infinity.
    """

    grid: RingGrid
    modes: np.ndarray             # int64, -M..M
    coeff: np.ndarray             # complex128 (n_rings, 2M+1)
    offset: complex = 0.0 + 0.0j

    @property
    def max_mode(self) -> int:
        return int(self.modes[-1])

    def _like(self, coeff, offset):
        return LambdaField(grid=self.grid, modes=self.modes, coeff=coeff,
                           offset=offset)

    def __add__(self, other: "LambdaField") -> "LambdaField":
        if other.grid is not self.grid:
            raise ConfigurationError("fields combined across different grids")
        return self._like(self.coeff + other.coeff, self.offset + other.offset)

    def __sub__(self, other: "LambdaField") -> "LambdaField":
        if other.grid is not self.grid:
            raise ConfigurationError("fields combined across different grids")
        return self._like(self.coeff - other.coeff, self.offset - other.offset)

    def __mul__(self, c) -> "LambdaField":
        c = complex(c)
        return self._like(self.coeff * c, self.offset * c)

    __rmul__ = __mul__

    def norm(self) -> float:
        """Weighted L² norm over the annulus (offset folded into mode 0)."""
        M = self.max_mode
        sq = np.abs(self.coeff) ** 2
        sq[:, M] = np.abs(self.coeff[:, M] + self.offset) ** 2
        return float(np.sqrt(2.0 * np.pi * np.sum(self.grid.w_ring * sq.sum(axis=1))))

    def values_on_ring(self, i: int) -> np.ndarray:
        """Node values on ring i (θ_j = 2πj/n)."""
        n = int(self.grid.ntheta[i])
        M = self.max_mode
        spec = np.zeros(n, dtype=np.complex128)
        for k in range(-M, M + 1):
            spec[k % n] += self.coeff[i, M + k]
        out = np.fft.ifft(spec) * n
        out += self.offset
        return out

    def evaluate(self, lam):
        """Field value at arbitrary λ ≠ 0 (scalar or array).

        Between rings the mode coefficients are interpolated linearly in
        log ρ; outside the grid each mode continues with its exact power law
        ((ρ/ρ_edge)^k inward for k ≥ 0, (ρ_edge/ρ)^{-k} outward for k ≤ −1 —
        the only modes a Cauchy transform supported on the annulus can have
        there).
        """
        lam_arr = np.atleast_1d(np.asarray(lam, dtype=np.complex128))
        out = np.empty(lam_arr.shape, dtype=np.complex128)
        M = self.max_mode
        kvals = np.arange(-M, M + 1)
        rho = self.grid.rho
        for q, lv in enumerate(lam_arr.ravel()):
            r = abs(lv)
            ph = cmath.phase(lv)
            if r <= rho[0]:
                c = self.coeff[0] * np.where(
                    kvals >= 0, (r / rho[0]) ** np.maximum(kvals, 0), 0.0)
            elif r >= rho[-1]:
                c = self.coeff[-1] * np.where(
                    kvals < 0, (rho[-1] / r) ** np.maximum(-kvals, 0), 0.0)
            else:
                i = int(np.searchsorted(rho, r))
                lo, hi = rho[i - 1], rho[i]
                s = np.log(r / lo) / np.log(hi / lo)
                c = (1.0 - s) * self.coeff[i - 1] + s * self.coeff[i]
            out.ravel()[q] = self.offset + np.sum(c * np.exp(1j * kvals * ph))
        return out if np.ndim(lam) else complex(out.ravel()[0])


@dataclass(frozen=True)
class RingDensity:
    """Angular-mode density (the integrand handed to the Cauchy transform)."""

    grid: RingGrid
    band: int                     # modes |m| <= band are stored
    coeff: np.ndarray             # complex128 (n_rings, 2*band+1)


@dataclass(frozen=True)
class MuExpansion:
    """Truncated contraction series for μ = 1 + Σₙ Aⁿ·1."""

    field: LambdaField
    increments: tuple[float, ...]     # ‖Aⁿ·1‖ in order
    tail_estimate: float


@dataclass(frozen=True)
class ReconstructionResult:
    """Reconstructed potential value and its series decomposition.

    v = −2(beta1 + alpha1 + remainder_q) holds exactly by construction;
    order_terms[n−1] is the total contribution of the n-operator chains,
    already scaled to the evaluation amplitude `theta`.
    """

    v: complex
    beta1: complex
    alpha1: complex
    remainder_q: complex
    depth: int
    series_tail_estimate: float
    theta: float
    order_terms: tuple[complex, ...]


# --------------------------------------------------------------------------
# per-(data, z, t, grid) workspace


def _spectral_band(data: ScatteringData) -> int:
    bmax = max((abs(int(m)) for m in data.modes), default=0)
    return DEFAULT_MODES + _DENSITY_BAND + 2 * bmax + 12


def reconstruction_grid(data: ScatteringData, z: complex, t: float,
                        support_tol: float = 1e-9, budget: float = 6.0,
                        max_nodes: int = 2_000_000_000) -> RingGrid:
    """Ring grid resolving exp(iΦ) on the data's support annulus, with the
    angular headroom the mode-space density assembly needs."""
    r0, r1 = data.support(support_tol)
    r0 = min(max(r0, 1e-3), 0.9)
    r1 = max(r1, 1.2)
    B = _spectral_band(data)
    return build_ring_grid(z, t, r_min=r0, r_max=r1, extra_modes=B + 16,
                           budget=budget, max_nodes=max_nodes,
                           min_ntheta=2 * B + 64, fft_friendly=True)


class _Workspace:
    """Oscillator spectrum and static per-ring tables for one (data, z, t)."""

    def __init__(self, data: ScatteringData, z: complex, t: float,
                 grid: RingGrid):
        self.data = data
        self.z = complex(z)
        self.t = float(t)
        self.grid = grid
        rho = grid.rho
        self.band = _spectral_band(data)
        if int(grid.ntheta.min()) < 2 * self.band + 1:
            raise ConfigurationError(
                f"grid rings need >= {2 * self.band + 1} angles for this "
                f"data (use reconstruction_grid)")
        self.btab = data.mode_table(rho)                  # (nr, n_data_modes)
        sgn = np.sign(1.0 - rho ** 2)
        self.pref_a = np.pi * sgn / rho                   # shift +1
        self.pref_b = -np.pi * np.abs(1.0 - rho ** 2) / (2.0 * rho ** 2)  # +2
        self.w_rad = grid.w_ring / rho
        self.osc = self._oscillator_modes()

    def _oscillator_modes(self) -> np.ndarray:
        grid, z, t, B = self.grid, self.z, self.t, self.band
        rho = grid.rho
        nr = rho.shape[0]
        a = abs(z) * (rho - 1.0 / rho)
        b3 = 2.0 * t * (rho ** 3 - rho ** -3)
        alpha = cmath.phase(z) if z != 0 else 0.0
        one_mode = np.zeros(1, dtype=np.float64)
        dummy = np.empty(1, dtype=np.complex128)
        osc = np.empty((nr, 2 * B + 1), dtype=np.complex128)
        midx = np.arange(-B, B + 1)
        i0 = 0
        while i0 < nr:
            i1 = i0
            total = 0
            while i1 < nr and (total == 0 or total + grid.ntheta[i1] <= _FILL_CHUNK):
                total += int(grid.ntheta[i1])
                i1 += 1
            nt = grid.ntheta[i0:i1]
            offs = np.concatenate(([0], np.cumsum(nt)[:-1]))
            dens = np.empty(total, dtype=np.complex128)
            ring_density_fill(nt, offs, a[i0:i1], b3[i0:i1], alpha, one_mode,
                              np.ones((i1 - i0, 1), dtype=np.complex128),
                              dummy, False, dens)
            for i in range(i0, i1):
                n = int(nt[i - i0])
                fh = np.fft.fft(dens[offs[i - i0]:offs[i - i0] + n])
                osc[i] = fh[midx % n] / n
            i0 = i1
        return osc


_WORKSPACES: dict[tuple, _Workspace] = {}


def _workspace(data: ScatteringData, z: complex, t: float,
               grid: RingGrid | None) -> _Workspace:
    if grid is None:
        grid = reconstruction_grid(data, z, t)
    key = (id(data), complex(z), float(t), id(grid))
    ws = _WORKSPACES.get(key)
    if ws is None:
        ws = _Workspace(data, z, t, grid)
        if len(_WORKSPACES) >= 8:
            _WORKSPACES.pop(next(iter(_WORKSPACES)))
        _WORKSPACES[key] = ws
    return ws


# --------------------------------------------------------------------------
# operators


def constant_field(grid: RingGrid, value: complex = 1.0) -> LambdaField:
    M = DEFAULT_MODES
    return LambdaField(grid=grid, modes=np.arange(-M, M + 1),
                       coeff=np.zeros((grid.rho.shape[0], 2 * M + 1),
                                      dtype=np.complex128),
                       offset=complex(value))


def _conjugate_modes(field: LambdaField | None, nr: int) -> np.ndarray:
    """Mode table of conj(field); None stands for the constant field 1."""
    M = DEFAULT_MODES
    if field is None:
        fc = np.zeros((nr, 2 * M + 1), dtype=np.complex128)
        fc[:, M] = 1.0
        return fc
    if field.max_mode != M:
        raise ConfigurationError("field has unexpected mode truncation")
    fc = np.conj(field.coeff[:, ::-1]).copy()
    fc[:, M] += np.conj(field.offset)
    return fc


def _density(ws: _Workspace, field: LambdaField | None,
             kind: str) -> RingDensity:
    """Mode table of r·e^{tS}·conj(field) (kind "A") or its spatial-derivative
    companion ½(ζ−1/ζ̄)·r·e^{tS}·conj(field) (kind "B")."""
    grid, data = ws.grid, ws.data
    nr = grid.rho.shape[0]
    M = DEFAULT_MODES
    bmax = max((abs(int(m)) for m in data.modes), default=0)
    Mb = M + bmax
    fc = _conjugate_modes(field, nr)
    narrow = np.zeros((nr, 2 * Mb + 1), dtype=np.complex128)
    for col, m in enumerate(data.modes):
        m = int(m)
        narrow[:, Mb + m - M:Mb + m + M + 1] += ws.btab[:, col:col + 1] * fc
    wide = fftconvolve(narrow, ws.osc, mode="full", axes=1)
    center = Mb + ws.band
    if kind == "A":
        pref, shift = ws.pref_a, 1
    elif kind == "B":
        pref, shift = ws.pref_b, 2
    else:
        raise ConfigurationError(f"unknown operator kind {kind!r}")
    D = _DENSITY_BAND
    lo = center - D - shift
    out = pref[:, None] * wide[:, lo:lo + 2 * D + 1]
    return RingDensity(grid=grid, band=D, coeff=np.ascontiguousarray(out))


def _cauchy(ws: _Workspace, dens: RingDensity) -> LambdaField:
    M = DEFAULT_MODES
    D = dens.band
    chat = np.ascontiguousarray(dens.coeff[:, D + 1 - M:D + 1 + M + 1])
    coeff = mode_cauchy_scan(ws.grid.rho, ws.w_rad, chat, M)
    return LambdaField(grid=ws.grid, modes=np.arange(-M, M + 1), coeff=coeff)


def operator_density(data: ScatteringData, z: complex, t: float,
                     field: LambdaField | None = None, kind: str = "A",
                     grid: RingGrid | None = None) -> RingDensity:
    """The integrand of operator `kind` applied to `field` (None means 1)."""
    ws = _workspace(data, z, t, grid if grid is not None
                    else (field.grid if field is not None else None))
    return _density(ws, field, kind)


def apply_A(data: ScatteringData, z: complex, t: float,
            field: LambdaField | None = None,
            grid: RingGrid | None = None) -> LambdaField:
    """(A f)(λ) = ∂̄⁻¹[ r e^{tS} · conj f ]; f = None means the constant 1."""
    ws = _workspace(data, z, t, grid if grid is not None
                    else (field.grid if field is not None else None))
    return _cauchy(ws, _density(ws, field, "A"))


def apply_B(data: ScatteringData, z: complex, t: float,
            field: LambdaField | None = None,
            grid: RingGrid | None = None) -> LambdaField:
    """As `apply_A` with the extra spatial-derivative factor ½(ζ − 1/ζ̄)."""
    ws = _workspace(data, z, t, grid if grid is not None
                    else (field.grid if field is not None else None))
    return _cauchy(ws, _density(ws, field, "B"))


def coeff_at_infinity(dens: RingDensity) -> complex:
    """(1/π)∬ density dA — the 1/λ coefficient of ∂̄⁻¹(density) at λ → ∞."""
    return complex(2.0 * np.sum(dens.grid.w_ring * dens.coeff[:, dens.band]))


# --------------------------------------------------------------------------
# series solvers


def solve_mu(data: ScatteringData, z: complex, t: float,
             grid: RingGrid | None = None, depth: int = 3) -> MuExpansion:
    """Contraction series μ = 1 + Σ_{n ≤ 2·depth+1} Aⁿ·1.

    Raises a divergence error when an increment norm fails to shrink by the
    factor 1.1 over its predecessor (the truncation is only meaningful while
    the series visibly contracts).
    """
    if depth < 0:
        raise ConfigurationError("depth must be >= 0")
    ws = _workspace(data, z, t, grid)
    total = constant_field(ws.grid, 1.0)
    prev: LambdaField | None = None
    incs: list[float] = []
    for n in range(1, 2 * depth + 2):
        fld = _cauchy(ws, _density(ws, prev, "A"))
        inc = fld.norm()
        if incs and incs[-1] > 0.0 and inc * _CONTRACTION > incs[-1]:
            raise DivergenceError(
                f"series for mu at z={z}, t={t} stopped contracting",
                increments=tuple(incs + [inc]))
        incs.append(inc)
        total = total + fld
        prev = fld
        if inc == 0.0:
            break
    return MuExpansion(field=total, increments=tuple(incs),
                       tail_estimate=incs[-1] if incs else 0.0)


def reconstruct_v(data: ScatteringData, z: complex, t: float,
                  grid: RingGrid | None = None, depth: int = 3,
                  theta: float | None = None) -> ReconstructionResult:
    """Potential v(z, t) from the truncated series of AⁱBAʲ·1 coefficients.

    Chains with up to depth+1 operators are summed; `theta` re-evaluates the
    series at a different data amplitude by exact rescaling (chain with n
    operators scales as amplitudeⁿ).
    """
    if depth < 1:
        raise ConfigurationError("depth must be >= 1")
    ws = _workspace(data, z, t, grid)
    if theta is None:
        scale = 1.0
        theta_out = float(data.theta)
    elif float(data.theta) != 0.0:
        scale = float(theta) / float(data.theta)
        theta_out = float(theta)
    elif float(theta) == 0.0:
        scale = 0.0
        theta_out = 0.0
    else:
        raise ConfigurationError("cannot rescale data with zero amplitude")

    terms: dict[tuple[int, int], complex] = {}
    a_norms: list[float] = []
    inner: LambdaField | None = None          # Aʲ·1
    for j in range(0, depth + 1):
        if j > 0:
            inner = _cauchy(ws, _density(ws, inner, "A"))
            nrm = inner.norm()
            if a_norms and a_norms[-1] > 0.0 and nrm * _CONTRACTION > a_norms[-1]:
                raise DivergenceError(
                    f"series for v at z={z}, t={t} stopped contracting",
                    increments=tuple(a_norms + [nrm]))
            a_norms.append(nrm)
        dens = _density(ws, inner, "B")       # B·Aʲ·1
        terms[(0, j)] = coeff_at_infinity(dens) * scale ** (j + 1)
        fld: LambdaField | None = None
        for i in range(1, depth + 1 - j):
            fld = _cauchy(ws, dens)
            dens = _density(ws, fld, "A")     # Aⁱ·B·Aʲ·1
            terms[(i, j)] = coeff_at_infinity(dens) * scale ** (i + j + 1)

    orders = [complex(sum(terms[(i, j)] for (i, j) in terms if i + j + 1 == n))
              for n in range(1, depth + 2)]
    beta1 = terms[(0, 0)]
    alpha1 = terms[(1, 0)]
    total = complex(sum(orders))
    q = total - beta1 - alpha1
    return ReconstructionResult(
        v=-2.0 * total, beta1=beta1, alpha1=alpha1, remainder_q=q,
        depth=depth, series_tail_estimate=2.0 * abs(orders[-1]),
        theta=theta_out, order_terms=tuple(orders))
