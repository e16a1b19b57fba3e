"""Scattering-data model: the function b(λ), its symmetries, derived weights.

Admissible data satisfy the two symmetry identities

    b(−1/λ̄) = b(λ),        b(1/λ̄) = conj(b(λ)),

are smooth, and decay super-polynomially as |λ| → 0 and |λ| → ∞.  They are
built constructively: a raw real profile g on the closed exterior disk is
symmetrized over λ ↦ −λ (the map λ ↦ −1/λ̄ composed with the exterior
reflection λ ↦ 1/λ̄), then extended inward by b(λ) = conj(b(1/λ̄)).  On
|λ| = 1 the second identity forces b to be real.

Besides b itself, the module exposes the derived kernels of the linearized
and nonlinear reconstructions:

    r(λ) = π·sgn(1−|λ|²)/λ̄ · b(λ)        (sgn(0) = 0, so r ≡ 0 on |λ|=1)
    f(ζ) = π·|1−|ζ|²| / (2|ζ|²) · b(ζ)

and the time evolution  b ↦ exp{(λ³ + 1/λ³ − λ̄³ − 1/λ̄³) t}·b, a pure
rotation of the phase that leaves |b| and the symmetries intact.

Built-in profiles:

* ``P1`` — Gaussian ridge on |λ|=1 with angular modes {0, ±2} and
  b(±1) = 1.5·θ ≠ 0 (so the degenerate-point constant is nonzero);
* ``P2`` — radially symmetric with a double zero on |λ|=1 (b(±1)=0);
* ``unit`` — b ≡ 1, no decay; algebra tests only.

Everything is represented as a short angular-mode sum with real radial
coefficients, b(ρ,θ) = Σ_m c_m(ρ) e^{imθ}; this is what the oscillatory
quadrature consumes.  Sampled (CSV) data is interpolated bilinearly in
(log ρ, angle) and converted to the same mode form on demand.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, NumericalDomainError

__all__ = [
    "ScatteringData",
    "profile",
    "extend_by_symmetry",
    "evolve",
    "evolution_multiplier",
    "r_weight",
    "f_weight",
    "load_sampled",
    "angular_modes",
]

DEFAULT_THETA = 0.1


@dataclass(frozen=True)
class ScatteringData:
    label: str
    theta: float
    decay_rate: float | None                      # None: no decay (unit profile)
    modes: tuple[int, ...]
    radial_coeff: Callable                        # (m, rho array) -> real array

    def b(self, lam):
        """b(λ), vectorized over a complex array."""
        lam = np.asarray(lam, dtype=np.complex128)
        if np.any(lam == 0):
            raise NumericalDomainError("scattering data undefined at λ = 0",
                                       point=0j)
        rho = np.abs(lam)
        th = np.angle(lam)
        out = np.zeros(lam.shape, dtype=np.complex128)
        for m in self.modes:
            out += self.radial_coeff(m, rho) * np.exp(1j * m * th)
        return out if out.shape else complex(out)

    def mode_table(self, rho: np.ndarray) -> np.ndarray:
        """c_m(ρ) for all modes of this datum; shape (len(rho), n_modes)."""
        rho = np.asarray(rho, dtype=np.float64)
        return np.stack([np.asarray(self.radial_coeff(m, rho), dtype=np.complex128)
                         for m in self.modes], axis=-1)

    def support(self, tol: float = 1e-14) -> tuple[float, float]:
        """(r_min, r_max) outside which every |c_m| < tol·(peak value)."""
        if self.decay_rate is None:
            return 0.05, 6.0
        r = np.geomspace(1.0, 64.0, 2048)
        env = np.zeros_like(r)
        for m in self.modes:
            env = np.maximum(env, np.abs(self.radial_coeff(m, r)))
        peak = env.max()
        if peak == 0.0:
            return 0.5, 2.0
        alive = np.nonzero(env > tol * peak)[0]
        r_max = float(r[min(alive[-1] + 1, r.size - 1)]) if alive.size else 2.0
        r_max = max(r_max, 1.5)
        return 1.0 / r_max, r_max


def extend_by_symmetry(base: Callable, lam):
    """Value at λ of the symmetric extension of a raw real profile on |λ|≥1.

    Exterior: ½(g(λ) + g(−λ)); interior: conjugated exterior reflection.
    `base` must be real-valued for the extension to satisfy both symmetry
    identities (enforced by taking the real part).
    """
    lam = np.asarray(lam, dtype=np.complex128)
    if np.any(lam == 0):
        raise NumericalDomainError("symmetry extension undefined at λ = 0",
                                   point=0j)
    scalar = lam.shape == ()
    lam = np.atleast_1d(lam)
    out = np.empty(lam.shape, dtype=np.complex128)
    ext = np.abs(lam) >= 1.0
    lo = lam[ext]
    out[ext] = 0.5 * (np.real(base(lo)) + np.real(base(-lo)))
    li = 1.0 / np.conj(lam[~ext])
    out[~ext] = np.conj(0.5 * (np.real(base(li)) + np.real(base(-li))))
    return complex(out[0]) if scalar else out


def _p1_radial(m: int, rho: np.ndarray) -> np.ndarray:
    # reflection-symmetric ridge: exp(−4(ρ̃−1)²) with ρ̃ = max(ρ, 1/ρ), i.e.
    # the raw Gaussian outside extended inward by the exterior reflection
    s = np.exp(-4.0 * (np.maximum(rho, 1.0 / rho) - 1.0) ** 2)
    if m == 0:
        return s
    if m in (2, -2):
        return 0.25 * s
    return np.zeros_like(rho)


def _p2_radial(m: int, rho: np.ndarray) -> np.ndarray:
    if m != 0:
        return np.zeros_like(rho)
    return 0.5 * (rho - 1.0 / rho) ** 2 * np.exp(-(rho ** 2) - rho ** -2)


def profile(name: str, theta: float = DEFAULT_THETA) -> ScatteringData:
    """Built-in data by name: ``P1``, ``P2``, or ``unit``."""
    if name == "P1":
        return ScatteringData(
            label="P1", theta=theta, decay_rate=4.0, modes=(-2, 0, 2),
            radial_coeff=lambda m, rho: theta * _p1_radial(m, np.asarray(rho)))
    if name == "P2":
        return ScatteringData(
            label="P2", theta=theta, decay_rate=1.0, modes=(0,),
            radial_coeff=lambda m, rho: theta * _p2_radial(m, np.asarray(rho)))
    if name == "unit":
        return ScatteringData(
            label="unit", theta=theta, decay_rate=None, modes=(0,),
            radial_coeff=lambda m, rho: (np.ones_like(np.asarray(rho, dtype=float))
                                         if m == 0 else np.zeros_like(rho)))
    raise ConfigurationError(f"unknown profile {name!r}; choose P1, P2 or unit")


def evolution_multiplier(t: float, lam):
    """exp{(λ³ + 1/λ³ − λ̄³ − 1/λ̄³) t} = exp{2it·Im(λ³ + 1/λ³)}."""
    lam = np.asarray(lam, dtype=np.complex128)
    if np.any(lam == 0):
        raise NumericalDomainError("evolution undefined at λ = 0", point=0j)
    w = lam ** 3 + lam ** -3
    out = np.exp(2j * t * np.imag(w))
    return out if out.shape else complex(out)


def evolve(data: ScatteringData, t: float, lam):
    """Time-evolved data value at λ; |b| and both symmetries are preserved."""
    return evolution_multiplier(t, lam) * data.b(lam)


def r_weight(data: ScatteringData, lam):
    """r(λ) = π·sgn(1−|λ|²)/λ̄ · b(λ); zero on the unit circle (sgn(0)=0)."""
    lam = np.asarray(lam, dtype=np.complex128)
    bv = data.b(lam)
    sg = np.sign(1.0 - np.abs(lam) ** 2)
    out = np.pi * sg / np.conj(lam) * bv
    return out if out.shape else complex(out)


def f_weight(data: ScatteringData, zeta):
    """f(ζ) = π·|1−|ζ|²| / (2|ζ|²) · b(ζ); vanishes continuously on |ζ|=1."""
    zeta = np.asarray(zeta, dtype=np.complex128)
    bv = data.b(zeta)
    a2 = np.abs(zeta) ** 2
    out = np.pi * np.abs(1.0 - a2) / (2.0 * a2) * bv
    return out if out.shape else complex(out)


def angular_modes(sampler: Callable, rho: float, n_angles: int = 256,
                  tol: float = 1e-10) -> dict[int, complex]:
    """Nonnegligible Fourier modes of λ ↦ sampler(λ) on the ring |λ| = ρ."""
    th = 2.0 * np.pi * np.arange(n_angles) / n_angles
    vals = np.asarray(sampler(rho * np.exp(1j * th)), dtype=np.complex128)
    co = np.fft.fft(vals) / n_angles
    freqs = np.fft.fftfreq(n_angles, d=1.0 / n_angles).astype(int)
    peak = np.max(np.abs(co)) if n_angles else 0.0
    return {int(m): complex(c) for m, c in zip(freqs, co)
            if abs(c) > tol * max(peak, 1e-300)}


def load_sampled(path: str, theta: float = 1.0,
                 max_mode: int = 16) -> ScatteringData:
    """Scattering data from a CSV of samples: Re λ, Im λ, Re b, Im b.

    The samples must form a tensor grid in (|λ|, angle).  Values are
    interpolated bilinearly in (log ρ, angle) with periodic wrap, taken as 0
    outside the sampled radii, symmetrized, and reduced to angular-mode form.
    """
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].lstrip().startswith("#"):
                continue
            rows.append([float(x) for x in rec[:4]])
    if not rows:
        raise ConfigurationError(f"no samples in {path}")
    arr = np.asarray(rows)
    lam = arr[:, 0] + 1j * arr[:, 1]
    val = arr[:, 2] + 1j * arr[:, 3]
    logr = np.log(np.abs(lam))
    ang = np.angle(lam) % (2.0 * np.pi)
    rk = np.unique(np.round(logr, 12))
    ak = np.unique(np.round(ang, 12))
    if rk.size * ak.size != lam.size:
        raise ConfigurationError(
            "samples do not form a tensor grid in (log ρ, angle)")
    table = np.full((rk.size, ak.size), np.nan, dtype=np.complex128)
    ri = np.searchsorted(rk, np.round(logr, 12))
    ai = np.searchsorted(ak, np.round(ang, 12))
    table[ri, ai] = val
    if np.isnan(table).any():
        raise ConfigurationError("duplicate or missing grid samples in CSV")

    ak_w = np.concatenate([ak, [ak[0] + 2.0 * np.pi]])
    table_w = np.concatenate([table, table[:, :1]], axis=1)

    def raw(lam_q):
        lam_q = np.atleast_1d(np.asarray(lam_q, dtype=np.complex128))
        lo = np.log(np.abs(lam_q))
        an = np.angle(lam_q) % (2.0 * np.pi)
        out = np.zeros(lam_q.shape, dtype=np.complex128)
        ok = (lo >= rk[0]) & (lo <= rk[-1])
        i = np.clip(np.searchsorted(rk, lo[ok]) - 1, 0, rk.size - 2)
        j = np.clip(np.searchsorted(ak_w, an[ok]) - 1, 0, ak_w.size - 2)
        fr = (lo[ok] - rk[i]) / (rk[i + 1] - rk[i])
        fa = (an[ok] - ak_w[j]) / (ak_w[j + 1] - ak_w[j])
        out[ok] = ((1 - fr) * (1 - fa) * table_w[i, j]
                   + fr * (1 - fa) * table_w[i + 1, j]
                   + (1 - fr) * fa * table_w[i, j + 1]
                   + fr * fa * table_w[i + 1, j + 1])
        return out

    def b_sym(lam_q):
        return extend_by_symmetry(raw, lam_q)

    # reduce to mode form on a log-radial knot set covering the samples
    knots = np.geomspace(max(np.exp(rk[0]), 1e-3) , np.exp(rk[-1]), 160)
    knots = np.unique(np.concatenate([1.0 / knots[::-1], knots]))
    coeffs = {}
    n_ang = 4 * max_mode
    th = 2.0 * np.pi * np.arange(n_ang) / n_ang
    ring = np.empty((knots.size, n_ang), dtype=np.complex128)
    for i, rv in enumerate(knots):
        ring[i] = b_sym(rv * np.exp(1j * th))
    co = np.fft.fft(ring, axis=1) / n_ang
    freqs = np.fft.fftfreq(n_ang, d=1.0 / n_ang).astype(int)
    peak = np.max(np.abs(co))
    modes = tuple(int(m) for k, m in enumerate(freqs)
                  if abs(m) <= max_mode and np.max(np.abs(co[:, k])) > 1e-10 * peak)
    for k, m in enumerate(freqs):
        if m in modes:
            coeffs[m] = co[:, k]

    def radial(m, rho):
        rho = np.atleast_1d(np.asarray(rho, dtype=np.float64))
        if m not in coeffs:
            return np.zeros(rho.shape)
        return theta * np.interp(np.log(rho), np.log(knots), coeffs[m],
                                 left=0.0 + 0.0j, right=0.0 + 0.0j)

    return ScatteringData(label=f"csv:{path}", theta=theta,
                          decay_rate=1.0, modes=modes, radial_coeff=radial)
