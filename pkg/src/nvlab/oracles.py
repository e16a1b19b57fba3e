"""Brute-force reference implementations for the test suite.

Everything here is deliberately simple and slow: 2D integrals use the polar
midpoint rule (not Gauss panels, so agreement with the production quadrature
is evidence rather than tautology), derivatives use central differences.
No code is shared with the production integration paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["RefineResult", "midpoint_integrate", "refine_until", "finite_difference"]


@dataclass(frozen=True)
class RefineResult:
    value: complex
    achieved_tol: float
    converged: bool
    levels: int


def midpoint_integrate(g: Callable, r_min: float, r_max: float,
                       nr: int, nt: int) -> complex:
    """Polar midpoint rule for ∬ g dA over the annulus; g vectorized."""
    r = r_min + (r_max - r_min) * (np.arange(nr) + 0.5) / nr
    th = 2.0 * np.pi * (np.arange(nt) + 0.5) / nt
    w = (r_max - r_min) / nr * (2.0 * np.pi / nt)
    eith = np.exp(1j * th)
    # chunk over radii to keep memory flat at large resolutions
    step = max(1, 4_000_000 // max(nt, 1))
    acc = 0.0j
    for lo in range(0, nr, step):
        rr = r[lo:lo + step]
        Z = rr[:, None] * eith[None, :]
        acc += np.sum(rr[:, None] * np.asarray(g(Z), dtype=np.complex128))
    return complex(acc * w)


def refine_until(g: Callable, r_min: float, r_max: float, rel_tol: float,
                 nr0: int = 32, nt0: int = 64,
                 max_nodes: int = 80_000_000) -> RefineResult:
    """Double both resolutions until two successive values agree to rel_tol.

    On budget exhaustion the best value is still returned with the achieved
    gap and ``converged=False`` — callers decide whether that is fatal.
    """
    if rel_tol <= 1e-12:
        raise ValueError("rel_tol must exceed 1e-12")
    nr, nt = nr0, nt0
    prev = midpoint_integrate(g, r_min, r_max, nr, nt)
    gap = np.inf
    levels = 1
    while True:
        nr, nt = 2 * nr, 2 * nt
        if nr * nt > max_nodes:
            return RefineResult(prev, gap, False, levels)
        cur = midpoint_integrate(g, r_min, r_max, nr, nt)
        scale = max(abs(cur), abs(prev), 1e-300)
        gap = abs(cur - prev) / scale
        levels += 1
        prev = cur
        if gap < rel_tol:
            return RefineResult(cur, gap, True, levels)


def finite_difference(f: Callable, x0: complex, direction: complex = 1.0,
                      h: float = 1e-6, richardson: bool = True) -> complex:
    """Central-difference directional derivative of f at x0.

    With ``richardson=True`` combines steps h and h/2 to cancel the O(h²)
    term.  h must lie in [1e-7, 1e-2].
    """
    if not (1e-7 <= h <= 1e-2):
        raise ValueError("h out of the supported range [1e-7, 1e-2]")
    d = complex(direction)

    def cd(step):
        return (f(x0 + step * d) - f(x0 - step * d)) / (2.0 * step)

    if not richardson:
        return cd(h)
    return (4.0 * cd(h / 2.0) - cd(h)) / 3.0
