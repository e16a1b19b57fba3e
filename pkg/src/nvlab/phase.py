"""The oscillatory phase S(u,ζ), its stationary points, and their taxonomy.

With u the scaled position, the phase is

    S(u,ζ) = ½((ζ − 1/ζ̄)ū − (ζ̄ − 1/ζ)u) + ζ³ − ζ̄³ + 1/ζ³ − 1/ζ̄³,

purely imaginary for every (u,ζ).  Stationary points in ζ come in ± pairs
ζ = ±√ξ, where ξ runs over the roots of the cubic

    3ξ³ + (ū/2)ξ² − (u/2)ξ − 3 = 0,

obtained by clearing ζ⁴ from ∂S/∂ζ.  Caution: the natural-looking variant
with u and ū swapped also appears in the literature; its roots are the
conjugates of these and do NOT annihilate ∂S/∂ζ.  The convention here is the
one that satisfies the factorization

    ∂S/∂ζ = (3/ζ⁴)(ζ² − ξ₀)(ζ² − ξ₁)(ζ² − ξ₂),

which is checked property-style in the tests.

Root geometry falls into four classes, signalled by `Case`:

* TripleDegenerate      — the three ξ coincide (u at one of the three cusps
                          −18·e^{2πik/3} of the boundary curve);
* BoundaryDegenerate    — exactly two ξ coincide (u on the curve
                          −6(2e^{−iφ} + e^{2iφ}), away from cusps);
* InteriorNondegenerate — distinct roots, all on the unit circle;
* ExteriorNondegenerate — moduli {(1+ω)², 1, (1+ω)⁻²} with ω > 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NumericalDomainError

__all__ = [
    "Case",
    "StationaryAnalysis",
    "phase_value",
    "phase_d1",
    "phase_d2",
    "cubic_coefficients",
    "stationary_points",
    "boundary_curve",
    "classify",
    "default_tol",
]


class Case(str, enum.Enum):
    TripleDegenerate = "TripleDegenerate"
    BoundaryDegenerate = "BoundaryDegenerate"
    InteriorNondegenerate = "InteriorNondegenerate"
    ExteriorNondegenerate = "ExteriorNondegenerate"


@dataclass(frozen=True)
class StationaryAnalysis:
    u: complex
    xi_roots: tuple[complex, complex, complex]
    zeta_points: tuple[complex, ...]      # ±√ξᵢ, six values
    case: Case
    omega: float                          # > 0 only for ExteriorNondegenerate
    phi: float                            # angle parameter (cases 2 and 4)
    tol: float


def _require_nonzero(zeta) -> None:
    if np.any(np.asarray(zeta) == 0):
        raise NumericalDomainError("phase undefined at ζ = 0", point=0j)


def phase_value(u: complex, zeta):
    """S(u,ζ); vectorized over ζ; purely imaginary by construction."""
    _require_nonzero(zeta)
    z = np.asarray(zeta, dtype=np.complex128)
    zc = np.conj(z)
    lin = 0.5 * ((z - 1.0 / zc) * np.conj(u) - (zc - 1.0 / z) * u)
    cub = z ** 3 - zc ** 3 + z ** -3 - zc ** -3
    out = lin + cub
    return out if out.shape else complex(out)


def phase_d1(u: complex, zeta):
    """∂S/∂ζ = ū/2 − u/(2ζ²) + 3ζ² − 3/ζ⁴."""
    _require_nonzero(zeta)
    z = np.asarray(zeta, dtype=np.complex128)
    out = 0.5 * np.conj(u) - 0.5 * u / z ** 2 + 3.0 * z ** 2 - 3.0 / z ** 4
    return out if out.shape else complex(out)


def phase_d2(u: complex, zeta):
    """∂²S/∂ζ² = u/ζ³ + 6ζ + 12/ζ⁵."""
    _require_nonzero(zeta)
    z = np.asarray(zeta, dtype=np.complex128)
    out = u / z ** 3 + 6.0 * z + 12.0 / z ** 5
    return out if out.shape else complex(out)


def boundary_curve(phi: float) -> complex:
    """Parametrization u(φ) = −6(2e^{−iφ} + e^{2iφ}) of the boundary of the
    region with all stationary points on the unit circle; cusps at
    φ ∈ {0, 2π/3, 4π/3} where u = −18·e^{2iφ}."""
    return complex(-6.0 * (2.0 * np.exp(-1j * phi) + np.exp(2j * phi)))


def default_tol(u: complex) -> float:
    return 1e-6 * (1.0 + abs(u))


def cubic_coefficients(u: complex) -> np.ndarray:
    """Coefficients (highest first) of 3ξ³ + (ū/2)ξ² − (u/2)ξ − 3."""
    return np.array([3.0, 0.5 * np.conj(u), -0.5 * u, -3.0], dtype=np.complex128)


def _polish_roots(u: complex, xi: np.ndarray, tol: float) -> np.ndarray:
    """Refine the ξ roots so the ζ = √ξ residual of ∂S/∂ζ meets tolerance.

    Clustered roots (double/triple within `tol`) are replaced by the cluster
    mean — averaging cancels the O(ε^{1/2}) / O(ε^{1/3}) eigenvalue splitting
    error of the companion solve.  Isolated roots get Newton steps on ∂S/∂ζ
    at ζ = √ξ, accepted only while the residual decreases.
    """
    xi = xi.copy()
    # cluster by mutual distance
    groups: list[list[int]] = []
    used = [False] * 3
    for i in range(3):
        if used[i]:
            continue
        grp = [i]
        used[i] = True
        for j in range(i + 1, 3):
            if not used[j] and abs(xi[i] - xi[j]) < 100 * tol:
                grp.append(j)
                used[j] = True
        groups.append(grp)
    for grp in groups:
        if len(grp) > 1:
            m = np.mean(xi[grp])
            for i in grp:
                xi[i] = m
        else:
            i = grp[0]
            z = np.sqrt(xi[i])
            res = abs(phase_d1(u, z))
            for _ in range(50):
                if res <= 1e-10 * (1.0 + abs(u)):
                    break
                step = phase_d1(u, z) / phase_d2(u, z)
                z2 = z - step
                res2 = abs(phase_d1(u, z2))
                if res2 >= res:
                    break
                z, res = z2, res2
            xi[i] = z * z
    return xi


def classify(u: complex, tol: float | None = None) -> Case:
    """Case label alone; see `stationary_points` for the full analysis."""
    return stationary_points(u, tol).case


def stationary_points(u: complex, tol: float | None = None) -> StationaryAnalysis:
    u = complex(u)
    if tol is None:
        tol = default_tol(u)
    xi = np.roots(cubic_coefficients(u))
    xi = _polish_roots(u, xi, tol)

    # order by modulus, largest first, so the exterior pattern reads
    # {(1+ω)², 1, (1+ω)⁻²}
    xi = xi[np.argsort(-np.abs(xi))]

    d01 = abs(xi[0] - xi[1])
    d02 = abs(xi[0] - xi[2])
    d12 = abs(xi[1] - xi[2])
    omega = 0.0
    phi = 0.0
    if max(d01, d02, d12) < tol:
        case = Case.TripleDegenerate
        phi = float(np.angle(xi[0]))
    elif min(d01, d02, d12) < tol:
        case = Case.BoundaryDegenerate
        if d01 < tol:
            dbl = 0.5 * (xi[0] + xi[1])
        elif d12 < tol:
            dbl = 0.5 * (xi[1] + xi[2])
        else:
            dbl = 0.5 * (xi[0] + xi[2])
        phi = float(np.angle(dbl))    # double root sits at ξ = e^{iφ}
    elif np.all(np.abs(np.abs(xi) - 1.0) < tol):
        case = Case.InteriorNondegenerate
    else:
        case = Case.ExteriorNondegenerate
        big = np.max(np.abs(xi))
        omega = float(np.sqrt(big) - 1.0)
        # large and small roots share argument φ; the unit root carries −2φ
        phi = float(np.angle(xi[0]))

    res = np.abs(phase_d1(u, np.sqrt(xi)))
    worst = float(np.max(res))
    if worst > 1e-8 * (1.0 + abs(u)):
        raise ConvergenceError(
            f"stationary-point residual {worst:.3e} exceeds tolerance for u={u}",
            residual=worst)

    zr = np.sqrt(xi)
    zeta = tuple(complex(z) for pair in zip(zr, -zr) for z in pair)
    return StationaryAnalysis(u=u, xi_roots=tuple(map(complex, xi)),
                              zeta_points=zeta, case=case, omega=omega,
                              phi=phi, tol=tol)
