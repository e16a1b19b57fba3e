"""Map the stationary-point regions of the phase in the u-plane.

Sweeps a grid of parameter values u, classifies each by the configuration of
the stationary points of S(u, ·), and prints a coarse ASCII chart together
with the exact degenerate landmarks (cusps and boundary curve).
"""

import numpy as np

from nvlab.phase import Case, boundary_curve, stationary_points

SYMBOL = {
    Case.InteriorNondegenerate: ".",
    Case.ExteriorNondegenerate: "#",
    Case.BoundaryDegenerate: "B",
    Case.TripleDegenerate: "T",
}


def main() -> None:
    xs = np.linspace(-30.0, 30.0, 61)
    ys = np.linspace(-24.0, 24.0, 33)
    counts = {c: 0 for c in Case}
    print("u-plane classification ('.' = all stationary points on |ζ|=1):")
    for y in ys[::-1]:
        row = []
        for x in xs:
            case = stationary_points(complex(x, y)).case
            counts[case] += 1
            row.append(SYMBOL[case])
        print("".join(row))
    print()
    for case, n in counts.items():
        print(f"{case.value:>24s}: {n:4d} grid points")

    print("\nDegenerate landmarks:")
    for k in range(3):
        u = -18.0 * np.exp(2j * np.pi * k / 3.0)
        sp = stationary_points(u)
        print(f"  cusp u = {u:+.3f}: {sp.case.value}, "
              f"ζ-points {np.round(sp.zeta_points, 6)}")
    phi = 0.7
    sp = stationary_points(boundary_curve(phi))
    print(f"  boundary φ = {phi}: {sp.case.value}, "
          f"ξ-roots {np.round(sp.xi_roots, 6)}")


if __name__ == "__main__":
    main()
