"""Generalized Stirling triangles: exact tables, log-domain rows and how
well the asymptotic estimates track them."""

import math
from fractions import Fraction

from gibbspart.stirling import (asymptotic_alpha0, asymptotic_alpha_pos, build_triangle,
                                stirling_number, stirling_spec)


def main():
    print("type -1 (Lah numbers), n <= 5")
    tri = build_triangle(stirling_spec(-1), 5)
    for n in range(1, 6):
        print("  ", [int(tri.value(n, k)) for k in range(1, n + 1)])

    print("\ntype 1/2, n <= 5")
    tri = build_triangle(stirling_spec(Fraction(1, 2)), 5)
    for n in range(1, 6):
        print("  ", [str(tri.value(n, k)) for k in range(1, n + 1)])

    print("\nalpha = 0, kappa = round(log nu): exact / estimate")
    for e in (3, 4, 5):
        nu = 10 ** e
        kappa = round(math.log(nu))
        r = math.exp(stirling_number(nu, kappa, 0, "log").log - asymptotic_alpha0(nu, kappa).log)
        print(f"   nu = 1e{e}, kappa = {kappa:2d}: {r:.4f}")

    print("\nalpha = 1/2, k = round(sqrt n): exact / estimate")
    for e in (2, 3, 4):
        n = 10 ** e
        k = round(math.sqrt(n))
        r = math.exp(stirling_number(n, k, Fraction(1, 2), "log").log
                     - asymptotic_alpha_pos(n, k, 0.5).log)
        print(f"   n = 1e{e}, k = {k:3d}: {r:.4f}")


if __name__ == "__main__":
    main()
