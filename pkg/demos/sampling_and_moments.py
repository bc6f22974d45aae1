"""Monte Carlo against exact block-count means, and recovering a mixture
of extreme laws from its first column."""

import math
from fractions import Fraction

from gibbspart.moments import INF, hausdorff_forward, nonnegativity_verdict, recover_mixture
from gibbspart.sampling import exact_mean_Kn, lln_experiment


def main():
    rep = lln_experiment(0, 5, 10_000, 400, seed=1)
    print(f"Ewens(5), n = 1e4: mean K_n {rep.mean:.3f} +- {rep.stderr:.3f}, "
          f"exact {float(exact_mean_Kn(0, 5, 10_000, mode='float')):.3f}")
    rep = lln_experiment(Fraction(1, 2), 0, 10_000, 400, seed=2, stat="kn_over_npow")
    print(f"(1/2, 0), n = 1e4: mean K_n / sqrt(n) {rep.mean:.4f}, limit {2 / math.sqrt(math.pi):.4f}")

    q = {1: Fraction(1, 5), 3: Fraction(1, 2), INF: Fraction(3, 10)}
    u = hausdorff_forward(q, -1, 10)
    print("\nplanted mixture at alpha = -1:", {str(k): str(v) for k, v in q.items()})
    print("   first column:", [str(x) for x in u[:5]], "...")
    print("   nonnegative triangle:", nonnegativity_verdict(u, -1).ok)
    fit = recover_mixture(u, -1, [1, 2, 3, 4, INF])
    print("   recovered:", {str(k): str(v) for k, v in fit.as_dict().items()},
          f"({fit.method}, {fit.verdict})")
    bad = nonnegativity_verdict([Fraction(1), Fraction(9, 10)] + [Fraction(0)] * 4, -1)
    print(f"   u_2 = 9/10 is not a mixture: first negative entry at {bad.position} = {bad.value}")


if __name__ == "__main__":
    main()
