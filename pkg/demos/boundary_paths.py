"""Limits of V^{nu,kappa} along paths in the three regimes, plus the graph
whose boundary has a non-extreme point."""

from fractions import Fraction

from gibbspart.boundary import (const_path, log_path, path_limit, pathology_masses,
                                power_path, stirling_graph)
from gibbspart.gibbs import phi_weights, psi_v_first_column


def show(title, est, target):
    col = [float(x) for x in est.first_columns[-1]]
    print(title)
    print(f"   probes {est.probes}, kappas {est.kappas}, verdict {est.verdict}")
    print(f"   V[n,1], n=2..: {[round(x, 5) for x in col]}")
    print(f"   limit          {[round(x, 5) for x in target]}")


def main():
    est = path_limit(stirling_graph(-1), const_path(2), probes=(100, 200, 400), n_max=4,
                     mode="exact")
    show("alpha = -1, kappa = 2 (finite number of blocks)", est,
         [float(phi_weights(-1, 2, n, 1)) for n in range(2, 5)])

    est = path_limit(stirling_graph(0), log_path(2.0), probes=(1000, 10_000, 100_000), n_max=3)
    show("\nalpha = 0, kappa = 2 log nu (Ewens with theta = 2, slow log-rate approach)", est,
         [float(phi_weights(0, 2, n, 1)) for n in range(2, 4)])

    est = path_limit(stirling_graph(Fraction(1, 2)), power_path(1.0, 0.5), n_max=3)
    show("\nalpha = 1/2, kappa = sqrt(nu) (psi(1/2 | 1))", est,
         [psi_v_first_column(0.5, 1.0, n) for n in range(2, 4)])

    print("\npathology graph, target b_nu, level 3 masses on (a, b, c):")
    for nu in (5, 50, 5000):
        m = pathology_masses(nu, 3)["profile"]
        print(f"   nu = {nu}: {[str(m[(x, 3)]) for x in 'abc']}")


if __name__ == "__main__":
    main()
