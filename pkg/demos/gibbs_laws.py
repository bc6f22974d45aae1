"""Gibbs partitions: EPPF values, consistency, block-count laws and the
conditioned laws psi(alpha|s)."""

from fractions import Fraction

from gibbspart.gibbs import (TwoParam, block_count_law, check_addition_rule, eppf_two_param,
                             psi_v_first_column, psi_weights)


def main():
    p = TwoParam(Fraction(1, 2), Fraction(1, 2))
    print("two-parameter law (1/2, 1/2)")
    for parts in ((3,), (2, 1), (1, 1, 1)):
        print(f"   p{parts} = {eppf_two_param(p, parts)}")
    rep = check_addition_rule(p, 7)
    print(f"   addition rule over {rep.checked} compositions: violations {rep.violations}")

    print("\nP(K_n = k) for n = 6")
    laws = {"Ewens(1)": TwoParam(0, 1), "(-1, 3)": TwoParam(-1, 3),
            "coupon(3)": TwoParam(float("-inf"), m=3)}
    for name, law in laws.items():
        print(f"   {name}: {[str(x) for x in block_count_law(law, 6)]}")

    print("\npsi(1/2 | s): V[2,1] for a few s (0 is one block, large s all singletons)")
    for s in (0.0, 0.5, 1.0, 2.0, 5.0):
        print(f"   s = {s}: {psi_v_first_column(0.5, s, 2):.8f}")
    V = psi_weights(0.5, 1.0, 8)
    print(f"   reconstructed table N=8: min entry {V.min_entry():.2e}, "
          f"max recursion residual {V.max_relative_residual():.1e}")


if __name__ == "__main__":
    main()
