"""Large-N behaviour of the regular-polygon factors g and gamma.

Prints the truncated-series remainders scaled by N^6 (g) and N^5 (gamma), and their
ratio to the first omitted coefficient, which should tend to 1.
"""
import argparse

from steklovqc.factors import GAMMA_DROPPED, G_DROPPED, asymptotic_check, polygon_factors


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    args = ap.parse_args()
    print(f"first omitted coefficients: g {G_DROPPED:.6f} (N^-6), gamma {GAMMA_DROPPED:.6f} (N^-5)")
    print(f"{'N':>5}  {'g':>12}  {'gamma':>12}  {'g rem*N^6':>10}  {'ratio':>7}  {'gam rem*N^5':>11}  {'ratio':>7}")
    for N in args.sizes:
        f = polygon_factors(N)
        r = asymptotic_check(N)
        print(f"{N:>5}  {f.g:>12.10f}  {f.gamma:>12.10f}  {r['g_scaled']:>10.4f}  {r['g_ratio']:>7.4f}  "
              f"{r['gamma_scaled']:>11.4f}  {r['gamma_ratio']:>7.4f}")


if __name__ == "__main__":
    main()
