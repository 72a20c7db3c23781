"""Regenerate the three reference tables (polygons, ellipses, hippopedes).

    python scripts/reproduce_tables.py --out results/
"""
import argparse
import time
from pathlib import Path

from steklovqc.tables import build_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out", default="results", help="directory for table{1,2,3}.csv")
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--factors-only", action="store_true")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for which in (1, 2, 3):
        t0 = time.perf_counter()
        tab = build_table(which, n_max=args.n_max, spectra=not args.factors_only)
        (out / f"table{which}.csv").write_text(tab.to_csv())
        print(f"table {which} ({tab.family}, {time.perf_counter() - t0:.1f}s)")
        print(tab.to_text())
    print("cells marked ~x* had not settled at the largest polynomial degree")


if __name__ == "__main__":
    main()
