"""Distinct-pattern growth against k for several families, with log-log fits.

Writes one CSV per family (the ``osmc probe`` schema) and prints the fitted
exponent of x against k.
"""

import argparse
import os

from osmc.analysis.probe import PROBE_COLUMNS, probe, write_csv

DEFAULT_KS = {
    "shalin_lower": [8, 16, 32, 64, 128],
    "halin": [8, 16, 32, 64, 128],
    "grid": [8, 16, 32, 64, 128],
    "random_planar": [8, 16, 32, 64],
}


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--families", nargs="+", default=list(DEFAULT_KS))
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-crossings", action="store_true")
    p.add_argument("--out-dir", default="probe_out")
    args = p.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    for fam in args.families:
        samples = 1 if fam in ("shalin_lower", "grid") else args.samples
        res = probe(fam, DEFAULT_KS[fam], samples, args.seed, crossings=not args.no_crossings,
                    threads=args.threads)
        path = os.path.join(args.out_dir, f"{fam}.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_csv(res.rows, PROBE_COLUMNS, fh)
        worst = max(r["x_over_k2"] for r in res.rows)
        print(f"{fam:14s} slope {res.slope:5.2f}  max x/k^2 {worst:7.3f}  -> {path}")


if __name__ == "__main__":
    main()
