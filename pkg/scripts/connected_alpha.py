"""Connected-terminal encodings on blob grids: words / (|T| + k log2 k)."""

import argparse
import math

from osmc.compressor import build_connected, prepare, size_report
from osmc.generators import gen_grid


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sides", type=int, nargs="+", default=[5, 10, 20, 30, 40, 60])
    p.add_argument("--fractions", type=float, nargs="+", default=[0.1, 0.3, 1.0])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    print(f"{'side':>4s} {'frac':>5s} {'|T|':>6s} {'k':>4s} {'words':>8s} {'alpha':>6s}")
    worst = 0.0
    for side in args.sides:
        for frac in args.fractions:
            inst = gen_grid(side, side, terminals="blob", fraction=frac, seed=args.seed + side)
            enc = build_connected(prepare(inst))
            words = size_report(enc)["total"]
            alpha = words / (len(inst.T) + inst.k * math.log2(inst.k))
            worst = max(worst, alpha)
            print(f"{side:4d} {frac:5.2f} {len(inst.T):6d} {inst.k:4d} {words:8d} {alpha:6.2f}")
    print(f"max alpha = {worst:.2f}")


if __name__ == "__main__":
    main()
