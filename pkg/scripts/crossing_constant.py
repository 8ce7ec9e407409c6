"""Realized additive constant of the crossing bound over the default suite.

For every instance reports max_r - k/2 (original face size k) and
max_r - k'/2 with k' = 2k the subdivided face size.
"""

import argparse

from osmc.analysis.probe import map_instances
from osmc.analysis.suite import load_suite
from osmc.bisectors import crossing_totals, enumerate_all_crossings, extract_bisectors
from osmc.compressor import prepare


def row(inst):
    inp = prepare(inst)
    bis = extract_bisectors(inp.sub, inp.patterns)
    tot = crossing_totals(enumerate_all_crossings(bis, inp.sub.graph))
    return inst.meta.get("instance_id", inst.name), inst.k, tot.t, tot.max_r


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--suite", default="default")
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args()
    rows = map_instances(row, load_suite(args.suite), args.threads)
    print(f"{'instance':45s} {'k':>4s} {'t':>8s} {'max_r':>6s} {'c(k)':>7s} {'c(2k)':>7s}")
    for iid, k, t, r in rows:
        print(f"{iid:45s} {k:4d} {t:8d} {r:6d} {r - k / 2:7.1f} {r - k:7.1f}")
    print(f"realized constant vs k: {max(r - k / 2 for _, k, _, r in rows):g}; "
          f"vs 2k: {max(r - k for _, k, _, r in rows):g}")


if __name__ == "__main__":
    main()
