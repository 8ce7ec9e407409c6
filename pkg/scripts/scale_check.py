"""Build time and query latency on a large grid (default 200 x 200)."""

import argparse
import random
import statistics
import time

from osmc.compressor import build_general, prepare, size_report
from osmc.generators import gen_grid


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--side", type=int, default=200)
    p.add_argument("--queries", type=int, default=100_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    t0 = time.perf_counter()
    inst = gen_grid(args.side, args.side)
    t1 = time.perf_counter()
    inp = prepare(inst, args.threads)
    t2 = time.perf_counter()
    enc = build_general(inp, args.seed)
    t3 = time.perf_counter()
    print(f"n={inst.n} k={inst.k} x={enc.x}")
    print(f"generate {t1 - t0:.2f} s, distances+patterns {t2 - t1:.2f} s, encode {t3 - t2:.2f} s, "
          f"total {t3 - t0:.2f} s")
    print(f"words {size_report(enc)}")

    rng = random.Random(args.seed)
    pairs = [(rng.randrange(inst.n), rng.randint(1, inst.k)) for _ in range(args.queries)]
    clock = time.perf_counter_ns
    dist = enc.distance
    timings = []
    for v, i in pairs:
        s = clock()
        dist(v, i)
        timings.append(clock() - s)
    timings.sort()
    print(f"query median {statistics.median(timings) / 1000:.2f} us, "
          f"p99 {timings[int(0.99 * len(timings))] / 1000:.2f} us")


if __name__ == "__main__":
    main()
