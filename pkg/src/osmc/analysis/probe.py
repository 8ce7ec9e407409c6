"""Measurements: per-instance pattern statistics, crossing statistics, the
pattern-count probe over k, and size comparison against simpler schemes."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from osmc.bisectors import crossing_totals, enumerate_all_crossings, extract_bisectors
from osmc.compressor.encoding import build_encoding, prepare, size_report
from osmc.distances import TERNARY, all_source_bfs, compute_patterns, distinct_patterns
from osmc.generators import GeneratorSpec, generate
from osmc.planar import OSInstance

ANALYZE_COLUMNS = ("instance_id", "n", "m", "k", "|T|", "x", "max_pattern_class_size")
CROSSING_COLUMNS = ("instance_id", "k", "t", "max_r", "k_over_2_plus_slack_ok", "x", "2t_plus_2k",
                    "x_over_k2", "x_over_k3")
PROBE_COLUMNS = ("family", "k", "sample", "seed", "n", "x", "t", "max_r", "x_over_k2", "x_over_k3")
BASELINE_COLUMNS = ("instance_id", "k", "|T|", "x", "mode", "naive_words", "table_words", "encoding_words")


def _iid(inst: OSInstance) -> str:
    return str(inst.meta.get("instance_id") or inst.name)


def analyze_row(inst: OSInstance, threads: int = 1) -> dict:
    inp = prepare(inst, threads)
    classes = distinct_patterns(inp.patterns)
    return {"instance_id": _iid(inst), "n": inst.n, "m": inst.graph.m, "k": inst.k, "|T|": len(inst.T),
            "x": classes.x, "max_pattern_class_size": classes.max_class_size}


def crossing_row(inst: OSInstance, slack: float = 2.0, threads: int = 1) -> dict:
    inp = prepare(inst, threads)
    x = distinct_patterns(inp.patterns).x
    bis = extract_bisectors(inp.sub, inp.patterns)
    tot = crossing_totals(enumerate_all_crossings(bis, inp.sub.graph))
    k = inst.k
    return {"instance_id": _iid(inst), "k": k, "t": tot.t, "max_r": tot.max_r,
            "k_over_2_plus_slack_ok": tot.max_r <= k / 2 + slack, "x": x, "2t_plus_2k": 2 * tot.t + 2 * k,
            "x_over_k2": x / k ** 2, "x_over_k3": x / k ** 3}


def map_instances(fn, instances, threads: int = 1) -> list:
    """Applies ``fn`` per instance; rows come back in input order."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, instances))
    return [fn(i) for i in instances]


def write_csv(rows: list[dict], columns, fh=None) -> str:
    out = fh or io.StringIO()
    w = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: (f"{r[c]:.6g}" if isinstance(r[c], float) else r[c]) for c in columns})
    return out.getvalue() if fh is None else ""


# ---------------------------------------------------------------------------
# probe over k
# ---------------------------------------------------------------------------

def instance_for_k(family: str, k: int, seed: int = 0) -> OSInstance:
    """An instance of ``family`` whose source face has (about) ``k`` vertices."""
    fam = family.replace("-", "_")
    if fam == "cycle":
        spec = GeneratorSpec("cycle", {"k": k}, seed=seed)
    elif fam in ("grid", "random_planar"):
        side = max(2, round(k / 4) + 1)
        params = {"w": side, "h": side}
        if fam == "random_planar":
            params["rate"] = 0.3
        spec = GeneratorSpec(fam, params, seed=seed)
    elif fam == "halin":
        spec = GeneratorSpec("halin", {"leaves": k}, seed=seed)
    elif fam == "shalin_lower":
        spec = GeneratorSpec("shalin_lower", {"k": k}, seed=seed)
    else:
        raise ValueError(f"unknown family {family!r}")
    return generate(spec)


@dataclass(frozen=True)
class ProbeResult:
    rows: list
    slope: float
    intercept: float


def probe(family: str, ks, samples: int = 1, seed: int = 0, crossings: bool = True,
          threads: int = 1) -> ProbeResult:
    """Distinct binary pattern count ``x`` (and crossing totals) against ``k``,
    with a least-squares fit of ``log x`` on ``log k``."""
    jobs = [(k, s) for k in ks for s in range(samples)]

    def run(job):
        k, s = job
        inst = instance_for_k(family, k, seed + s)
        if crossings:
            r = crossing_row(inst)
            t, max_r, x = r["t"], r["max_r"], r["x"]
        else:
            x, t, max_r = analyze_row(inst)["x"], "", ""
        return {"family": family, "k": inst.k, "sample": s, "seed": seed + s, "n": inst.n, "x": x,
                "t": t, "max_r": max_r, "x_over_k2": x / inst.k ** 2, "x_over_k3": x / inst.k ** 3}

    rows = map_instances(run, jobs, threads)
    ks_ = np.log([r["k"] for r in rows])
    xs = np.log([r["x"] for r in rows])
    if len(set(ks_.tolist())) >= 2:
        slope, intercept = np.polyfit(ks_, xs, 1)
    else:
        slope, intercept = float("nan"), float("nan")
    return ProbeResult(rows, float(slope), float(intercept))


# ---------------------------------------------------------------------------
# baselines
# ---------------------------------------------------------------------------

def baseline_sizes(inst: OSInstance, mode: str = "auto", seed: int = 0, threads: int = 1) -> dict:
    """Words for (a) the full T x S matrix, (b) a table of the distinct ternary
    patterns of T (two bits per entry) plus id, base distance and pointer per
    terminal, and (c) the compressed encoding."""
    k, T = inst.k, list(inst.T)
    inp = prepare(inst, threads)
    tern = compute_patterns(all_source_bfs(inst, threads), TERNARY)
    x_T = distinct_patterns(tern, rows=T).x if T else 0
    enc = build_encoding(inst, mode, seed=seed, inputs=inp)
    return {"instance_id": _iid(inst), "k": k, "|T|": len(T), "x": distinct_patterns(inp.patterns).x,
            "mode": enc.mode, "naive_words": k * len(T),
            "table_words": x_T * math.ceil(2 * (k - 1) / 64) + 3 * len(T),
            "encoding_words": size_report(enc)["total"]}
