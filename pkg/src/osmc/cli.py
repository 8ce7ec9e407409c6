"""``osmc`` command line.

Exit codes: 0 success / all checks pass, 1 a property check failed,
2 input, output or format error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from osmc import osg
from osmc.analysis.oracle import Oracle
from osmc.analysis.probe import (
    ANALYZE_COLUMNS,
    BASELINE_COLUMNS,
    CROSSING_COLUMNS,
    PROBE_COLUMNS,
    analyze_row,
    baseline_sizes,
    crossing_row,
    map_instances,
    probe,
    write_csv,
)
from osmc.analysis.suite import SUITES, load_suite
from osmc.analysis.checks import VerifyOptions, verify
from osmc.compressor import fileformat as ser
from osmc.compressor.encoding import MODES, build_encoding, size_report
from osmc.errors import (
    CorruptEncoding,
    IndexOutOfRange,
    InstanceError,
    ModeMismatch,
    ModePreconditionFailed,
    OSMCError,
    UnknownTerminal,
)
from osmc.generators import FAMILIES, TERMINAL_POLICIES, GeneratorSpec, generate

log = logging.getLogger("osmc")

EXIT_OK, EXIT_VIOLATION, EXIT_IO = 0, 1, 2


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _write_or_print(rows, columns, out) -> None:
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            write_csv(rows, columns, fh)
    else:
        sys.stdout.write(write_csv(rows, columns))


def _instances(args):
    insts = []
    for path in args.inputs:
        inst = osg.load(path)
        inst.meta.setdefault("source", path)
        inst.meta.setdefault("instance_id", inst.name)
        insts.append(inst)
    if args.suite:
        insts += load_suite(args.suite)
    if not insts:
        raise SystemExit("no instances: pass .osg files or --suite")
    return insts


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    params = {}
    fam = args.family.replace("-", "_")
    if fam in ("cycle", "shalin_lower"):
        params["k"] = args.k
    elif fam in ("grid", "random_planar"):
        params.update(w=args.w, h=args.h or args.w)
        if fam == "random_planar":
            params["rate"] = args.rate
    elif fam == "halin":
        params["leaves"] = args.leaves
    if any(v is None for v in params.values()):
        missing = [k for k, v in params.items() if v is None]
        raise SystemExit(f"family {args.family} needs --{' --'.join(missing)}")
    spec = GeneratorSpec(fam, params, args.terminals, args.fraction, args.seed)
    inst = generate(spec)
    text = osg.dumps(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log.info("generated %s: n=%d m=%d k=%d |T|=%d", spec.instance_id, inst.n, inst.graph.m, inst.k, len(inst.T))
    return EXIT_OK


def cmd_compress(args) -> int:
    inst = osg.load(args.input)
    enc = build_encoding(inst, args.mode, seed=args.seed, threads=args.threads)
    ser.save(enc, args.out)
    words = size_report(enc)
    _emit(args, {"mode": enc.mode, "x": enc.x, "words": words, "stats": enc.stats},
          f"mode={enc.mode} x={enc.x} words={words['total']} "
          f"(nodes {words['index_nodes']}, versions {words['versions']}, terminals {words['terminal_table']})")
    return EXIT_OK


def cmd_query(args) -> int:
    enc = ser.load(args.enc)
    if args.include_midpoints:
        d = enc.subdivided_distance(args.terminal, args.source)
    else:
        d = enc.distance(args.terminal, args.source)
    _emit(args, {"terminal": args.terminal, "source": args.source, "distance": d,
                 "subdivided": bool(args.include_midpoints)}, str(d))
    return EXIT_OK


def cmd_verify(args) -> int:
    opt = VerifyOptions(seed=args.seed, threads=args.threads, crossing_slack=args.crossing_slack,
                        crossings=not args.no_crossings, containment_samples=args.containment_samples,
                        vc_exhaustive_max_k=args.vc_exhaustive_max_k, query_samples=args.query_samples)
    code = EXIT_OK
    payload = []
    if args.enc:
        enc = ser.load(args.enc, deep=True)
        if args.inputs:
            inst = osg.load(args.inputs[0])
            oracle = Oracle(inst)
            wrong = [(v, i) for v in enc.terminals for i in range(1, enc.k + 1)
                     if enc.distance(v, i) != oracle.distance(v, i)]
            if wrong:
                code = EXIT_VIOLATION
            payload.append({"encoding": args.enc, "wrong": wrong[:10]})
            print(f"{args.enc}: {'OK' if not wrong else f'{len(wrong)} wrong distances'}", file=sys.stderr)
        else:
            print(f"{args.enc}: structure OK", file=sys.stderr)
        if not args.inputs and not args.suite:
            return code
    for inst in _instances(args):
        rep = verify(inst, opt)
        payload.append(rep.to_dict())
        if not args.json:
            print("\n".join(rep.lines()))
        if not rep.ok:
            code = EXIT_VIOLATION
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    return code


def cmd_analyze(args) -> int:
    insts = _instances(args)
    if args.crossings:
        rows = map_instances(lambda i: crossing_row(i, args.crossing_slack), insts, args.threads)
        cols = CROSSING_COLUMNS
    else:
        rows = map_instances(analyze_row, insts, args.threads)
        cols = ANALYZE_COLUMNS
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        _write_or_print(rows, cols, args.out)
    return EXIT_OK


def cmd_probe(args) -> int:
    res = probe(args.family, args.k, args.samples, args.seed, crossings=not args.no_crossings,
                threads=args.threads)
    if args.json:
        print(json.dumps({"rows": res.rows, "slope": res.slope, "intercept": res.intercept}, indent=2))
    else:
        _write_or_print(res.rows, PROBE_COLUMNS, args.out)
        print(f"# log-log fit: x ~ k^{res.slope:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_baseline(args) -> int:
    rows = [baseline_sizes(i, args.mode, args.seed, args.threads) for i in _instances(args)]
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        _write_or_print(rows, BASELINE_COLUMNS, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Global flags are accepted before or after the subcommand; the copy
    attached to subcommands suppresses defaults so it never overwrites a
    value given before the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=d(0), help="seed for generators, fingerprints and sampling")
    common.add_argument("--threads", type=int, default=d(1), help="worker threads for BFS and per-instance jobs")
    common.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    common.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="osmc", parents=[_global_flags(suppress=False)],
                                description="Compressed source-face distances on planar graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a generated instance as .osg")
    g.add_argument("--family", required=True, choices=sorted(set(FAMILIES) | {"shalin-lower", "random-planar"}))
    g.add_argument("--k", type=int)
    g.add_argument("--w", type=int)
    g.add_argument("--h", type=int)
    g.add_argument("--rate", type=float, default=0.3)
    g.add_argument("--leaves", type=int)
    g.add_argument("--terminals", choices=TERMINAL_POLICIES, default="all")
    g.add_argument("--fraction", type=float, default=0.25)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("compress", parents=[common], help="build and save an encoding")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--mode", choices=("auto",) + MODES, default="auto")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_compress)

    q = sub.add_parser("query", parents=[common], help="distance from a terminal to a source")
    q.add_argument("--enc", required=True)
    q.add_argument("--terminal", type=int, required=True)
    q.add_argument("--source", type=int, required=True, help="1-based source index")
    q.add_argument("--include-midpoints", action="store_true",
                   help="index the subdivided face s_1, w_1, ..., s_k, w_k; answer in subdivided hops")
    q.set_defaults(func=cmd_query)

    def add_inputs(sp):
        sp.add_argument("inputs", nargs="*", help=".osg files")
        sp.add_argument("--in", dest="extra_inputs", action="append", default=[], help=".osg file")
        sp.add_argument("--suite", choices=sorted(SUITES))

    v = sub.add_parser("verify", parents=[common], help="run the property suite")
    add_inputs(v)
    v.add_argument("--enc", help="also validate this encoding file (against the first input, if any)")
    v.add_argument("--crossing-slack", type=float, default=2.0)
    v.add_argument("--no-crossings", action="store_true")
    v.add_argument("--containment-samples", type=int, default=20)
    v.add_argument("--vc-exhaustive-max-k", type=int, default=16)
    v.add_argument("--query-samples", type=int, default=10000)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", parents=[common], help="pattern (and crossing) statistics as CSV")
    add_inputs(a)
    a.add_argument("--crossings", action="store_true")
    a.add_argument("--crossing-slack", type=float, default=2.0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    pr = sub.add_parser("probe", parents=[common], help="distinct-pattern growth against k")
    pr.add_argument("--family", required=True)
    pr.add_argument("--k", type=int, nargs="+", required=True)
    pr.add_argument("--samples", type=int, default=1)
    pr.add_argument("--no-crossings", action="store_true")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_probe)

    b = sub.add_parser("baseline", parents=[common], help="encoding size against simpler schemes")
    add_inputs(b)
    b.add_argument("--mode", choices=("auto",) + MODES, default="auto")
    b.add_argument("--out")
    b.set_defaults(func=cmd_baseline)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "extra_inputs"):
        args.inputs = list(args.inputs) + args.extra_inputs
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, InstanceError, CorruptEncoding, UnknownTerminal, IndexOutOfRange,
            ModeMismatch, ModePreconditionFailed) as exc:
        print(f"osmc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSMCError as exc:
        print(f"osmc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
