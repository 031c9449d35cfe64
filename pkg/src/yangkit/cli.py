"""Command-line entry point: roots, verma, eval-module, verify."""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from typing import List, Optional

from .exact import fmt, parse_rational
from .liemod import build_affine, build_finite, build_verma, parse_weight
from .rootdata import dual_coxeter, parse_algebra, positive_roots
from .verify import MUTATIONS, SUITES, run_suite
from .yangops import evaluation_action


class UsageError(Exception):
    pass


def _rational(text: str) -> str:
    try:
        return str(parse_rational(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _realization(name: str):
    try:
        N, affine = parse_algebra(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return build_affine(N) if affine else build_finite(N)


def _emit(obj, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_roots(args) -> int:
    L = _realization(args.algebra)
    dat = L.datum
    roots = positive_roots(dat, args.height)
    rows = [{"coords": list(r.coords), "height": r.height, "kind": r.kind,
             "multiplicity": r.multiplicity} for r in roots]
    out = {"algebra": args.algebra, "height": args.height, "dual_coxeter": dual_coxeter(dat),
           "roots": rows}
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"{args.algebra}: {len(rows)} positive roots of height <= {args.height}")
        for r in rows:
            print(f"  {tuple(r['coords'])}  height {r['height']}  {r['kind']}  mult {r['multiplicity']}")
    _emit(out, args.out)
    return 0


def cmd_verma(args) -> int:
    L = _realization(args.algebra)
    try:
        hw = parse_weight(L, args.hw.split(",")) if args.hw else tuple(
            parse_rational("0") for _ in range(L.datum.cartan_dim))
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    V = build_verma(L, hw, args.depth)
    out = {"algebra": args.algebra, "highest_weight": [fmt(v) for v in hw], "depth": args.depth,
           "dimension": len(V.basis), "depth_dims": V.depth_dims()}
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"Verma module of highest weight ({', '.join(out['highest_weight'])}) truncated at depth {args.depth}")
        print(f"  dimension {out['dimension']}; by depth {out['depth_dims']}")
    _emit(out, args.out)
    return 0


def cmd_eval(args) -> int:
    L = _realization(args.algebra)
    N = L.N
    if L.affine:
        raise UsageError("evaluation modules exist for finite sl_N only")
    a = parse_rational(args.a)
    tw = evaluation_action(N, a, args.rmax, L)
    shifts = tw.meta["shifts"]
    M = tw.module
    ops = {}
    for key in sorted(tw.ops, key=repr):
        op = tw.ops[key]
        ents = sorted(op.mat.entries().items(), key=repr)
        ops["_".join(str(k) for k in key)] = [[r, c, fmt(v)] for (r, c), v in ents]
    out = {"algebra": args.algebra, "a": fmt(a), "rmax": args.rmax,
           "node_shifts": {str(k): fmt(v) for k, v in sorted(shifts.items())},
           "basis": list(M.basis), "operators": ops}
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"evaluation module C^{N}({fmt(a)}), levels 0..{args.rmax}")
        print("  node shifts: " + ", ".join(f"c_{k} = {v}" for k, v in out["node_shifts"].items()))
    _emit(out, args.out)
    return 0


def _print_summary(rep: dict) -> None:
    s = rep["summary"]
    print(f"suite {rep['suite']} on {rep['config']['algebra']}: "
          f"{s['pass']} pass, {s['fail']} fail, {s['inconclusive']} inconclusive")
    fams = Counter((c["relation"], c["status"]) for c in rep["cases"])
    for rel in dict.fromkeys(c["relation"] for c in rep["cases"]):
        parts = [f"{st} {fams[(rel, st)]}" for st in ("pass", "fail", "inconclusive") if fams[(rel, st)]]
        print(f"  {rel:<12} {', '.join(parts)}")
    for c in rep["cases"]:
        if c["status"] == "fail":
            print(f"  FAIL {c['relation']} {json.dumps(c['params'])} witness {json.dumps(c.get('witness'))}")


def cmd_verify(args) -> int:
    cfg = {}
    suite = args.suite
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        if "config" in loaded and "suite" in loaded:
            suite = suite or loaded["suite"]
            loaded = loaded["config"]
        cfg.update(loaded)
    if suite is None:
        raise UsageError("--suite is required (or a report passed with --config)")
    for name in ("algebra", "depth", "rmax", "a", "b", "c", "eps", "backend", "seed", "mutation"):
        val = getattr(args, name)
        if val is not None:
            cfg[name] = val
    if args.hw:
        cfg["hw"] = args.hw.split(",")
    try:
        parse_algebra(cfg.get("algebra", "A2affine" if suite == "twoparam" else "A2"))
        rep = run_suite(suite, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _print_summary(rep)
    _emit(rep, args.out)
    return 1 if rep["summary"]["fail"] else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="yangkit", description="Exact checks of Yangian relations on explicit modules.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("roots", help="list positive roots up to a height")
    r.add_argument("--algebra", required=True)
    r.add_argument("--height", type=int, default=3)
    r.add_argument("--json", action="store_true")
    r.add_argument("--out")
    r.set_defaults(func=cmd_roots)

    v = sub.add_parser("verma", help="dimensions of a truncated Verma module")
    v.add_argument("--algebra", required=True)
    v.add_argument("--hw", help="comma-separated p/q values, one per Cartan coordinate")
    v.add_argument("--depth", type=int, default=3)
    v.add_argument("--json", action="store_true")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verma)

    e = sub.add_parser("eval-module", help="evaluation module C^N(a) and its node shifts")
    e.add_argument("--algebra", required=True)
    e.add_argument("--a", type=_rational, default="0")
    e.add_argument("--rmax", type=int, default=2)
    e.add_argument("--json", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("verify", help="run a relation suite and write a JSON report")
    m.add_argument("--algebra")
    m.add_argument("--suite", choices=SUITES)
    m.add_argument("--depth", type=int)
    m.add_argument("--rmax", type=int)
    for name in ("a", "b", "c", "eps"):
        m.add_argument(f"--{name}", type=_rational)
    m.add_argument("--hw", help="comma-separated p/q highest weight for Verma-based suites")
    m.add_argument("--backend", choices=("rational", "poly"))
    m.add_argument("--seed", type=int)
    m.add_argument("--mutation", choices=sorted({x for v in MUTATIONS.values() for x in v}),
                   help="install a deliberate error (negative control)")
    m.add_argument("--config", help="JSON config, or a previous report to re-run")
    m.add_argument("--out")
    m.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"yangkit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
