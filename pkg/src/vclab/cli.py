"""Command-line entry point.

Exit status: 0 when every asserted check passes, 1 when any check fails,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import homcount
from .builders import FAMILIES, FieldGraphSpec, Polynomial
from .graph import spectral_profile
from .harness import io
from .harness.mixing import trial_rng
from .harness.runner import collect_reports, run_suite, write_suite
from .harness.suites import sample_subset
from .vcdim import VCBudgetExceeded, vc_at_least, vc_dimension_exact

OK, FAILED, USAGE = 0, 1, 2
VERIFY_SUITES = ("mixing", "tensor-mixing", "counts", "geometry", "quadruple", "selector", "spectral")


class UsageError(Exception):
    pass


def _emit(obj, out=None) -> None:
    text = json.dumps(io._jsonable(obj), indent=1, sort_keys=True) + "\n"
    if out:
        io.write_text(out, text)
    else:
        sys.stdout.write(text)


def _spec_from_args(a) -> FieldGraphSpec:
    poly = Polynomial.parse(a.poly, a.t) if getattr(a, "poly", None) else None
    return FieldGraphSpec(a.family, a.q, a.t, poly, bool(getattr(a, "exclude_origin", False)))


def _source(a):
    """A graph from ``--graph FILE`` or from ``--family/--q/--t``."""
    if getattr(a, "graph", None):
        G, spec = io.load_graph_with_spec(a.graph)
        return spec if spec is not None else G
    if getattr(a, "family", None) and a.q and a.t:
        return _spec_from_args(a)
    return None


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(a) -> int:
    spec = _spec_from_args(a)
    G = spec.build()
    doc = io.graph_to_doc(G, spec)
    if a.out:
        io.save_graph(a.out, G, spec)
        print(f"{spec.key}: n={G.n} loops={G.loops} hash={doc['hash'][:16]} -> {a.out}")
    else:
        _emit(doc)
    return OK


def cmd_spectrum(a) -> int:
    G = io.load_graph(a.graph)
    P = spectral_profile(G)
    doc = io.spectrum_to_doc(G, P)
    _emit(doc, a.out)
    if a.out:
        print(f"n={G.n} d={P.d} lambda={P.lam:.12g}")
    return OK


def _pattern_count(G, U, config: str, budget: int) -> int:
    kind, _, arg = config.partition(":")
    if kind == "pattern":
        pat = io.parse_pattern(Path(arg).read_text())
        return homcount.count_pattern_bruteforce(G, U, pat, budget)
    if kind in ("Pk", "Cm"):
        if not arg.isdigit():
            raise UsageError(f"--config {config}: expected an integer after ':'")
        name = ("P" if kind == "Pk" else "C") + arg
        return homcount.count_named(G, U, name)
    if config in ("H3", "H3plus"):
        return {"H3": homcount.count_H3, "H3plus": homcount.count_H3plus}[config](G, U, budget)
    if config in ("H1", "H2", "H3minus", "H4"):
        return homcount.count_named(G, U, config)
    raise UsageError(f"unknown --config {config!r}")


def cmd_count(a) -> int:
    G = io.load_graph(a.graph)
    records = []
    if a.subset:
        subsets = [(None, np.array(io.read_subset(a.subset), dtype=np.int64))]
    elif a.subset_size is not None:
        subsets = [(i, sample_subset(trial_rng(a.seed, a.subset_size, i), G.n, a.subset_size))
                   for i in range(a.trials)]
    else:
        subsets = [(None, None)]
    for trial, U in subsets:
        value = _pattern_count(G, U, a.config, a.budget)
        records.append({"config": a.config, "trial": trial, "seed": a.seed if trial is not None else None,
                        "U_size": G.n if U is None else int(U.size), "count": value})
    _emit({"graph": G.digest(), "records": records}, a.out)
    return OK


def cmd_vc(a) -> int:
    G = io.load_graph(a.graph)
    U = np.array(io.read_subset(a.subset), dtype=np.int64) if a.subset else None
    if a.at_least is not None:
        w = vc_at_least(G, U, a.at_least, budget=a.budget, seed=a.seed)
        _emit({"mode": "at-least", "k": a.at_least, "found": w is not None,
               "witness": None if w is None else w.to_json()}, a.out)
        return OK if w is not None else FAILED
    try:
        r = vc_dimension_exact(G, U, budget=a.budget)
    except VCBudgetExceeded as exc:
        _emit({"mode": "exact", "status": "budget-exceeded", "lower_bound": exc.lower_bound,
               "witness": None if exc.witness is None else exc.witness.to_json()}, a.out)
        return FAILED
    _emit({"mode": "exact", "status": "exact" if r.exact else "lower-bound-only",
           "dimension": r.dimension, "witness": r.witness.to_json(),
           "level_counts": r.level_counts, "checked": r.checked}, a.out)
    return OK


def _suite_opts(a) -> dict:
    keys = ("trials", "seed", "sizes", "k", "budget", "mode", "samples", "triples", "tol", "q", "t",
            "target_k", "exact_budget", "c")
    return {k: getattr(a, k) for k in keys if getattr(a, k, None) is not None}


def _finish(res, outdir, timestamp) -> int:
    files = write_suite(res, outdir, timestamp) if outdir else {}
    bad = res.failures()
    status = "PASS" if res.passed else "FAIL"
    print(f"{res.suite}: {status} ({len(res.rows)} rows, {len(bad)} not passing)"
          + (f" -> {files['csv']}" if files else ""))
    for r in bad[:20]:
        print(f"  {r['metric']} U={r['U_size']} trial={r['trial']} value={r['value']} bound={r['bound']}")
    return OK if res.passed else FAILED


def cmd_verify(a) -> int:
    src = _source(a)
    opts = _suite_opts(a)
    if a.suite in ("geometry", "quadruple") and "q" not in opts:
        if isinstance(src, FieldGraphSpec):
            opts["q"] = src.q
        else:
            raise UsageError(f"--suite {a.suite} needs --q")
    if src is None and a.suite not in ("geometry", "quadruple"):
        raise UsageError(f"--suite {a.suite} needs --graph FILE or --family/--q/--t")
    res = run_suite(a.suite, opts, src)
    return _finish(res, a.out, a.timestamp)


def cmd_sweep(a) -> int:
    cfg = io.load_config(a.config)
    spec = cfg.graph_spec()
    if not cfg.suites:
        raise UsageError("config lists no suites")
    outdir = a.out or cfg.out
    status = OK
    for name, opts in cfg.suites:
        res = run_suite(name, opts, spec)
        status = max(status, _finish(res, outdir, a.timestamp))
    return status


def cmd_report(a) -> int:
    merged = collect_reports(a.in_dir)
    if not merged["suites"]:
        raise UsageError(f"no {io.REPORT_SCHEMA} files in {a.in_dir}")
    io.write_text(a.out, io.report_text(merged["records"], {"suites": merged["suites"], "pass": merged["pass"]},
                                        a.timestamp))
    for s in merged["suites"]:
        print(f"{s['file']}: {'PASS' if s['pass'] else 'FAIL'}")
    return OK if merged["pass"] else FAILED


# ---------------------------------------------------------------------------


def _graph_args(p, required=False):
    p.add_argument("--family", choices=FAMILIES, required=required)
    p.add_argument("--q", type=int, required=required)
    p.add_argument("--t", type=int, required=required)
    p.add_argument("--poly", help="polynomial in x1..xt, y1..yt (family=polynomial)")
    p.add_argument("--exclude-origin", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vclab", description=__doc__.splitlines()[0])
    ap.add_argument("--timestamp", help="fixed timestamp for output header lines")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="build a field graph and write its cache file")
    _graph_args(p, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("spectrum", help="eigenvalues, d and lambda of a cached graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("count", help="homomorphism count of a configuration")
    p.add_argument("--graph", required=True)
    p.add_argument("--config", required=True, help="H1|H2|H3|H3plus|H3minus|H4|Pk:K|Cm:M|pattern:FILE")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--subset")
    g.add_argument("--subset-size", type=int)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=homcount.DEFAULT_BUDGET)
    p.add_argument("--out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("vc", help="VC-dimension of the neighbourhood family")
    p.add_argument("--graph", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", default=True)
    g.add_argument("--at-least", type=int)
    p.add_argument("--budget", type=int, default=10**8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subset")
    p.add_argument("--out")
    p.set_defaults(func=cmd_vc)

    p = sub.add_parser("verify", help="run one verification suite")
    p.add_argument("--suite", required=True, choices=VERIFY_SUITES)
    p.add_argument("--graph")
    _graph_args(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--sizes", help="subset sizes, integers or fractions of n (0.5 0.75 1.0)")
    p.add_argument("--K", dest="k", type=float)
    p.add_argument("--budget", type=int)
    p.add_argument("--mode", choices=("exhaustive", "randomized"))
    p.add_argument("--samples", type=int)
    p.add_argument("--triples", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out", help="output directory for CSV/JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run every suite named in a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory (overrides [output] dir)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="merge JSON reports from a directory")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return a.func(a)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"vclab: error: {exc}", file=sys.stderr)
        return USAGE
    except (homcount.BudgetExceeded, VCBudgetExceeded) as exc:
        print(f"vclab: budget exceeded: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
