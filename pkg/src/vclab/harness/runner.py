"""Suite dispatch from string options and emission of CSV / JSON / plot files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from ..builders import FieldGraphSpec
from ..graph import DenseGraph
from . import io
from .mixing import MixingReport, mixing_check, tensor_mixing_check
from .plot import data_text, svg_line_chart
from .suites import (
    GraphContext,
    SuiteResult,
    geometry_checks,
    quadruple_upper_bound_check,
    selector_condition_check,
    spectral_bound_check,
    verify_count_theorems,
    vc_sweep,
)

SUITES = ("mixing", "tensor-mixing", "counts", "geometry", "quadruple", "selector", "spectral", "vc-sweep")


def _get(opts: dict, key: str, default, cast=int):
    v = opts.get(key)
    if v is None or v == "":
        return default
    return cast(v)


def _sizes(opts: dict, n: int) -> list[int]:
    """``sizes`` as integers, or fractions of n when every entry is <= 1.0 and has a dot."""
    raw = str(opts.get("sizes", "")).replace(",", " ").split()
    if not raw:
        return [n]
    if all("." in s for s in raw):
        return [int(round(float(s) * n)) for s in raw]
    return [int(s) for s in raw]


def _mixing_suite(rep: MixingReport, ctx: GraphContext, seed: int) -> SuiteResult:
    res = SuiteResult(rep.kind)
    ratio = rep.max_ratio_tensor if rep.kind == "tensor-mixing" else rep.max_ratio
    res.rows.append(ctx.row(rep.kind, seed=seed, metric="violations", value=len(rep.violations), bound=0,
                            **{"pass": "PASS" if rep.passed else "FAIL"}))
    res.rows.append(ctx.row(rep.kind, seed=seed, metric="max_ratio", value=ratio, bound=1.0))
    res.records.append(rep.to_json())
    res.summary = {"graph": ctx.graph_info(), **rep.to_json()}
    return res


def run_suite(name: str, opts: dict, source: Optional[Union[FieldGraphSpec, DenseGraph]] = None) -> SuiteResult:
    """Run one named suite.  ``opts`` values may be strings (config files)."""
    seed = _get(opts, "seed", 0)
    if name in ("quadruple", "geometry"):
        q = _get(opts, "q", None) or (source.q if source is not None else None)
        if q is None:
            raise ValueError(f"suite {name} needs q")
        if name == "quadruple":
            return quadruple_upper_bound_check(q, opts.get("mode", "exhaustive"), _get(opts, "budget", 10**7),
                                               seed, _get(opts, "samples", 10**5))
        return geometry_checks(q, _get(opts, "t", 3))
    if source is None:
        raise ValueError(f"suite {name} needs a graph")
    if name == "selector":
        return selector_condition_check(source, _get(opts, "triples", 100), seed)
    if name == "spectral":
        if not isinstance(source, FieldGraphSpec):
            raise ValueError("spectral bound suite needs a field graph spec")
        return spectral_bound_check(source)
    ctx = GraphContext.build(source)
    if name == "mixing":
        rep = mixing_check(ctx.G, _get(opts, "trials", 1000), seed, _get(opts, "tol", 1e-9, float), ctx.P)
        return _mixing_suite(rep, ctx, seed)
    if name == "tensor-mixing":
        rep = tensor_mixing_check(ctx.G, _get(opts, "trials", 200), seed, _get(opts, "tol", 1e-9, float), ctx.P)
        return _mixing_suite(rep, ctx, seed)
    if name == "counts":
        return verify_count_theorems(ctx.G if not isinstance(source, FieldGraphSpec) else source,
                                     _sizes(opts, ctx.G.n), _get(opts, "trials", 10), _get(opts, "k", 10.0, float),
                                     seed, _get(opts, "budget", 10**9), ctx.P)
    if name == "vc-sweep":
        return vc_sweep(source, _sizes(opts, ctx.G.n), _get(opts, "trials", 3), _get(opts, "target_k", 3),
                        _get(opts, "budget", 10**5), seed,
                        str(opts.get("exact", "true")).lower() in ("1", "true", "yes"),
                        _get(opts, "exact_budget", 10**6), _get(opts, "c", 1.0, float), ctx.P)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")


def write_suite(res: SuiteResult, outdir, timestamp: Optional[str] = None, tag: str = "") -> dict:
    """Write ``<suite>.csv``, ``<suite>.json`` (and plot files for sweeps).

    Timings go to a separate ``.timing`` file so the CSV body and JSON records
    stay byte-identical across runs.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    stem = res.suite + (f"-{tag}" if tag else "")
    files = {}
    p = out / f"{stem}.csv"
    io.write_text(p, io.csv_text(res.rows, timestamp))
    files["csv"] = str(p)
    p = out / f"{stem}.json"
    io.write_text(p, io.report_text(res.records, {"suite": res.suite, "summary": res.summary,
                                                  "pass": res.passed}, timestamp))
    files["json"] = str(p)
    if res.timing:
        p = out / f"{stem}.timing"
        io.write_text(p, "".join(f"{k} {v:.6f}\n" for k, v in res.timing.items()))
        files["timing"] = str(p)
    if res.suite == "vc-sweep" and res.summary.get("median_vc"):
        pts = res.summary["median_vc"]
        p = out / f"{stem}.dat"
        io.write_text(p, data_text(pts, "U_size median_vc"))
        files["dat"] = str(p)
        series = {"median VC": pts}
        p = out / f"{stem}.svg"
        io.write_text(p, svg_line_chart(series, "empirical VC-dimension of H(U)", "|U|", "median VC"))
        files["svg"] = str(p)
    return files


def collect_reports(indir) -> dict:
    """Merge every JSON report in ``indir`` into one report document."""
    records = []
    suites = []
    for p in sorted(Path(indir).glob("*.json")):
        text = p.read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError:
            continue
        if doc.get("schema") != io.REPORT_SCHEMA:
            continue
        meta = doc.get("meta", {})
        suites.append({"file": p.name, "suite": meta.get("suite"), "pass": meta.get("pass")})
        for r in doc.get("records", []):
            records.append({"source": p.name, **r} if isinstance(r, dict) else {"source": p.name, "value": r})
    return {"suites": suites, "records": records, "pass": all(s["pass"] for s in suites)}
