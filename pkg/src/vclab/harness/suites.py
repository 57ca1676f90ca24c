"""Experiment suites: counting inequalities, VC sweeps and the geometric facts
of the dot-product graph."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from ..builders import FieldGraphSpec, dot_product_graph
from ..graph import DenseGraph, SpectralProfile, prune_by_degree, spectral_profile
from ..homcount import (
    DEFAULT_BUDGET,
    H3MINUS,
    BudgetExceeded,
    count_cycles,
    count_H1,
    count_H2,
    count_H3,
    count_H3minus,
    count_H3plus,
    count_H4,
    count_paths,
    count_pattern_bruteforce,
    iter_embeddings,
    max_common_neighbors,
)
from ..vcdim import (
    VCBudgetExceeded,
    _sample_sets,
    is_shattered,
    shattered_mask,
    vc_at_least,
    vc_dimension_exact,
    find_selector_triple,
)
from .mixing import trial_rng
from .thresholds import applicable, threshold_eval

#: metrics asserted by the count suite; anything else in its output is diagnostic
COUNT_METRICS = ("H1", "H2", "H2_gamma", "H4", "H3plus", "H3minus", "C3", "C4", "C5", "C6", "P1_identity")


@dataclass
class SuiteResult:
    suite: str
    rows: list = field(default_factory=list)
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["pass"] in ("PASS", "NA") for r in self.rows) and self.summary.get("pass", True)

    def failures(self) -> list:
        return [r for r in self.rows if r["pass"] not in ("PASS", "NA")]


@dataclass
class GraphContext:
    G: DenseGraph
    P: SpectralProfile
    family: str = "custom"
    q: Optional[int] = None
    t: Optional[int] = None

    @classmethod
    def build(cls, source: Union[FieldGraphSpec, DenseGraph], profile: Optional[SpectralProfile] = None):
        if isinstance(source, FieldGraphSpec):
            G = source.build()
            return cls(G, profile or spectral_profile(G), source.family, source.q, source.t)
        G = source
        t = None if G.labels is None else int(G.labels.shape[1])
        return cls(G, profile or spectral_profile(G), "custom", G.q, t)

    def row(self, suite: str, **kw) -> dict:
        base = {"suite": suite, "family": self.family, "q": self.q, "t": self.t, "n": self.G.n,
                "d": self.P.d, "lambda": self.P.lam, "U_size": None, "Uprime_size": None,
                "trial": None, "seed": None, "metric": "", "value": None, "bound": None, "pass": "NA"}
        base.update(kw)
        return base

    def graph_info(self) -> dict:
        return {"family": self.family, "q": self.q, "t": self.t, "n": self.G.n, "d": self.P.d,
                "lambda": self.P.lam, "lambda_without_loops": self.P.lam_without_loops,
                "loops": self.G.loops, "hash": self.G.digest()}


def sample_subset(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    if not 0 <= size <= n:
        raise ValueError(f"subset size {size} outside [0, {n}]")
    return np.sort(rng.choice(n, size=size, replace=False)).astype(np.int64)


def _verdict(value, bound, rel: float = 1e-12) -> str:
    return "PASS" if value <= bound * (1 + rel) + rel else "FAIL"


# ---------------------------------------------------------------------------
# counting inequalities


def count_inequalities(ctx: GraphContext, U: np.ndarray, K: float, budget: int = DEFAULT_BUDGET) -> tuple[list, dict]:
    """Evaluate every finite-form counting inequality on one sampled ``U``.

    Returns ``(metric rows, census)`` where each row is
    ``(metric, value, bound, verdict)`` with ``value <= bound`` required.
    """
    G, n, d, lam = ctx.G, ctx.G.n, ctx.P.d, ctx.P.lam
    if d is None:
        raise ValueError("count inequalities need a regular graph")
    Up = prune_by_degree(G, U, d, n)
    u, m = U.size, Up.size
    r = d / n
    out: list = []
    census: dict = {"U_size": u, "Uprime_size": m}

    def add(metric, value, bound, asserted=True):
        out.append((metric, value, bound, _verdict(value, bound) if asserted else "NA"))

    for mm in (3, 4, 5, 6):
        cm = count_cycles(G, U, mm)
        census[f"C{mm}(U)"] = cm
        add(f"C{mm}", abs(cm - u**mm * r**mm),
            K * (lam * u ** (mm - 1) * r ** (mm - 1) + lam ** (mm - 2) * u**2 * r))
    if u == n:
        p1 = count_paths(G, U, 1)
        add("P1_identity", p1, 2 * G.edge_count() + G.loops)
        if p1 != 2 * G.edge_count() + G.loops:
            out[-1] = ("P1_identity", p1, 2 * G.edge_count() + G.loops, "FAIL")

    h1 = count_H1(G, Up)
    h2 = count_H2(G, Up)
    h4 = count_H4(G, Up)
    h3m = count_H3minus(G, Up)
    census.update(H1=h1, H2=h2, H4=h4, H3minus=h3m)
    add("H1", abs(h1 - m**5 * r**5), K * (lam**2 * m**3 * r**2 + lam * m**4 * r**4))
    add("H2", abs(h2 - m**5 * r**6), K * lam**2 * m**3 * r**2)
    if m >= 2:
        gamma = max_common_neighbors(G, Up)
        Lam = min(gamma, 2 * u * d / n)
        census["gamma"] = gamma
        add("H2_gamma", abs(h2 - m**5 * r**6), K * lam**2 * m**2 * r * Lam)
        # coincident pairs (u = y) enter the degenerate count with cn = degree
        gamma_all = max(gamma, int(G.adj[np.ix_(Up, Up)].sum(axis=1).max()))
        census["gamma_with_coincident"] = gamma_all
        add("diag:H2_gamma_coincident", abs(h2 - m**5 * r**6),
            K * lam**2 * m**2 * r * min(gamma_all, 2 * u * d / n), asserted=False)
    add("H4", h4, K * m**6 * r**7)
    add("diag:H4_with_lambda4", h4, K * (m**6 * r**7 + lam**4 * m**2 * r), asserted=False)
    add("H3minus", h3m, K * (m**6 * r**7 + lam**2 * m**4 * r**4 + lam * m**5 * r**5
                             + lam**2 * m**4 * r**3.5 + lam**3 * m**3 * r**2.5 + lam**4 * m**2 * r))
    try:
        h3 = count_H3(G, Up, budget)
        h3p = count_H3plus(G, Up, budget)
    except BudgetExceeded:
        out.append(("H3plus", None, None, "SKIPPED"))
    else:
        census.update(H3=h3, H3plus=h3p)
        add("H3plus", abs(h3p - h3 * r),
            K * lam * math.sqrt(h2 * m * r) * math.sqrt(m**6 * r**8 + lam * h2))
    return out, census


def verify_count_theorems(
    source: Union[FieldGraphSpec, DenseGraph],
    sizes: Sequence[int],
    trials: int = 10,
    K: float = 10.0,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    profile: Optional[SpectralProfile] = None,
) -> SuiteResult:
    ctx = GraphContext.build(source, profile)
    res = SuiteResult("counts")
    for size in sizes:
        for trial in range(trials):
            t0 = time.perf_counter()
            rng = trial_rng(seed, size, trial)
            U = sample_subset(rng, ctx.G.n, int(size))
            try:
                metrics, census = count_inequalities(ctx, U, K, budget)
            except BudgetExceeded as exc:
                res.rows.append(ctx.row("counts", U_size=int(size), trial=trial, seed=seed,
                                        metric="all", value=None, **{"pass": "SKIPPED"}))
                res.records.append({"U_size": int(size), "trial": trial, "seed": [seed, int(size), trial],
                                    "skipped": str(exc)})
                continue
            for metric, value, bound, verdict in metrics:
                res.rows.append(ctx.row("counts", U_size=int(size), Uprime_size=census["Uprime_size"],
                                        trial=trial, seed=seed, metric=metric, value=value,
                                        bound=bound, **{"pass": verdict}))
            res.records.append({
                "graph": ctx.G.digest(), "U_size": int(size), "trial": trial,
                "seed": [seed, int(size), trial], "Uprime_size": census["Uprime_size"],
                "census": census, "K": K,
                "checks": [{"metric": mt, "value": v, "bound": b,
                            "ratio": (None if v is None or not b else v / b), "pass": vd}
                           for mt, v, b, vd in metrics],
            })
            res.timing[f"{size}:{trial}"] = time.perf_counter() - t0
    asserted = [r for r in res.rows if not r["metric"].startswith("diag:")]
    res.summary = {"graph": ctx.graph_info(), "rows": len(asserted),
                   "failed": sum(r["pass"] != "PASS" for r in asserted),
                   "pass": all(r["pass"] == "PASS" for r in asserted)}
    return res


# ---------------------------------------------------------------------------
# VC sweep


def vc_sweep(
    source: Union[FieldGraphSpec, DenseGraph],
    sizes: Sequence[int],
    trials: int = 3,
    target_k: int = 3,
    budget: int = 10**5,
    seed: int = 0,
    exact: bool = True,
    exact_budget: int = 10**6,
    threshold_C: float = 1.0,
    profile: Optional[SpectralProfile] = None,
) -> SuiteResult:
    """Empirical VC-dimension of H(U) over random subsets of each size.

    Threshold curves are tabulated next to the measurements but never
    asserted: the theorems carry unspecified constants.
    """
    ctx = GraphContext.build(source, profile)
    res = SuiteResult("vc-sweep")
    ths = applicable(ctx.family, ctx.t or 0) if ctx.q else applicable("custom", 0)[:2]
    thvals = {}
    for ts in ths:
        src = {"n": ctx.G.n, "d": ctx.P.d, "lam": ctx.P.lam, "q": ctx.q, "t": ctx.t}
        try:
            thvals[ts.name] = threshold_eval(ts.with_constant(threshold_C), src)
        except (ValueError, TypeError, ZeroDivisionError):
            continue
    medians = []
    for size in sizes:
        found = []
        for trial in range(trials):
            t0 = time.perf_counter()
            rng = trial_rng(seed, size, trial)
            U = sample_subset(rng, ctx.G.n, int(size))
            rec = {"graph": ctx.G.digest(), "U_size": int(size), "trial": trial,
                   "seed": [seed, int(size), trial], "vc": {}}
            lower = 0
            if U.size:
                w1 = vc_at_least(ctx.G, U, 1, budget=budget, seed=int(rng.integers(2**32)))
                lower = 1 if w1 is not None else 0
            for k in range(2, target_k + 1):
                w = vc_at_least(ctx.G, U, k, budget=budget, seed=int(rng.integers(2**32)))
                ok = w is not None
                rec["vc"][f"at_least_{k}"] = w.to_json() if ok else None
                res.rows.append(ctx.row("vc-sweep", U_size=int(size), trial=trial, seed=seed,
                                        metric=f"vc_at_least_{k}", value=int(ok)))
                if ok:
                    lower = max(lower, k)
            rec["vc"]["lower_bound"] = lower
            value = lower
            if exact and U.size:
                try:
                    r = vc_dimension_exact(ctx.G, U, max_k=max(target_k + 1, 1), budget=exact_budget)
                    rec["vc"]["exact"] = r.dimension if r.exact else None
                    rec["vc"]["exact_status"] = "exact" if r.exact else "lower-bound-only"
                    rec["vc"]["exact_witness"] = r.witness.to_json()
                    value = max(lower, r.dimension)
                    res.rows.append(ctx.row("vc-sweep", U_size=int(size), trial=trial, seed=seed,
                                            metric="vc_exact" if r.exact else "vc_exact_lower",
                                            value=r.dimension))
                except VCBudgetExceeded as exc:
                    rec["vc"]["exact"] = None
                    rec["vc"]["exact_status"] = f"budget: lower bound {exc.lower_bound}"
            res.rows.append(ctx.row("vc-sweep", U_size=int(size), trial=trial, seed=seed,
                                    metric="vc_empirical", value=value))
            for name, th in thvals.items():
                res.rows.append(ctx.row("vc-sweep", U_size=int(size), trial=trial, seed=seed,
                                        metric=f"threshold:{name}", value=int(size), bound=th))
            rec["thresholds"] = {name: {"value": th, "U_at_or_above": int(size) >= th}
                                 for name, th in thvals.items()}
            res.records.append(rec)
            res.timing[f"{size}:{trial}"] = time.perf_counter() - t0
            found.append(value)
        medians.append((int(size), float(np.median(found)) if found else 0.0))
    monotone = all(a[1] <= b[1] for a, b in zip(medians, medians[1:]))
    res.summary = {"graph": ctx.graph_info(), "median_vc": medians, "median_monotone": monotone,
                   "thresholds": thvals, "pass": True}
    return res


# ---------------------------------------------------------------------------
# dot-product geometry


def check_quadruples(G: DenseGraph, quads: np.ndarray) -> np.ndarray:
    """Shattered flag per row of ``quads`` under H(V); repeated vertices rejected."""
    quads = np.asarray(quads, dtype=np.int64)
    s = np.sort(quads, axis=1)
    if np.any(s[:, 1:] == s[:, :-1]):
        raise ValueError("quadruple with repeated vertices")
    return shattered_mask(G, np.arange(G.n), quads)


def quadruple_upper_bound_check(
    q: int,
    mode: str = "exhaustive",
    budget: int = 10**7,
    seed: int = 0,
    samples: int = 10**5,
    chunk: int = 20000,
) -> SuiteResult:
    """No 4-set of the 3-dimensional dot-product graph is shattered by H(V)."""
    G = dot_product_graph(q, 3)
    ctx = GraphContext.build(G)
    ctx.family, ctx.t = "dotproduct", 3
    res = SuiteResult("quadruple")
    n = G.n
    checked = 0
    bad = []
    if mode == "exhaustive":
        total = math.comb(n, 4)
        if total > budget:
            raise BudgetExceeded(f"C({n},4) = {total} quadruples exceed budget {budget}", total, budget)
        it = itertools.combinations(range(n), 4)
        while True:
            block = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, chunk)), dtype=np.int64)
            if block.size == 0:
                break
            block = block.reshape(-1, 4)
            hit = check_quadruples(G, block)
            checked += block.shape[0]
            bad.extend(block[hit].tolist())
    elif mode == "randomized":
        if samples > budget:
            raise BudgetExceeded(f"{samples} samples exceed budget {budget}", samples, budget)
        rng = trial_rng(seed, q)
        pool = np.arange(n)
        while checked < samples:
            m = min(chunk, samples - checked)
            block = _sample_sets(rng, pool, 4, m)
            hit = check_quadruples(G, block)
            checked += m
            bad.extend(block[hit].tolist())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    counter = [is_shattered(G, None, x).to_json() for x in bad[:20]]
    res.rows.append(ctx.row("quadruple", seed=seed, metric=f"shattered_4sets:{mode}",
                            value=len(bad), bound=0, **{"pass": "PASS" if not bad else "FAIL"}))
    res.records.append({"q": q, "mode": mode, "checked": checked, "shattered": len(bad),
                        "counterexamples": counter})
    res.summary = {"q": q, "mode": mode, "checked": checked, "shattered": len(bad), "pass": not bad}
    return res


def unit_vectors(G: DenseGraph) -> np.ndarray:
    """Vertices of a labelled field graph with x.x = 1."""
    if G.labels is None or G.q is None:
        raise ValueError("graph has no field labels")
    return np.flatnonzero((G.labels * G.labels).sum(axis=1) % G.q == 1)


def geometry_checks(q: int, t: int = 3, budget: int = DEFAULT_BUDGET) -> SuiteResult:
    """(a) distinct vertices share at most q^(t-2) neighbours;
    (b) for t = 3, no H3- copy has a non-unit vector in the x role."""
    G = dot_product_graph(q, t)
    ctx = GraphContext.build(G)
    ctx.family, ctx.t = "dotproduct", t
    res = SuiteResult("geometry")
    gamma = max_common_neighbors(G, None)
    limit = q ** (t - 2)
    res.rows.append(ctx.row("geometry", metric="max_common_neighbors", value=gamma, bound=limit,
                            **{"pass": _verdict(gamma, limit)}))
    rec = {"q": q, "t": t, "max_common_neighbors": gamma, "bound": limit}
    if gamma > limit:
        C = G.adj.astype(np.int64) @ G.adj.astype(np.int64)
        np.fill_diagonal(C, -1)
        a, b = np.unravel_index(np.argmax(C), C.shape)
        rec["pair_witness"] = [int(a), int(b)]
    if t == 3:
        unit = set(unit_vectors(G).tolist())
        nonunit = [v for v in range(G.n) if v not in unit]
        doms = {"x": nonunit}
        cnt = count_pattern_bruteforce(G, None, H3MINUS, budget=budget, role_domains=doms)
        inj = count_pattern_bruteforce(G, None, H3MINUS.injective(), budget=budget, role_domains=doms)
        res.rows.append(ctx.row("geometry", metric="H3minus_nonunit_x", value=cnt, bound=0,
                                **{"pass": _verdict(cnt, 0)}))
        res.rows.append(ctx.row("geometry", metric="diag:H3minus_nonunit_x_injective", value=inj, bound=0))
        rec.update(H3minus_nonunit_x=cnt, H3minus_nonunit_x_injective=inj, unit_vectors=len(unit))
        if cnt:
            w = next(iter_embeddings(G, None, H3MINUS, role_domains=doms))
            rec["H3minus_witness"] = dict(zip(H3MINUS.roles, w))
            rec["H3minus_witness_labels"] = {r: G.labels[v].tolist() for r, v in zip(H3MINUS.roles, w)}
            wi = next(iter_embeddings(G, None, H3MINUS.injective(), role_domains=doms), None)
            if wi is not None:
                rec["H3minus_injective_witness_labels"] = {r: G.labels[v].tolist()
                                                           for r, v in zip(H3MINUS.roles, wi)}
    res.records.append(rec)
    asserted = [r for r in res.rows if not r["metric"].startswith("diag:")]
    res.summary = {**{k: v for k, v in rec.items() if not isinstance(v, dict)},
                   "pass": all(r["pass"] == "PASS" for r in asserted)}
    return res


def selector_condition_check(
    source: Union[FieldGraphSpec, DenseGraph],
    sample_triples: int = 100,
    seed: int = 0,
) -> SuiteResult:
    """Fraction of random distinct triples admitting a selector triple in V."""
    ctx = GraphContext.build(source)
    G = ctx.G
    res = SuiteResult("selector")
    rng = trial_rng(seed, 0)
    ok = 0
    misses = []
    for i in range(sample_triples):
        v = rng.choice(G.n, size=3, replace=False) if G.n >= 3 else None
        if v is None:
            break
        sel = find_selector_triple(G, None, *v)
        if sel is None:
            misses.append([int(x) for x in v])
        else:
            ok += 1
    frac = ok / sample_triples if sample_triples else 0.0
    res.rows.append(ctx.row("selector", seed=seed, metric="selector_success_fraction", value=frac))
    res.records.append({"triples": sample_triples, "successes": ok, "misses": misses[:50]})
    res.summary = {"triples": sample_triples, "successes": ok, "fraction": frac, "pass": True}
    return res


def spectral_bound_check(spec: FieldGraphSpec, slack: float = 1e-6) -> SuiteResult:
    """lambda <= 2 q^((t-1)/2); dot-product graphs exactly q^(t-1)-regular."""
    ctx = GraphContext.build(spec)
    res = SuiteResult("spectral")
    bound = 2 * spec.q ** ((spec.t - 1) / 2)
    res.rows.append(ctx.row("spectral", metric="lambda", value=ctx.P.lam, bound=bound + slack,
                            **{"pass": _verdict(ctx.P.lam, bound + slack)}))
    if ctx.P.lam_without_loops is not None:
        res.rows.append(ctx.row("spectral", metric="diag:lambda_without_loops",
                                value=ctx.P.lam_without_loops, bound=bound + slack))
    if spec.family == "dotproduct":
        deg = ctx.G.degrees()
        want = spec.q ** (spec.t - 1)
        exact = bool(np.all(deg == want))
        res.rows.append(ctx.row("spectral", metric="regular_degree", value=int(deg.max()), bound=want,
                                **{"pass": "PASS" if exact else "FAIL"}))
    res.summary = {"graph": ctx.graph_info(), "bound": bound,
                   "pass": all(r["pass"] in ("PASS", "NA") for r in res.rows)}
    return res
