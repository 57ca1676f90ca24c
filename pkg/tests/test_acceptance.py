"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line (printed in the terminal summary)
and then asserts.  All tolerances, sizes and budgets are pinned below.
"""

import time

import numpy as np
import pytest

from vclab.builders import FieldGraphSpec, complete_graph, cycle_graph, empty_graph, random_graph
from vclab.graph import spectral_profile
from vclab.harness import io
from vclab.harness.mixing import TENSOR_MAX_N, mixing_check, tensor_mixing_check
from vclab.harness.runner import run_suite
from vclab.harness.suites import (
    geometry_checks,
    quadruple_upper_bound_check,
    spectral_bound_check,
    verify_count_theorems,
)
from vclab.homcount import count_named, count_pattern_bruteforce, pattern_by_name
from vclab.vcdim import vc_at_least, vc_dimension_exact

# --- pinned tolerances and sizes -------------------------------------------
ORACLE_GRAPHS = 102
ORACLE_MAX_N = 12
ORACLE_P = (0.2, 0.5, 0.8)
ORACLE_SUBSETS = 3
ORACLE_SECONDS = 300
FAST_COUNTERS = ("P1", "P2", "P3", "P4", "C1", "C2", "C3", "C4", "C5", "C6",
                 "H1", "H2", "H3", "H3plus", "H3minus", "H4")

SPECTRAL_SLACK = 1e-6
SPECTRAL_SECONDS = 120
T2_PRIMES = (5, 7, 11, 13, 17, 19, 23)
T3_PRIMES = (3, 5, 7)

MIXING_TRIALS = 1000
TENSOR_TRIALS = 200
MIXING_TOL = 1e-9
MIXING_SECONDS = 300

COUNT_GRAPHS = (("distance", 13, 2), ("dotproduct", 11, 2))
COUNT_FRACTIONS = (0.5, 0.75, 1.0)
COUNT_TRIALS = 10
COUNT_K = 10.0
COUNT_SECONDS = 600

GEOMETRY_Q = (3, 5)

QUAD_EXHAUSTIVE_Q = 3
QUAD_EXHAUSTIVE_TOTAL = 14950
QUAD_RANDOM_Q = 5
QUAD_RANDOM_SAMPLES = 10**5
QUAD_SECONDS = 600

VC3_Q = (5, 7)
VC_BUDGET = 10**6

SEED = 0


def field_specs():
    specs = []
    for fam in ("distance", "dotproduct"):
        specs += [FieldGraphSpec(fam, q, 2) for q in T2_PRIMES]
        specs += [FieldGraphSpec(fam, q, 3) for q in T3_PRIMES]
    return specs


@pytest.fixture(scope="module")
def built():
    return {s.key: (s, s.build()) for s in field_specs()}


@pytest.fixture(scope="module")
def profiles(built):
    return {k: spectral_profile(G) for k, (_, G) in built.items()}


def test_criterion_1_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    mismatches = []
    checked = 0
    for i in range(ORACLE_GRAPHS):
        n = ORACLE_MAX_N - i % 4
        p = ORACLE_P[i % len(ORACLE_P)]
        G = random_graph(n, p, 1000 + i)
        rng = np.random.default_rng([SEED, i])
        subsets = [None] + [np.sort(rng.choice(n, size=int(rng.integers(1, n)), replace=False))
                            for _ in range(ORACLE_SUBSETS)]
        for U in subsets:
            for name in FAST_COUNTERS:
                fast = count_named(G, U, name)
                slow = count_pattern_bruteforce(G, U, pattern_by_name(name))
                checked += 1
                if fast != slow:
                    mismatches.append((i, name, fast, slow))
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < ORACLE_SECONDS
    verdict("1 oracle equivalence", ok,
            f"{ORACLE_GRAPHS} graphs, {checked} comparisons, {len(mismatches)} mismatches, {dt:.1f}s")
    assert not mismatches, mismatches[:5]
    assert dt < ORACLE_SECONDS


def test_criterion_2_spectral_bounds(verdict, built):
    t0 = time.perf_counter()
    bad = []
    for key, (spec, _) in built.items():
        res = spectral_bound_check(spec, slack=SPECTRAL_SLACK)
        if not res.passed:
            bad.append((key, [(r["metric"], r["value"], r["bound"]) for r in res.failures()]))
    dt = time.perf_counter() - t0
    ok = not bad and dt < SPECTRAL_SECONDS
    verdict("2 spectral bounds", ok, f"{len(built)} graphs, {len(bad)} violations, {dt:.1f}s")
    assert not bad, bad
    assert dt < SPECTRAL_SECONDS


def test_criterion_3_mixing(verdict, built, profiles):
    t0 = time.perf_counter()
    bad = []
    worst, worst_t, tensor_graphs = 0.0, 0.0, 0
    for key, (_, G) in built.items():
        rep = mixing_check(G, MIXING_TRIALS, SEED, MIXING_TOL, profiles[key])
        worst = max(worst, rep.max_ratio)
        if not rep.passed:
            bad.append((key, "scalar", rep.violations[:1]))
        if G.n <= TENSOR_MAX_N:
            tensor_graphs += 1
            rep = tensor_mixing_check(G, TENSOR_TRIALS, SEED, MIXING_TOL, profiles[key])
            worst_t = max(worst_t, rep.max_ratio_tensor)
            if not rep.passed:
                bad.append((key, "tensor", rep.violations[:1]))
    dt = time.perf_counter() - t0
    ok = not bad and dt < MIXING_SECONDS
    verdict("3 mixing inequalities", ok,
            f"{len(built)} scalar + {tensor_graphs} tensor graphs, max ratio {worst:.3f} / {worst_t:.3f}, "
            f"{len(bad)} violating graphs, {dt:.1f}s")
    assert not bad, bad
    assert dt < MIXING_SECONDS


def test_criterion_4_count_inequalities(verdict):
    t0 = time.perf_counter()
    failed = {}
    rows = 0
    for fam, q, t in COUNT_GRAPHS:
        spec = FieldGraphSpec(fam, q, t)
        n = spec.build().n
        sizes = [int(round(f * n)) for f in COUNT_FRACTIONS]
        res = verify_count_theorems(spec, sizes, COUNT_TRIALS, COUNT_K, SEED)
        asserted = [r for r in res.rows if not r["metric"].startswith("diag:")]
        rows += len(asserted)
        for r in asserted:
            if r["pass"] != "PASS":
                failed.setdefault(f"{spec.key}:{r['metric']}", []).append(
                    round(r["value"] / r["bound"], 2) if r["bound"] else None)
    dt = time.perf_counter() - t0
    ok = not failed and dt < COUNT_SECONDS
    summary = ", ".join(f"{k} x{len(v)} (max ratio {max(x for x in v if x is not None)})"
                        for k, v in failed.items())
    verdict("4 count inequalities", ok,
            f"{rows} asserted rows, {sum(map(len, failed.values()))} failing{': ' + summary if summary else ''}, "
            f"{dt:.1f}s")
    assert not failed, summary
    assert dt < COUNT_SECONDS


@pytest.mark.parametrize("q", GEOMETRY_Q)
def test_criterion_5_geometry(verdict, q):
    res = geometry_checks(q, 3)
    rows = {r["metric"]: r for r in res.rows}
    pair = rows["max_common_neighbors"]
    h3m = rows["H3minus_nonunit_x"]
    pair_ok = pair["pass"] == "PASS" and pair["value"] <= q
    h3m_ok = h3m["pass"] == "PASS" and h3m["value"] == 0
    rec = res.records[0]
    witness = rec.get("H3minus_injective_witness_labels") or rec.get("H3minus_witness_labels")
    verdict(f"5 geometry q={q}", pair_ok and h3m_ok,
            f"max common neighbours {pair['value']} <= {q}: {pair_ok}; "
            f"H3minus copies with non-unit x = {h3m['value']} "
            f"({rec.get('H3minus_nonunit_x_injective')} injective)" + (f", e.g. {witness}" if witness else ""))
    assert pair_ok
    assert h3m_ok, f"{h3m['value']} H3minus copies with non-unit x-vertex"


def test_criterion_6_quadruples(verdict):
    t0 = time.perf_counter()
    ex = quadruple_upper_bound_check(QUAD_EXHAUSTIVE_Q, "exhaustive", seed=SEED)
    rnd = quadruple_upper_bound_check(QUAD_RANDOM_Q, "randomized", seed=SEED, samples=QUAD_RANDOM_SAMPLES)
    dt = time.perf_counter() - t0
    ok = (ex.passed and rnd.passed and ex.summary["checked"] == QUAD_EXHAUSTIVE_TOTAL
          and rnd.summary["checked"] == QUAD_RANDOM_SAMPLES and dt < QUAD_SECONDS)
    verdict("6 no shattered quadruple", ok,
            f"q={QUAD_EXHAUSTIVE_Q}: {ex.summary['checked']} checked, {ex.summary['shattered']} shattered; "
            f"q={QUAD_RANDOM_Q}: {rnd.summary['checked']} sampled, {rnd.summary['shattered']} shattered; {dt:.1f}s")
    assert ok


def test_criterion_7_vc_lower_bounds(verdict, built):
    found3 = {}
    for q in VC3_Q:
        G = FieldGraphSpec("dotproduct", q, 3).build()
        w = vc_at_least(G, None, 3, budget=VC_BUDGET, seed=SEED)
        found3[q] = w is not None and w.validate(G)
    missing2 = []
    for key, (_, G) in built.items():
        w = vc_at_least(G, None, 2, budget=VC_BUDGET, seed=SEED)
        if w is None or not w.validate(G):
            missing2.append(key)
    ok = all(found3.values()) and not missing2
    verdict("7 VC lower bounds", ok,
            f"k=3 witness on dotproduct t=3: {found3}; k=2 found on {len(built) - len(missing2)}/{len(built)}")
    assert all(found3.values()), found3
    assert not missing2, missing2


def test_criterion_8_exact_pins(verdict):
    got = {
        "edgeless": vc_dimension_exact(empty_graph(7)).dimension,
        "K4": vc_dimension_exact(complete_graph(4)).dimension,
        "C5": vc_dimension_exact(cycle_graph(5)).dimension,
    }
    want = {"edgeless": 0, "K4": 1, "C5": 2}
    verdict("8 exact VC pins", got == want, str(got))
    assert got == want


def test_criterion_9_reproducibility(verdict):
    spec = FieldGraphSpec("distance", 7, 2)
    cases = [("counts", {"sizes": "0.5 1.0", "trials": "3", "seed": "11"}, spec),
             ("mixing", {"trials": "100", "seed": "5"}, spec),
             ("vc-sweep", {"sizes": "10 49", "trials": "2", "seed": "2"}, spec),
             ("selector", {"triples": "20", "seed": "4"}, spec),
             ("quadruple", {"q": "3", "mode": "randomized", "samples": "2000", "seed": "8"}, None)]
    differ = []
    for name, opts, src in cases:
        a = io.csv_body(io.csv_text(run_suite(name, opts, src).rows, "run-a"))
        b = io.csv_body(io.csv_text(run_suite(name, opts, src).rows, "run-b"))
        if a != b:
            differ.append(name)
    verdict("9 reproducibility", not differ, f"{len(cases)} suites re-run, differing: {differ or 'none'}")
    assert not differ
