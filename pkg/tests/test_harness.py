import json
import math

import numpy as np
import pytest

from vclab.builders import FieldGraphSpec, Polynomial, complete_graph, cycle_graph, distance_graph, dot_product_graph
from vclab.graph import spectral_profile
from vclab.harness import io
from vclab.harness.mixing import mixing_check, mixing_residual, tensor_mixing_check, tensor_terms
from vclab.harness.runner import run_suite, write_suite
from vclab.harness.suites import (
    geometry_checks,
    quadruple_upper_bound_check,
    selector_condition_check,
    verify_count_theorems,
    vc_sweep,
)
from vclab.harness.thresholds import THRESHOLDS, ThresholdSpec, threshold_eval


def test_threshold_examples():
    assert threshold_eval(THRESHOLDS["spectral_vc2"], {"n": 961, "d": 32, "lam": 11}) == pytest.approx(11 * 961 / 32)
    assert threshold_eval(THRESHOLDS["dotproduct3_vc3"], (5, 3)) == pytest.approx(5 ** 2.5)
    assert threshold_eval(THRESHOLDS["dotproduct_vc3"], (7, 3)) == pytest.approx(7 ** (20 / 7))
    assert threshold_eval(THRESHOLDS["dotproduct3_vc3"].with_constant(2.0), (5, 3)) == pytest.approx(2 * 5 ** 2.5)
    with pytest.raises(ValueError):
        ThresholdSpec("x", lambda n, d, lam: 1.0, "spectral", C=0)


def test_mixing_trivial_cases():
    G = distance_graph(5, 2)
    one = np.ones(G.n)
    assert mixing_residual(G, 4, one, one) == pytest.approx(0, abs=1e-9)
    S = np.zeros(G.n)
    S[:7] = 1
    T = np.zeros(G.n)
    T[5:15] = 1
    e = int(G.adj[np.ix_(S > 0, T > 0)].sum())
    assert mixing_residual(G, 4, S, T) == pytest.approx(abs(e - 4 * 7 * 10 / 25))


def test_tensor_all_ones_cancels():
    G = dot_product_graph(3, 2)
    d = 3
    f = np.ones((G.n, G.n))
    lhs, main, _ = tensor_terms(G, d, spectral_profile(G).lam, f, f)
    assert lhs == pytest.approx(main)


def test_tensor_rank_one_reduces_to_scalar():
    G = cycle_graph(9)
    rng = np.random.default_rng(0)
    a, b, c, e = (rng.random(9) for _ in range(4))
    A = G.adj.astype(float)
    lhs, _, _ = tensor_terms(G, 2, 2.0, np.outer(a, b), np.outer(c, e))
    assert lhs == pytest.approx(float(a @ A @ c) * float(b @ A @ e))


def test_mixing_checks_pass_on_field_graphs():
    assert mixing_check(distance_graph(5, 2), trials=200).passed
    rep = tensor_mixing_check(dot_product_graph(3, 2), trials=50)
    assert rep.passed and 0 <= rep.max_ratio_tensor <= 1


def test_mixing_violation_is_reported_with_seed():
    G = cycle_graph(10)
    P = spectral_profile(G)
    fake = type(P)(P.eigenvalues, P.d, 0.01)
    rep = mixing_check(G, trials=20, seed=3, profile=fake)
    assert not rep.passed and rep.violations[0]["seed"][0] == 3


def test_graph_cache_roundtrip(tmp_path):
    spec = FieldGraphSpec("dotproduct", 5, 2)
    G = spec.build()
    path = tmp_path / "g.json"
    io.save_graph(path, G, spec)
    H, spec2 = io.load_graph_with_spec(path)
    assert H == G and H.digest() == G.digest() and spec2 == spec
    np.testing.assert_array_equal(H.labels, G.labels)


def test_graph_cache_detects_corruption(tmp_path):
    doc = io.graph_to_doc(cycle_graph(9))
    doc["hash"] = "0" * 64
    with pytest.raises(io.FormatError):
        io.doc_to_graph(doc)


def test_polynomial_cache_roundtrip(tmp_path):
    spec = FieldGraphSpec("polynomial", 3, 2, Polynomial.parse("x1*y1 + x2*y2 + 1", 2))
    path = tmp_path / "p.json"
    io.save_graph(path, spec.build(), spec)
    assert io.load_graph(path) == spec.build()


def test_spectrum_cache_roundtrip():
    G = distance_graph(5, 2)
    P = spectral_profile(G)
    Q = io.doc_to_spectrum(json.loads(json.dumps(io.spectrum_to_doc(G, P))), G)
    assert Q.d == P.d and Q.lam == pytest.approx(P.lam, rel=1e-11)
    with pytest.raises(io.FormatError):
        io.doc_to_spectrum(io.spectrum_to_doc(G, P), cycle_graph(4))


def test_csv_layout():
    text = io.csv_text([{"suite": "s", "n": 5, "lambda": 1 / 3, "pass": "PASS"}], timestamp="T0")
    lines = text.splitlines()
    assert lines[0] == "# vclab-csv-v1 generated=T0"
    assert lines[1] == ",".join(io.CSV_COLUMNS)
    assert lines[2].startswith("s,,,,5,,0.333333333333,")


def test_report_timestamp_on_first_line_only():
    a = io.report_text([{"x": 2 ** 70}], {"m": 1}, timestamp="A")
    b = io.report_text([{"x": 2 ** 70}], {"m": 1}, timestamp="B")
    assert a.split("\n", 1)[1] == b.split("\n", 1)[1]
    doc = json.loads(a)
    assert doc["schema"] == io.REPORT_SCHEMA and doc["records"][0]["x"] == str(2 ** 70)


def test_config_parsing():
    cfg = io.parse_config("""
# comment
[graph]
family = distance
q = 5
t = 2
[output]
dir = results
[mixing]
trials = 10   ; inline comment
[counts]
sizes = 0.5 1.0
""")
    assert cfg.graph_spec() == FieldGraphSpec("distance", 5, 2)
    assert cfg.out == "results"
    assert cfg.suites == [("mixing", {"trials": "10"}), ("counts", {"sizes": "0.5 1.0"})]
    with pytest.raises(io.FormatError):
        io.parse_config("[mixing]\ntrials = 3\n")
    with pytest.raises(io.FormatError):
        io.parse_config("[graph]\nfamily = distance\n")


def test_pattern_file():
    pat = io.parse_pattern("[pattern]\nk = 3\nrequired = 0-1 1-2\ndistinct = 0-2\n")
    assert pat.k == 3 and pat.required == {(0, 1), (1, 2)} and pat.distinct == {(0, 2)}


def test_count_suite_edgeless_subset_rows_pass():
    res = verify_count_theorems(distance_graph(5, 2), [0, 2], trials=2)
    asserted = [r for r in res.rows if not r["metric"].startswith("diag:")]
    assert all(r["pass"] == "PASS" for r in asserted if r["U_size"] == 0)


def test_count_suite_identity_row():
    res = verify_count_theorems(distance_graph(5, 2), [25], trials=1)
    row = next(r for r in res.rows if r["metric"] == "P1_identity")
    assert row["pass"] == "PASS" and row["value"] == 25 * 4


def test_count_suite_budget_marks_skipped():
    res = verify_count_theorems(distance_graph(5, 2), [20], trials=1, budget=10)
    skipped = [r for r in res.rows if r["pass"] == "SKIPPED"]
    assert skipped and skipped[0]["metric"] == "H3plus" and not res.passed


def test_vc_sweep_single_vertex_and_full():
    res = vc_sweep(FieldGraphSpec("dotproduct", 3, 3), [1, 26], trials=1, target_k=3)
    emp = {r["U_size"]: r["value"] for r in res.rows if r["metric"] == "vc_empirical"}
    assert emp == {1: 0, 26: 3}
    assert res.summary["median_vc"] == [(1, 0.0), (26, 3.0)]


def test_quadruple_exhaustive_budget_error():
    from vclab.homcount import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        quadruple_upper_bound_check(3, "exhaustive", budget=100)


def test_geometry_t2_pair_bound():
    res = geometry_checks(3, 2)
    row = next(r for r in res.rows if r["metric"] == "max_common_neighbors")
    assert row["value"] <= 1 and row["pass"] == "PASS"


def test_selector_suite_edge_cases():
    from vclab.builders import empty_graph
    assert selector_condition_check(empty_graph(8), 20).summary["successes"] == 0
    assert selector_condition_check(complete_graph(10), 20).summary["successes"] == 0


def test_suite_outputs_reproducible(tmp_path):
    spec = FieldGraphSpec("distance", 5, 2)
    bodies = []
    for run in ("a", "b"):
        res = run_suite("counts", {"sizes": "0.5 1.0", "trials": "2", "seed": "9"}, spec)
        files = write_suite(res, tmp_path / run)
        bodies.append((io.csv_body(open(files["csv"]).read()),
                       open(files["json"]).read().split("\n", 1)[1]))
    assert bodies[0] == bodies[1]
