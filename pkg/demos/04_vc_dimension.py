"""
VC-dimension of neighbourhood families
======================================

For U a vertex subset, H(U) = {h_v : v in U} with h_v(u) = 1 iff u ~ v.
"""

# %%
from pathlib import Path

from vclab import dot_product_graph, find_selector_triple, is_shattered, vc_at_least, vc_dimension_exact
from vclab.builders import cycle_graph

w = is_shattered(cycle_graph(5), None, [0, 2])
print(w.to_json())   # each mask is witnessed by the smallest vertex realising it

# %%
# Exact levelwise search.
G = dot_product_graph(3, 3)
r = vc_dimension_exact(G)
print(r.dimension, r.exact, r.level_counts, r.witness.X)

# %%
# Randomised lower bound: a shattered triple in the q = 7 graph.
G7 = dot_product_graph(7, 3)
w = vc_at_least(G7, None, 3, budget=10**6, seed=0)
print(w.X, w.validate(G7))

# %%
# Selector triples: u_i adjacent to v_j exactly when i == j.
print(find_selector_triple(G7, None, 0, 1, 2))

# %%
# No 4-set is shattered in the 3-dimensional dot-product graph.
from vclab.harness import quadruple_upper_bound_check

print(quadruple_upper_bound_check(3, "exhaustive").summary)

# %%
# Sweep |U| and write CSV, JSON, a data file and an SVG chart.
from vclab import FieldGraphSpec
from vclab.harness import vc_sweep, write_suite

res = vc_sweep(FieldGraphSpec("dotproduct", 5, 3), [10, 30, 60, 124], trials=3, target_k=3, exact=False)
print(res.summary["median_vc"], res.summary["thresholds"])
print(write_suite(res, Path(__file__).with_name("out")))
