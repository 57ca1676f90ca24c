"""
Counting configurations
=======================

Homomorphism counts of paths, cycles and the configurations H1 ... H4.
Every fast kernel has an independent brute-force counterpart.
"""

# %%
from vclab import census, count_pattern_bruteforce, pattern_by_name, random_graph
from vclab.builders import complete_bipartite, complete_graph, cycle_graph
from vclab.homcount import H3MINUS, count_H1, count_H2, count_H4

print(count_H1(cycle_graph(4), None))          # 64
print(count_H2(complete_bipartite(2, 3), None))  # 180
print(count_H4(complete_graph(3), None))       # 54

# %%
# Fast kernels against the backtracking oracle on a random graph and subset.
G = random_graph(11, 0.5, seed=7)
U = [0, 2, 3, 5, 7, 8, 10]
fast = census(G, U)
slow = {name: count_pattern_bruteforce(G, U, pattern_by_name(name)) for name in fast}
print(all(fast[k] == slow[k] for k in fast))
print(fast)

# %%
# Injective copies only: add distinctness constraints to a pattern.
print(count_pattern_bruteforce(G, None, H3MINUS), count_pattern_bruteforce(G, None, H3MINUS.injective()))

# %%
# Count inequalities on random subsets, pruned to U'.  Rows that fail are
# printed with their value / bound ratio.
from vclab import FieldGraphSpec
from vclab.harness import verify_count_theorems

res = verify_count_theorems(FieldGraphSpec("distance", 13, 2), [85, 127, 169], trials=3, K=10)
for r in res.failures():
    print(r["metric"], r["U_size"], r["trial"], round(r["value"] / r["bound"], 2))
print(res.summary["rows"], "asserted rows,", res.summary["failed"], "failed")
