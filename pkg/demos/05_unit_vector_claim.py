"""
Common neighbours and unit vectors in the dot-product graph
===========================================================

Two distinct vertices of the 3-dimensional dot-product graph share at most
q neighbours (two affine planes meet in a line or not at all).  The second
check asks whether every H3- copy puts a unit vector (x.x = 1) in the x
role.  It does not: below is an explicit injective copy with x.x = 2.
"""

# %%
import numpy as np

from vclab import FieldVector, dot, dot_product_graph
from vclab.harness import geometry_checks

res = geometry_checks(3, 3)
for r in res.rows:
    print(r["metric"], r["value"], r["bound"], r["pass"])

# %%
# Verify the counterexample directly from the coordinates.
q = 3
copy = {"x": (0, 1, 1), "y": (0, 0, 1), "z": (1, 0, 1), "u": (1, 1, 0), "v": (0, 1, 0), "x'": (2, 0, 1)}
edges = "x-y y-z z-u u-x x-x' x'-y x-v v-u x-z".split()
vec = {k: FieldVector(c, q) for k, c in copy.items()}
print(all(dot(vec[a], vec[b]) == 1 for a, b in (e.split("-") for e in edges)))
print("x.x =", dot(vec["x"], vec["x"]))

# %%
G = dot_product_graph(q, 3)
idx = {tuple(l): i for i, l in enumerate(G.labels)}
ids = [idx[c] for c in copy.values()]
print(len(set(ids)) == 6, all(G.adj[idx[copy[a]], idx[copy[b]]] for a, b in (e.split("-") for e in edges)))
