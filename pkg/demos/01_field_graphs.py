"""
Graphs over finite fields
=========================

Build the distance graph and the dot-product graph, look at degrees, loops
and the spectrum, and compare lambda with 2 q^((t-1)/2).
"""

# %%
import numpy as np

from vclab import FieldGraphSpec, distance_graph, dot_product_graph, spectral_profile

G = distance_graph(5, 2)
print(G)                       # 25 vertices, 4-regular, no loops
print(G.labels[np.flatnonzero(G.adj[0])])  # the unit circle around the origin

# %%
# The dot-product graph drops the origin.  Vertices with x.x = 1 carry a loop.
D = dot_product_graph(3, 2)
print(D.n, D.regular_degree(), D.loops)
print(D.labels[np.diag(D.adj)])

# %%
# Spectra.  lambda is taken on the matrix as stored (loops included);
# the loopless value is kept alongside for comparison.
for fam in ("distance", "dotproduct"):
    for q, t in ((7, 2), (13, 2), (3, 3), (5, 3)):
        spec = FieldGraphSpec(fam, q, t)
        P = spectral_profile(spec.build())
        bound = 2 * q ** ((t - 1) / 2)
        print(f"{spec.key:28s} d={P.d:4d} lambda={P.lam:8.4f} bound={bound:8.4f} "
              f"loopless={P.lam_without_loops}")

# %%
# Arbitrary polynomial relations: x1*y1 + x2*y2 reproduces the dot-product graph.
from vclab import Polynomial

spec = FieldGraphSpec("polynomial", 5, 2, Polynomial.parse("x1*y1 + x2*y2", 2), exclude_origin=True)
print(spec.build() == dot_product_graph(5, 2))
