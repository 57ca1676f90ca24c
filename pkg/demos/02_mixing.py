"""
Expander mixing
===============

|<f, A g> - d n E(f) E(g)| <= lambda |f| |g| holds for every regular graph.
The randomised check below draws +-1 and 0/1 vectors; the tensor version
works on non-negative functions on V x V.
"""

# %%
import numpy as np

from vclab import distance_graph, dot_product_graph
from vclab.harness import mixing_check, tensor_mixing_check
from vclab.harness.mixing import mixing_residual

G = distance_graph(5, 2)
rep = mixing_check(G, trials=1000, seed=0)
print(rep.passed, round(rep.max_ratio, 4))

# %%
# Indicator vectors turn the inequality into an edge count between two sets.
S = np.zeros(G.n); S[:10] = 1
T = np.zeros(G.n); T[10:] = 1
print(mixing_residual(G, 4, S, T))

# %%
rep = tensor_mixing_check(dot_product_graph(3, 2), trials=200, seed=0)
print(rep.passed, round(rep.max_ratio_tensor, 4))
