"""Shattering and VC-dimension of the neighbourhood family H(U).

For ``v`` in ``U`` the function ``h_v`` sends ``u`` to 1 iff ``u ~ v``.  A set
``X`` is shattered when the restrictions ``h_v|X`` realise all ``2^|X|``
patterns.  Witness vertices may coincide with members of ``X``; loops then
contribute their own bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .graph import DenseGraph, vertex_set

MAX_K = 20
DEFAULT_RETENTION = 10**6


class ShatterError(ValueError):
    pass


class VCBudgetExceeded(RuntimeError):
    """Search budget exhausted; carries the best certified lower bound."""

    def __init__(self, message: str, lower_bound: int, witness: "ShatterWitness"):
        super().__init__(message)
        self.lower_bound = lower_bound
        self.witness = witness


@dataclass(frozen=True)
class ShatterWitness:
    X: tuple[int, ...]
    witnesses: dict[int, int] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.X)

    def validate(self, G: DenseGraph, U: Optional[Sequence[int]] = None) -> bool:
        Us = set(vertex_set(U, G.n).tolist())
        if set(self.witnesses) != set(range(1 << self.k)):
            return False
        return all(
            v in Us and signature(G, v, self.X) == mask for mask, v in self.witnesses.items()
        )

    def to_json(self) -> dict:
        """``{"X": [...], "witnesses": {bits: vertex}}``; character i of
        ``bits`` is the adjacency to ``X[i]``."""
        return {
            "X": list(self.X),
            "witnesses": {mask_string(m, self.k): v for m, v in sorted(self.witnesses.items())},
        }

    @classmethod
    def from_json(cls, doc: dict) -> ShatterWitness:
        X = tuple(int(x) for x in doc["X"])
        w = {int(s[::-1], 2) if s else 0: int(v) for s, v in doc["witnesses"].items()}
        return cls(X, w)


def mask_string(mask: int, k: int) -> str:
    return "".join("1" if mask >> i & 1 else "0" for i in range(k))


def _check_X(X: Sequence[int], n: int) -> tuple[int, ...]:
    X = tuple(int(x) for x in X)
    if len(set(X)) != len(X):
        raise ShatterError(f"X has repeated vertices: {X}")
    if len(X) > MAX_K:
        raise ShatterError(f"|X|={len(X)} exceeds the cap {MAX_K}")
    if any(not 0 <= x < n for x in X):
        raise ShatterError("X contains an invalid vertex")
    return X


def signature(G: DenseGraph, v: int, X: Sequence[int]) -> int:
    """Bit ``i`` is ``adj[v][X[i]]``."""
    X = _check_X(X, G.n)
    return sum(1 << i for i, x in enumerate(X) if G.adj[v, x])


def _weights(k: int) -> np.ndarray:
    return (1 << np.arange(k, dtype=np.int64))


def signatures(G: DenseGraph, U: np.ndarray, X: Sequence[int]) -> np.ndarray:
    """Signature of every member of ``U`` on ``X``."""
    return G.adj[np.ix_(U, np.asarray(X, dtype=np.int64))].astype(np.int64) @ _weights(len(X))


def is_shattered(G: DenseGraph, U: Optional[Sequence[int]], X: Sequence[int]) -> Optional[ShatterWitness]:
    """Witness map if ``X`` is shattered by ``H(U)``, else ``None``.

    Each pattern is witnessed by the smallest-index vertex of ``U`` realising it.
    """
    X = _check_X(X, G.n)
    Us = vertex_set(U, G.n)
    if not set(X) <= set(Us.tolist()):
        raise ShatterError("X must be a subset of U")
    k = len(X)
    if Us.size < (1 << k):
        return None
    sig = signatures(G, Us, X)
    masks, first = np.unique(sig, return_index=True)
    if masks.size != 1 << k:
        return None
    return ShatterWitness(X, {int(m): int(Us[i]) for m, i in zip(masks, first)})


def _count_distinct_rows(S: np.ndarray) -> np.ndarray:
    """Number of distinct values in each row of an integer matrix."""
    if S.shape[1] == 0:
        return np.zeros(S.shape[0], dtype=np.int64)
    s = np.sort(S, axis=1)
    return 1 + np.count_nonzero(np.diff(s, axis=1), axis=1)


def shattered_mask(G: DenseGraph, Us: np.ndarray, cands: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Boolean per candidate row of ``cands`` (vertex ids): is it shattered by H(Us)?"""
    cands = np.asarray(cands, dtype=np.int64)
    out = np.zeros(cands.shape[0], dtype=bool)
    if cands.shape[0] == 0:
        return out
    k = cands.shape[1]
    if Us.size < (1 << k):
        return out
    A = G.adj[Us].astype(np.int64)  # rows: witnesses v in U
    w = _weights(k)
    for s in range(0, cands.shape[0], chunk):
        block = cands[s:s + chunk]
        # S[c, v] = sum_i adj[v, X_c[i]] << i
        S = np.tensordot(A[:, block], w, axes=([2], [0])).T
        out[s:s + chunk] = _count_distinct_rows(S) == (1 << k)
    return out


@dataclass
class VCResult:
    dimension: int
    witness: ShatterWitness
    exact: bool = True
    checked: int = 0
    level_counts: list = field(default_factory=list)

    def __iter__(self):
        yield self.dimension
        yield self.witness


def vc_dimension_exact(
    G: DenseGraph,
    U: Optional[Sequence[int]] = None,
    max_k: int = MAX_K,
    budget: int = 10**8,
    retention: int = DEFAULT_RETENTION,
) -> VCResult:
    """Largest ``k <= max_k`` with a shattered ``X ⊆ U``, by levelwise search.

    Level ``k+1`` candidates extend shattered ``k``-sets by a larger vertex and
    must have every ``k``-subset shattered (shattering is closed under subsets).
    ``budget`` bounds the number of candidate sets tested; exceeding it raises
    :class:`VCBudgetExceeded` with the certified lower bound.  If a level holds
    more than ``retention`` shattered sets, the search stops there and the
    result is flagged ``exact=False``.
    """
    if max_k > MAX_K:
        raise ShatterError(f"max_k {max_k} exceeds the cap {MAX_K}")
    Us = vertex_set(U, G.n)
    best = ShatterWitness((), {0: int(Us[0])}) if Us.size else ShatterWitness((), {})
    if Us.size == 0:
        return VCResult(0, best, True, 0, [0])
    dim = 0
    checked = 0
    level = np.zeros((1, 0), dtype=np.int64)
    counts = [1]
    while dim < max_k and Us.size >= (1 << (dim + 1)):
        if checked + _extension_count(level, Us) > budget:
            raise VCBudgetExceeded(
                f"VC search exceeded budget {budget} at level {dim + 1}", dim, best)
        cands = _extend(level, Us)
        if cands.shape[0] and dim >= 1:
            cands = _apriori(cands, level, G.n)
        checked += cands.shape[0]
        ok = shattered_mask(G, Us, cands)
        nxt = cands[ok]
        counts.append(int(nxt.shape[0]))
        if nxt.shape[0] == 0:
            break
        dim += 1
        best = is_shattered(G, Us, nxt[0])
        if nxt.shape[0] > retention:
            return VCResult(dim, best, False, checked, counts)
        level = nxt
    return VCResult(dim, best, True, checked, counts)


def _extension_count(level: np.ndarray, Us: np.ndarray) -> int:
    if level.shape[1] == 0:
        return int(Us.size)
    return int((Us.size - np.searchsorted(Us, level[:, -1], side="right")).sum())


def _extend(level: np.ndarray, Us: np.ndarray) -> np.ndarray:
    if level.shape[1] == 0:
        return Us[:, None].copy()
    start = np.searchsorted(Us, level[:, -1], side="right")
    reps = Us.size - start
    base = np.repeat(level, reps, axis=0)
    # for each parent row, the suffix Us[start:]
    offs = np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)
    ext = Us[np.repeat(start, reps) + offs]
    return np.column_stack([base, ext]) if base.size else np.zeros((0, level.shape[1] + 1), dtype=np.int64)


def _keys(rows: np.ndarray, base: int) -> np.ndarray:
    w = base ** np.arange(rows.shape[1], dtype=np.int64)
    return rows @ w


def _apriori(cands: np.ndarray, level: np.ndarray, n: int) -> np.ndarray:
    """Keep candidates all of whose one-smaller subsets are in ``level``."""
    k1 = cands.shape[1]
    keep = np.ones(cands.shape[0], dtype=bool)
    if float(n) ** k1 < 2**62:
        known = np.sort(_keys(level, n))
        # dropping the last element gives the generating prefix, known shattered
        for drop in range(k1 - 1):
            sub = np.delete(cands, drop, axis=1)
            keys = _keys(sub, n)
            pos = np.searchsorted(known, keys)
            pos[pos == known.size] = 0
            keep &= known[pos] == keys
        return cands[keep]
    known_set = {tuple(r) for r in level.tolist()}
    for i, row in enumerate(cands.tolist()):
        for drop in range(k1 - 1):
            if tuple(row[:drop] + row[drop + 1:]) not in known_set:
                keep[i] = False
                break
    return cands[keep]


def vc_at_least(
    G: DenseGraph,
    U: Optional[Sequence[int]],
    k: int,
    budget: int = 10**6,
    seed: int = 0,
    bias: bool = True,
    chunk: int = 2048,
) -> Optional[ShatterWitness]:
    """Randomised search for a shattered ``k``-subset of ``U``.

    Draws up to ``budget`` candidate sets.  With ``bias`` every other batch
    is sampled from the members whose degree into ``U`` is closest to the
    median.  ``None`` is not evidence that the VC-dimension is below ``k``.
    """
    if k > MAX_K:
        raise ShatterError(f"k={k} exceeds the cap {MAX_K}")
    Us = vertex_set(U, G.n)
    if k == 0:
        return ShatterWitness((), {0: int(Us[0])}) if Us.size else None
    if Us.size < max(k, 1 << k):
        return None
    rng = np.random.default_rng(seed)
    pools = [Us]
    if bias and Us.size > 4 * k:
        deg = G.adj[np.ix_(Us, Us)].sum(axis=1)
        order = np.argsort(np.abs(deg - np.median(deg)), kind="stable")
        pools.append(np.sort(Us[order[: max(4 * k, Us.size // 2)]]))
    drawn = 0
    batch = 0
    while drawn < budget:
        pool = pools[batch % len(pools)]
        m = min(chunk, budget - drawn)
        cands = _sample_sets(rng, pool, k, m)
        drawn += m
        batch += 1
        ok = np.flatnonzero(shattered_mask(G, Us, cands))
        if ok.size:
            return is_shattered(G, Us, np.sort(cands[ok[0]]))
    return None


def _sample_sets(rng: np.random.Generator, pool: np.ndarray, k: int, m: int) -> np.ndarray:
    """``m`` uniformly random ``k``-subsets of ``pool`` (rows sorted)."""
    keys = rng.random((m, pool.size))
    idx = np.argpartition(keys, k - 1, axis=1)[:, :k] if k < pool.size else np.tile(np.arange(pool.size), (m, 1))
    return np.sort(pool[idx], axis=1)


def find_selector_triple(
    G: DenseGraph, U: Optional[Sequence[int]], v1: int, v2: int, v3: int
) -> Optional[tuple[int, int, int]]:
    """``(u1, u2, u3)`` in ``U`` with ``u_i ~ v_j`` exactly when ``i == j``.

    The three choices are independent, so each ``u_i`` is the smallest
    qualifying index.
    """
    vs = (int(v1), int(v2), int(v3))
    if len(set(vs)) != 3:
        raise ShatterError("selector triple needs three distinct vertices")
    Us = vertex_set(U, G.n)
    cols = G.adj[np.ix_(Us, np.array(vs))]
    out = []
    for i in range(3):
        want = np.zeros(3, dtype=bool)
        want[i] = True
        hit = np.flatnonzero((cols == want).all(axis=1))
        if hit.size == 0:
            return None
        out.append(int(Us[hit[0]]))
    return tuple(out)
