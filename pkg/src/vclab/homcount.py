"""Exact homomorphism counts of small configurations into induced subgraphs G[U].

Counts are labeled and possibly degenerate: every map of pattern vertices
into ``U`` that sends required edges to edges (loops included) is counted,
unless a forbidden edge or a distinctness pair rules it out.

Two independent routes are provided.  :func:`count_pattern_bruteforce` is a
generic backtracking enumerator over any :class:`Pattern`; the ``count_*``
kernels are closed-form matrix expressions for the named configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .graph import DenseGraph, vertex_set

DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    """Work budget exhausted before an exact answer was reached."""

    def __init__(self, message: str, spent: int = 0, budget: int = 0):
        super().__init__(message)
        self.spent = spent
        self.budget = budget


def _pairs(pairs: Iterable[Sequence[int]]) -> frozenset:
    return frozenset(tuple(sorted((int(a), int(b)))) for a, b in pairs)


@dataclass(frozen=True)
class Pattern:
    k: int
    required: frozenset = field(default_factory=frozenset)
    forbidden: frozenset = field(default_factory=frozenset)
    distinct: frozenset = field(default_factory=frozenset)
    roles: tuple = ()
    name: str = ""

    def __post_init__(self):
        for attr in ("required", "forbidden", "distinct"):
            object.__setattr__(self, attr, _pairs(getattr(self, attr)))
        if self.k < 0:
            raise ValueError("pattern needs k >= 0")
        for a, b in self.required | self.forbidden | self.distinct:
            if not (0 <= a < self.k and 0 <= b < self.k):
                raise ValueError(f"pair ({a}, {b}) out of range for k={self.k}")
        if self.required & self.forbidden:
            raise ValueError(f"pairs both required and forbidden: {sorted(self.required & self.forbidden)}")
        if any(a == b for a, b in self.distinct):
            raise ValueError("a vertex cannot be distinct from itself")
        if self.roles and len(self.roles) != self.k:
            raise ValueError("one role name per pattern vertex")

    def role(self, name: str) -> int:
        return self.roles.index(name)

    def with_required(self, *pairs) -> Pattern:
        return Pattern(self.k, self.required | _pairs(pairs), self.forbidden, self.distinct, self.roles, self.name)

    def with_forbidden(self, *pairs) -> Pattern:
        return Pattern(self.k, self.required, self.forbidden | _pairs(pairs), self.distinct, self.roles, self.name)

    def with_distinct(self, *pairs) -> Pattern:
        return Pattern(self.k, self.required, self.forbidden, self.distinct | _pairs(pairs), self.roles, self.name)

    def injective(self) -> Pattern:
        allpairs = [(a, b) for a in range(self.k) for b in range(a + 1, self.k)]
        return self.with_distinct(*allpairs)


def _named(name: str, roles: str, edges: str) -> Pattern:
    r = tuple(roles.split())
    idx = {s: i for i, s in enumerate(r)}
    req = [(idx[a], idx[b]) for a, b in (e.split("-") for e in edges.split())]
    return Pattern(len(r), frozenset(req), roles=r, name=name)


def path_pattern(k: int) -> Pattern:
    """Walk with ``k`` edges on ``k + 1`` vertices."""
    return Pattern(k + 1, frozenset((i, i + 1) for i in range(k)), name=f"P{k}")


def cycle_pattern(m: int) -> Pattern:
    """Closed walk of length ``m`` (m=1 is a loop, m=2 a doubled edge)."""
    if m < 1:
        raise ValueError("cycle length must be at least 1")
    return Pattern(m, frozenset((i, (i + 1) % m) for i in range(m)), name=f"C{m}")


def star_pattern(s: int) -> Pattern:
    return Pattern(s + 1, frozenset((0, i) for i in range(1, s + 1)), name=f"K1{s}")


H1 = _named("H1", "x y z u v", "x-y y-z z-u u-v u-x")
H2 = _named("H2", "x y z u v", "x-u u-z z-y x-y u-v v-y")
H3 = _named("H3", "x y z u v u' x'", "x-y y-z z-u u-x u-v v-u' u'-z u'-x' x'-y")
H3PLUS = _named("H3plus", "x y z u v u' x'", "x-y y-z z-u u-x u-v v-u' u'-z u'-x' x'-y x-u'")
H3MINUS = _named("H3minus", "x y z u v x'", "x-y y-z z-u u-x x-x' x'-y x-v v-u x-z")
H4 = _named("H4", "y z u v u' x", "y-z z-u u-v v-u' u'-x x-y z-u'")
K13 = star_pattern(3)
K14 = star_pattern(4)
K23 = _named("K23", "a b p q r", "a-p a-q a-r b-p b-q b-r")

NAMED_PATTERNS = {p.name: p for p in (H1, H2, H3, H3PLUS, H3MINUS, H4, K13, K14, K23)}


def pattern_by_name(name: str) -> Pattern:
    if name in NAMED_PATTERNS:
        return NAMED_PATTERNS[name]
    if name[:1] == "P" and name[1:].isdigit():
        return path_pattern(int(name[1:]))
    if name[:1] == "C" and name[1:].isdigit():
        return cycle_pattern(int(name[1:]))
    raise KeyError(f"unknown configuration {name!r}")


# ---------------------------------------------------------------------------
# brute-force route


def _bits(mask_row: np.ndarray) -> int:
    out = 0
    for i in np.flatnonzero(mask_row):
        out |= 1 << int(i)
    return out


def _order(pat: Pattern) -> list[int]:
    """Greedy most-constrained-first placement order."""
    nbrs = {i: set() for i in range(pat.k)}
    weight = {i: 0 for i in range(pat.k)}
    for a, b in pat.required:
        if a != b:
            nbrs[a].add(b)
            nbrs[b].add(a)
        weight[a] += 2
        weight[b] += 2
    for a, b in pat.forbidden | pat.distinct:
        weight[a] += 1
        weight[b] += 1
    placed: list[int] = []
    rest = set(range(pat.k))
    while rest:
        best = min(rest, key=lambda i: (-len(nbrs[i] & set(placed)), -weight[i], i))
        placed.append(best)
        rest.remove(best)
    return placed


class _Plan:
    """Per-level constraint lists for a fixed placement order."""

    def __init__(self, pat: Pattern):
        self.k = pat.k
        self.order = _order(pat)
        level = {v: i for i, v in enumerate(self.order)}
        self.req = [[] for _ in range(pat.k)]
        self.forb = [[] for _ in range(pat.k)]
        self.dist = [[] for _ in range(pat.k)]
        self.loop_req = [False] * pat.k
        self.loop_forb = [False] * pat.k
        touch = [set() for _ in range(pat.k)]
        for kind, pairs in (("req", pat.required), ("forb", pat.forbidden), ("dist", pat.distinct)):
            for a, b in pairs:
                la, lb = level[a], level[b]
                if la == lb:
                    if kind == "req":
                        self.loop_req[la] = True
                    elif kind == "forb":
                        self.loop_forb[la] = True
                    continue
                lo, hi = min(la, lb), max(la, lb)
                getattr(self, kind)[hi].append(lo)
                touch[lo].add(hi)
        # boundary[i]: earlier levels still constraining some level >= i
        self.boundary = [
            tuple(j for j in range(i) if any(h >= i for h in touch[j])) for i in range(pat.k + 1)
        ]
        self.ncons = [max(1, len(self.req[i]) + len(self.forb[i]) + len(self.dist[i])) for i in range(pat.k)]


def _prepare(G: DenseGraph, U, pat: Pattern, role_domains):
    Us = vertex_set(U, G.n)
    sub = G.adj[np.ix_(Us, Us)]
    rows = [_bits(sub[i]) for i in range(Us.size)]
    loops = _bits(np.diagonal(sub))
    full = (1 << Us.size) - 1
    plan = _Plan(pat)
    dom = [full] * pat.k
    if role_domains:
        pos = {int(v): i for i, v in enumerate(Us)}
        for role, members in role_domains.items():
            r = pat.role(role) if isinstance(role, str) else int(role)
            mask = 0
            for v in members:
                if int(v) in pos:
                    mask |= 1 << pos[int(v)]
            lvl = plan.order.index(r)
            dom[lvl] &= mask
    for i in range(pat.k):
        if plan.loop_req[i]:
            dom[i] &= loops
        if plan.loop_forb[i]:
            dom[i] &= ~loops & full
    return Us, rows, plan, dom


def count_pattern_bruteforce(
    G: DenseGraph,
    U: Optional[Sequence[int]],
    pat: Pattern,
    budget: int = DEFAULT_BUDGET,
    role_domains: Optional[Mapping] = None,
) -> int:
    """Number of maps ``pattern -> U`` honouring every constraint of ``pat``.

    Backtracks over a most-constrained-first order with bitset candidate
    filtering.  Subtrees whose outcome depends only on already-placed
    boundary vertices are memoised, so the count is exact while the work is
    far below ``|U|**k``.  Work is metered in per-vertex constraint checks;
    crossing ``budget`` raises :class:`BudgetExceeded`.

    ``role_domains`` optionally restricts individual pattern vertices (by
    role name or index) to a subset of ``U``.
    """
    if pat.k == 0:
        return 1
    Us, rows, plan, dom = _prepare(G, U, pat, role_domains)
    width = max(1, Us.size)
    k = pat.k
    assign = [0] * k
    memo: list[dict] = [dict() for _ in range(k + 1)]
    use_memo = [len(plan.boundary[i]) < i for i in range(k + 1)]
    spent = 0

    def rec(i: int) -> int:
        nonlocal spent
        if use_memo[i]:
            key = tuple(assign[j] for j in plan.boundary[i])
            hit = memo[i].get(key)
            if hit is not None:
                return hit
        spent += width * plan.ncons[i]
        if spent > budget:
            raise BudgetExceeded(f"brute-force count exceeded budget {budget}", spent, budget)
        cand = dom[i]
        for j in plan.req[i]:
            cand &= rows[assign[j]]
        for j in plan.forb[i]:
            cand &= ~rows[assign[j]]
        for j in plan.dist[i]:
            cand &= ~(1 << assign[j])
        if i == k - 1:
            total = cand.bit_count()
        else:
            total = 0
            while cand:
                low = cand & -cand
                assign[i] = low.bit_length() - 1
                total += rec(i + 1)
                cand ^= low
        if use_memo[i]:
            memo[i][key] = total
        return total

    return rec(0)


def iter_embeddings(
    G: DenseGraph,
    U: Optional[Sequence[int]],
    pat: Pattern,
    role_domains: Optional[Mapping] = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every valid map as a tuple of graph vertices, indexed by pattern vertex."""
    if pat.k == 0:
        yield ()
        return
    Us, rows, plan, dom = _prepare(G, U, pat, role_domains)
    k = pat.k
    assign = [0] * k

    def rec(i: int):
        cand = dom[i]
        for j in plan.req[i]:
            cand &= rows[assign[j]]
        for j in plan.forb[i]:
            cand &= ~rows[assign[j]]
        for j in plan.dist[i]:
            cand &= ~(1 << assign[j])
        while cand:
            low = cand & -cand
            assign[i] = low.bit_length() - 1
            if i == k - 1:
                out = [0] * k
                for lvl, v in enumerate(plan.order):
                    out[v] = int(Us[assign[lvl]])
                yield tuple(out)
            else:
                yield from rec(i + 1)
            cand ^= low

    yield from rec(0)


# ---------------------------------------------------------------------------
# algebraic route
#
# All matrices are non-negative integer counts.  Products run in float64 when
# every partial sum stays below 2**53, in int64 below 2**62, and in Python
# integers (object arrays) beyond that.


def _amax(a: np.ndarray) -> int:
    return int(a.max()) if a.size else 0


def _mm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    inner = a.shape[-1]
    bound = _amax(a) * _amax(b) * inner
    if a.dtype != object and b.dtype != object:
        if bound < 2**53:
            return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
        if bound < 2**62:
            return a.astype(np.int64) @ b.astype(np.int64)
    return a.astype(object) @ b.astype(object)


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and _amax(a) * _amax(b) < 2**62:
        return a.astype(np.int64) * b.astype(np.int64)
    return a.astype(object) * b.astype(object)


def _total(a: np.ndarray) -> int:
    if a.dtype != object and _amax(a) * max(1, a.size) < 2**62:
        return int(a.sum(dtype=np.int64))
    return int(sum(int(x) for x in a.ravel()))


def _restrict(G: DenseGraph, U) -> np.ndarray:
    Us = vertex_set(U, G.n)
    return G.adj[np.ix_(Us, Us)].astype(np.int64)


def _check_work(work: int, budget: int, what: str) -> None:
    if work > budget:
        raise BudgetExceeded(f"{what}: estimated work {work} exceeds budget {budget}", work, budget)


def _matpow(A: np.ndarray, k: int) -> np.ndarray:
    M = np.eye(A.shape[0], dtype=np.int64)
    for _ in range(k):
        M = _mm(M, A)
    return M


def count_paths(G: DenseGraph, U: Optional[Sequence[int]], k: int) -> int:
    """Walks with ``k`` edges inside ``U``: ``1^T A_U^k 1``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    A = _restrict(G, U)
    w = np.ones((A.shape[0], 1), dtype=np.int64)
    for _ in range(k):
        w = _mm(A, w)
    return _total(w)


def count_cycles(G: DenseGraph, U: Optional[Sequence[int]], m: int) -> int:
    """Closed walks of length ``m`` inside ``U``: ``tr(A_U^m)``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    A = _restrict(G, U)
    half = _matpow(A, m // 2)
    other = half if m % 2 == 0 else _mm(half, A)
    # tr(XY) = sum(X * Y^T); both powers of a symmetric matrix are symmetric
    return _total(_mul(half, other))


def count_stars(G: DenseGraph, U: Optional[Sequence[int]], s: int) -> int:
    """K_{1,s}: sum over centres of deg_U(v)**s."""
    A = _restrict(G, U)
    deg = A.sum(axis=1)
    return int(sum(int(x) ** s for x in deg))


def count_H1(G: DenseGraph, U: Optional[Sequence[int]]) -> int:
    """Pendant 4-cycle: sum_u (A^4)_uu * deg_U(u)."""
    A = _restrict(G, U)
    C = _mm(A, A)
    diag4 = _mul(C, C).sum(axis=1)
    deg = A.sum(axis=1)
    return _total(_mul(np.asarray(diag4), deg))


def count_H2(G: DenseGraph, U: Optional[Sequence[int]]) -> int:
    """K_{2,3}: sum over ordered pairs of cn_U(u, y)**3."""
    A = _restrict(G, U)
    C = _mm(A, A)
    return _total(_mul(_mul(C, C), C))


def count_H3(G: DenseGraph, U: Optional[Sequence[int]], budget: int = DEFAULT_BUDGET) -> int:
    """Sum over y ~ z and v of f(y, z, v)**2 with
    f(y, z, v) = sum_u A[z,u] A[u,v] cn(y, u)."""
    A = _restrict(G, U)
    m = A.shape[0]
    _check_work(m**4, budget, "H3")
    C = _mm(A, A)
    total = 0
    for y in range(m):
        zs = np.flatnonzero(A[y])
        if zs.size == 0:
            continue
        f = _mm(_mul(A[zs], C[y][None, :]), A)
        total += _total(_mul(f, f))
    return total


def count_H3plus(G: DenseGraph, U: Optional[Sequence[int]], budget: int = DEFAULT_BUDGET) -> int:
    """H3 with the extra edge x ~ u'."""
    A = _restrict(G, U)
    m = A.shape[0]
    _check_work(m**4, budget, "H3plus")
    C = _mm(A, A)
    total = 0
    for z in range(m):
        col = A[:, z]
        if not col.any():
            continue
        # D[x, u'] = sum_u A[x,u] A[u,z] C[u,u']
        D = _mm(_mul(A, col[None, :]), C)
        E = _mul(_mul(A, col[None, :]), D)
        M = _mm(E, C)  # M[x, y] = sum_u' E[x,u'] C[u',y]
        total += _total(_mul(_mul(A, M), col[None, :]))
    return total


def count_H3minus(G: DenseGraph, U: Optional[Sequence[int]]) -> int:
    """H3 with x = u': sum over x ~ z of Q[x,z]**2, Q = (A o A^2) A."""
    A = _restrict(G, U)
    C = _mm(A, A)
    Q = _mm(_mul(A, C), A)
    return _total(_mul(A, _mul(Q, Q)))


def count_H4(G: DenseGraph, U: Optional[Sequence[int]]) -> int:
    """Chorded 6-cycle: sum over z ~ u' of ((A^3)[z,u'])**2."""
    A = _restrict(G, U)
    A3 = _mm(_mm(A, A), A)
    return _total(_mul(A, _mul(A3, A3)))


def max_common_neighbors(G: DenseGraph, U: Optional[Sequence[int]]) -> int:
    """Largest |N(a) ∩ N(b) ∩ U| over distinct a, b in U."""
    A = _restrict(G, U)
    if A.shape[0] < 2:
        raise ValueError("need at least two vertices")
    C = _mm(A, A)
    np.fill_diagonal(C, 0)
    return _amax(C)


_FAST = {
    "H1": count_H1,
    "H2": count_H2,
    "K23": count_H2,
    "H3": count_H3,
    "H3plus": count_H3plus,
    "H3minus": count_H3minus,
    "H4": count_H4,
    "K13": lambda G, U: count_stars(G, U, 3),
    "K14": lambda G, U: count_stars(G, U, 4),
}

CENSUS_NAMES = ("P1", "P2", "P3", "P4", "C3", "C4", "C5", "C6",
                "H1", "H2", "H3", "H3plus", "H3minus", "H4", "K13", "K14", "K23")


def count_named(G: DenseGraph, U: Optional[Sequence[int]], name: str) -> int:
    """Fast count of a named configuration (``Pk``, ``Cm``, ``H1`` ...)."""
    if name in _FAST:
        return _FAST[name](G, U)
    if name[:1] == "P" and name[1:].isdigit():
        return count_paths(G, U, int(name[1:]))
    if name[:1] == "C" and name[1:].isdigit():
        return count_cycles(G, U, int(name[1:]))
    raise KeyError(f"unknown configuration {name!r}")


def census(G: DenseGraph, U: Optional[Sequence[int]], names: Iterable[str] = CENSUS_NAMES) -> dict[str, int]:
    return {name: count_named(G, U, name) for name in names}

