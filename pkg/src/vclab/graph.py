"""Dense symmetric graphs, spectra, induced-subset queries and degree pruning."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .ffield import FieldVector

#: Largest vertex count accepted by :func:`spectral_profile`.
SPECTRAL_LIMIT = 5000


class GraphError(ValueError):
    pass


class SpectralError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class DenseGraph:
    """Symmetric boolean adjacency matrix; diagonal entries are loops.

    ``labels`` is an optional ``(n, t)`` array of field coordinates with
    modulus ``q``.
    """

    adj: np.ndarray
    labels: Optional[np.ndarray] = None
    q: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        a = np.array(self.adj, dtype=bool, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphError(f"adjacency must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise GraphError("graph needs at least one vertex")
        if not np.array_equal(a, a.T):
            i, j = np.argwhere(a != a.T)[0]
            raise GraphError(f"adjacency not symmetric at ({i}, {j})")
        a.flags.writeable = False
        object.__setattr__(self, "adj", a)
        if self.labels is not None:
            lab = np.array(self.labels, dtype=np.int64, copy=True)
            if lab.shape[0] != a.shape[0]:
                raise GraphError("one label per vertex required")
            lab.flags.writeable = False
            object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def loops(self) -> int:
        return int(np.trace(self.adj))

    @property
    def has_loops(self) -> bool:
        return self.loops > 0

    def degrees(self) -> np.ndarray:
        """Exact integer row sums (a loop counts once)."""
        return self.adj.sum(axis=1, dtype=np.int64)

    def edge_count(self) -> int:
        """Number of non-loop edges."""
        return (int(self.adj.sum()) - self.loops) // 2

    def label(self, i: int) -> FieldVector:
        if self.labels is None or self.q is None:
            raise GraphError("graph carries no field labels")
        return FieldVector(tuple(self.labels[i]), self.q)

    def without_loops(self) -> DenseGraph:
        a = self.adj.copy()
        np.fill_diagonal(a, False)
        return DenseGraph(a, self.labels, self.q, self.name)

    def regular_degree(self) -> Optional[int]:
        deg = self.degrees()
        return int(deg[0]) if np.all(deg == deg[0]) else None

    def packed_rows(self) -> bytes:
        return np.packbits(self.adj, axis=1).tobytes()

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.n}:".encode())
        h.update(self.packed_rows())
        return h.hexdigest()

    def __eq__(self, other):
        return isinstance(other, DenseGraph) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash(self.digest())

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<DenseGraph{tag} n={self.n} edges={self.edge_count()} loops={self.loops}>"


def vertex_set(U: Optional[Iterable[int]], n: int) -> np.ndarray:
    """Validate ``U`` and return it as a strictly increasing index array.

    ``None`` stands for the full vertex set.
    """
    if U is None:
        return np.arange(n, dtype=np.int64)
    arr = np.asarray(list(U) if not isinstance(U, np.ndarray) else U, dtype=np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise GraphError(f"vertex index out of range [0, {n})")
    s = np.unique(arr)
    if s.size != arr.size:
        raise GraphError("vertex set contains duplicates")
    return s


def build_from_relation(
    n: int,
    rel: Callable[[int, int], bool],
    *,
    check_samples: int = 256,
    seed: int = 0,
    keep_loops: bool = True,
) -> DenseGraph:
    """Adjacency ``adj[i, j] = rel(i, j)``, evaluated on the upper triangle.

    Symmetry is the caller's contract; it is spot-checked on ``check_samples``
    random pairs and on the full matrix when ``n`` is small.
    """
    if n < 1:
        raise GraphError("graph needs at least one vertex")
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i, n):
            adj[i, j] = adj[j, i] = bool(rel(i, j))
    if n <= 16:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        rng = np.random.default_rng(seed)
        pairs = [tuple(p) for p in rng.integers(0, n, size=(check_samples, 2))]
    for i, j in pairs:
        if bool(rel(j, i)) != adj[i, j]:
            raise GraphError(f"relation is not symmetric on pair ({i}, {j})")
    if not keep_loops:
        np.fill_diagonal(adj, False)
    return DenseGraph(adj)


@dataclass(frozen=True)
class SpectralProfile:
    eigenvalues: np.ndarray
    d: Optional[int]
    lam: float
    loops: int = 0
    #: lambda of the same graph with the diagonal cleared; None when loopless.
    lam_without_loops: Optional[float] = None
    extras: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def is_regular(self) -> bool:
        return self.d is not None


def _second_abs(eig: np.ndarray) -> float:
    return float(np.max(np.abs(eig[1:]))) if eig.size > 1 else 0.0


def spectral_profile(G: DenseGraph, tol: float = 1e-8) -> SpectralProfile:
    """Full spectrum of ``G`` (loops on the diagonal), degree and lambda.

    ``lam`` is the largest absolute value among all eigenvalues but the top
    one after sorting in descending order.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if G.n > SPECTRAL_LIMIT:
        raise SpectralError(f"n={G.n} exceeds dense eigensolver limit {SPECTRAL_LIMIT}")
    A = G.adj.astype(np.float64)
    try:
        eig = np.linalg.eigvalsh(A)[::-1].copy()
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver failed on n={G.n}: {exc}") from exc
    d = G.regular_degree()
    if d is not None and abs(eig[0] - d) > tol * max(1.0, d):
        raise SpectralError(f"top eigenvalue {eig[0]!r} disagrees with regular degree {d}")
    # trace check: eigenvalue sum equals number of loops
    if abs(eig.sum() - G.loops) > max(tol, 1e-9) * G.n * max(1.0, eig[0]):
        raise SpectralError("eigenvalue sum does not match the trace")
    lam_nl = None
    if G.has_loops:
        A0 = A.copy()
        np.fill_diagonal(A0, 0.0)
        lam_nl = _second_abs(np.linalg.eigvalsh(A0)[::-1])
    eig.flags.writeable = False
    return SpectralProfile(eig, d, _second_abs(eig), G.loops, lam_nl)


def common_neighbors(G: DenseGraph, u: int, v: int, U: Optional[Sequence[int]] = None) -> int:
    """Number of ``w`` in ``U`` adjacent to both ``u`` and ``v``."""
    Us = vertex_set(U, G.n)
    return int(np.count_nonzero(G.adj[u, Us] & G.adj[v, Us]))


def degrees_into(G: DenseGraph, U: Optional[Sequence[int]] = None) -> np.ndarray:
    """For each member of ``U``, its number of neighbours inside ``U``."""
    Us = vertex_set(U, G.n)
    return G.adj[np.ix_(Us, Us)].sum(axis=1, dtype=np.int64)


def prune_by_degree(
    G: DenseGraph,
    U: Optional[Sequence[int]],
    d: Optional[int],
    n: Optional[int] = None,
    *,
    low: float = 0.5,
    high: float = 2.0,
    until_stable: bool = False,
) -> np.ndarray:
    """Drop members of ``U`` whose degree into ``U`` is outside
    ``[low*|U|d/n, high*|U|d/n]``.

    One pass by default, using degrees into the original ``U``. With
    ``until_stable`` the pass is repeated on its own output until nothing
    changes, which makes the result a fixed point.
    """
    if d is None:
        raise GraphError("degree pruning needs a regular graph (no degree d)")
    n = G.n if n is None else n
    Us = vertex_set(U, G.n)
    while True:
        if Us.size == 0:
            return Us
        deg = degrees_into(G, Us) * n
        # exact rational bounds on deg * n
        lo = Fraction(str(low)) * Us.size * d
        hi = Fraction(str(high)) * Us.size * d
        keep = (deg * lo.denominator >= lo.numerator) & (deg * hi.denominator <= hi.numerator)
        out = Us[keep]
        if not until_stable or out.size == Us.size:
            return out
        Us = out
