"""Finite-field graph families and seeded Erdos-Renyi baselines."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ffield import PrimeField, all_vectors
from .graph import DenseGraph, GraphError

MAX_VERTICES = 5000
FAMILIES = ("distance", "dotproduct", "polynomial")


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in ``x1..xt, y1..yt`` evaluated modulo q.

    Each term is ``(coefficient, exponents)`` where ``exponents`` has length
    ``2t``: the x-exponents followed by the y-exponents.
    """

    t: int
    terms: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        for coef, exps in self.terms:
            if len(exps) != 2 * self.t or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for t={self.t}")

    @classmethod
    def sqdist(cls, t: int) -> Polynomial:
        terms = []
        for i in range(t):
            e = [0] * (2 * t)
            e[i] = 2
            terms.append((1, tuple(e)))
            e = [0] * (2 * t)
            e[t + i] = 2
            terms.append((1, tuple(e)))
            e = [0] * (2 * t)
            e[i] = e[t + i] = 1
            terms.append((-2, tuple(e)))
        return cls(t, tuple(terms))

    @classmethod
    def dot(cls, t: int) -> Polynomial:
        terms = []
        for i in range(t):
            e = [0] * (2 * t)
            e[i] = e[t + i] = 1
            terms.append((1, tuple(e)))
        return cls(t, tuple(terms))

    @classmethod
    def zero(cls, t: int) -> Polynomial:
        return cls(t, ())

    @classmethod
    def parse(cls, text: str, t: int) -> Polynomial:
        """Parse e.g. ``"x1*y1 + x2*y2"`` or ``"x1^2 - 2*x1*y1 + y1^2"``."""
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty polynomial")
        if src[0] not in "+-":
            src = "+" + src
        pieces = re.findall(r"[+-][^+-]+", src)
        if "".join(pieces) != src:
            raise ValueError(f"cannot parse polynomial {text!r}")
        terms = []
        for piece in pieces:
            sign = -1 if piece[0] == "-" else 1
            coef = sign
            exps = [0] * (2 * t)
            for factor in piece[1:].split("*"):
                m = re.fullmatch(r"([xy])(\d+)(?:\^(\d+))?", factor)
                if m:
                    idx = int(m.group(2)) - 1
                    if not 0 <= idx < t:
                        raise ValueError(f"variable {factor} out of range for t={t}")
                    exps[idx + (t if m.group(1) == "y" else 0)] += int(m.group(3) or 1)
                elif re.fullmatch(r"\d+", factor):
                    coef *= int(factor)
                else:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
            terms.append((coef, tuple(exps)))
        return cls(t, tuple(terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for coef, exps in self.terms:
            factors = [str(abs(coef))] if abs(coef) != 1 or not any(exps) else []
            for k, e in enumerate(exps):
                if e:
                    var = f"{'x' if k < self.t else 'y'}{k % self.t + 1}"
                    factors.append(var if e == 1 else f"{var}^{e}")
            out.append(("-" if coef < 0 else "+") + "*".join(factors))
        s = "".join(out)
        return s[1:] if s.startswith("+") else s

    def evaluate_pairs(self, X: np.ndarray, q: int) -> np.ndarray:
        """``P(X[i], X[j]) mod q`` for all pairs, as an ``(n, n)`` array."""
        n, t = X.shape
        if t != self.t:
            raise ValueError(f"polynomial in t={self.t} applied to t={t} vectors")
        out = np.zeros((n, n), dtype=np.int64)
        for coef, exps in self.terms:
            xs = np.full(n, coef % q, dtype=np.int64)
            ys = np.ones(n, dtype=np.int64)
            for i in range(t):
                xs = xs * _powmod(X[:, i], exps[i], q) % q
                ys = ys * _powmod(X[:, i], exps[t + i], q) % q
            out = (out + np.outer(xs, ys)) % q
        return out


def _powmod(a: np.ndarray, e: int, q: int) -> np.ndarray:
    r = np.ones_like(a)
    for _ in range(e):
        r = r * a % q
    return r


@dataclass(frozen=True)
class FieldGraphSpec:
    family: str
    q: int
    t: int
    polynomial: Optional[Polynomial] = None
    exclude_origin: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        PrimeField(self.q)
        if self.t < 2:
            raise ValueError("dimension t must be at least 2")
        if self.family == "polynomial" and self.polynomial is None:
            raise ValueError("family=polynomial requires a polynomial")

    @property
    def key(self) -> str:
        base = f"{self.family}:q={self.q}:t={self.t}"
        if self.family == "polynomial":
            base += f":P={self.polynomial}:exclude_origin={self.exclude_origin}"
        return base

    def build(self, max_vertices: int = MAX_VERTICES) -> DenseGraph:
        if self.family == "distance":
            return distance_graph(self.q, self.t, max_vertices)
        if self.family == "dotproduct":
            return dot_product_graph(self.q, self.t, max_vertices)
        return polynomial_graph(self, max_vertices)


def _check_size(q: int, t: int, max_vertices: int) -> None:
    PrimeField(q)
    if t < 2:
        raise ValueError("dimension t must be at least 2")
    if q**t > max_vertices:
        raise GraphError(f"q^t = {q**t} exceeds the size limit {max_vertices}")


def distance_graph(q: int, t: int, max_vertices: int = MAX_VERTICES) -> DenseGraph:
    """Vertices F_q^t; x ~ y iff sum (x_i - y_i)^2 = 1."""
    _check_size(q, t, max_vertices)
    X = all_vectors(q, t)
    sq = (X * X).sum(axis=1)
    D = (sq[:, None] + sq[None, :] - 2 * (X @ X.T)) % q
    return DenseGraph(D == 1, X, q, f"distance(q={q},t={t})")


def dot_product_graph(q: int, t: int, max_vertices: int = MAX_VERTICES) -> DenseGraph:
    """Vertices F_q^t minus the origin; x ~ y iff x . y = 1 (loops kept)."""
    _check_size(q, t, max_vertices)
    X = all_vectors(q, t)[1:]
    return DenseGraph((X @ X.T) % q == 1, X, q, f"dotproduct(q={q},t={t})")


def polynomial_graph(spec: FieldGraphSpec, max_vertices: int = MAX_VERTICES) -> DenseGraph:
    """Vertices F_q^t (optionally without the origin); x ~ y iff P(x, y) = 1."""
    if spec.polynomial is None:
        raise ValueError("spec carries no polynomial")
    _check_size(spec.q, spec.t, max_vertices)
    X = all_vectors(spec.q, spec.t)
    if spec.exclude_origin:
        X = X[1:]
    M = spec.polynomial.evaluate_pairs(X, spec.q) == 1
    if not np.array_equal(M, M.T):
        i, j = np.argwhere(M != M.T)[0]
        raise GraphError(f"polynomial {spec.polynomial} is not symmetric: P(x{i}, x{j}) differs")
    return DenseGraph(M, X, spec.q, f"polynomial(q={spec.q},t={spec.t},P={spec.polynomial})")


def random_graph(n: int, p: float, seed: int) -> DenseGraph:
    """Loopless G(n, p), reproducible from ``seed``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    r = rng.random((n, n))
    upper = np.triu(r < p, k=1)
    return DenseGraph(upper | upper.T, name=f"gnp(n={n},p={p},seed={seed})")


def graph_from_edges(n: int, edges: Sequence[tuple[int, int]], name: str = "") -> DenseGraph:
    adj = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        adj[i, j] = adj[j, i] = True
    return DenseGraph(adj, name=name)


def complete_graph(n: int) -> DenseGraph:
    return DenseGraph(~np.eye(n, dtype=bool), name=f"K{n}")


def empty_graph(n: int) -> DenseGraph:
    return DenseGraph(np.zeros((n, n), dtype=bool), name=f"E{n}")


def cycle_graph(n: int) -> DenseGraph:
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def complete_bipartite(a: int, b: int) -> DenseGraph:
    return graph_from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], name=f"K{a},{b}")
