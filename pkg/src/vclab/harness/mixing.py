"""Randomised checks of the expander mixing lemma and its tensor version."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..graph import DenseGraph, SpectralProfile, spectral_profile

TENSOR_MAX_N = 200


@dataclass
class MixingReport:
    kind: str
    trials: int
    tol: float
    max_ratio: float = 0.0
    max_ratio_tensor: Optional[float] = None
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "trials": self.trials,
            "tol": self.tol,
            "max_ratio": self.max_ratio,
            "max_ratio_tensor": self.max_ratio_tensor,
            "violations": self.violations,
            "pass": self.passed,
        }


def trial_rng(seed: int, *index: int) -> np.random.Generator:
    """Independent generator for one trial, derived from the master seed."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, index)]))


def _regular_profile(G: DenseGraph, profile: Optional[SpectralProfile]) -> SpectralProfile:
    profile = profile or spectral_profile(G)
    if profile.d is None:
        raise ValueError("mixing checks need a regular graph")
    return profile


def _draw_vector(rng: np.random.Generator, n: int) -> tuple[np.ndarray, str]:
    if rng.random() < 0.5:
        return rng.choice(np.array([-1, 1]), size=n), "pm1"
    p = rng.uniform(0.05, 0.95)
    return (rng.random(n) < p).astype(np.int64), "indicator"


def mixing_residual(G: DenseGraph, d: int, f: np.ndarray, g: np.ndarray) -> float:
    """``|<f, A g> - d n E(f) E(g)|``."""
    A = G.adj.astype(np.float64)
    n = G.n
    return abs(float(f @ (A @ g)) - d * float(f.sum()) * float(g.sum()) / n)


def mixing_check(
    G: DenseGraph,
    trials: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
    profile: Optional[SpectralProfile] = None,
) -> MixingReport:
    """``|<f,Ag> - dnE(f)E(g)| <= lam ||f|| ||g||`` on random +-1 / 0-1 vectors.

    A trial is a violation when the left side exceeds the right side by more
    than ``tol * n * max|f| * max|g|``.
    """
    P = _regular_profile(G, profile)
    n, d, lam = G.n, P.d, P.lam
    rep = MixingReport("mixing", trials, tol)
    for i in range(trials):
        rng = trial_rng(seed, i)
        f, fk = _draw_vector(rng, n)
        g, gk = _draw_vector(rng, n)
        lhs = mixing_residual(G, d, f, g)
        rhs = lam * float(np.linalg.norm(f)) * float(np.linalg.norm(g))
        slack = tol * n * max(1, np.abs(f).max()) * max(1, np.abs(g).max())
        ratio = lhs / rhs if rhs > 0 else (0.0 if lhs <= slack else float("inf"))
        rep.max_ratio = max(rep.max_ratio, ratio)
        if lhs > rhs + slack:
            rep.violations.append({"trial": i, "seed": [seed, i], "f": fk, "g": gk, "lhs": lhs, "rhs": rhs})
    return rep


def _draw_tensor(rng: np.random.Generator, n: int) -> np.ndarray:
    rank = int(rng.integers(1, 4))
    out = np.zeros((n, n))
    for _ in range(rank):
        if rng.random() < 0.5:
            a, b = rng.random(n), rng.random(n)
        else:
            a = (rng.random(n) < rng.uniform(0.05, 0.95)).astype(float)
            b = (rng.random(n) < rng.uniform(0.05, 0.95)).astype(float)
        out += rng.uniform(0.1, 2.0) * np.outer(a, b)
    return out


def tensor_terms(G: DenseGraph, d: int, lam: float, f: np.ndarray, g: np.ndarray) -> tuple[float, float, float]:
    """(sum over x~z, y~w of f(x,y) g(z,w); main term; right-hand side)."""
    A = G.adj.astype(np.float64)
    n = G.n
    lhs = float(np.sum(f * (A @ g @ A)))
    main = d * d / (n * n) * float(f.sum()) * float(g.sum())
    F, Fp = f.sum(axis=1), f.sum(axis=0)
    Gr, Gp = g.sum(axis=1), g.sum(axis=0)
    nrm = np.linalg.norm
    rhs = lam**2 * nrm(f) * nrm(g) + d * lam / n * (nrm(F) * nrm(Gr) + nrm(Fp) * nrm(Gp))
    return lhs, main, float(rhs)


def tensor_mixing_check(
    G: DenseGraph,
    trials: int = 200,
    seed: int = 0,
    tol: float = 1e-9,
    profile: Optional[SpectralProfile] = None,
) -> MixingReport:
    """Tensor-square mixing inequality on random non-negative low-rank f, g on V x V."""
    if G.n > TENSOR_MAX_N:
        raise ValueError(f"tensor mixing check limited to n <= {TENSOR_MAX_N}")
    P = _regular_profile(G, profile)
    d, lam = P.d, P.lam
    rep = MixingReport("tensor-mixing", trials, tol, max_ratio_tensor=0.0)
    for i in range(trials):
        rng = trial_rng(seed, i)
        f = _draw_tensor(rng, G.n)
        g = _draw_tensor(rng, G.n)
        lhs, main, rhs = tensor_terms(G, d, lam, f, g)
        dev = abs(lhs - main)
        slack = tol * (abs(main) + rhs + 1.0)
        ratio = dev / rhs if rhs > 0 else (0.0 if dev <= slack else float("inf"))
        rep.max_ratio_tensor = max(rep.max_ratio_tensor, ratio)
        if dev > rhs + slack:
            rep.violations.append({"trial": i, "seed": [seed, i], "lhs": dev, "rhs": rhs})
    return rep
