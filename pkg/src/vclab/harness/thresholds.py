"""Subset-size thresholds of the VC lower-bound theorems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from ..graph import SpectralProfile


@dataclass(frozen=True)
class ThresholdSpec:
    name: str
    formula: Callable[..., float]
    uses: str  # "spectral" -> (n, d, lam); "field" -> (q, t)
    C: float = 1.0
    vc: int = 2
    family: str = "any"

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError("threshold constant C must be positive")

    def with_constant(self, C: float) -> ThresholdSpec:
        return ThresholdSpec(self.name, self.formula, self.uses, C, self.vc, self.family)


THRESHOLDS = {
    "spectral_vc2": ThresholdSpec("spectral_vc2", lambda n, d, lam: lam * n / d, "spectral", vc=2),
    "spectral_vc3": ThresholdSpec(
        "spectral_vc3",
        lambda n, d, lam: max(lam ** (2 / 3) * (n / d) ** 2, lam * (n / d) ** (13 / 7)),
        "spectral", vc=3),
    "dotproduct_vc2": ThresholdSpec("dotproduct_vc2", lambda q, t: q ** ((t + 1) / 2), "field", vc=2, family="dotproduct"),
    "dotproduct_vc3": ThresholdSpec(
        "dotproduct_vc3", lambda q, t: max(q ** ((7 * t + 19) / 14), q ** (t - 1)), "field", vc=3, family="dotproduct"),
    "distance_vc2": ThresholdSpec("distance_vc2", lambda q, t: q ** ((t + 1) / 2), "field", vc=2, family="distance"),
    "distance_vc3": ThresholdSpec(
        "distance_vc3", lambda q, t: max(q ** ((7 * t + 19) / 14), q ** (t - 1)), "field", vc=3, family="distance"),
    "dotproduct3_vc2": ThresholdSpec("dotproduct3_vc2", lambda q, t: q ** 2, "field", vc=2, family="dotproduct3"),
    "dotproduct3_vc3": ThresholdSpec("dotproduct3_vc3", lambda q, t: q ** 2.5, "field", vc=3, family="dotproduct3"),
}


def threshold_eval(ts: ThresholdSpec, source: Union[SpectralProfile, tuple, dict]) -> float:
    """``C * formula`` evaluated on a spectral profile, a ``(q, t)`` pair, or a
    dict holding the needed keys."""
    if ts.uses == "spectral":
        if isinstance(source, SpectralProfile):
            if source.d is None:
                raise ValueError("spectral thresholds need a regular graph")
            n, d, lam = source.n, source.d, source.lam
        elif isinstance(source, dict):
            n, d, lam = source["n"], source["d"], source["lam"]
        else:
            n, d, lam = source
        if min(n, d, lam) <= 0:
            raise ValueError("threshold inputs must be positive")
        return ts.C * ts.formula(n, d, lam)
    if isinstance(source, dict):
        q, t = source["q"], source["t"]
    else:
        q, t = source
    if q <= 0 or t <= 0:
        raise ValueError("threshold inputs must be positive")
    return ts.C * ts.formula(q, t)


def applicable(family: str, t: int) -> list[ThresholdSpec]:
    """Thresholds that speak about the given graph family."""
    out = [THRESHOLDS["spectral_vc2"], THRESHOLDS["spectral_vc3"]]
    for ts in THRESHOLDS.values():
        if ts.family == family or (ts.family == "dotproduct3" and family == "dotproduct" and t == 3):
            out.append(ts)
    return out
