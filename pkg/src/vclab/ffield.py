"""Arithmetic in prime fields F_q and in the vector space F_q^t."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class FieldError(ValueError):
    """Raised for non-prime moduli, out-of-range residues and division by zero."""


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of residues modulo a prime ``q``."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or not is_prime(int(self.q)):
            raise FieldError(f"modulus {self.q!r} is not prime")

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"residue {a} outside [0, {self.q})")
        return int(a)

    def add(self, a: int, b: int) -> int:
        return (self._check(a) + self._check(b)) % self.q

    def sub(self, a: int, b: int) -> int:
        return (self._check(a) - self._check(b)) % self.q

    def mul(self, a: int, b: int) -> int:
        return (self._check(a) * self._check(b)) % self.q

    def neg(self, a: int) -> int:
        return (-self._check(a)) % self.q

    def inv(self, a: int) -> int:
        if self._check(a) == 0:
            raise FieldError("0 has no multiplicative inverse")
        return pow(a, self.q - 2, self.q)


def field_arith(q: int, op: str, a: int, b: int | None = None) -> int:
    """Apply ``op`` in {add, mul, neg, inv} to residues modulo the prime ``q``."""
    F = PrimeField(q)
    if op in ("neg", "inv"):
        return getattr(F, op)(a)
    if op in ("add", "mul"):
        if b is None:
            raise FieldError(f"{op} needs two operands")
        return getattr(F, op)(a, b)
    raise FieldError(f"unknown field operation {op!r}")


@dataclass(frozen=True)
class FieldVector:
    coords: tuple[int, ...]
    q: int

    def __post_init__(self):
        PrimeField(self.q)
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if any(not 0 <= c < self.q for c in self.coords):
            raise FieldError(f"coordinates {self.coords} not reduced mod {self.q}")

    @property
    def t(self) -> int:
        return len(self.coords)

    def __sub__(self, other: FieldVector) -> FieldVector:
        _compatible(self, other)
        return FieldVector(tuple((a - b) % self.q for a, b in zip(self.coords, other.coords)), self.q)

    def __add__(self, other: FieldVector) -> FieldVector:
        _compatible(self, other)
        return FieldVector(tuple((a + b) % self.q for a, b in zip(self.coords, other.coords)), self.q)


def _compatible(u: FieldVector, v: FieldVector) -> None:
    if u.q != v.q:
        raise FieldError(f"field mismatch: q={u.q} vs q={v.q}")
    if u.t != v.t:
        raise FieldError(f"dimension mismatch: t={u.t} vs t={v.t}")


def dot(u: FieldVector, v: FieldVector) -> int:
    _compatible(u, v)
    return sum(a * b for a, b in zip(u.coords, v.coords)) % u.q


def sqdist(u: FieldVector, v: FieldVector) -> int:
    _compatible(u, v)
    return sum((a - b) ** 2 for a, b in zip(u.coords, v.coords)) % u.q


def all_vectors(q: int, t: int) -> np.ndarray:
    """All of F_q^t as a (q**t, t) integer array in lexicographic order."""
    PrimeField(q)
    if t < 1:
        raise FieldError("dimension must be positive")
    return np.array(list(itertools.product(range(q), repeat=t)), dtype=np.int64).reshape(q**t, t)


def as_vector(coords: Sequence[int], q: int) -> FieldVector:
    return FieldVector(tuple(int(c) % q for c in coords), q)
