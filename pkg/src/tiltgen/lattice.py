"""Picard lattices of the supported surfaces and class bookkeeping.

All arithmetic is on Python integers, so nothing can overflow.  Three kinds
of class are used:

* :class:`DivisorClass` -- a vector in a fixed basis of a surface lattice
  (``H, E1, ..., Et`` on blow-ups of P^2, ``S, H`` on X_{m,1}, ray divisors
  on a toric fan);
* :class:`BidegreeClass` -- ``aS + bH`` on X_{m,n};
* :class:`WeightedClass` -- ``O(k)`` on a weighted projective stack.

Convention for X_{m,1}: S is the negative section, ``S^2 = -m``, ``S.H = 1``,
``H^2 = 0``.  This is the only choice compatible with ``K = -2S - (m+2)H``
and adjunction on the fibre.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, IntegrityError, ValidationError


@dataclass(frozen=True)
class DivisorClass:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _check(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        if len(other) != len(self):
            raise DimensionMismatch(f"rank {len(self)} vs {len(other)}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return DivisorClass(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return DivisorClass(a - b for a, b in zip(self, other))

    def __neg__(self):
        return DivisorClass(-a for a in self)

    def __mul__(self, k: int):
        return DivisorClass(k * a for a in self)

    __rmul__ = __mul__

    @classmethod
    def zero(cls, rank: int) -> "DivisorClass":
        return cls((0,) * rank)


@dataclass(frozen=True)
class BidegreeClass:
    """``aS + bH`` on X_{m,n}."""

    a: int
    b: int

    def __add__(self, other):
        return BidegreeClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return BidegreeClass(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return BidegreeClass(-self.a, -self.b)

    def __mul__(self, k: int):
        return BidegreeClass(k * self.a, k * self.b)

    __rmul__ = __mul__

    @property
    def coeffs(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class WeightedClass:
    """``O(k)`` on P(a_0, ..., a_n)."""

    k: int

    def __add__(self, other):
        return WeightedClass(self.k + other.k)

    def __sub__(self, other):
        return WeightedClass(self.k - other.k)

    def __neg__(self):
        return WeightedClass(-self.k)

    def __mul__(self, k: int):
        return WeightedClass(k * self.k)

    __rmul__ = __mul__

    @property
    def coeffs(self):
        return (self.k,)


_TERM = re.compile(r"([+-]?)(\d*)([A-Za-z]\w*)")


@dataclass(frozen=True)
class SurfaceLattice:
    basis_labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    canonical: DivisorClass

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        r = len(self.basis_labels)
        if len(gram) != r or any(len(row) != r for row in gram):
            raise DimensionMismatch("gram matrix does not match the basis")
        if any(gram[i][j] != gram[j][i] for i in range(r) for j in range(r)):
            raise ValidationError("gram matrix is not symmetric")
        if len(self.canonical) != r:
            raise DimensionMismatch("canonical class has the wrong rank")
        # Hodge index: one positive direction.
        eig = np.linalg.eigvalsh(np.array(gram, dtype=float))
        pos, neg = int((eig > 1e-9).sum()), int((eig < -1e-9).sum())
        if (pos, neg) != (1, r - 1):
            raise ValidationError(f"gram signature {(pos, neg)} is not (1, {r - 1})")

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    def basis(self, label: str) -> DivisorClass:
        i = self.basis_labels.index(label)
        return DivisorClass(1 if j == i else 0 for j in range(self.rank))

    def zero(self) -> DivisorClass:
        return DivisorClass.zero(self.rank)

    def parse(self, text: str) -> DivisorClass:
        """Parse strings like ``"2H-E1-E3"`` or ``"O"`` into a class."""
        text = text.replace(" ", "").replace("−", "-")
        coeffs = [0] * self.rank
        if text in ("", "O", "0"):
            return DivisorClass(coeffs)
        pos = 0
        for m in _TERM.finditer(text):
            if m.start() != pos:
                raise ValidationError(f"cannot parse class {text!r}")
            pos = m.end()
            sign = -1 if m.group(1) == "-" else 1
            mult = int(m.group(2)) if m.group(2) else 1
            label = m.group(3)
            if label not in self.basis_labels:
                raise ValidationError(f"unknown basis label {label!r} in {text!r}")
            coeffs[self.basis_labels.index(label)] += sign * mult
        if pos != len(text):
            raise ValidationError(f"cannot parse class {text!r}")
        return DivisorClass(coeffs)

    def format(self, D: DivisorClass) -> str:
        parts = []
        for c, lab in zip(D, self.basis_labels):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+") + mag + lab)
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s

    def contains(self, D) -> bool:
        return isinstance(D, DivisorClass) and len(D) == self.rank


def _check_member(L: SurfaceLattice, D) -> None:
    if not isinstance(D, DivisorClass):
        raise ValidationError(f"expected a DivisorClass, got {type(D).__name__}")
    if len(D) != L.rank:
        raise DimensionMismatch(f"class of rank {len(D)} in a lattice of rank {L.rank}")


def intersect(L: SurfaceLattice, D1: DivisorClass, D2: DivisorClass) -> int:
    _check_member(L, D1)
    _check_member(L, D2)
    g = L.gram
    return sum(D1[i] * g[i][j] * D2[j]
               for i in range(L.rank) if D1[i]
               for j in range(L.rank) if D2[j])


def euler_char_surface(L: SurfaceLattice, D: DivisorClass) -> int:
    """Riemann-Roch on a rational surface: ``1 + (D.D - D.K)/2``."""
    num = intersect(L, D, D) - intersect(L, D, L.canonical)
    if num % 2:
        raise IntegrityError(f"D.D - D.K = {num} is odd; malformed lattice")
    return 1 + num // 2


def serre_dual_class(L: SurfaceLattice, D: DivisorClass) -> DivisorClass:
    _check_member(L, D)
    return L.canonical - D


def blowup_lattice(t: int) -> SurfaceLattice:
    """Lattice of P^2 blown up ``t`` times, basis H, E1..Et (total transforms)."""
    if t < 0:
        raise ValidationError("number of blow-ups must be nonnegative")
    r = t + 1
    gram = [[0] * r for _ in range(r)]
    gram[0][0] = 1
    for i in range(1, r):
        gram[i][i] = -1
    labels = ("H",) + tuple(f"E{i}" for i in range(1, r))
    canonical = DivisorClass((-3,) + (1,) * t)
    return SurfaceLattice(labels, gram, canonical)


def hirzebruch_lattice(m: int) -> SurfaceLattice:
    """Lattice of X_{m,1} = F_m in the basis S, H."""
    if m < 0:
        raise ValidationError("m must be nonnegative")
    return SurfaceLattice(("S", "H"), ((-m, 1), (1, 0)), DivisorClass((-2, -(m + 2))))


def lattice_from_classes(labels: Sequence[str], gram, canonical: Sequence[int]) -> SurfaceLattice:
    return SurfaceLattice(tuple(labels), gram, DivisorClass(canonical))
