"""Exact rational linear algebra on small dense or sparse systems.

Rows are mappings ``column -> Fraction`` (or anything coercible to one).
Only what the engines need: rank, nullity, and solving a square system.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError


def _as_row(row) -> dict[int, Fraction]:
    if isinstance(row, Mapping):
        items = row.items()
    else:
        items = enumerate(row)
    return {j: Fraction(v) for j, v in items if v != 0}


def integral_row(row) -> dict[int, int]:
    """Primitive integer multiple of a rational row, as a sparse dict."""
    return _primitive(_integral(_as_row(row)))


def _integral(row: dict[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return {j: int(v * den) for j, v in row.items()}


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {j: v // g for j, v in row.items()}


def rank(rows: Iterable) -> int:
    """Rank over Q of the given rows (sparse dicts or dense sequences).

    Fraction-free elimination: rows are scaled to primitive integer vectors,
    so the arithmetic stays in machine-friendly Python ints.
    """
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        if isinstance(raw, dict) and all(type(v) is int for v in raw.values()):
            row = raw
        else:
            row = integral_row(raw)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = row
                break
            p, f = piv[col], row[col]
            new = {j: v * p for j, v in row.items()}
            for j, v in piv.items():
                nv = new.get(j, 0) - f * v
                if nv:
                    new[j] = nv
                else:
                    new.pop(j, None)
            row = _primitive(new) if new else new
    return len(pivots)


def nullity(rows: Iterable, ncols: int) -> int:
    return ncols - rank(rows)


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` for a square nonsingular matrix."""
    n = len(matrix)
    aug = [[Fraction(v) for v in matrix[i]] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValidationError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def det2(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))
