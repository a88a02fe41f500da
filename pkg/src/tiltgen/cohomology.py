"""Line bundle cohomology engines.

Four exact engines:

* :func:`h_projective_space` -- closed form on P^n;
* :func:`h_line_bundle_surface` -- blow-ups of P^2 through interpolation
  (h^0 as the nullity of a rational linear system, h^2 by Serre duality,
  h^1 from Riemann-Roch);
* :func:`h_proj_bundle` -- X_{m,n} through the pushforward to P^n;
* :func:`h_weighted` -- weighted projective stacks through monomial counts;

and one independent oracle, :func:`h_toric_oracle`, which counts characters
on a smooth complete toric surface.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

import numpy as np

from . import exact
from .errors import IntegrityError, UnsupportedError, ValidationError
from .geometry import (BlowupSurface, Infinitesimal, PointConfiguration, Proper,
                       ProjectiveBundleSpace, ToricSurfaceFan, WeightedProjectiveSpace,
                       canonical_class)
from .lattice import (BidegreeClass, DivisorClass, WeightedClass, euler_char_surface)


@dataclass(frozen=True)
class CohomologyVector:
    """Dimensions (h^0, ..., h^dim) of one sheaf, or of Ext^i between two."""

    h: tuple[int, ...]

    def __post_init__(self):
        h = tuple(int(x) for x in self.h)
        if any(x < 0 for x in h):
            raise IntegrityError(f"negative dimension in {h}")
        object.__setattr__(self, "h", h)

    def __iter__(self):
        return iter(self.h)

    def __getitem__(self, i):
        return self.h[i]

    def __len__(self):
        return len(self.h)

    def __add__(self, other: "CohomologyVector") -> "CohomologyVector":
        n = max(len(self), len(other))
        a = self.h + (0,) * (n - len(self))
        b = other.h + (0,) * (n - len(other))
        return CohomologyVector(x + y for x, y in zip(a, b))

    @property
    def euler(self) -> int:
        return sum((-1) ** i * x for i, x in enumerate(self.h))

    @property
    def top_nonzero(self) -> int | None:
        nz = [i for i, x in enumerate(self.h) if x]
        return nz[-1] if nz else None

    def is_zero(self) -> bool:
        return not any(self.h)

    def padded(self, length: int) -> "CohomologyVector":
        if length < len(self) and any(self.h[length:]):
            raise IntegrityError("cannot truncate nonzero entries")
        return CohomologyVector((self.h + (0,) * length)[:length])

    @classmethod
    def zero(cls, length: int) -> "CohomologyVector":
        return cls((0,) * length)


ExtVector = CohomologyVector


def h_projective_space(n: int, d: int) -> CohomologyVector:
    if n < 1:
        raise ValidationError("P^n needs n >= 1")
    h = [0] * (n + 1)
    if d >= 0:
        h[0] = comb(n + d, n)
    if d <= -n - 1:
        h[n] = comb(-d - 1, n)
    return CohomologyVector(h)


# ---------------------------------------------------------------- interpolation

@lru_cache(maxsize=None)
def _monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    return tuple((d - j - k, j, k) for j in range(d + 1) for k in range(d + 1 - j))


def _local_expansion(e, center: Proper) -> dict[tuple[int, int], Fraction]:
    """Taylor expansion of the monomial X^e at ``center`` in its affine chart."""
    _, (r, s), (pr, ps) = center.affine()
    er, es = e[r], e[s]
    out = {}
    for a in range(er + 1):
        ca = comb(er, a) * pr ** (er - a)
        if not ca:
            continue
        for b in range(es + 1):
            cb = comb(es, b) * ps ** (es - b)
            if cb:
                out[(a, b)] = ca * cb
    return out


def _blowup_expansion(local: dict, tangent) -> dict[tuple[int, int], Fraction]:
    """Rewrite a local expansion in the blow-up chart centred at ``tangent``.

    With direction (u:v) and u != 0 the chart is y = x(v/u + w); otherwise
    x = y(u/v + w).  The result is keyed by (exponent of the exceptional
    coordinate, exponent of w).
    """
    u, v = tangent
    out: dict[tuple[int, int], Fraction] = {}
    if u != 0:
        lam = v / u
        for (a, b), c in local.items():
            for t in range(b + 1):
                k = comb(b, t) * lam ** (b - t)
                if k:
                    key = (a + b, t)
                    out[key] = out.get(key, 0) + c * k
    else:
        mu = u / v
        for (a, b), c in local.items():
            for t in range(a + 1):
                k = comb(a, t) * mu ** (a - t)
                if k:
                    key = (a + b, t)
                    out[key] = out.get(key, 0) + c * k
    return out


@lru_cache(maxsize=None)
def _condition_rows(center: Proper, tangent, d: int, order: int) -> tuple[dict, ...]:
    """Rows forcing valuation >= ``order`` along the exceptional divisor of
    ``center`` (or of the infinitesimal point ``tangent`` above it)."""
    if order <= 0:
        return ()
    rows: dict[tuple[int, int], dict[int, Fraction]] = {}
    for col, e in enumerate(_monomials(d)):
        exp = _local_expansion(e, center)
        if tangent is not None:
            exp = _blowup_expansion(exp, tangent)
        for (a, b), c in exp.items():
            if a + b < order and c:
                rows.setdefault((a, b), {})[col] = c
    return tuple(exact.integral_row(r) for r in rows.values() if r)


def _prime_orders(config: PointConfiguration, mults: Sequence[int]) -> list[int]:
    """Coefficients of the exceptional prime divisors in sum m_i E_i.

    The E_i are total transforms, so a first-order infinitesimal center
    inherits its parent's multiplicity: E_parent = E'_parent + E_child.
    """
    out = []
    for i, c in enumerate(config.centers):
        if isinstance(c, Infinitesimal):
            out.append(mults[i] + mults[c.parent])
        else:
            out.append(mults[i])
    return out


def h0_interpolation(config: PointConfiguration, d: int, mults: Sequence[int]) -> int:
    """Dimension of degree-``d`` forms whose pullback vanishes along sum m_i E_i.

    Each exceptional prime divisor imposes one valuation condition; the
    conditions are linear and are written as vanishing Taylor coefficients
    in a chart of the (iterated) blow-up.  Nonpositive orders impose nothing.
    """
    mults = tuple(int(m) for m in mults)
    if len(mults) != len(config):
        raise ValidationError(f"{len(mults)} multiplicities for {len(config)} centers")
    if d < 0:
        return 0
    orders = _prime_orders(config, mults)
    return _h0_cached(config, d, tuple(_clamp(config, d, orders)))


def _clamp(config, d, orders):
    # A nonzero degree-d form has multiplicity <= d at a point and valuation
    # <= 2d along a first-order infinitesimal exceptional divisor; larger
    # demands cut out the same (zero) space.
    for c, o in zip(config.centers, orders):
        cap = 2 * d + 1 if isinstance(c, Infinitesimal) else d + 1
        yield max(0, min(o, cap))


@lru_cache(maxsize=None)
def _h0_cached(config: PointConfiguration, d: int, orders: tuple[int, ...]) -> int:
    rows = []
    for c, o in zip(config.centers, orders):
        if o <= 0:
            continue
        if isinstance(c, Infinitesimal):
            rows.extend(_condition_rows(config.centers[c.parent], c.tangent, d, o))
        else:
            rows.extend(_condition_rows(c, None, d, o))
    return exact.nullity(rows, len(_monomials(d)))


def h_line_bundle_surface(X, D: DivisorClass) -> CohomologyVector:
    if isinstance(X, ToricSurfaceFan):
        return h_toric_oracle(X, X.ray_coefficients(D))
    if not isinstance(X, BlowupSurface):
        raise ValidationError(f"unsupported surface {type(X).__name__}")
    L = X.lattice
    if len(D) != L.rank:
        raise ValidationError("class does not belong to the surface lattice")
    dual = L.canonical - D
    h0 = h0_interpolation(X.config, D[0], [-c for c in D[1:]])
    h2 = h0_interpolation(X.config, dual[0], [-c for c in dual[1:]])
    h1 = h0 + h2 - euler_char_surface(L, D)
    if h1 < 0:
        raise IntegrityError(f"negative h^1 = {h1} for class {L.format(D)}")
    return CohomologyVector((h0, h1, h2))


# ---------------------------------------------------------------- toric oracle

def _oracle_box(rays: np.ndarray, a: np.ndarray) -> tuple[int, int, int, int]:
    """Bounding box of the vertices of the arrangement <u, v_i> = -a_i - 1/2.

    The pattern Neg(u) is constant on the cells of that arrangement (integer
    characters never lie on a line).  An unbounded cell has a recession
    direction w, and Neg there is the rays with <w, v> < 0 plus possibly the
    boundary rays orthogonal to w: one contiguous arc, which contributes to no
    cohomology.  Bounded cells lie in the convex hull of the vertices, so the
    box exhausts every contributing character.
    """
    xs, ys = [], []
    r = len(rays)
    c = [Fraction(-2 * int(x) - 1, 2) for x in a]
    for i in range(r):
        for j in range(i + 1, r):
            vi, vj = rays[i], rays[j]
            det = int(vi[0]) * int(vj[1]) - int(vi[1]) * int(vj[0])
            if det == 0:
                continue
            xs.append((c[i] * int(vj[1]) - c[j] * int(vi[1])) / det)
            ys.append((int(vi[0]) * c[j] - int(vj[0]) * c[i]) / det)
    return (int(np.floor(min(xs))), int(np.ceil(max(xs))),
            int(np.floor(min(ys))), int(np.ceil(max(ys))))


def _count(rays: np.ndarray, a: np.ndarray, us: np.ndarray) -> np.ndarray:
    """Per-character contributions (h0, h1, h2) for the characters ``us``."""
    neg = (us @ rays.T) < -a
    empty = ~neg.any(axis=1)
    full = neg.all(axis=1)
    arcs = (neg & ~np.roll(neg, 1, axis=1)).sum(axis=1)
    mid = ~(empty | full)
    return np.stack([empty, np.where(mid, arcs - 1, 0), full], axis=1).astype(np.int64)


def h_toric_oracle(fan: ToricSurfaceFan, ray_coeffs: Sequence[int]) -> CohomologyVector:
    """Cech cohomology of O(sum a_i D_i), character by character."""
    rays = np.array(fan.rays, dtype=np.int64)
    a = np.array([int(x) for x in ray_coeffs], dtype=np.int64)
    if a.shape != (len(rays),):
        raise ValidationError("one coefficient per ray is required")
    x0, x1, y0, y1 = _oracle_box(rays, a)
    # one ring of padding, checked to contribute nothing
    gx, gy = np.meshgrid(np.arange(x0 - 1, x1 + 2), np.arange(y0 - 1, y1 + 2), indexing="ij")
    us = np.stack([gx.ravel(), gy.ravel()], axis=1)
    contrib = _count(rays, a, us)
    ring = (us[:, 0] < x0) | (us[:, 0] > x1) | (us[:, 1] < y0) | (us[:, 1] > y1)
    if contrib[ring].any():
        raise IntegrityError("a character outside the exhaustion box contributes")
    return CohomologyVector(contrib.sum(axis=0).tolist())


# ---------------------------------------------------------------- X_{m,n}

def h_proj_bundle(m: int, n: int, a: int, b: int) -> CohomologyVector:
    """h^i(X_{m,n}, O(aS + bH)) = sum_{j=0..a} h^i(P^n, O(b - jm)), for a >= -1."""
    if a <= -2:
        raise UnsupportedError(f"S-degree a = {a} needs relative duality (only a >= -1)")
    out = CohomologyVector.zero(n + 2)
    for j in range(a + 1):
        out = out + h_projective_space(n, b - j * m)
    return out.padded(n + 2)


def h_proj_bundle_any(m: int, n: int, a: int, b: int) -> CohomologyVector:
    """Like :func:`h_proj_bundle`, using Serre duality on X_{m,n} when a <= -2."""
    if a >= -1:
        return h_proj_bundle(m, n, a, b)
    dual = h_proj_bundle(m, n, -2 - a, -(n + 1 + m) - b)
    return CohomologyVector(tuple(reversed(dual.h)))


# ---------------------------------------------------------------- weighted

@lru_cache(maxsize=None)
def _denumerant_table(weights: tuple[int, ...], k: int) -> tuple[int, ...]:
    table = [1] + [0] * k
    for w in weights:
        for t in range(w, k + 1):
            table[t] += table[t - w]
    return tuple(table)


def denumerant(weights: Sequence[int], k: int) -> int:
    """Number of monomials of weighted degree ``k``."""
    if k < 0:
        return 0
    return _denumerant_table(tuple(sorted(weights)), k)[k]


def h_weighted(weights: Sequence[int], k: int) -> CohomologyVector:
    weights = tuple(int(w) for w in weights)
    if len(weights) < 2 or any(w < 1 for w in weights):
        raise ValidationError("weights must be at least two positive integers")
    n = len(weights) - 1
    h = [0] * (n + 1)
    h[0] = denumerant(weights, k)
    h[n] += denumerant(weights, -k - sum(weights))
    return CohomologyVector(h)


# ---------------------------------------------------------------- dispatch

def line_bundle_cohomology(space, cls) -> CohomologyVector:
    if isinstance(space, (BlowupSurface, ToricSurfaceFan)):
        return h_line_bundle_surface(space, cls)
    if isinstance(space, ProjectiveBundleSpace):
        if not isinstance(cls, BidegreeClass):
            raise ValidationError("X_{m,n} classes are BidegreeClass")
        return h_proj_bundle(space.m, space.n, cls.a, cls.b)
    if isinstance(space, WeightedProjectiveSpace):
        if not isinstance(cls, WeightedClass):
            raise ValidationError("weighted projective classes are WeightedClass")
        return h_weighted(space.weights, cls.k)
    raise ValidationError(f"unsupported space {type(space).__name__}")


def anticanonical_cohomology(space) -> CohomologyVector:
    return line_bundle_cohomology(space, -canonical_class(space))
