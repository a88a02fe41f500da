"""The spaces: blow-ups of P^2, projective bundles X_{m,n}, weighted
projective stacks and smooth complete toric surfaces.

Coordinates are exact rationals throughout.  An infinitesimal center is a
point on the exceptional curve of an earlier *proper* center, given by a
tangent direction ``(u:v)`` at the parent.  The direction is read in the
affine chart ``X_c = 1`` where ``c`` is the first nonzero homogeneous
coordinate of the parent; the two local coordinates are the remaining
homogeneous coordinates, in index order, divided by ``X_c``.  For example at
``(1:0:0)`` the local coordinates are ``(Y/X, Z/X)`` and ``(1:0)`` points
along the line ``Z = 0``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from . import exact
from .errors import ValidationError
from .lattice import (BidegreeClass, DivisorClass, SurfaceLattice, WeightedClass,
                      blowup_lattice)


class NonPrimitiveRay(ValidationError):
    pass


class OrientationError(ValidationError):
    pass


class SingularConeError(ValidationError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise ValidationError("coordinates must be exact (int, Fraction or 'p/q')")
    return Fraction(x)


@dataclass(frozen=True)
class Proper:
    coords: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        c = tuple(_frac(x) for x in self.coords)
        if len(c) != 3:
            raise ValidationError("a point of P^2 needs three coordinates")
        if all(x == 0 for x in c):
            raise ValidationError("coordinates (0:0:0) do not define a point")
        object.__setattr__(self, "coords", c)

    @property
    def chart(self) -> int:
        return next(i for i, x in enumerate(self.coords) if x != 0)

    def affine(self) -> tuple[int, tuple[int, int], tuple[Fraction, Fraction]]:
        """Chart index, local coordinate indices, and local coordinates."""
        c = self.chart
        rest = tuple(i for i in range(3) if i != c)
        pc = self.coords[c]
        return c, rest, (self.coords[rest[0]] / pc, self.coords[rest[1]] / pc)

    def same_point(self, other: "Proper") -> bool:
        a, b = self.coords, other.coords
        return all(a[i] * b[j] == a[j] * b[i] for i in range(3) for j in range(i + 1, 3))


@dataclass(frozen=True)
class Infinitesimal:
    parent: int
    tangent: tuple[Fraction, Fraction]

    def __post_init__(self):
        t = tuple(_frac(x) for x in self.tangent)
        if len(t) != 2 or all(x == 0 for x in t):
            raise ValidationError("a tangent direction needs two coordinates, not both zero")
        object.__setattr__(self, "tangent", t)
        object.__setattr__(self, "parent", int(self.parent))


Center = Union[Proper, Infinitesimal]


@dataclass(frozen=True)
class PointConfiguration:
    centers: tuple[Center, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(self.centers))
        validate_configuration(self)

    def __len__(self):
        return len(self.centers)

    @classmethod
    def of_points(cls, *points) -> "PointConfiguration":
        return cls(tuple(Proper(p) for p in points))

    def children(self, i: int) -> list[int]:
        return [j for j, c in enumerate(self.centers)
                if isinstance(c, Infinitesimal) and c.parent == i]


def validate_configuration(config: PointConfiguration) -> None:
    proper_seen: list[tuple[int, Proper]] = []
    for idx, c in enumerate(config.centers):
        if isinstance(c, Proper):
            for j, q in proper_seen:
                if c.same_point(q):
                    raise ValidationError(f"center {idx} repeats center {j}")
            proper_seen.append((idx, c))
        elif isinstance(c, Infinitesimal):
            if not 0 <= c.parent < idx:
                raise ValidationError(
                    f"center {idx}: parent index {c.parent} must refer to an earlier center")
            if not isinstance(config.centers[c.parent], Proper):
                raise ValidationError(
                    f"center {idx}: only first-order infinitesimal points are supported")
            for j in range(c.parent + 1, idx):
                o = config.centers[j]
                if (isinstance(o, Infinitesimal) and o.parent == c.parent
                        and o.tangent[0] * c.tangent[1] == o.tangent[1] * c.tangent[0]):
                    raise ValidationError(f"center {idx} repeats center {j}")
        else:
            raise ValidationError(f"center {idx} has unknown type {type(c).__name__}")


@dataclass(frozen=True)
class BlowupSurface:
    config: PointConfiguration
    lattice: SurfaceLattice
    dim: int = field(default=2, init=False)

    @property
    def t(self) -> int:
        return len(self.config)

    def exceptional(self, i: int) -> DivisorClass:
        """Total transform E_{i+1} of the i-th center (0-based)."""
        return self.lattice.basis(f"E{i + 1}")


def build_blowup_surface(config: PointConfiguration) -> BlowupSurface:
    validate_configuration(config)
    return BlowupSurface(config, blowup_lattice(len(config)))


@dataclass(frozen=True)
class ProjectiveBundleSpace:
    """X_{m,n} = P(O + O(-m)) over P^n."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 1:
            raise ValidationError("X_{m,n} needs m >= 0 and n >= 1")

    @property
    def dim(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class WeightedProjectiveSpace:
    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(a) for a in self.weights)
        if len(w) < 2 or any(a < 1 for a in w):
            raise ValidationError("weights must be at least two positive integers")
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return len(self.weights) - 1


def validate_fan(rays) -> None:
    """Accept iff the rays form a smooth complete fan in counterclockwise order."""
    rays = [tuple(int(x) for x in v) for v in getattr(rays, "rays", rays)]
    if len(rays) < 3:
        raise SingularConeError("a complete fan needs at least three rays")
    for v in rays:
        if len(v) != 2:
            raise ValidationError(f"ray {v} is not a plane vector")
        if math.gcd(*v) != 1:
            raise NonPrimitiveRay(f"ray {v} is not primitive")
    if len(set(rays)) != len(rays):
        raise ValidationError("rays are not pairwise distinct")
    turn = 0.0
    for i, v in enumerate(rays):
        w = rays[(i + 1) % len(rays)]
        d = exact.det2(v, w)
        if d <= 0:
            raise OrientationError(f"rays {v}, {w} are not in counterclockwise order")
        if d != 1:
            raise SingularConeError(f"cone spanned by {v}, {w} has determinant {d}")
        turn += math.atan2(d, v[0] * w[0] + v[1] * w[1])
    if abs(turn - 2 * math.pi) > 1e-6:
        raise OrientationError("rays wind around the origin more than once")


@dataclass(frozen=True)
class ToricSurfaceFan:
    rays: tuple[tuple[int, int], ...]

    def __post_init__(self):
        r = tuple(tuple(int(x) for x in v) for v in self.rays)
        object.__setattr__(self, "rays", r)
        validate_fan(r)

    dim = 2

    def __len__(self):
        return len(self.rays)

    def self_intersections(self) -> list[int]:
        """D_i^2 = -b_i where v_{i-1} + v_{i+1} = b_i v_i."""
        r, out = self.rays, []
        for i, v in enumerate(r):
            s = (r[i - 1][0] + r[(i + 1) % len(r)][0], r[i - 1][1] + r[(i + 1) % len(r)][1])
            # v is primitive, so one coordinate is nonzero
            b = s[0] // v[0] if v[0] else s[1] // v[1]
            out.append(-b)
        return out

    def ray_gram(self) -> list[list[int]]:
        """Intersection numbers D_i . D_j of the ray divisors."""
        n = len(self.rays)
        g = [[0] * n for _ in range(n)]
        for i, s in enumerate(self.self_intersections()):
            g[i][i] = s
            g[i][(i + 1) % n] = g[(i + 1) % n][i] = 1
        return g

    def _dual(self) -> tuple[tuple[int, int], tuple[int, int]]:
        (a, b), (c, d) = self.rays[0], self.rays[1]
        # det = ad - bc = 1; rows of (V^T)^{-1}
        return (d, -c), (-b, a)

    @property
    def lattice(self) -> SurfaceLattice:
        return fan_lattice(self)

    def class_of(self, ray_coeffs: Sequence[int]) -> DivisorClass:
        """Class in the fan lattice (basis D_2..D_{r-1}) of sum a_i D_i."""
        a = [int(x) for x in ray_coeffs]
        if len(a) != len(self.rays):
            raise ValidationError("one coefficient per ray is required")
        u0, u1 = self._dual()
        return DivisorClass(
            a[i] - a[0] * (u0[0] * v[0] + u0[1] * v[1]) - a[1] * (u1[0] * v[0] + u1[1] * v[1])
            for i, v in enumerate(self.rays) if i >= 2)

    def ray_coefficients(self, D: DivisorClass) -> tuple[int, ...]:
        if len(D) != len(self.rays) - 2:
            raise ValidationError("class does not belong to this fan's lattice")
        return (0, 0) + tuple(D)


def fan_lattice(fan: ToricSurfaceFan) -> SurfaceLattice:
    g = fan.ray_gram()
    n = len(fan.rays)
    labels = tuple(f"D{i}" for i in range(2, n))
    gram = [[g[i][j] for j in range(2, n)] for i in range(2, n)]
    canonical = fan.class_of([-1] * n)
    return SurfaceLattice(labels, gram, canonical)


def canonical_class(space):
    if isinstance(space, BlowupSurface):
        return space.lattice.canonical
    if isinstance(space, ProjectiveBundleSpace):
        return BidegreeClass(-2, -(space.n + 1 + space.m))
    if isinstance(space, WeightedProjectiveSpace):
        return WeightedClass(-sum(space.weights))
    if isinstance(space, ToricSurfaceFan):
        return fan_lattice(space).canonical
    raise ValidationError(f"unsupported space {type(space).__name__}")


def surface_lattice(space) -> SurfaceLattice:
    if isinstance(space, BlowupSurface):
        return space.lattice
    if isinstance(space, ToricSurfaceFan):
        return fan_lattice(space)
    if isinstance(space, ProjectiveBundleSpace) and space.n == 1:
        from .lattice import hirzebruch_lattice
        return hirzebruch_lattice(space.m)
    raise ValidationError(f"{type(space).__name__} has no surface lattice")


@dataclass(frozen=True)
class GenericityReport:
    distinct: bool
    no_three_collinear: bool
    no_six_on_conic: bool
    infinitesimal: int

    @property
    def general(self) -> bool:
        return self.distinct and self.no_three_collinear and self.no_six_on_conic


def _conic_row(p):
    x, y, z = p
    return [x * x, y * y, z * z, x * y, x * z, y * z]


def genericity_report(config: PointConfiguration) -> GenericityReport:
    pts = [c for c in config.centers if isinstance(c, Proper)]
    distinct = all(not a.same_point(b) for a, b in itertools.combinations(pts, 2))
    no_three = all(exact.det3(a.coords, b.coords, c.coords) != 0
                   for a, b, c in itertools.combinations(pts, 3))
    no_six = all(exact.rank(_conic_row(p.coords) for p in six) == 6
                 for six in itertools.combinations(pts, 6))
    return GenericityReport(distinct, no_three, no_six, len(config) - len(pts))


class ToricBlowupModel(NamedTuple):
    fan: ToricSurfaceFan
    surface: BlowupSurface
    ray_classes: tuple[DivisorClass, ...]

    def fan_class(self, D: DivisorClass) -> DivisorClass:
        """Translate a class from the blow-up lattice into the fan lattice."""
        n = len(self.fan.rays)
        cols = [self.ray_classes[i] for i in range(2, n)]
        matrix = [[cols[j][i] for j in range(n - 2)] for i in range(len(D))]
        sol = exact.solve(matrix, list(D))
        if any(x.denominator != 1 for x in sol):
            raise ValidationError("ray labels do not span the lattice over Z")
        return DivisorClass(int(x) for x in sol)

    def blowup_class(self, ray_coeffs: Sequence[int]) -> DivisorClass:
        out = self.surface.lattice.zero()
        for a, c in zip(ray_coeffs, self.ray_classes):
            out = out + a * c
        return out


# Torus-fixed points of P^2 (X:Y:Z) for the fan with rays (1,0), (0,1), (-1,-1)
# attached to Y, Z, X respectively.  p1 = cone((1,0),(0,1)), p2 = cone((-1,-1),(1,0)),
# p3 = cone((0,1),(-1,-1)).
_P1, _P2, _P3 = (1, 0, 0), (0, 0, 1), (0, 1, 0)

RANK7_RAYS = ((1, 0), (1, 1), (1, 2), (0, 1), (-1, 0), (-2, -1), (-1, -1), (0, -1), (1, -1))
RANK7_LABELS = ("H-E1-E2-E5", "E1-E4", "E4", "H-E1-E3-E4", "E3-E6", "E6",
                "H-E2-E3-E6", "E2-E5", "E5")


def rank7_configuration() -> PointConfiguration:
    # E4 on E1 towards p3 (line Z=0 at p1: local (Y/X, Z/X), direction (1:0));
    # E5 on E2 towards p1 (line Y=0 at p2: local (X/Z, Y/Z), direction (1:0));
    # E6 on E3 towards p2 (line X=0 at p3: local (X/Y, Z/Y), direction (0:1)).
    return PointConfiguration((
        Proper(_P1), Proper(_P2), Proper(_P3),
        Infinitesimal(0, (1, 0)), Infinitesimal(1, (1, 0)), Infinitesimal(2, (0, 1)),
    ))


def rank7_toric_preset() -> ToricBlowupModel:
    fan = ToricSurfaceFan(RANK7_RAYS)
    surface = build_blowup_surface(rank7_configuration())
    classes = tuple(surface.lattice.parse(s) for s in RANK7_LABELS)
    return ToricBlowupModel(fan, surface, classes)


def torus_fixed_b3() -> ToricBlowupModel:
    """P^2 blown up at its three torus-fixed points, as a hexagon fan."""
    fan = ToricSurfaceFan(((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)))
    surface = build_blowup_surface(PointConfiguration.of_points(_P1, _P2, _P3))
    labels = ("H-E1-E2", "E1", "H-E1-E3", "E3", "H-E2-E3", "E2")
    return ToricBlowupModel(fan, surface, tuple(surface.lattice.parse(s) for s in labels))


def hirzebruch_fan(m: int) -> ToricSurfaceFan:
    """F_m with rays (1,0), (0,1), (-1,m), (0,-1).

    D_(1,0) is a fibre H and D_(0,1) is the negative section S, so
    ``aS + bH`` has ray coefficients ``(b, a, 0, 0)``.
    """
    return ToricSurfaceFan(((1, 0), (0, 1), (-1, m), (0, -1)))


def hirzebruch_ray_coefficients(a: int, b: int) -> tuple[int, int, int, int]:
    return (b, a, 0, 0)
