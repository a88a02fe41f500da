"""Named spaces and collections used by the reproduction runs.

General-position blow-ups use fixed integer points; every constructor asserts
the genericity predicates before returning, so a bad edit fails loudly.
"""
from __future__ import annotations

import json
from importlib import resources

from .errors import ValidationError
from .geometry import (BlowupSurface, PointConfiguration, ProjectiveBundleSpace,
                       WeightedProjectiveSpace, build_blowup_surface, genericity_report,
                       rank7_toric_preset)
from .lattice import BidegreeClass, WeightedClass
from .sheaves import ExceptionalTwist, LineBundle
from .tilting import Collection

# No three collinear and no six on a conic (checked in general_blowup).
GENERAL_POINTS = (
    (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, -1, 2),
    (1, -9, -8), (1, -8, -9), (1, -7, -5), (1, -6, -4), (1, -5, 5),
)

COLLINEAR_POINTS = ((0, 0, 1), (0, 1, 1), (0, 1, 0))

T3_CLASSES = ("0", "E2", "E1", "H-E3-E4", "H-E3", "H-E4",
              "2H-E3-E4-E5-E6", "2H-E3-E4-E5", "2H-E3-E4-E6")

RANK7_CLASSES = ("0", "E4", "E2", "H-E3-E5", "H-E3", "H-E5",
                 "2H-E1-E3-E5-E6", "2H-E1-E3-E5", "2H-E3-E5-E6")

WEIGHTS = ((1, 1, 4), (1, 2, 3), (1, 1, 1, 5))


def general_blowup(t: int) -> BlowupSurface:
    if not 0 <= t <= len(GENERAL_POINTS):
        raise ValidationError(f"no general preset with {t} points")
    config = PointConfiguration.of_points(*GENERAL_POINTS[:t])
    report = genericity_report(config)
    if not report.general:
        raise AssertionError(f"preset points fail genericity: {report}")
    return build_blowup_surface(config)


def collinear_b3() -> BlowupSurface:
    config = PointConfiguration.of_points(*COLLINEAR_POINTS)
    if genericity_report(config).no_three_collinear:
        raise AssertionError("collinear preset is not collinear")
    return build_blowup_surface(config)


def _parse(X: BlowupSurface, labels) -> tuple[LineBundle, ...]:
    return tuple(LineBundle(X.lattice.parse(s)) for s in labels)


def t1(X: BlowupSurface) -> Collection:
    """O, O(E_1), ..., O(E_t), O(H), O(2H)."""
    labels = ["0"] + [f"E{i}" for i in range(1, X.t + 1)] + ["H", "2H"]
    return Collection(X, _parse(X, labels), anticanonical_smooth_member=True)


def t2(X: BlowupSurface) -> Collection:
    """O, O(H), O(2H), O_{E_1}, ..., O_{E_t}."""
    members = _parse(X, ["0", "H", "2H"]) + tuple(ExceptionalTwist(i) for i in range(1, X.t + 1))
    return Collection(X, members)


def t3() -> Collection:
    X = general_blowup(6)
    return Collection(X, _parse(X, T3_CLASSES), anticanonical_smooth_member=True)


def rank7_collection() -> Collection:
    """The collection on the Picard-rank-7 toric surface, on its blow-up model.

    -K is nef and big with K^2 = 3, so |-K| is base point free and a general
    member is a smooth elliptic curve.
    """
    X = rank7_toric_preset().surface
    return Collection(X, _parse(X, RANK7_CLASSES), anticanonical_smooth_member=True)


def hirzebruch_collection(m: int, n: int) -> Collection:
    """O, O(H), ..., O(nH), O(S+mH), ..., O(S+(m+n)H) on X_{m,n}."""
    X = ProjectiveBundleSpace(m, n)
    members = [BidegreeClass(0, j) for j in range(n + 1)]
    members += [BidegreeClass(1, m + j) for j in range(n + 1)]
    return Collection(X, tuple(LineBundle(c) for c in members))


def weighted_collection(weights) -> Collection:
    """O, O(1), ..., O(sum(weights) - 1)."""
    X = WeightedProjectiveSpace(tuple(weights))
    return Collection(X, tuple(LineBundle(WeightedClass(k)) for k in range(sum(X.weights))))


def quiver_f4() -> tuple[Collection, Collection]:
    wp = WeightedProjectiveSpace((1, 1, 4))
    a = Collection(wp, tuple(LineBundle(WeightedClass(k)) for k in (0, 1, 4, 5)))
    x = ProjectiveBundleSpace(4, 1)
    b = Collection(x, tuple(LineBundle(BidegreeClass(s, h)) for s, h in ((0, 0), (0, 1), (1, 4), (1, 5))))
    return a, b


def expected(name: str) -> dict:
    """Committed expected values for a reproduction run."""
    text = resources.files("tiltgen").joinpath("data", "expected.json").read_text()
    table = json.loads(text)
    if name not in table:
        raise ValidationError(f"no expected table for {name!r}")
    return table[name]
