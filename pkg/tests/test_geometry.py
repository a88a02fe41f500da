from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tiltgen.errors import ValidationError
from tiltgen.geometry import (Infinitesimal, NonPrimitiveRay, OrientationError, PointConfiguration,
                              Proper, ProjectiveBundleSpace, SingularConeError, ToricSurfaceFan,
                              WeightedProjectiveSpace, build_blowup_surface, canonical_class,
                              genericity_report, hirzebruch_fan, rank7_toric_preset,
                              torus_fixed_b3, validate_fan)
from tiltgen.lattice import BidegreeClass, WeightedClass, euler_char_surface, intersect
from tiltgen.presets import GENERAL_POINTS, general_blowup


def test_torus_fixed_b3():
    X = build_blowup_surface(PointConfiguration.of_points((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert X.t == 3
    assert X.lattice.canonical == X.lattice.parse("-3H+E1+E2+E3")
    assert genericity_report(X.config).no_three_collinear


def test_collinear_points_are_accepted_but_flagged():
    cfg = PointConfiguration.of_points((0, 0, 1), (0, 1, 1), (0, 1, 0))
    build_blowup_surface(cfg)
    assert not genericity_report(cfg).no_three_collinear


def test_configuration_validation():
    with pytest.raises(ValidationError):
        PointConfiguration.of_points((1, 2, 3), (2, 4, 6))
    with pytest.raises(ValidationError):
        PointConfiguration((Proper((1, 0, 0)), Infinitesimal(1, (1, 0))))
    with pytest.raises(ValidationError):
        PointConfiguration((Proper((1, 0, 0)), Infinitesimal(0, (1, 0)), Infinitesimal(1, (0, 1))))
    with pytest.raises(ValidationError):
        PointConfiguration((Proper((1, 0, 0)), Infinitesimal(0, (1, 2)), Infinitesimal(0, (2, 4))))
    with pytest.raises(ValidationError):
        Proper((0, 0, 0))
    with pytest.raises(ValidationError):
        Proper((0.5, 1, 1))


def test_rational_coordinates():
    p = Proper(("1/2", 1, "-3/4"))
    assert p.coords == (Fraction(1, 2), Fraction(1), Fraction(-3, 4))
    assert p.same_point(Proper((2, 4, -3)))


def test_general_presets_pass_genericity():
    # [DERIVED] exact determinants and conic ranks at the committed points
    for t in (5, 6, 11):
        assert genericity_report(PointConfiguration.of_points(*GENERAL_POINTS[:t])).general
    general_blowup(11)


@given(st.lists(st.integers(1, 7), min_size=6, max_size=6))
def test_genericity_is_scale_invariant(scales):
    pts = [tuple(s * x for x in p) for s, p in zip(scales, GENERAL_POINTS[:6])]
    assert genericity_report(PointConfiguration.of_points(*pts)) == \
        genericity_report(PointConfiguration.of_points(*GENERAL_POINTS[:6]))


def test_validate_fan():
    validate_fan([(1, 0), (0, 1), (-1, 4), (0, -1)])
    with pytest.raises(SingularConeError):
        validate_fan([(1, 0), (-1, 0)])
    with pytest.raises(NonPrimitiveRay):
        validate_fan([(2, 0), (0, 1), (-1, -1)])
    with pytest.raises(OrientationError):
        validate_fan([(1, 0), (-1, -1), (0, 1)])
    with pytest.raises(SingularConeError):
        validate_fan([(1, 0), (1, 2), (-1, -1)])
    with pytest.raises(ValidationError):
        validate_fan([(1, 0), (0, 1), (-1, 0), (0, -1)] * 2)


def test_rank7_preset():
    model = rank7_toric_preset()
    assert len(model.fan.rays) == 9  # [PAPER] nine labelled rays
    L = model.surface.lattice
    i = model.ray_classes.index(L.parse("E4"))
    assert intersect(L, model.ray_classes[i], model.ray_classes[i]) == -1
    # the labels reproduce the intersection form of the fan
    g = model.fan.ray_gram()
    for a in range(9):
        for b in range(9):
            assert intersect(L, model.ray_classes[a], model.ray_classes[b]) == g[a][b]
    # and sum to -K
    total = L.zero()
    for c in model.ray_classes:
        total = total + c
    assert total == -L.canonical


def test_toric_lattice_canonical_matches_blowup_model():
    model = torus_fixed_b3()
    Lf = model.fan.lattice
    assert model.fan_class(model.surface.lattice.canonical) == Lf.canonical
    assert euler_char_surface(Lf, Lf.canonical) == 1


def test_canonical_classes():
    assert canonical_class(ProjectiveBundleSpace(4, 1)) == BidegreeClass(-2, -6)  # [PAPER]
    assert canonical_class(ProjectiveBundleSpace(3, 2)) == BidegreeClass(-2, -6)
    assert canonical_class(WeightedProjectiveSpace((1, 1, 4))) == WeightedClass(-6)  # [DERIVED]
    assert canonical_class(general_blowup(11)) == general_blowup(11).lattice.parse(
        "-3H+E1+E2+E3+E4+E5+E6+E7+E8+E9+E10+E11")
    assert hirzebruch_fan(4).self_intersections() == [0, -4, 0, 4]


def test_space_validation():
    with pytest.raises(ValidationError):
        ProjectiveBundleSpace(-1, 1)
    with pytest.raises(ValidationError):
        ProjectiveBundleSpace(2, 0)
    with pytest.raises(ValidationError):
        WeightedProjectiveSpace((1, 0, 2))
    with pytest.raises(ValidationError):
        ToricSurfaceFan(((1, 0), (0, 1)))
