"""Ext dimensions between line bundles and twisted exceptional-curve sheaves.

Two kinds of sheaf are supported: a line bundle ``O(D)`` and ``O_E(k)``, the
degree-k line bundle on an exceptional (-1)-curve ``E`` of a blow-up of P^2.
Every Ext group reduces to cohomology on the surface or on ``E = P^1``:

* ``Ext^i(O(D), O(D'))  = H^i(X, O(D' - D))``;
* ``Ext^i(O(D), O_E(k)) = H^i(P^1, O(k - D.E))``;
* ``Ext^i(O_E(k), O(D)) = H^{2-i}(P^1, O(k - D.E + K.E))^*`` (Serre duality);
* ``Ext^i(O_E(a), O_E(b))`` gets ``H^i(O(b-a))`` plus ``H^{i-1}(O(b-a-1))``
  from the normal bundle ``O_E(E) = O(-1)``;
* curves that do not meet have no Ext at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .cohomology import CohomologyVector, ExtVector, h_projective_space, line_bundle_cohomology
from .errors import UnsupportedError, ValidationError
from .geometry import BlowupSurface
from .lattice import BidegreeClass, DivisorClass, SurfaceLattice, WeightedClass, intersect


@dataclass(frozen=True)
class LineBundle:
    cls: Union[DivisorClass, BidegreeClass, WeightedClass]


@dataclass(frozen=True)
class ExceptionalTwist:
    """``O_{E_curve}(k)``; ``curve`` is the 1-based label of E_curve."""

    curve: int
    k: int = 0


SheafDescriptor = Union[LineBundle, ExceptionalTwist]


def _curve_class(X: BlowupSurface, curve: int) -> DivisorClass:
    if not isinstance(X, BlowupSurface):
        raise ValidationError("exceptional-curve sheaves live on blow-ups of P^2")
    if not 1 <= curve <= X.t:
        raise ValidationError(f"no exceptional curve E{curve} on a blow-up at {X.t} centers")
    if X.config.children(curve - 1):
        # the total transform is reducible once a point on it is blown up
        raise UnsupportedError(f"E{curve} carries an infinitesimal center, so it is not a (-1)-curve")
    return X.exceptional(curve - 1)


def validate_descriptor(X, A: SheafDescriptor) -> None:
    if isinstance(A, ExceptionalTwist):
        _curve_class(X, A.curve)
    elif not isinstance(A, LineBundle):
        raise ValidationError(f"unknown sheaf descriptor {A!r}")


def twist(A: SheafDescriptor, D) -> SheafDescriptor:
    """``A`` tensored with ``O(D)``.

    On a blow-up of P^2 the pairing with ``E_i`` reads off ``-D[i]``, so no
    lattice is needed.
    """
    if isinstance(A, LineBundle):
        return LineBundle(A.cls + D)
    if isinstance(A, ExceptionalTwist):
        if not isinstance(D, DivisorClass) or A.curve >= len(D):
            raise ValidationError("exceptional twists only accept blow-up classes")
        return ExceptionalTwist(A.curve, A.k - D[A.curve])
    raise ValidationError(f"unknown sheaf descriptor {A!r}")


def restriction_degree(L: SurfaceLattice, D: DivisorClass, C: DivisorClass) -> int:
    """Degree of ``O(D)`` restricted to a curve of class ``C``."""
    return intersect(L, D, C)


def _on_p1(d: int) -> tuple[int, int]:
    return h_projective_space(1, d).h


def ext_dims(X, A: SheafDescriptor, B: SheafDescriptor) -> ExtVector:
    if isinstance(A, LineBundle) and isinstance(B, LineBundle):
        return line_bundle_cohomology(X, B.cls - A.cls)
    validate_descriptor(X, A)
    validate_descriptor(X, B)
    L = X.lattice
    K = L.canonical
    if isinstance(A, LineBundle):
        E = _curve_class(X, B.curve)
        h0, h1 = _on_p1(B.k - intersect(L, A.cls, E))
        return CohomologyVector((h0, h1, 0))
    if isinstance(B, LineBundle):
        E = _curve_class(X, A.curve)
        h0, h1 = _on_p1(A.k - intersect(L, B.cls, E) + intersect(L, K, E))
        return CohomologyVector((0, h1, h0))
    if A.curve == B.curve:
        a0, a1 = _on_p1(B.k - A.k)
        b0, b1 = _on_p1(B.k - A.k - 1)
        return CohomologyVector((a0, a1 + b0, b1))
    Ea, Eb = _curve_class(X, A.curve), _curve_class(X, B.curve)
    if intersect(L, Ea, Eb) != 0:
        raise UnsupportedError(f"E{A.curve} and E{B.curve} meet")
    return CohomologyVector((0, 0, 0))
