"""Collection-level checks: exceptionality, i0, generation time, pullback.

For a collection ``E_0, ..., E_r`` on a smooth proper ``X`` the reported
generation time is ``dim X + i0`` where ``i0`` is the largest ``i`` with
``Ext^i(E_a, E_b (x) omega^vee) != 0`` for some pair.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cohomology import CohomologyVector, line_bundle_cohomology
from .errors import IntegrityError, ValidationError
from .geometry import (BlowupSurface, ProjectiveBundleSpace, ToricSurfaceFan,
                       WeightedProjectiveSpace, canonical_class, surface_lattice)
from .lattice import DivisorClass, euler_char_surface, intersect
from .sheaves import ExceptionalTwist, LineBundle, SheafDescriptor, ext_dims, twist, validate_descriptor

log = logging.getLogger(__name__)

DEFAULT_P_CAP = 25


@dataclass(frozen=True)
class Collection:
    space: object
    members: tuple
    anticanonical_smooth_member: bool = False

    def __post_init__(self):
        members = tuple(m if isinstance(m, (LineBundle, ExceptionalTwist)) else LineBundle(m)
                        for m in self.members)
        if not members:
            raise ValidationError("a collection needs at least one member")
        for m in members:
            validate_descriptor(self.space, m)
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.space.dim if hasattr(self.space, "dim") else 2

    @property
    def line_bundles_only(self) -> bool:
        return all(isinstance(m, LineBundle) for m in self.members)

    def reordered(self, order: Sequence[int]) -> "Collection":
        return Collection(self.space, tuple(self.members[i] for i in order),
                          self.anticanonical_smooth_member)

    def twisted(self, D) -> "Collection":
        return Collection(self.space, tuple(twist(m, D) for m in self.members),
                          self.anticanonical_smooth_member)


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    degree: int
    reason: str


@dataclass(frozen=True)
class PullbackVerdict:
    status: str                  # "true", "false" or "unresolved"
    p_reached: int
    certificate: Optional[str] = None
    witness: Optional[Violation] = None

    def __bool__(self):
        return self.status == "true"


@dataclass
class CollectionReport:
    strong_exceptional: bool
    exceptional_witness: Optional[Violation]
    i0: int
    dim_space: int
    hochschild_dim: int
    equality_claim: bool
    lower_bound: int
    upper_bound: int
    strongly_cyclic: bool
    cyclic_witness: Optional[Violation]
    pullback: Optional[PullbackVerdict]
    ext_table: list = field(default_factory=list)
    hom_matrix: list = field(default_factory=list)
    euler_matrix: list = field(default_factory=list)

    @property
    def generation_time(self) -> int:
        return self.hochschild_dim


def _minus_K(C: Collection):
    return -canonical_class(C.space)


def ext_table(C: Collection, shift=None) -> list[list[CohomologyVector]]:
    """``ext_table[i][j] = Ext^*(E_i, E_j (x) O(shift))``."""
    out = []
    for A in C.members:
        row = []
        for B in C.members:
            row.append(ext_dims(C.space, A, twist(B, shift) if shift is not None else B))
        out.append(row)
    return out


def _first(h, start: int = 0) -> Optional[int]:
    return next((l for l in range(start, len(h)) if h[l]), None)


def _exceptional_violation(table) -> Optional[Violation]:
    n = len(table)
    for i in range(n):
        h = table[i][i].h
        if h[0] != 1:
            return Violation(i, i, 0, f"dim End = {h[0]}")
        if _first(h, 1) is not None:
            return Violation(i, i, _first(h, 1), "higher self-Ext")
    for i in range(n):
        for j in range(i + 1, n):
            back = _first(table[j][i].h)
            if back is not None:
                return Violation(j, i, back, "backward Ext")
            fwd = _first(table[i][j].h, 1)
            if fwd is not None:
                return Violation(i, j, fwd, "higher forward Ext")
    return None


def check_strong_exceptional(C: Collection, table=None) -> tuple[bool, Optional[Violation]]:
    w = _exceptional_violation(table if table is not None else ext_table(C))
    return w is None, w


def compute_i0(C: Collection, shifted=None, exceptional: Optional[bool] = None) -> int:
    if exceptional is None:
        exceptional = check_strong_exceptional(C)[0]
    if not exceptional:
        warnings.warn("i0 requested for a collection that is not strong exceptional", stacklevel=2)
    shifted = shifted if shifted is not None else ext_table(C, _minus_K(C))
    i0 = 0
    for row in shifted:
        for h in row:
            top = h.top_nonzero
            if top is not None and top > i0:
                i0 = top
    return i0


def check_strongly_cyclic(C: Collection, table=None, shifted=None) -> tuple[bool, Optional[Violation]]:
    ok, w = check_strong_exceptional(C, table)
    if not ok:
        return False, w
    shifted = shifted if shifted is not None else ext_table(C, _minus_K(C))
    n = len(C)
    for j in range(n):
        for i in range(j):
            l = _first(shifted[j][i].h, 1)
            if l is not None:
                return False, Violation(j, i, l, "Ext against the omega-dual twist")
    return True, None


# ---------------------------------------------------------------- pullback

def _surface_certificate(C: Collection, p: int) -> Optional[str]:
    """Vanishing for every p' >= p via the anticanonical-curve criterion."""
    if not (C.anticanonical_smooth_member and C.line_bundles_only):
        return None
    if not isinstance(C.space, (BlowupSurface, ToricSurfaceFan)):
        return None
    L = surface_lattice(C.space)
    K = L.canonical
    if intersect(L, K, K) < 0:
        return None
    for A in C.members:
        for B in C.members:
            D = B.cls - A.cls - p * K
            if intersect(L, K - D, K) <= 0:
                return None
    return f"(K - D).K > 0 for all pairs from p = {p}, and K^2 >= 0 keeps it positive"


def _weighted_certificate(C: Collection, p: int) -> Optional[str]:
    if not isinstance(C.space, WeightedProjectiveSpace):
        return None
    s = sum(C.space.weights)
    for A in C.members:
        for B in C.members:
            if B.cls.k - A.cls.k + p * s <= -s:
                return None
    return f"all twisted degrees exceed -{s} from p = {p} and only grow"


def _bundle_certificate(C: Collection, p: int) -> Optional[str]:
    X = C.space
    if not isinstance(X, ProjectiveBundleSpace) or X.m > X.n + 1:
        return None
    m, n = X.m, X.n
    for A in C.members:
        for B in C.members:
            a = B.cls.a - A.cls.a + 2 * p
            b = B.cls.b - A.cls.b + p * (n + 1 + m)
            if a < 0 or b - a * m <= -n - 1:
                return None
    return f"smallest P^{n} degree exceeds {-n - 1} from p = {p} and is nondecreasing since m <= n + 1"


def check_pullback(C: Collection, p_cap: int = DEFAULT_P_CAP) -> PullbackVerdict:
    """Positive-degree Ext vanishing against every nonnegative power of omega^vee."""
    if p_cap < 1:
        raise ValidationError("p_cap must be positive")
    mK = _minus_K(C)
    for p in range(p_cap + 1):
        shift = p * mK
        for i, A in enumerate(C.members):
            for j, B in enumerate(C.members):
                l = _first(ext_dims(C.space, A, twist(B, shift)).h, 1)
                if l is not None:
                    return PullbackVerdict("false", p, witness=Violation(i, j, l, f"omega^-{p} twist"))
        for cert in (_surface_certificate, _weighted_certificate, _bundle_certificate):
            why = cert(C, p)
            if why:
                return PullbackVerdict("true", p, certificate=why)
    return PullbackVerdict("unresolved", p_cap)


# ---------------------------------------------------------------- tables

def euler_matrix(C: Collection, table=None) -> list[list[int]]:
    table = table if table is not None else ext_table(C)
    return [[h.euler for h in row] for row in table]


def hom_matrix(C: Collection, table=None) -> list[list[int]]:
    table = table if table is not None else ext_table(C)
    return [[h.h[0] for h in row] for row in table]


def generation_time_report(C: Collection, p_cap: int = DEFAULT_P_CAP,
                           with_pullback: bool = True) -> CollectionReport:
    table = ext_table(C)
    shifted = ext_table(C, _minus_K(C))
    strong, witness = check_strong_exceptional(C, table)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        i0 = compute_i0(C, shifted, exceptional=strong)
    if not strong:
        log.warning("collection is not strong exceptional: %s", witness)
    cyclic, cwit = check_strongly_cyclic(C, table, shifted)
    dim = C.dim
    report = CollectionReport(
        strong_exceptional=strong,
        exceptional_witness=witness,
        i0=i0,
        dim_space=dim,
        hochschild_dim=dim + i0,
        # every built-in space is proper over a field of characteristic zero
        equality_claim=True,
        lower_bound=dim,
        upper_bound=2 * dim,
        strongly_cyclic=cyclic,
        cyclic_witness=cwit,
        pullback=check_pullback(C, p_cap) if with_pullback else None,
        ext_table=[[list(h.h) for h in row] for row in table],
        hom_matrix=hom_matrix(C, table),
        euler_matrix=euler_matrix(C, table),
    )
    if i0 == 0 and strong and not cyclic:
        raise IntegrityError("i0 = 0 and strong exceptional, yet not strongly cyclic")
    if report.pullback and i0 != 0:
        raise IntegrityError("pullback verdict with nonzero i0")
    return report


# ---------------------------------------------------------------- diagnostics

@dataclass(frozen=True)
class AnticanonicalDiagnostics:
    h: tuple[int, ...]
    effective: bool
    upper_cap: Optional[int]
    top_positive_degree: Optional[int]
    lower_bound: Optional[int]


def anticanonical_diagnostics(space) -> AnticanonicalDiagnostics:
    """What the cohomology of omega^vee says about any tilting bundle on ``space``.

    ``upper_cap`` is ``2 dim - 1`` when omega^vee is effective; ``lower_bound``
    is ``dim + i`` for the largest positive ``i`` with ``H^i(omega^vee) != 0``.
    """
    h = line_bundle_cohomology(space, -canonical_class(space)).h
    dim = len(h) - 1
    if isinstance(space, ProjectiveBundleSpace):
        dim = space.dim
        h = h[: dim + 1]
    effective = h[0] > 0
    top = max((i for i in range(1, len(h)) if h[i]), default=None)
    return AnticanonicalDiagnostics(
        h=tuple(h),
        effective=effective,
        upper_cap=2 * dim - 1 if effective else None,
        top_positive_degree=top,
        lower_bound=dim + top if top is not None else None,
    )


@dataclass(frozen=True)
class AntieffectiveVerdict:
    status: str          # "vanishing_certified", "nonvanishing_certified", "indeterminate"
    pairing: int         # (K - D).K
    reason: str


def rational_antieffective_check(X, D: DivisorClass, smooth_member: bool = True) -> AntieffectiveVerdict:
    """Decide whether ``O(D - K)`` has higher cohomology from intersection data.

    Valid when ``H^{>0}(O(D)) = 0`` and a smooth connected anticanonical curve
    ``C`` exists; the answer is checked against direct computation.
    """
    L = surface_lattice(X)
    K = L.canonical
    if not smooth_member or line_bundle_cohomology(X, -K).h[0] == 0:
        raise ValidationError("needs a smooth connected member of |-K|")
    hD = line_bundle_cohomology(X, D).h
    pairing = intersect(L, K - D, K)
    if any(hD[1:]):
        verdict = AntieffectiveVerdict("indeterminate", pairing, "O(D) has higher cohomology")
    elif pairing > 0:
        verdict = AntieffectiveVerdict("vanishing_certified", pairing, "negative degree on C")
    elif pairing < 0:
        verdict = AntieffectiveVerdict("nonvanishing_certified", pairing, "positive degree on C")
    else:
        verdict = _degree_zero(X, L, K, D, pairing)
    direct = line_bundle_cohomology(X, D - K).h
    vanishes = not any(direct[1:])
    if (verdict.status == "vanishing_certified" and not vanishes) or \
            (verdict.status == "nonvanishing_certified" and vanishes):
        raise IntegrityError(f"criterion and direct computation disagree on {L.format(D - K)}")
    return verdict


def _degree_zero(X, L, K, D, pairing) -> AntieffectiveVerdict:
    # 0 -> O(2K - D) -> O(K - D) -> O_C(K - D) -> 0
    a = line_bundle_cohomology(X, K - D).h
    b = line_bundle_cohomology(X, 2 * K - D).h
    if a[0] > b[0]:
        return AntieffectiveVerdict("nonvanishing_certified", pairing, "K - D restricts to O_C")
    if b[1] == 0:
        return AntieffectiveVerdict("vanishing_certified", pairing, "degree zero, no section on C")
    # 0 -> O(D) -> O(D - K) -> O_C(D - K) -> 0, with H^1(O(D)) = 0
    c = line_bundle_cohomology(X, D - K).h
    d = line_bundle_cohomology(X, D).h
    if c[0] > d[0]:
        return AntieffectiveVerdict("nonvanishing_certified", pairing, "D - K restricts to O_C")
    return AntieffectiveVerdict("vanishing_certified", pairing, "degree zero, no section on C")


def zero_pairing_classes(C: Collection) -> list[DivisorClass]:
    """Classes ``D_ij - K`` (``D_ij = L_i - L_j``, i != j) orthogonal to ``K``."""
    L = surface_lattice(C.space)
    K = L.canonical
    out = []
    for i, A in enumerate(C.members):
        for j, B in enumerate(C.members):
            if i == j:
                continue
            D = A.cls - B.cls - K
            if intersect(L, D, K) == 0 and D not in out:
                out.append(D)
    return out


def euler_matches_riemann_roch(C: Collection) -> bool:
    L = surface_lattice(C.space)
    E = euler_matrix(C)
    return all(E[i][j] == euler_char_surface(L, B.cls - A.cls)
               for i, A in enumerate(C.members) for j, B in enumerate(C.members))
