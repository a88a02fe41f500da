"""Exhaustive comparison of the cohomology engines against the toric oracle.

A sweep visits every class with coefficients in ``[-radius, radius]`` and
checks three things: the primary engine and the oracle agree, the oracle
satisfies Serre duality between ``D`` and ``K - D`` (whenever both lie in the
box), and the oracle's alternating sum is Riemann-Roch.

For blow-up models the interpolation engine is evaluated once per distinct
effective input (degree and clamped valuation orders), so sweeps over
millions of classes stay affordable.  The oracle runs through a compiled
batch kernel when numba is importable.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .cohomology import _h0_cached, h_proj_bundle_any, h_toric_oracle
from .errors import IntegrityError
from .geometry import (Infinitesimal, ToricBlowupModel, hirzebruch_fan,
                       hirzebruch_ray_coefficients)
from .lattice import DivisorClass, hirzebruch_lattice, euler_char_surface

log = logging.getLogger(__name__)

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None


@dataclass
class SweepResult:
    name: str
    radius: int
    checked: int = 0
    discrepancies: list = field(default_factory=list)
    serre_violations: list = field(default_factory=list)
    euler_violations: list = field(default_factory=list)
    serre_pairs: int = 0
    n_discrepancies: int = 0

    @property
    def ok(self) -> bool:
        return not (self.n_discrepancies or self.serre_violations or self.euler_violations)

    def summary(self) -> str:
        return (f"{self.name}: {self.checked} classes in [-{self.radius},{self.radius}], "
                f"{self.n_discrepancies} discrepancies, "
                f"{len(self.serre_violations)} Serre violations ({self.serre_pairs} pairs), "
                f"{len(self.euler_violations)} Euler violations")


# ------------------------------------------------------------ batched oracle

def _row_counts(rays, a, ux, ylo, yhi, buf, acc):
    """Add the contributions of characters (ux, ylo..yhi) to acc.

    Along a row each inequality <u, v_i> < -a_i switches at most once, so the
    pattern of negative rays is constant between consecutive switch points.
    """
    r = rays.shape[0]
    n = 0
    buf[n] = ylo
    n += 1
    for i in range(r):
        v1 = rays[i, 1]
        c = -a[i] - ux * rays[i, 0]
        if v1 > 0:
            p = -((-c) // v1)        # first uy that is not negative
        elif v1 < 0:
            p = c // v1 + 1          # first uy that is negative
        else:
            continue
        if ylo < p <= yhi:
            j = n
            while buf[j - 1] > p:
                buf[j] = buf[j - 1]
                j -= 1
            buf[j] = p
            n += 1
    seg = buf
    for s in range(n):
        y = seg[s]
        if s > 0 and y == seg[s - 1]:
            continue
        nxt = yhi + 1
        for t in range(s + 1, n):
            if seg[t] > y:
                nxt = seg[t]
                break
        length = nxt - y
        nneg = 0
        starts = 0
        prev = ux * rays[r - 1, 0] + y * rays[r - 1, 1] < -a[r - 1]
        for i in range(r):
            cur = ux * rays[i, 0] + y * rays[i, 1] < -a[i]
            if cur:
                nneg += 1
                if not prev:
                    starts += 1
            prev = cur
        if nneg == 0:
            acc[0] += length
        elif nneg == r:
            acc[2] += length
        else:
            acc[1] += (starts - 1) * length


def _oracle_kernel(rays, A, out, bad):
    r = rays.shape[0]
    buf = np.empty(r + 1, dtype=np.int64)
    inner = np.zeros(3, dtype=np.int64)
    ring = np.zeros(3, dtype=np.int64)
    for k in range(A.shape[0]):
        a = A[k]
        x0 = y0 = 1 << 40
        x1 = y1 = -(1 << 40)
        for i in range(r):
            for j in range(i + 1, r):
                det = rays[i, 0] * rays[j, 1] - rays[i, 1] * rays[j, 0]
                if det == 0:
                    continue
                ci = -(2 * a[i] + 1)
                cj = -(2 * a[j] + 1)
                px = ci * rays[j, 1] - cj * rays[i, 1]
                py = rays[i, 0] * cj - rays[j, 0] * ci
                q = 2 * det
                if q < 0:
                    px, py, q = -px, -py, -q
                x0 = min(x0, px // q)
                x1 = max(x1, -((-px) // q))
                y0 = min(y0, py // q)
                y1 = max(y1, -((-py) // q))
        inner[:] = 0
        ring[:] = 0
        for ux in range(x0, x1 + 1):
            _row_counts(rays, a, ux, y0, y1, buf, inner)
            _row_counts(rays, a, ux, y0 - 1, y0 - 1, buf, ring)
            _row_counts(rays, a, ux, y1 + 1, y1 + 1, buf, ring)
        _row_counts(rays, a, x0 - 1, y0 - 1, y1 + 1, buf, ring)
        _row_counts(rays, a, x1 + 1, y0 - 1, y1 + 1, buf, ring)
        if ring[0] or ring[1] or ring[2]:
            bad[k] = 1
        out[k, 0] = inner[0]
        out[k, 1] = inner[1]
        out[k, 2] = inner[2]


if numba is not None:
    _row_counts = numba.njit(cache=True)(_row_counts)
    _oracle_kernel = numba.njit(cache=True)(_oracle_kernel)


def oracle_batch(rays, A) -> np.ndarray:
    """Oracle cohomology for many ray-coefficient vectors at once (rows of A)."""
    rays = np.ascontiguousarray(rays, dtype=np.int64)
    A = np.ascontiguousarray(A, dtype=np.int64)
    out = np.zeros((A.shape[0], 3), dtype=np.int64)
    bad = np.zeros(A.shape[0], dtype=np.int64)
    if numba is None:
        from .geometry import ToricSurfaceFan
        fan = ToricSurfaceFan(tuple(map(tuple, rays.tolist())))
        for k, a in enumerate(A):
            out[k] = h_toric_oracle(fan, a.tolist()).h
    else:
        _oracle_kernel(rays, A, out, bad)
    if bad.any():
        raise IntegrityError("a character outside the exhaustion box contributes")
    return out


# ------------------------------------------------------------ blow-up models

def _fan_matrix(model: ToricBlowupModel) -> np.ndarray:
    """Integer matrix sending blow-up classes to ray coefficients (a_0 = a_1 = 0)."""
    rank = model.surface.lattice.rank
    cols = []
    for i in range(rank):
        e = DivisorClass(1 if j == i else 0 for j in range(rank))
        cols.append(list(model.fan.ray_coefficients(model.fan_class(e))))
    return np.array(cols, dtype=np.int64).T


def _interp_h0(config, D: np.ndarray) -> np.ndarray:
    """Vectorised front end to the interpolation engine for classes D (rows)."""
    out = np.zeros(len(D), dtype=np.int64)
    d = D[:, 0]
    mults = -D[:, 1:]
    orders = mults.copy()
    is_inf = []
    for i, c in enumerate(config.centers):
        if isinstance(c, Infinitesimal):
            orders[:, i] += mults[:, c.parent]
        is_inf.append(isinstance(c, Infinitesimal))
    caps = np.where(np.array(is_inf)[None, :], 2 * d[:, None] + 1, d[:, None] + 1)
    orders = np.clip(orders, 0, None)
    orders = np.minimum(orders, caps)
    live = d >= 0
    if not live.any():
        return out
    keys = np.concatenate([d[live, None], orders[live]], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    vals = np.array([_h0_cached(config, int(k[0]), tuple(int(x) for x in k[1:])) for k in uniq],
                    dtype=np.int64)
    out[live] = vals[inv.ravel()]
    return out


def _chi(gram: np.ndarray, K: np.ndarray, D: np.ndarray) -> np.ndarray:
    DD = np.einsum("ij,jk,ik->i", D, gram, D)
    DK = D @ gram @ K
    num = DD - DK
    if (num % 2).any():
        raise IntegrityError("odd D.D - D.K in sweep")
    return 1 + num // 2


def sweep_blowup_model(model: ToricBlowupModel, radius: int, name: str = "model",
                       max_report: int = 20) -> SweepResult:
    """Interpolation engine vs toric oracle on every class in the box."""
    surface = model.surface
    L = surface.lattice
    rank = L.rank
    gram = np.array(L.gram, dtype=np.int64)
    K = np.array(L.canonical.coeffs, dtype=np.int64)
    F = _fan_matrix(model)
    rays = np.array(model.fan.rays, dtype=np.int64)
    side = 2 * radius + 1
    res = SweepResult(name, radius)

    # oracle values for every class, indexed by base-`side` position
    store = np.zeros((side ** rank, 3), dtype=np.int32)
    tail = np.indices((side,) * (rank - 2)).reshape(rank - 2, -1).T - radius
    for head in itertools.product(range(-radius, radius + 1), repeat=2):
        D = np.concatenate([np.tile(np.array(head, dtype=np.int64), (len(tail), 1)), tail], axis=1)
        h0 = _interp_h0(surface.config, D)
        h2 = _interp_h0(surface.config, K[None, :] - D)
        chi = _chi(gram, K, D)
        h1 = h0 + h2 - chi
        if (h1 < 0).any():
            raise IntegrityError("negative h^1 in interpolation sweep")
        mine = np.stack([h0, h1, h2], axis=1)
        theirs = oracle_batch(rays, D @ F.T)
        diff = np.nonzero((mine != theirs).any(axis=1))[0]
        for k in diff[: max(0, max_report - len(res.discrepancies))]:
            res.discrepancies.append((L.format(DivisorClass(D[k])), tuple(mine[k]), tuple(theirs[k])))
        alt = theirs[:, 0] - theirs[:, 1] + theirs[:, 2]
        for k in np.nonzero(alt != chi)[0][:max_report]:
            res.euler_violations.append((L.format(DivisorClass(D[k])), tuple(theirs[k]), int(chi[k])))
        idx = _index(D, radius, side)
        store[idx] = theirs
        res.checked += len(D)
        res.n_discrepancies += len(diff)
    # Serre duality on the oracle, for D and K - D both in the box
    all_idx = np.arange(side ** rank)
    D = _unindex(all_idx, radius, side, rank)
    dual = K[None, :] - D
    inside = (np.abs(dual) <= radius).all(axis=1)
    a = store[all_idx[inside]]
    b = store[_index(dual[inside], radius, side)]
    bad = np.nonzero((a != b[:, ::-1]).any(axis=1))[0]
    res.serre_pairs = int(inside.sum())
    for k in bad[:max_report]:
        res.serre_violations.append((L.format(DivisorClass(D[inside][k])), tuple(a[k]), tuple(b[k])))
    log.info(res.summary())
    return res


def _index(D: np.ndarray, radius: int, side: int) -> np.ndarray:
    idx = np.zeros(len(D), dtype=np.int64)
    for col in range(D.shape[1]):
        idx = idx * side + (D[:, col] + radius)
    return idx


def _unindex(idx: np.ndarray, radius: int, side: int, rank: int) -> np.ndarray:
    out = np.zeros((len(idx), rank), dtype=np.int64)
    rest = idx.copy()
    for col in range(rank - 1, -1, -1):
        out[:, col] = rest % side - radius
        rest //= side
    return out


# ------------------------------------------------------------ Hirzebruch

def sweep_hirzebruch(m: int, radius: int, max_report: int = 20) -> SweepResult:
    """Pushforward formula on F_m vs the oracle on the F_m fan."""
    fan = hirzebruch_fan(m)
    L = hirzebruch_lattice(m)
    res = SweepResult(f"F{m}", radius)
    table = {}
    for a, b in itertools.product(range(-radius, radius + 1), repeat=2):
        mine = h_proj_bundle_any(m, 1, a, b)
        theirs = h_toric_oracle(fan, hirzebruch_ray_coefficients(a, b))
        table[(a, b)] = theirs
        D = DivisorClass((a, b))
        if mine != theirs:
            res.n_discrepancies += 1
            res.discrepancies.append((L.format(D), mine.h, theirs.h))
        chi = euler_char_surface(L, D)
        if theirs.euler != chi:
            res.euler_violations.append((L.format(D), theirs.h, chi))
        res.checked += 1
    for (a, b), h in table.items():
        dual = (-2 - a, -(m + 2) - b)
        if dual in table:
            res.serre_pairs += 1
            if tuple(reversed(table[dual].h)) != h.h:
                res.serre_violations.append(((a, b), h.h, table[dual].h))
    res.discrepancies = res.discrepancies[:max_report]
    return res
