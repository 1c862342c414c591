"""Packing polyhedra, finite unions of them, and their support functions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Tuple, Union

from .errors import NotADownset, NotValidDirection
from .kernel.lp import lp_max
from .kernel.polyhedra import Halfspace, HPolyhedron, h_to_v, irredundant, poly_equal
from .kernel.rational import QVector, dot, qvec
from . import packset
from .packset import INF, KnapsackIneq, PackingSet


@dataclass(frozen=True)
class PackingPolyhedron:
    """``{x >= 0 : A x <= b}`` with ``A >= 0`` and ``b >= 0``."""

    A: Tuple[QVector, ...]
    b: QVector
    dim: int = 0

    def __post_init__(self):
        A = tuple(qvec(row) for row in self.A)
        b = qvec(self.b)
        dim = self.dim or (len(A[0]) if A else 0)
        if dim < 1:
            raise ValueError("dimension required when A has no rows")
        if len(A) != len(b):
            raise ValueError("A and b have different numbers of rows")
        for i, row in enumerate(A):
            if len(row) != dim:
                raise ValueError(f"row {i} has length {len(row)}, expected {dim}")
            if any(a < 0 for a in row):
                raise ValueError(f"row {i} of A has a negative entry")
        if any(v < 0 for v in b):
            raise ValueError("b has a negative entry")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "dim", dim)

    @property
    def m(self) -> int:
        return len(self.A)

    def to_h(self) -> HPolyhedron:
        return HPolyhedron(self.dim, tuple(Halfspace(a, v) for a, v in zip(self.A, self.b)), True)

    def contains(self, x) -> bool:
        return self.to_h().contains(x)

    @classmethod
    def from_h(cls, p: HPolyhedron) -> "PackingPolyhedron":
        """Wrap an H-polyhedron already in packing form."""
        if not p.nonneg:
            raise ValueError("packing polyhedra live in the nonnegative orthant")
        return cls(tuple(h.normal for h in p.halfspaces), tuple(h.rhs for h in p.halfspaces), p.dim)


@dataclass(frozen=True)
class DownsetModel:
    """Union of finitely many packing polyhedra."""

    dim: int
    pieces: Tuple[PackingPolyhedron, ...]

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise ValueError("a downset model needs at least one piece")
        for p in pieces:
            if p.dim != self.dim:
                raise ValueError("pieces must share the model dimension")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def single(cls, p: PackingPolyhedron) -> "DownsetModel":
        return cls(p.dim, (p,))

    def contains(self, x) -> bool:
        return any(p.contains(x) for p in self.pieces)


@dataclass(frozen=True)
class BoundedSupport:
    """``beta = sup{f.x : x in D}``; ``INF`` when unbounded."""

    f: QVector
    beta: Union[Fraction, float]

    @property
    def finite(self) -> bool:
        return self.beta != INF


@dataclass(frozen=True)
class FarkasCertificate:
    lam: QVector
    gamma: QVector


def positive_part(h: Halfspace) -> Halfspace:
    return Halfspace(tuple(max(a, Fraction(0)) for a in h.normal), h.rhs)


def packing_form(p: HPolyhedron) -> PackingPolyhedron:
    """Canonical irredundant packing description of a packing H-polyhedron."""
    return PackingPolyhedron.from_h(irredundant(p))


def normalize_downset(p: HPolyhedron) -> PackingPolyhedron:
    """Packing description of ``p``, or :class:`NotADownset` with a witness.

    Replacing every normal by its positive part can only shrink ``p``
    inside the orthant, and does not change it exactly when ``p`` is a
    downset. When it does shrink, some ``x`` in ``p`` violates a
    positive-part row ``a+ . x <= beta``; zeroing the coordinates where
    ``a`` is negative gives ``y <= x`` with ``a . y = a+ . x > beta``.
    """
    if not p.nonneg:
        raise ValueError("normalize_downset expects a polyhedron inside the orthant")
    v = h_to_v(p)
    if v.is_empty:
        raise NotADownset("empty polyhedron is not a packing polyhedron")
    x0 = v.vertices[0]
    for h in p.halfspaces:
        if h.rhs < 0:
            zero = tuple(Fraction(0) for _ in range(p.dim))
            raise NotADownset("origin violates a constraint", x=x0, y=zero)
    for h in p.halfspaces:
        hp = positive_part(h)
        if hp == h:
            continue
        res = lp_max(hp.normal, p)
        if res.optimal and res.value <= h.rhs:
            continue
        if res.optimal:
            x = res.argmax
        else:
            base, ray = res.argmax, res.ray
            t = max(0, math.floor((h.rhs - dot(hp.normal, base)) / dot(hp.normal, ray)) + 1)
            x = tuple(a + t * r for a, r in zip(base, ray))
        y = tuple(a if c >= 0 else Fraction(0) for a, c in zip(x, h.normal))
        raise NotADownset(f"{h} is violated after dropping negative coordinates", x=x, y=y)
    p_plus = HPolyhedron(p.dim, tuple(positive_part(h) for h in p.halfspaces), True)
    assert poly_equal(p, p_plus)
    return packing_form(p_plus)


def sup_oracle(D: DownsetModel | PackingPolyhedron, f) -> BoundedSupport:
    """Exact ``sup{f.x : x in D}`` for ``f >= 0``."""
    if isinstance(D, PackingPolyhedron):
        D = DownsetModel.single(D)
    f = qvec(f)
    if len(f) != D.dim:
        raise ValueError("direction dimension mismatch")
    if any(a < 0 for a in f):
        raise ValueError("sup_oracle needs a nonnegative direction; apply positive_part first")
    best = None
    for piece in D.pieces:
        res = lp_max(f, piece.to_h())
        if res.unbounded:
            return BoundedSupport(f, INF)
        if best is None or res.value > best:
            best = res.value
    return BoundedSupport(f, best)


def farkas_decompose(f, P: PackingPolyhedron) -> FarkasCertificate:
    """``lam, gamma >= 0`` with ``lam.A - gamma = f`` minimizing ``lam.b``.

    By LP duality the minimum equals ``sup{f.x : x in P}``.
    """
    f = qvec(f)
    if len(f) != P.dim:
        raise ValueError("direction dimension mismatch")
    if not sup_oracle(P, tuple(max(a, Fraction(0)) for a in f)).finite:
        raise NotValidDirection("f is unbounded over P")
    m, n = P.m, P.dim
    # variables (lam, gamma) >= 0; A^T lam - gamma = f as two inequalities
    rows, rhs = [], []
    for j in range(n):
        row = [P.A[i][j] for i in range(m)] + [Fraction(-1 if k == j else 0) for k in range(n)]
        rows.append(row)
        rhs.append(f[j])
        rows.append([-a for a in row])
        rhs.append(-f[j])
    objective = tuple(-v for v in P.b) + (Fraction(0),) * n
    res = lp_max(objective, HPolyhedron.from_rows(rows, rhs, True, dim=m + n))
    if not res.optimal:
        raise NotValidDirection(f"no Farkas multipliers for {f}: {res.status}")
    return FarkasCertificate(res.argmax[:m], res.argmax[m:])


def recession_free_coords(P: PackingPolyhedron) -> frozenset:
    """0-based coordinates whose column of ``A`` is zero."""
    return frozenset(j for j in range(P.dim) if all(row[j] == 0 for row in P.A))


def integer_points(P: PackingPolyhedron) -> PackingSet:
    """``P & N^n`` as the intersection of the knapsack sets of the rows."""
    sets = [packset.from_knapsack(KnapsackIneq(a, v)) for a, v in zip(P.A, P.b)]
    return reduce(packset.intersect, sets, PackingSet(P.dim, ((INF,) * P.dim,)))


def polyhedron_integer_hull(P: PackingPolyhedron) -> PackingPolyhedron:
    """``conv(P & Z^n)`` in packing form."""
    return PackingPolyhedron.from_h(packset.integer_hull(integer_points(P)))


def to_json(P: PackingPolyhedron) -> dict:
    return {
        "dim": P.dim,
        "A": [[str(a) for a in row] for row in P.A],
        "b": [str(v) for v in P.b],
    }
