"""H- and V-descriptions of rational polyhedra and conversion between them.

Both directions go through one routine, :func:`cone_generators`, an
incremental double description method on integer data. Polyhedra are
homogenized as ``{(x, t) : a.x - beta*t <= 0, t >= 0}``; inequalities of a
point set are the extreme rays of the cone of valid ``(a, beta)`` pairs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from ..errors import DimensionCapExceeded
from ..limits import limits
from .rational import QVector, integer_row, primitive, qvec, to_rational


@dataclass(frozen=True)
class Halfspace:
    """``normal . x <= rhs``."""

    normal: QVector
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", qvec(self.normal))
        object.__setattr__(self, "rhs", to_rational(self.rhs))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, x) -> bool:
        return sum(a * b for a, b in zip(self.normal, x)) <= self.rhs

    def normalized(self) -> "Halfspace":
        """Rescale so the normal is a primitive integer vector."""
        if not any(self.normal):
            return Halfspace(self.normal, (self.rhs > 0) - (self.rhs < 0))
        return _canonical_halfspace(self.normal, self.rhs)


@dataclass(frozen=True)
class HPolyhedron:
    """``{x : h.normal . x <= h.rhs for h in halfspaces}``, intersected with
    the nonnegative orthant when ``nonneg`` is set."""

    dim: int
    halfspaces: Tuple[Halfspace, ...] = ()
    nonneg: bool = True

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        hs = tuple(h if isinstance(h, Halfspace) else Halfspace(*h) for h in self.halfspaces)
        for h in hs:
            if h.dim != self.dim:
                raise ValueError(f"halfspace of dimension {h.dim} in a {self.dim}-dimensional polyhedron")
        object.__setattr__(self, "halfspaces", hs)

    @classmethod
    def from_rows(cls, A, b, nonneg: bool = True, dim: int | None = None) -> "HPolyhedron":
        if dim is None:
            if not A:
                raise ValueError("dimension required when there are no rows")
            dim = len(A[0])
        return cls(dim, tuple(Halfspace(row, rhs) for row, rhs in zip(A, b)), nonneg)

    @classmethod
    def empty_set(cls, dim: int) -> "HPolyhedron":
        return cls(dim, (Halfspace((0,) * dim, -1),), True)

    def contains(self, x) -> bool:
        if self.nonneg and any(v < 0 for v in x):
            return False
        return all(h.contains(x) for h in self.halfspaces)

    @property
    def is_empty(self) -> bool:
        return h_to_v(self).is_empty


@dataclass(frozen=True)
class VPolyhedron:
    """``conv(vertices) + cone(rays)``. No vertices means the empty set."""

    dim: int
    vertices: Tuple[QVector, ...] = ()
    rays: Tuple[QVector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(qvec(v) for v in self.vertices))
        object.__setattr__(self, "rays", tuple(qvec(r) for r in self.rays))
        for v in self.vertices + self.rays:
            if len(v) != self.dim:
                raise ValueError("generator dimension mismatch")

    @property
    def is_empty(self) -> bool:
        return not self.vertices


def _check_cap(dim: int) -> None:
    if dim > limits.dim_cap:
        raise DimensionCapExceeded(f"dimension {dim} exceeds cap {limits.dim_cap}")


def _idot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def cone_generators(rows: Sequence[Sequence[int]], dim: int):
    """Generators of ``{y in R^dim : h.y <= 0 for h in rows}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extreme rays modulo it, all as primitive integer tuples.

    Starts from ``R^dim`` (lineality = unit vectors) and adds one constraint
    at a time. While the constraint is not orthogonal to the lineality space
    one lineality direction turns into a ray. Otherwise the standard
    double-description step applies, with the combinatorial adjacency test:
    rays p, q are adjacent iff no third ray is tight on every constraint
    tight at both.
    """
    lineality: List[Tuple[int, ...]] = [
        tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)
    ]
    rays: List[Tuple[Tuple[int, ...], int]] = []
    seen = 0
    for idx, h in enumerate(rows):
        if not any(h):
            continue
        bit = 1 << idx
        pivot = next((i for i, l in enumerate(lineality) if _idot(h, l)), None)
        if pivot is not None:
            p = lineality[pivot]
            hp = _idot(h, p)
            if hp > 0:
                p = tuple(-a for a in p)
                hp = -hp
            new_lin = []
            for i, l in enumerate(lineality):
                if i == pivot:
                    continue
                hl = _idot(h, l)
                if hl:
                    l = primitive([-hp * a + hl * b for a, b in zip(l, p)])
                new_lin.append(l)
            new_rays = []
            for r, mask in rays:
                hr = _idot(h, r)
                if hr:
                    r = primitive([-hp * a + hr * b for a, b in zip(r, p)])
                new_rays.append((r, mask | bit))
            new_rays.append((p, seen))
            lineality, rays = new_lin, new_rays
        else:
            vals = [_idot(h, r) for r, _ in rays]
            pos = [i for i, v in enumerate(vals) if v > 0]
            neg = [i for i, v in enumerate(vals) if v < 0]
            if pos:
                need = dim - len(lineality) - 2
                new_rays = []
                for i, (r, mask) in enumerate(rays):
                    if vals[i] == 0:
                        new_rays.append((r, mask | bit))
                    elif vals[i] < 0:
                        new_rays.append((r, mask))
                masks = [mask for _, mask in rays]
                for i in pos:
                    ri, mi = rays[i]
                    for j in neg:
                        rj, mj = rays[j]
                        common = mi & mj
                        if common.bit_count() < need:
                            continue
                        if any(
                            (masks[t] & common) == common
                            for t in range(len(rays))
                            if t != i and t != j
                        ):
                            continue
                        vi, vj = vals[i], vals[j]
                        new = primitive([vi * b - vj * a for a, b in zip(ri, rj)])
                        new_rays.append((new, common | bit))
                rays = new_rays
            else:
                rays = [(r, mask | bit) if v == 0 else (r, mask) for (r, mask), v in zip(rays, vals)]
        seen |= bit
    return lineality, [r for r, _ in rays]


def _h_rows(p: HPolyhedron) -> List[Tuple[int, ...]]:
    d = p.dim
    rows = []
    if p.nonneg:
        rows += [tuple(-1 if i == j else 0 for i in range(d + 1)) for j in range(d)]
    rows.append(tuple(0 for _ in range(d)) + (-1,))
    for h in p.halfspaces:
        rows.append(integer_row(h.normal + (-h.rhs,)))
    return rows


def h_to_v(p: HPolyhedron) -> VPolyhedron:
    """Vertices and extreme rays of an H-polyhedron.

    An empty polyhedron comes back with no vertices and no rays
    (``is_empty`` is true). Lines, which only occur without ``nonneg``,
    are reported as a pair of opposite rays and the vertices are then
    representatives of the minimal faces.
    """
    # checked outside the cache so a lowered cap applies to cached inputs too
    _check_cap(p.dim)
    return _h_to_v(p)


@lru_cache(maxsize=8192)
def _h_to_v(p: HPolyhedron) -> VPolyhedron:
    d = p.dim
    lineality, rays = cone_generators(_h_rows(p), d + 1)
    vertices, dirs = set(), set()
    for r in rays:
        if r[d] > 0:
            vertices.add(tuple(Fraction(a, r[d]) for a in r[:d]))
        else:
            dirs.add(tuple(Fraction(a) for a in r[:d]))
    for l in lineality:
        dirs.add(tuple(Fraction(a) for a in l[:d]))
        dirs.add(tuple(Fraction(-a) for a in l[:d]))
    if not vertices:
        return VPolyhedron(d)
    return VPolyhedron(d, tuple(sorted(vertices)), tuple(sorted(dirs)))


def _rref(rows: List[List[Fraction]], ncols: int):
    """Reduced row echelon form over the first ``ncols`` columns."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        piv = rows[r][c]
        rows[r] = [a / piv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _canonical_halfspace(normal: Sequence[Fraction], rhs: Fraction) -> Halfspace:
    ints = integer_row(normal)
    j = next(i for i, a in enumerate(normal) if a)
    return Halfspace(ints, rhs * Fraction(ints[j]) / normal[j])


def v_to_h(p: VPolyhedron) -> HPolyhedron:
    """Irredundant H-description of ``conv(vertices) + cone(rays)``.

    Equations of the affine hull are emitted as pairs of opposite
    halfspaces in reduced echelon form and facet normals are reduced
    modulo them, so equal point sets give identical output. If every
    generator is nonnegative the result carries ``nonneg=True`` and the
    facets ``-x_j <= 0`` are folded into that flag.
    """
    if not p.vertices:
        raise ValueError("v_to_h needs at least one vertex")
    _check_cap(p.dim)
    d = p.dim
    rows = [integer_row(v + (Fraction(-1),)) for v in p.vertices]
    rows += [integer_row(r + (Fraction(0),)) for r in p.rays if any(r)]
    lineality, rays = cone_generators(rows, d + 1)

    eqs = [[Fraction(a) for a in l] for l in lineality if any(l[:d])]
    eqs, pivots = _rref(eqs, d)
    halfspaces = set()
    for e in eqs:
        normal, rhs = e[:d], e[d]
        h = _canonical_halfspace(normal, rhs)
        halfspaces.add(h)
        halfspaces.add(Halfspace(tuple(-a for a in h.normal), -h.rhs))
    for r in rays:
        row = [Fraction(a) for a in r]
        for e, c in zip(eqs, pivots):
            if row[c]:
                f = row[c]
                row = [a - f * b for a, b in zip(row, e)]
        normal, beta = row[:d], row[d]
        if not any(normal):
            continue
        halfspaces.add(_canonical_halfspace(normal, beta))

    nonneg = all(x >= 0 for v in p.vertices + p.rays for x in v)
    if nonneg:
        halfspaces = {
            h for h in halfspaces
            if not (h.rhs == 0 and sum(1 for a in h.normal if a) == 1 and min(h.normal) == -1)
        }
    return HPolyhedron(d, tuple(sorted(halfspaces, key=lambda h: (h.normal, h.rhs))), nonneg)


def poly_contains(outer: HPolyhedron, inner: VPolyhedron) -> bool:
    """Whether the V-polyhedron ``inner`` lies inside ``outer``."""
    if outer.dim != inner.dim:
        raise ValueError("dimension mismatch")
    for v in inner.vertices:
        if not outer.contains(v):
            return False
    for r in inner.rays:
        if outer.nonneg and any(a < 0 for a in r):
            return False
        if any(sum(a * b for a, b in zip(h.normal, r)) > 0 for h in outer.halfspaces):
            return False
    return True


def poly_equal(p: HPolyhedron, q: HPolyhedron) -> bool:
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    vp, vq = h_to_v(p), h_to_v(q)
    if vp.is_empty or vq.is_empty:
        return vp.is_empty and vq.is_empty
    return poly_contains(q, vp) and poly_contains(p, vq)


def irredundant(p: HPolyhedron) -> HPolyhedron:
    """Canonical irredundant description of the same point set."""
    v = h_to_v(p)
    if v.is_empty:
        return HPolyhedron.empty_set(p.dim)
    return v_to_h(v)


def intersect_all(polys: Sequence[HPolyhedron]) -> HPolyhedron:
    polys = list(polys)
    dim = polys[0].dim
    hs = tuple(h for p in polys for h in p.halfspaces)
    return HPolyhedron(dim, hs, any(p.nonneg for p in polys))
