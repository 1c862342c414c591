"""Integer packing sets as finite unions of blocks.

A packing set in ``N^n`` is stored by its maximal generators: points of
``(N u {inf})^n``, each standing for the block ``{x in N^n : x <= g}``.
Generators are kept as a canonical antichain, so equality of sets is
equality of objects.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import DimensionCapExceeded, EmptySetError
from .kernel.polyhedra import HPolyhedron, VPolyhedron, v_to_h
from .kernel.rational import QVector, lcm_denominators, qvec, to_rational
from .limits import limits

INF = math.inf
ExtNat = Union[int, float]
ExtPoint = Tuple[ExtNat, ...]


def _ext(v) -> ExtNat:
    if v == INF or v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise ValueError(f"not an extended natural: {v!r}")
    return v


def leq(g: Sequence[ExtNat], h: Sequence[ExtNat]) -> bool:
    return all(a <= b for a, b in zip(g, h))


def _maximal(points: Iterable[ExtPoint]) -> List[ExtPoint]:
    # a dominator sorts strictly before what it dominates under this key,
    # so checking against already kept points suffices
    def key(g):
        infs = sum(1 for a in g if a == INF)
        return (-infs, -sum(a for a in g if a != INF))

    kept: List[ExtPoint] = []
    for g in sorted(set(points), key=key):
        if not any(leq(g, h) for h in kept):
            kept.append(g)
    return sorted(kept)


@dataclass(frozen=True)
class PackingSet:
    dim: int
    generators: Tuple[ExtPoint, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        gens = []
        for g in self.generators:
            g = tuple(_ext(v) for v in g)
            if len(g) != self.dim:
                raise ValueError(f"generator {g} does not have dimension {self.dim}")
            gens.append(g)
        object.__setattr__(self, "generators", tuple(_maximal(gens)))

    def __contains__(self, x) -> bool:
        return contains_point(self, x)

    def __le__(self, other: "PackingSet") -> bool:
        return subset(self, other)

    def __or__(self, other: "PackingSet") -> "PackingSet":
        return union(self, other)

    def __and__(self, other: "PackingSet") -> "PackingSet":
        return intersect(self, other)

    @property
    def is_empty(self) -> bool:
        return not self.generators

    def infinite_coords(self) -> frozenset:
        return frozenset(j for g in self.generators for j, a in enumerate(g) if a == INF)


def canonicalize(generators: Iterable[Sequence], dim: int | None = None) -> PackingSet:
    """Packing set generated by arbitrary (possibly dominated) points."""
    generators = [tuple(g) for g in generators]
    if dim is None:
        if not generators:
            raise ValueError("dimension required for an empty generator list")
        dim = len(generators[0])
    return PackingSet(dim, tuple(generators))


def _same_dim(s: PackingSet, t: PackingSet) -> None:
    if s.dim != t.dim:
        raise ValueError(f"dimension mismatch: {s.dim} vs {t.dim}")


def contains_point(s: PackingSet, x: Sequence[int]) -> bool:
    if len(x) != s.dim:
        raise ValueError("dimension mismatch")
    if any(v < 0 for v in x):
        return False
    return any(leq(x, g) for g in s.generators)


def subset(s: PackingSet, t: PackingSet) -> bool:
    _same_dim(s, t)
    return all(any(leq(g, h) for h in t.generators) for g in s.generators)


def union(s: PackingSet, t: PackingSet) -> PackingSet:
    _same_dim(s, t)
    return PackingSet(s.dim, s.generators + t.generators)


def intersect(s: PackingSet, t: PackingSet) -> PackingSet:
    _same_dim(s, t)
    return PackingSet(
        s.dim,
        tuple(tuple(min(a, b) for a, b in zip(g, h)) for g in s.generators for h in t.generators),
    )


def slice(s: PackingSet, i: int) -> PackingSet:
    """``{x' : (x', i) in s}`` in one dimension less."""
    if s.dim < 2:
        raise ValueError("slicing needs dimension at least 2")
    if i < 0:
        raise ValueError("slice level must be natural")
    return PackingSet(s.dim - 1, tuple(g[:-1] for g in s.generators if g[-1] >= i))


def slices(s: PackingSet) -> List[PackingSet]:
    """Slices at levels ``0..L+1`` where ``L`` is the largest finite last
    coordinate; every later slice equals the final one."""
    top = max((g[-1] for g in s.generators if g[-1] != INF), default=-1)
    return [slice(s, i) for i in range(top + 2)]


def blocks(s: PackingSet) -> List[str]:
    """Render each generator as a product of ``N`` and ``[0..k]`` factors."""
    return [" x ".join("N" if a == INF else f"[0..{a}]" for a in g) for g in s.generators]


def from_blocks(descriptors: Sequence[str], dim: int) -> PackingSet:
    """Inverse of :func:`blocks`: the union of the described blocks."""
    gens = []
    for desc in descriptors:
        coords = []
        for factor in desc.split(" x "):
            factor = factor.strip()
            if factor == "N":
                coords.append(INF)
            elif factor.startswith("[0..") and factor.endswith("]"):
                coords.append(int(factor[4:-1]))
            else:
                raise ValueError(f"bad block factor {factor!r}")
        gens.append(tuple(coords))
    return PackingSet(dim, tuple(gens))


@dataclass(frozen=True)
class KnapsackIneq:
    """``c . x <= d`` over ``N^n`` with ``c >= 0``."""

    c: QVector
    d: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", qvec(self.c))
        object.__setattr__(self, "d", to_rational(self.d))
        if any(a < 0 for a in self.c):
            raise ValueError("knapsack coefficients must be nonnegative")


def knapsack_box(k: KnapsackIneq) -> Tuple[ExtNat, ...]:
    """Per-coordinate bound ``floor(d / c_j)``, infinite where ``c_j = 0``."""
    return tuple(INF if a == 0 else math.floor(k.d / a) for a in k.c)


def from_knapsack(k: KnapsackIneq) -> PackingSet:
    """``{x in N^n : c . x <= d}`` by its maximal points.

    Coordinates with ``c_j = 0`` are unbounded. The others are scanned over
    the box ``x_j <= floor(d / c_j)``, except the last bounded coordinate,
    which is set to its largest feasible value for each prefix; this yields
    every maximal point. Raises :class:`DimensionCapExceeded` when the box
    holds more than ``limits.point_budget`` points.
    """
    n = len(k.c)
    if k.d < 0:
        return PackingSet(n)
    scale = lcm_denominators(k.c + (k.d,))
    c = [int(a * scale) for a in k.c]
    d = int(k.d * scale)
    bounded = [j for j in range(n) if c[j] > 0]
    size = 1
    for j in bounded:
        size *= d // c[j] + 1
        if size > limits.point_budget:
            raise DimensionCapExceeded(
                f"knapsack box exceeds the point budget of {limits.point_budget}"
            )
    base = [INF if c[j] == 0 else 0 for j in range(n)]
    if not bounded:
        return PackingSet(n, (tuple(base),))
    *head, last = bounded
    points = []

    def walk(pos: int, room: int, x: List[ExtNat]):
        if pos == len(head):
            x[last] = room // c[last]
            points.append(tuple(x))
            return
        j = head[pos]
        for v in range(room // c[j] + 1):
            x[j] = v
            walk(pos + 1, room - v * c[j], x)
        x[j] = 0

    walk(0, d, list(base))
    return PackingSet(n, tuple(points))


def integer_hull(s: PackingSet) -> HPolyhedron:
    """Closed convex hull of ``s`` as an irredundant packing H-polyhedron.

    Vertices of a union of blocks are vertices of single blocks, i.e. a
    generator with some finite coordinates zeroed. Coordinates that are
    infinite in some generator become recession rays ``e_j``.
    """
    if s.is_empty:
        raise EmptySetError("integer hull of the empty packing set")
    if s.dim > limits.dim_cap:
        raise DimensionCapExceeded(f"dimension {s.dim} exceeds cap {limits.dim_cap}")
    return _integer_hull(s)


@lru_cache(maxsize=16384)
def _integer_hull(s: PackingSet) -> HPolyhedron:
    n = s.dim
    points = set()
    for g in s.generators:
        finite = [j for j in range(n) if g[j] != INF]
        for keep in itertools.product((False, True), repeat=len(finite)):
            x = [0] * n
            for j, flag in zip(finite, keep):
                if flag:
                    x[j] = g[j]
            points.add(tuple(x))
    rays = [tuple(1 if i == j else 0 for i in range(n)) for j in sorted(s.infinite_coords())]
    hull = v_to_h(VPolyhedron(n, tuple(sorted(points)), tuple(rays)))
    if not is_packing_form(hull):
        raise AssertionError(f"hull of a packing set is not in packing form: {hull}")
    return hull


def is_packing_form(p: HPolyhedron) -> bool:
    return p.nonneg and all(
        h.rhs >= 0 and all(a >= 0 for a in h.normal) for h in p.halfspaces
    )


def to_json(s: PackingSet) -> dict:
    return {
        "dim": s.dim,
        "generators": [["inf" if a == INF else a for a in g] for g in s.generators],
    }


def from_json(obj: dict) -> PackingSet:
    if not isinstance(obj, dict) or "dim" not in obj or "generators" not in obj:
        raise ValueError('packing set must be an object with "dim" and "generators"')
    dim = obj["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise ValueError("dim must be an integer")
    gens = []
    for i, g in enumerate(obj["generators"]):
        if not isinstance(g, list):
            raise ValueError(f"generators[{i}] must be a list")
        try:
            gens.append(tuple(_ext(v) for v in g))
        except ValueError as exc:
            raise ValueError(f"generators[{i}]: {exc}") from None
    return PackingSet(dim, tuple(gens))
