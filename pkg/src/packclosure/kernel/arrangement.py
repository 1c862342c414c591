"""Cells of a central hyperplane arrangement restricted to the standard simplex.

The simplex ``{lam >= 0, sum(lam) = 1}`` is the section of the cone
``R^d_+``, so full-dimensional cells correspond to full-dimensional cones
``{lam >= 0, s_j h_j.lam >= 0}``. Every cone is kept by its extreme rays
(integer vectors with their tight-constraint masks); inserting a hyperplane
either leaves a cone on one side, which is read off the ray signs, or
splits it with one double-description step per side. No LP is needed.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..errors import BudgetExceeded
from ..limits import limits
from .rational import QVector, integer_row, primitive

SignVector = Tuple[int, ...]


@dataclass(frozen=True)
class Cell:
    """A full-dimensional cell: a strictly interior rational point and the
    sign (+1 or -1) of every hyperplane at that point."""

    rep: QVector
    signs: SignVector


def _idot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _split(rays, g, bit, d):
    """Rays of ``cone & {g.x <= 0}`` (the cone is pointed and full-dimensional)."""
    vals = [_idot(g, r) for r, _ in rays]
    out = []
    for (r, mask), v in zip(rays, vals):
        if v < 0:
            out.append((r, mask))
        elif v == 0:
            out.append((r, mask | bit))
    masks = [m for _, m in rays]
    for i, (ri, mi) in enumerate(rays):
        if vals[i] <= 0:
            continue
        for j, (rj, mj) in enumerate(rays):
            if vals[j] >= 0:
                continue
            common = mi & mj
            if common.bit_count() < d - 2:
                continue
            if any((masks[t] & common) == common for t in range(len(rays)) if t != i and t != j):
                continue
            new = primitive([vals[i] * b - vals[j] * a for a, b in zip(ri, rj)])
            out.append((new, common | bit))
    return out


def _centroid(rays, d) -> QVector:
    acc = [Fraction(0)] * d
    for r, _ in rays:
        s = sum(r)
        for i in range(d):
            acc[i] += Fraction(r[i], s)
    k = len(rays)
    return tuple(a / k for a in acc)


def enumerate_cells(hyperplanes: Sequence[Sequence], d: int) -> List[Cell]:
    """One representative per full-dimensional cell of the arrangement of
    ``{lam : h.lam = 0}`` inside the standard ``(d-1)``-simplex.

    Representatives are centroids of the cell's vertices, so they are
    rational, off every hyperplane and strictly positive. Zero normals do
    not cut anything; they are dropped (with a warning) and sign vectors
    are indexed by the remaining hyperplanes in input order. Output is
    sorted by sign vector.
    """
    normals = [integer_row([Fraction(x) for x in h]) for h in hyperplanes]
    for h in normals:
        if len(h) != d:
            raise ValueError("hyperplane dimension mismatch")
    dropped = [i for i, h in enumerate(normals) if not any(h)]
    if dropped:
        warnings.warn(f"zero hyperplane normals dropped: {dropped}", stacklevel=2)
    normals = [h for h in normals if any(h)]

    distinct = []
    seen = set()
    for h in normals:
        lead = next(a for a in h if a)
        key = h if lead > 0 else tuple(-a for a in h)
        if key not in seen:
            seen.add(key)
            distinct.append(key)

    # constraint bits: 0..d-1 are lam_i >= 0, d+k is the k-th distinct hyperplane
    start = []
    for i in range(d):
        e = tuple(1 if j == i else 0 for j in range(d))
        start.append((e, ((1 << d) - 1) & ~(1 << i)))
    cells = [start]
    for k, g in enumerate(distinct):
        bit = 1 << (d + k)
        neg_g = tuple(-a for a in g)
        out = []
        for rays in cells:
            vals = [_idot(g, r) for r, _ in rays]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                out.append([(r, m | bit) if v == 0 else (r, m) for (r, m), v in zip(rays, vals)])
                continue
            out.append(_split(rays, g, bit, d))
            out.append(_split(rays, neg_g, bit, d))
        cells = out
        if len(cells) > limits.cell_budget:
            raise BudgetExceeded(f"more than {limits.cell_budget} cells")

    result = []
    for rays in cells:
        rep = _centroid(rays, d)
        signs = []
        for h in normals:
            v = sum(a * b for a, b in zip(h, rep))
            assert v != 0
            signs.append(1 if v > 0 else -1)
        result.append(Cell(rep, tuple(signs)))
    result.sort(key=lambda c: c.signs)
    return result
