"""Exact two-phase simplex over Fractions with Bland's anti-cycling rule."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .polyhedra import HPolyhedron
from .rational import QVector, qvec

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp_max`.

    ``status`` is ``"optimal"``, ``"unbounded"`` or ``"infeasible"``.
    For optimal problems ``argmax`` is a basic optimal point. For unbounded
    ones ``argmax`` is the feasible basic point the simplex stopped at and
    ``ray`` a recession direction along which the objective grows. For
    infeasible ones ``certificate`` is ``y >= 0`` with ``y.A >= 0`` (``= 0``
    when ``x`` is free) and ``y.b < 0``.
    """

    status: str
    value: Optional[Fraction] = None
    argmax: Optional[QVector] = None
    ray: Optional[QVector] = None
    certificate: Optional[QVector] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    @property
    def unbounded(self) -> bool:
        return self.status == "unbounded"

    @property
    def infeasible(self) -> bool:
        return self.status == "infeasible"


class _Tableau:
    def __init__(self, A, b):
        m, n = len(A), len(A[0]) if A else 0
        self.n = n
        n_art = sum(1 for v in b if v < 0)
        self.width = n + m + n_art
        self.rows: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        self.basis: List[int] = []
        self.artificial = set(range(n + m, self.width))
        art = n + m
        for i in range(m):
            row = [ZERO] * self.width
            if b[i] >= 0:
                row[:n] = A[i]
                row[n + i] = ONE
                self.basis.append(n + i)
                self.rhs.append(b[i])
            else:
                row[:n] = [-a for a in A[i]]
                row[n + i] = -ONE
                row[art] = ONE
                self.basis.append(art)
                self.rhs.append(-b[i])
                art += 1
            self.rows.append(row)

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row = [a / piv for a in row]
            self.rhs[r] /= piv
            self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i != r and other[c] != 0:
                f = other[c]
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, cost):
        out = list(cost)
        for i, j in enumerate(self.basis):
            cj = cost[j]
            if cj:
                out = [a - cj * b for a, b in zip(out, self.rows[i])]
        return out

    def run(self, cost, allowed):
        """Maximize ``cost``; returns ``None`` at optimum or the entering
        column along which the objective is unbounded."""
        while True:
            red = self.reduced_costs(cost)
            enter = next((j for j in allowed if red[j] > 0), None)
            if enter is None:
                return None
            best, leave = None, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return enter
            self.pivot(leave, enter)

    def value(self, cost):
        return sum((cost[j] * self.rhs[i] for i, j in enumerate(self.basis)), ZERO)

    def point(self):
        x = [ZERO] * self.n
        for i, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.rhs[i]
        return x


def simplex(c: Sequence[Fraction], A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    """Maximize ``c.x`` subject to ``A x <= b, x >= 0``.

    Returns ``(status, value, x, ray)`` with status as in :class:`LPResult`.
    """
    n = len(c)
    if not A:
        if any(v > 0 for v in c):
            j = next(j for j, v in enumerate(c) if v > 0)
            ray = [ZERO] * n
            ray[j] = ONE
            return "unbounded", None, [ZERO] * n, ray
        return "optimal", ZERO, [ZERO] * n, None
    t = _Tableau([list(r) for r in A], list(b))
    if t.artificial:
        cost = [ZERO] * t.width
        for j in t.artificial:
            cost[j] = -ONE
        t.run(cost, range(t.width))
        if t.value(cost) < 0:
            return "infeasible", None, None, None
        for i in reversed(range(len(t.rows))):
            if t.basis[i] in t.artificial:
                j = next((j for j in range(t.width) if j not in t.artificial and t.rows[i][j] != 0), None)
                if j is None:
                    del t.rows[i], t.rhs[i], t.basis[i]
                else:
                    t.pivot(i, j)
    allowed = [j for j in range(t.width) if j not in t.artificial]
    cost = list(c) + [ZERO] * (t.width - n)
    enter = t.run(cost, allowed)
    x = t.point()
    if enter is not None:
        ray = [ZERO] * n
        if enter < n:
            ray[enter] = ONE
        for i, j in enumerate(t.basis):
            if j < n:
                ray[j] = -t.rows[i][enter]
        return "unbounded", None, x, ray
    return "optimal", t.value(cost), x, None


def _farkas(A, b) -> List[Fraction]:
    """``y >= 0`` with ``y.A >= 0`` and ``y.b <= -1``; only called when
    ``A x <= b, x >= 0`` is infeasible, so this system is feasible."""
    m, n = len(A), len(A[0])
    rows = [[-A[i][j] for i in range(m)] for j in range(n)]
    rows.append(list(b))
    rhs = [ZERO] * n + [-ONE]
    status, _, y, _ = simplex([ZERO] * m, rows, rhs)
    assert status == "optimal"
    return y


def lp_max(objective, p: HPolyhedron) -> LPResult:
    """Maximize ``objective . x`` over ``p`` exactly."""
    c = qvec(objective)
    if len(c) != p.dim:
        raise ValueError("objective dimension mismatch")
    n = p.dim
    A = [list(h.normal) for h in p.halfspaces]
    b = [h.rhs for h in p.halfspaces]
    if not p.nonneg:
        A = [row + [-a for a in row] for row in A]
        c_std = list(c) + [-a for a in c]
    else:
        c_std = list(c)

    def back(v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        if p.nonneg:
            return tuple(v)
        return tuple(v[j] - v[j + n] for j in range(n))

    status, value, x, ray = simplex(c_std, A, b)
    if status == "infeasible":
        return LPResult("infeasible", certificate=tuple(_farkas(A, b)))
    if status == "unbounded":
        return LPResult("unbounded", argmax=back(x), ray=back(ray))
    return LPResult("optimal", value=value, argmax=back(x))
