"""k-aggregation closures of packing polyhedra and of finite unions of them.

Exact mode (every entry of ``A`` positive, after dropping zero columns)
---------------------------------------------------------------------
With ``lam`` normalized to the simplex, ``(A^T lam)_j >= min_i a_ij`` and
``b.lam <= max_i b_i``, so every aggregated knapsack set ``S_lam`` sits in
the box ``x_j <= floor(max b / min_i a_ij)``. Inside that box, ``z`` is in
``S_lam`` iff ``lam.(Az - b) <= 0``, so ``S_lam`` is constant on each
full-dimensional cell of the arrangement of the hyperplanes
``lam.(Az - b) = 0``. A multiplier on a cell boundary only turns some
strict inequalities into equalities, which adds points, so its set
contains the set of a neighbouring cell. Hence the cell sets contain
every inclusion-minimal ``S_lam``, and since ``conv`` of an intersection is
monotone in each slot, intersecting over k-multisets of the minimal cell
sets gives the closure exactly.

Otherwise the same construction over a user or default box only sees
finitely many multipliers, so the result is a certified superset of the
closure and is reported as such.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

from . import packset
from .downset import (
    DownsetModel,
    PackingPolyhedron,
    normalize_downset,
    packing_form,
    polyhedron_integer_hull,
    recession_free_coords,
    sup_oracle,
)
from .errors import BudgetExceeded, NotADownset
from .kernel.arrangement import enumerate_cells
from .kernel.polyhedra import HPolyhedron, VPolyhedron, h_to_v, intersect_all, poly_contains, v_to_h
from .kernel.rational import QVector, qvec
from .packset import INF, KnapsackIneq, PackingSet
from .wqo import BasisState, basis_insert

ALL_POSITIVE = "all-positive-A"
CONV_UNION = "conv-union-integer-hull"
TRUNCATED = "truncated-box"


@dataclass(frozen=True)
class Representative:
    multiplier: QVector
    set: PackingSet


@dataclass(frozen=True)
class RepresentativeFamily:
    reps: Tuple[Representative, ...]
    minimal: bool

    @property
    def sets(self) -> List[PackingSet]:
        return [r.set for r in self.reps]


@dataclass(frozen=True)
class ClosureResult:
    """Closure hull with its provenance.

    ``hull`` is ``None`` exactly when ``empty`` is set. When ``exact`` is
    false the hull is only guaranteed to contain the true closure.
    """

    hull: Optional[PackingPolyhedron]
    exact: bool
    certificate: str
    family: RepresentativeFamily
    truncation_box: Optional[Tuple[int, ...]] = None
    empty: bool = False
    warnings: Tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return self.hull.dim if self.hull is not None else self.family.reps[0].set.dim


def aggregate(P: PackingPolyhedron, lam) -> KnapsackIneq:
    """The aggregated row ``(A^T lam) . x <= b . lam``."""
    lam = qvec(lam)
    if len(lam) != P.m:
        raise ValueError(f"multiplier has length {len(lam)}, expected {P.m}")
    if any(v < 0 for v in lam):
        raise ValueError("multipliers must be nonnegative")
    c = tuple(sum((lam[i] * P.A[i][j] for i in range(P.m)), Fraction(0)) for j in range(P.dim))
    d = sum((lam[i] * P.b[i] for i in range(P.m)), Fraction(0))
    return KnapsackIneq(c, d)


def global_box(P: PackingPolyhedron) -> Optional[Tuple[int, ...]]:
    """Box containing every ``S_lam`` when all entries of ``A`` are positive,
    else ``None``."""
    if P.m == 0 or any(a <= 0 for row in P.A for a in row):
        return None
    top = max(P.b)
    return tuple(math.floor(top / min(row[j] for row in P.A)) for j in range(P.dim))


def default_box(P: PackingPolyhedron) -> Tuple[int, ...]:
    """Per coordinate, the largest bound any single row imposes on it."""
    out = []
    for j in range(P.dim):
        bounds = [math.floor(P.b[i] / P.A[i][j]) for i in range(P.m) if P.A[i][j] > 0]
        out.append(max(bounds, default=0))
    return tuple(out)


def _box_points(box: Sequence[int]):
    return itertools.product(*(range(b + 1) for b in box))


def _mixed(v: Sequence) -> bool:
    return any(a > 0 for a in v) and any(a < 0 for a in v)


def _minimal_family(candidates: Sequence[Representative]) -> RepresentativeFamily:
    state = BasisState(leq=lambda r, s: packset.subset(r.set, s.set))
    for rep in candidates:
        basis_insert(state, rep)
    reps = sorted(state.basis, key=lambda r: (r.set.generators, r.multiplier))
    return RepresentativeFamily(tuple(reps), True)


def _distinct(candidates: Sequence[Representative]) -> RepresentativeFamily:
    seen = {}
    for rep in candidates:
        seen.setdefault(rep.set, rep)
    return RepresentativeFamily(tuple(seen.values()), False)


def _cell_hyperplanes(P: PackingPolyhedron, box: Sequence[int]) -> List[QVector]:
    out = []
    for z in _box_points(box):
        v = tuple(sum((P.A[i][j] * z[j] for j in range(P.dim)), Fraction(0)) - P.b[i] for i in range(P.m))
        if _mixed(v):
            out.append(v)
    return out


def lambda_cells(
    P: PackingPolyhedron,
    box: Sequence[int],
    minimal: bool = True,
    skip_over_budget: bool = False,
    notes: Optional[list] = None,
) -> RepresentativeFamily:
    """Knapsack sets of one multiplier per cell of the multiplier arrangement.

    With ``minimal`` the family is reduced to its inclusion-minimal sets;
    otherwise every distinct set is kept. ``skip_over_budget`` drops
    multipliers whose knapsack set is too large to enumerate (valid for
    outer approximations only) and records them in ``notes``.
    """
    if any(b < 0 for b in box):
        raise ValueError("box must be nonnegative")
    cells = enumerate_cells(_cell_hyperplanes(P, box), P.m)
    candidates = []
    for cell in cells:
        try:
            S = packset.from_knapsack(aggregate(P, cell.rep))
        except BudgetExceeded:
            if not skip_over_budget:
                raise
            if notes is not None:
                notes.append(f"skipped multiplier {[str(v) for v in cell.rep]}: knapsack set over budget")
            continue
        candidates.append(Representative(cell.rep, S))
    return _minimal_family(candidates) if minimal else _distinct(candidates)


def family_closure(sets: Sequence[PackingSet], k: int, dim: int) -> Optional[HPolyhedron]:
    """``Intersection of conv(S_1 & ... & S_k)`` over k-multisets of ``sets``.

    ``None`` signals the empty set, which happens iff a member is empty.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if any(s.is_empty for s in sets):
        return None
    terms = []
    for combo in itertools.combinations_with_replacement(range(len(sets)), k):
        S = reduce(packset.intersect, (sets[i] for i in combo))
        terms.append(packset.integer_hull(S))
    if not terms:
        return HPolyhedron(dim, (), True)
    halfspaces = tuple(sorted({h for t in terms for h in t.halfspaces}, key=lambda h: (h.normal, h.rhs)))
    return HPolyhedron(dim, halfspaces, True)


def _project(P: PackingPolyhedron, keep: Sequence[int]) -> PackingPolyhedron:
    return PackingPolyhedron(tuple(tuple(row[j] for j in keep) for row in P.A), P.b, len(keep))


def _lift_set(S: PackingSet, keep: Sequence[int], n: int) -> PackingSet:
    gens = []
    for g in S.generators:
        full = [INF] * n
        for j, a in zip(keep, g):
            full[j] = a
        gens.append(tuple(full))
    return PackingSet(n, tuple(gens))


def _lift_hull(H: PackingPolyhedron, keep: Sequence[int], n: int) -> PackingPolyhedron:
    A = []
    for row in H.A:
        full = [Fraction(0)] * n
        for j, a in zip(keep, row):
            full[j] = a
        A.append(tuple(full))
    return PackingPolyhedron(tuple(A), H.b, n)


def _lift_family(fam: RepresentativeFamily, keep, n) -> RepresentativeFamily:
    return RepresentativeFamily(
        tuple(Representative(r.multiplier, _lift_set(r.set, keep, n)) for r in fam.reps), fam.minimal
    )


def _orthant(n: int) -> PackingPolyhedron:
    return PackingPolyhedron((), (), n)


def _finish(hull: Optional[HPolyhedron], keep, n) -> Tuple[Optional[PackingPolyhedron], bool]:
    if hull is None:
        return None, True
    return _lift_hull(packing_form(hull), keep, n), False


def closure_k(P: PackingPolyhedron, k: int, box: Optional[Sequence[int]] = None) -> ClosureResult:
    """The k-aggregation closure of ``P``.

    Zero columns of ``A`` are free in every aggregation; they are projected
    out and come back as recession directions. If the remaining matrix is
    entrywise positive the result is exact; otherwise ``box`` (or
    :func:`default_box`) truncates the multiplier arrangement and the
    result is an outer approximation.
    """
    if k < 1:
        raise ValueError("k must be positive")
    n = P.dim
    free = recession_free_coords(P)
    keep = [j for j in range(n) if j not in free]
    if not keep:
        return ClosureResult(_orthant(n), True, ALL_POSITIVE, RepresentativeFamily((), True))
    Q = _project(P, keep)
    notes: List[str] = []
    certified = global_box(Q)
    if certified is not None:
        if box is not None:
            notes.append("all entries positive: supplied box ignored in favour of the certified box")
        use_box, exact = certified, True
    else:
        if box is not None:
            if len(box) != n:
                raise ValueError(f"box has length {len(box)}, expected {n}")
            use_box = tuple(box[j] for j in keep)
        else:
            use_box = default_box(Q)
        exact = False
    fam = lambda_cells(Q, use_box, minimal=False, skip_over_budget=not exact, notes=notes)
    rows = []
    for i in range(Q.m):
        e = tuple(Fraction(1 if t == i else 0) for t in range(Q.m))
        rows.append(Representative(e, packset.from_knapsack(KnapsackIneq(Q.A[i], Q.b[i]))))
    fam = _minimal_family(list(fam.reps) + rows)
    hull, empty = _finish(family_closure(fam.sets, k, len(keep)), keep, n)
    return ClosureResult(
        hull,
        exact,
        ALL_POSITIVE if exact else TRUNCATED,
        _lift_family(fam, keep, n),
        None if exact else tuple(box) if box is not None else _lift_box(use_box, keep, n),
        empty,
        tuple(notes),
    )


def _lift_box(box, keep, n):
    full = [0] * n
    for j, b in zip(keep, box):
        full[j] = b
    return tuple(full)


def _restricted(D: DownsetModel):
    """Drop every coordinate that is free in some piece.

    Such a coordinate must get weight 0 in any bounded direction, and for a
    downset the projection onto the other coordinates equals the section
    ``x_free = 0``, which for a packing piece just deletes columns.
    """
    free = set()
    for p in D.pieces:
        free |= recession_free_coords(p)
    keep = [j for j in range(D.dim) if j not in free]
    return keep, [_project(p, keep) for p in D.pieces] if keep else []


def _maximal_vertices(pieces: Sequence[PackingPolyhedron]) -> List[QVector]:
    verts = set()
    for p in pieces:
        verts.update(h_to_v(p.to_h()).vertices)
    verts = sorted(verts)
    return [v for v in verts if not any(w != v and all(a <= b for a, b in zip(v, w)) for w in verts)]


def closure_k_downset(
    D: DownsetModel, k: int, box: Optional[Sequence[int]] = None, use_aggregations: bool = True
) -> ClosureResult:
    """Truncated k-aggregation closure of a finite union of packing polyhedra.

    Directions ``f`` range over the simplex. For ``z`` in the box,
    ``z`` is in ``S_f`` iff ``f.(z - v) <= 0`` for some vertex ``v`` of a
    piece, so ``S_f`` (within the box) is constant on cells of the
    arrangement of the hyperplanes ``f.(z - v) = 0``. Only Pareto-maximal
    vertices matter for the supremum and points below some vertex are
    always in, so both are pruned. Axis directions are always included.
    The default box reaches one unit past the largest vertex coordinate.

    A single piece whose aggregation closure is certified goes through
    :func:`closure_k` instead, since for polyhedra bounded directions and
    aggregations give the same closure. Otherwise exact only in dimension
    one.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if len(D.pieces) == 1 and use_aggregations:
        res = closure_k(D.pieces[0], k, box)
        if res.exact:
            return res
    n = D.dim
    keep, pieces = _restricted(D)
    if not keep:
        return ClosureResult(_orthant(n), True, CONV_UNION, RepresentativeFamily((), True))
    nk = len(keep)
    Dr = DownsetModel(nk, tuple(pieces))
    verts = _maximal_vertices(pieces)
    if box is None:
        use_box = tuple(math.floor(max(v[j] for v in verts)) + 1 for j in range(nk))
    else:
        if len(box) != n:
            raise ValueError(f"box has length {len(box)}, expected {n}")
        use_box = tuple(box[j] for j in keep)

    hyperplanes = []
    for z in _box_points(use_box):
        if any(all(a <= b for a, b in zip(z, v)) for v in verts):
            continue
        for v in verts:
            h = tuple(Fraction(a) - b for a, b in zip(z, v))
            if _mixed(h):
                hyperplanes.append(h)
    notes: List[str] = []
    candidates = []
    for cell in enumerate_cells(hyperplanes, nk):
        beta = sup_oracle(Dr, cell.rep).beta
        try:
            S = packset.from_knapsack(KnapsackIneq(cell.rep, beta))
        except BudgetExceeded:
            notes.append(f"skipped direction {[str(v) for v in cell.rep]}: knapsack set over budget")
            continue
        candidates.append(Representative(cell.rep, S))
    for j in range(nk):
        e = tuple(Fraction(1 if t == j else 0) for t in range(nk))
        beta = sup_oracle(Dr, e).beta
        candidates.append(Representative(e, packset.from_knapsack(KnapsackIneq(e, beta))))
    fam = _minimal_family(candidates)
    hull, empty = _finish(family_closure(fam.sets, k, nk), keep, n)
    exact = nk == 1
    return ClosureResult(
        hull,
        exact,
        CONV_UNION if exact else TRUNCATED,
        _lift_family(fam, keep, n),
        None if exact else _lift_box(use_box, keep, n),
        empty,
        tuple(notes),
    )


def closure(source, k: int, box: Optional[Sequence[int]] = None) -> ClosureResult:
    """Dispatch on the number of pieces: polyhedra go to :func:`closure_k`."""
    if isinstance(source, DownsetModel):
        if len(source.pieces) == 1:
            return closure_k(source.pieces[0], k, box)
        return closure_k_downset(source, k, box)
    return closure_k(source, k, box)


def closure_inf(D: DownsetModel | PackingPolyhedron) -> ClosureResult:
    """The infinite aggregation closure: integer hull of the closed convex
    hull of the union of the pieces."""
    if isinstance(D, PackingPolyhedron):
        D = DownsetModel.single(D)
    n = D.dim
    verts, rays = set(), set()
    for p in D.pieces:
        v = h_to_v(p.to_h())
        verts.update(v.vertices)
        rays.update(v.rays)
    C = v_to_h(VPolyhedron(n, tuple(sorted(verts)), tuple(sorted(rays))))
    hull = polyhedron_integer_hull(normalize_downset(C))
    return ClosureResult(hull, True, CONV_UNION, RepresentativeFamily((), True))


# ---------------------------------------------------------------- verification


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def fail(self, check: str, witness, detail: str = "") -> None:
        self.checks[check] = False
        self.violations.append(
            {"check": check, "witness": None if witness is None else [str(a) for a in witness], "detail": detail}
        )

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": dict(self.checks),
            "violations": list(self.violations),
            "skipped_samples": self.skipped,
        }


def random_simplex_point(rng: random.Random, d: int, denominator: int = 12) -> QVector:
    """Uniform point of the grid ``{v / denominator : sum(v) = denominator}``."""
    cuts = sorted(rng.randint(0, denominator) for _ in range(d - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return tuple(Fraction(p, denominator) for p in parts)


def _outside_witness(outer: HPolyhedron, inner: VPolyhedron):
    for v in inner.vertices:
        if not outer.contains(v):
            return v, "vertex"
    for r in inner.rays:
        if (outer.nonneg and any(a < 0 for a in r)) or any(
            sum(a * b for a, b in zip(h.normal, r)) > 0 for h in outer.halfspaces
        ):
            return r, "ray"
    return None, ""


def verify_closure(result: ClosureResult, source, samples: int = 200, seed: int = 0) -> VerificationReport:
    """Sandwich checks for a closure result.

    (a) the hull lies in ``conv(S)`` for ``samples`` random multipliers
    (polyhedra) or simplex directions (unions); (b) it contains the
    infinite closure; (c) for polyhedra, ``P_I <= hull <= P``; (d) it is a
    packing polyhedron.
    """
    report = VerificationReport()
    for name in ("a_sampled_cuts", "b_contains_inf_closure", "c_sandwich", "d_packing"):
        report.checks[name] = True
    if result.empty or result.hull is None:
        report.fail("d_packing", None, "closure is flagged empty")
        return report
    P = None
    if isinstance(source, PackingPolyhedron):
        P = source
    elif len(source.pieces) == 1:
        P = source.pieces[0]
    D = source if isinstance(source, DownsetModel) else DownsetModel.single(source)
    H = result.hull.to_h()
    VH = h_to_v(H)
    rng = random.Random(seed)

    for _ in range(samples):
        try:
            if P is not None:
                lam = random_simplex_point(rng, P.m)
                S = packset.from_knapsack(aggregate(P, lam))
                label = "multiplier"
            else:
                f = random_simplex_point(rng, D.dim)
                beta = sup_oracle(D, f).beta
                if beta == INF:
                    report.skipped += 1
                    continue
                lam = f
                S = packset.from_knapsack(KnapsackIneq(f, beta))
                label = "direction"
        except BudgetExceeded:
            report.skipped += 1
            continue
        C = packset.integer_hull(S)
        if not poly_contains(C, VH):
            w, kind = _outside_witness(C, VH)
            report.fail("a_sampled_cuts", w, f"{kind} outside conv(S) for {label} {[str(v) for v in lam]}")
            break

    lower = closure_inf(D).hull
    Vlow = h_to_v(lower.to_h())
    if not poly_contains(H, Vlow):
        w, kind = _outside_witness(H, Vlow)
        report.fail("b_contains_inf_closure", w, f"{kind} of the infinite closure outside the hull")

    if P is not None:
        PI = polyhedron_integer_hull(P)
        VPI = h_to_v(PI.to_h())
        if not poly_contains(H, VPI):
            w, kind = _outside_witness(H, VPI)
            report.fail("c_sandwich", w, f"{kind} of P_I outside the hull")
        Ph = P.to_h()
        if not poly_contains(Ph, VH):
            w, kind = _outside_witness(Ph, VH)
            report.fail("c_sandwich", w, f"hull {kind} outside P")

    try:
        normalize_downset(H)
    except NotADownset as exc:
        report.fail("d_packing", exc.x, str(exc))
    return report


def closure_monotonicity(P: PackingPolyhedron, kmax: int) -> dict:
    """Check ``A_{k+1}(P) <= A_k(P)`` for ``k < kmax``."""
    results = [closure_k(P, k) for k in range(1, kmax + 1)]
    chain = []
    for k in range(1, kmax):
        big, small = results[k - 1].hull, results[k].hull
        ok = small is None or (big is not None and poly_contains(big.to_h(), h_to_v(small.to_h())))
        chain.append({"k": k, "contains_next": ok})
    stable = next(
        (k for k in range(1, kmax) if results[k].hull == results[k - 1].hull),
        None,
    )
    return {
        "holds": all(c["contains_next"] for c in chain),
        "chain": chain,
        "exact": all(r.exact for r in results),
        "first_repeat": stable,
        "results": results,
    }
