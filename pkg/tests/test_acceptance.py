"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are
collected in the terminal summary) or as a script.
"""
import itertools
import json
import math
import os
import random
import subprocess
import sys
from fractions import Fraction as F

import pytest

from packclosure import packset, serialize
from packclosure.cli import main as cli_main
from packclosure.closure import closure_inf, closure_k, family_closure, verify_closure
from packclosure.downset import (
    DownsetModel,
    PackingPolyhedron,
    farkas_decompose,
    normalize_downset,
    polyhedron_integer_hull,
    sup_oracle,
)
from packclosure.errors import NotADownset
from packclosure.kernel.lp import lp_max
from packclosure.kernel.polyhedra import (
    HPolyhedron,
    VPolyhedron,
    h_to_v,
    intersect_all,
    poly_contains,
    poly_equal,
    v_to_h,
)
from packclosure.packset import INF, KnapsackIneq, PackingSet

import oracles

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # script mode
    ACCEPTANCE_LINES = []


def report(number, title, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number} [{status}] {title}" + (f" ({detail})" if detail else "")
    if failures:
        line += f": {len(failures)} failure(s), first: {failures[0]}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


def _cli_json(argv, capsys):
    code = cli_main([str(a) for a in argv])
    out, _ = capsys.readouterr()
    return code, json.loads(out) if out else None


# ------------------------------------------------------------------ fixtures


def positive_suite():
    rng = random.Random(2024)
    return [oracles.random_positive_instance(rng, rng.randint(1, 3), rng.randint(1, 3)) for _ in range(100)]


def bounded_suite():
    rng = random.Random(4)
    return [
        oracles.random_packing_polyhedron(rng, rng.randint(1, 3), rng.randint(1, 3), bmax=4)
        for _ in range(200)
    ]


@pytest.fixture(scope="module")
def positive_closures():
    return [(P, closure_k(P, 1), closure_k(P, 2)) for P in positive_suite()]


# ------------------------------------------------------------------ criteria


def test_criterion_1_finite_basis(tmp_path, capsys):
    failures = []
    rng = random.Random(1)
    for s in range(20):
        dim = rng.randint(1, 4)
        stream = [oracles.random_packing_set(rng, dim, cmax=8, gens=3) for _ in range(2000)]
        path = tmp_path / f"stream{s}.json"
        path.write_text(json.dumps([packset.to_json(x) for x in stream]))
        code, rep = _cli_json(["wqo-basis", path], capsys)
        res = rep["results"]
        basis = [packset.from_json(b) for b in res["basis"]]
        if code != 0 or not res["last_change_index"] < len(stream):
            failures.append(f"stream {s}: no stabilization")
        if any(packset.subset(a, b) for a, b in itertools.permutations(basis, 2)):
            failures.append(f"stream {s}: basis is not an antichain")
        if not all(any(packset.subset(b, x) for b in basis) for x in stream):
            failures.append(f"stream {s}: replay found an unabsorbed element")
    report(1, "finite basis of 20 streams x 2000 packing sets", failures)


def test_criterion_2_block_decomposition():
    failures = []
    rng = random.Random(2)
    for t in range(200):
        s = oracles.random_packing_set(rng, rng.randint(1, 4), cmax=6, gens=4, inf_prob=0.25)
        back = packset.from_blocks(packset.blocks(s), s.dim)
        finite = [a for g in s.generators for a in g if a != INF]
        top = max(finite, default=0) + 1
        probes = list(itertools.product(range(top + 1), repeat=s.dim))
        for _ in range(50):
            x = [rng.randint(0, top) for _ in range(s.dim)]
            for j in s.infinite_coords():
                x[j] = rng.randint(top + 1, 10**6)
            probes.append(tuple(x))
        bad = [x for x in probes if (x in s) != (x in back) or (x in s) != oracles.point_in_blocks(x, s.generators)]
        if bad:
            failures.append(f"set {t}: membership differs at {bad[0]}")
    report(2, "blocks re-ingest to the same set on 200 random sets", failures)


def test_criterion_3_knapsack_oracle():
    failures = []
    rng = random.Random(3)
    done = 0
    while done < 500:
        n = rng.randint(1, 4)
        c = [F(0) if rng.random() < 0.2 else F(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(n)]
        d = F(rng.randint(-3, 12), rng.randint(1, 3))
        box = 1
        for a in c:
            if a > 0 and d >= 0:
                box *= int(d / a) + 1
        if box > 10**5:
            continue
        done += 1
        got = list(packset.from_knapsack(KnapsackIneq(tuple(c), d)).generators)
        if got != oracles.knapsack_maximal(c, d):
            failures.append(f"c={c}, d={d}")
    report(3, "from_knapsack equals enumeration on 500 knapsacks", failures)


def test_criterion_4_integer_hull_oracle():
    failures = []
    for t, P in enumerate(bounded_suite()):
        hull = polyhedron_integer_hull(P).to_h()
        pts = oracles.integer_points(P, oracles.bounding_box(P))
        brute = v_to_h(VPolyhedron(P.dim, tuple(tuple(F(a) for a in z) for z in pts), ()))
        if not poly_equal(hull, brute) or not oracles.hull_matches_points(hull, pts):
            failures.append(f"instance {t}: hull differs from conv of {len(pts)} points")
        if not packset.is_packing_form(hull) or not poly_equal(normalize_downset(hull).to_h(), hull):
            failures.append(f"instance {t}: hull not in packing form")
    report(4, "integer hull equals brute-force hull on 200 polyhedra", failures)


def test_criterion_5_exact_closure(positive_closures):
    failures = []
    grid_equal = 0
    for t, (P, A1, A2) in enumerate(positive_closures):
        if not (A1.exact and A2.exact):
            failures.append(f"instance {t}: exactness not certified")
        H1, H2 = A1.hull.to_h(), A2.hull.to_h()
        PI = polyhedron_integer_hull(P).to_h()
        sandwich = (
            poly_contains(H2, h_to_v(PI))
            and poly_contains(H1, h_to_v(H2))
            and poly_contains(P.to_h(), h_to_v(H1))
        )
        if not sandwich:
            failures.append(f"instance {t}: sandwich P_I <= A2 <= A1 <= P violated")
        # grid oracle: every grid multiplier gives a valid cut, so the grid
        # closure contains the exact one
        sets = oracles.grid_closure_sets(P, _global_box(P), qmax=40)
        g1 = _oracle_closure(sets, 1, P.dim)
        g2 = _oracle_closure(sets, 2, P.dim)
        if not (poly_contains(g1, h_to_v(H1)) and poly_contains(g2, h_to_v(H2))):
            failures.append(f"instance {t}: exact closure not inside the grid oracle")
        grid_equal += poly_equal(g1, H1) and poly_equal(g2, H2)
        rep1 = verify_closure(A1, P, samples=200, seed=t)
        rep2 = verify_closure(A2, P, samples=200, seed=t)
        if not (rep1.passed and rep2.passed):
            failures.append(f"instance {t}: verify_closure failed {rep1.violations or rep2.violations}")
    canon = PackingPolyhedron(((2, 1), (1, 2)), (2, 2))
    c1 = closure_k(canon, 1).hull.to_h()
    g = _oracle_closure(oracles.grid_closure_sets(canon, (2, 2), 40), 1, 2)
    expected = HPolyhedron.from_rows([[1, 1]], [1])
    if not (poly_equal(c1, expected) and poly_equal(g, expected)):
        failures.append("canonical instance: closure or grid oracle is not {x1 + x2 <= 1}")
    report(5, "exact closures on 100 positive instances", failures, f"grid oracle equal on {grid_equal}/100")


def _global_box(P):
    top = max(P.b)
    return [math.floor(top / min(row[j] for row in P.A)) for j in range(P.dim)]


def _oracle_closure(sets, k, dim):
    terms = []
    for combo in itertools.combinations_with_replacement(range(len(sets)), k):
        S = sets[combo[0]]
        for i in combo[1:]:
            S = S & sets[i]
        terms.append(packset.integer_hull(S))
    return intersect_all(terms)


def test_criterion_6_directions_vs_aggregations(positive_closures):
    failures = []
    rng = random.Random(6)
    for t, (P, A1, _) in enumerate(positive_closures):
        V1 = h_to_v(A1.hull.to_h())
        for _ in range(100):
            f = tuple(F(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(P.dim))
            beta = sup_oracle(P, f).beta
            S = packset.from_knapsack(KnapsackIneq(f, beta))
            if not poly_contains(packset.integer_hull(S), V1):
                failures.append(f"instance {t}: A_1 not inside conv(S_f) for f={f}")
                break
            g = tuple(F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(P.dim))
            cert = farkas_decompose(g, P)
            recon = tuple(
                sum((cert.lam[i] * P.A[i][j] for i in range(P.m)), F(0)) - cert.gamma[j] for j in range(P.dim)
            )
            lam_b = sum((l * b for l, b in zip(cert.lam, P.b)), F(0))
            top = lp_max(g, P.to_h()).value
            if recon != g or lam_b > top or min(cert.lam + cert.gamma) < 0:
                failures.append(f"instance {t}: Farkas reconstruction failed for f={g}")
                break
    report(6, "valid directions vs aggregations on 100 instances x 100 f", failures)


def test_criterion_7_infinite_closure():
    failures = []
    for t, P in enumerate(bounded_suite()):
        if not poly_equal(closure_inf(P).hull.to_h(), polyhedron_integer_hull(P).to_h()):
            failures.append(f"single piece {t}: closure_inf differs from P_I")
    rng = random.Random(7)
    for t in range(50):
        n = rng.randint(1, 3)
        pieces = [oracles.random_packing_polyhedron(rng, n, rng.randint(1, 3)) for _ in range(2)]
        joint = [max(oracles.bounding_box(p)[j] for p in pieces) for j in range(n)]
        pts = [z for z in oracles.box_points(joint) if oracles.in_conv_union(pieces, z)]
        got = closure_inf(DownsetModel(n, tuple(pieces))).hull.to_h()
        if not oracles.hull_matches_points(got, pts):
            failures.append(f"union {t}: closure_inf differs from brute-force hull")
    report(7, "infinite closure on 200 single pieces and 50 unions", failures)


def test_criterion_8_degenerate_inputs():
    failures = []
    rng = random.Random(8)
    for t in range(40):
        n = rng.randint(2, 3)
        zero = set(rng.sample(range(n), rng.randint(1, n - 1)))
        m = rng.randint(1, 3)
        A = tuple(tuple(0 if j in zero else rng.randint(1, 3) for j in range(n)) for _ in range(m))
        P = PackingPolyhedron(A, tuple(rng.randint(0, 4) for _ in range(m)), n)
        predicted = {tuple(F(1 if i == j else 0) for i in range(n)) for j in zero}
        for name, hull in (("closure_k", closure_k(P, 1).hull), ("integer hull", polyhedron_integer_hull(P))):
            rays = set(h_to_v(hull.to_h()).rays)
            if rays != predicted:
                failures.append(f"instance {t}: {name} rays {rays} != {predicted}")
    empty_set = packset.from_knapsack(KnapsackIneq((1, 1), -1))
    if not empty_set.is_empty or family_closure([empty_set, PackingSet(2, ((1, 1),))], 1, 2) is not None:
        failures.append("empty knapsack does not give an empty closure")
    res = closure_k(PackingPolyhedron(((2, 1), (1, 2)), (2, 2)), 1)
    flagged = serialize.closure_to_json(type(res)(None, res.exact, res.certificate, res.family, empty=True))
    if flagged["hull"] is not None or flagged["empty"] is not True:
        failures.append("empty closure is not flagged in JSON")
    hits = 0
    for t in range(100):
        n = rng.randint(1, 3)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, 3))]
        p = HPolyhedron.from_rows(rows, [rng.randint(0, 4) for _ in rows], dim=n)
        try:
            normalize_downset(p)
        except NotADownset as exc:
            hits += 1
            x, y = exc.x, exc.y
            if not (p.contains(x) and not p.contains(y) and all(0 <= b <= a for a, b in zip(x, y))):
                failures.append(f"witness replay failed on {rows}: x={x}, y={y}")
    report(8, "zero columns, empty knapsacks, non-downset witnesses", failures, f"{hits} witnesses replayed")


def test_criterion_9_determinism(tmp_path):
    inst = tmp_path / "p.json"
    inst.write_text(json.dumps({"dim": 2, "pieces": [{"A": [["2", "1"], ["1", "2"]], "b": ["2", "2"]}]}))
    union = tmp_path / "u.json"
    union.write_text(json.dumps({"dim": 2, "pieces": [
        {"A": [["1", "0"], ["0", "1"]], "b": ["1", "2"]},
        {"A": [["1", "0"], ["0", "1"]], "b": ["2", "1"]},
    ]}))
    sets = tmp_path / "s.json"
    rng = random.Random(9)
    sets.write_text(json.dumps([packset.to_json(oracles.random_packing_set(rng, 3)) for _ in range(200)]))
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"dim": 2, "generators": [[2, 0], [0, 2], [1, 1]]}))
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"dim": 2, "generators": [["inf", 1], [2, 2]]}))
    result = tmp_path / "r.json"
    cli_args = [
        ["hull", inst],
        ["closure", inst, "--k", "2", "--verify", "40", "--seed", "3"],
        ["closure", union, "--k", "1", "--verify", "40", "--seed", "3"],
        ["closure", inst, "--k", "1", "--out", result],
        ["closure-inf", union],
        ["blocks", b],
        ["wqo-basis", sets],
        ["verify", result, inst, "--samples", "40", "--seed", "5"],
    ]
    for op, operands in [
        ("canonicalize", [a]), ("contains", [a, "[1,1]"]), ("subset", [a, b]), ("union", [a, b]),
        ("intersect", [a, b]), ("slice", [b, "1"]), ("blocks", [b]),
        ("from-knapsack", ['{"c":["1","1/2"],"d":"3"}']), ("integer-hull", [b]),
    ]:
        cli_args.append(["packset", op, *operands])
    failures = []
    for argv in cli_args:
        outs = []
        for hashseed in ("1", "2"):
            env = dict(os.environ, PYTHONHASHSEED=hashseed)
            proc = subprocess.run(
                [sys.executable, "-m", "packclosure", *map(str, argv)], capture_output=True, env=env
            )
            data = proc.stdout if "--out" not in argv else result.read_bytes()
            outs.append((proc.returncode, data))
        if outs[0] != outs[1] or outs[0][0] != 0:
            failures.append(f"{' '.join(map(str, argv[:2]))}: reruns differ or failed")
    report(9, f"byte-identical reruns of {len(cli_args)} commands", failures)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
