"""JSON encodings. Rationals travel as strings (``"3"``, ``"-2/5"``)."""
from __future__ import annotations

import json
from typing import Any

from . import packset
from .closure import ClosureResult, Representative, RepresentativeFamily
from .downset import DownsetModel, PackingPolyhedron
from .errors import InstanceError
from .kernel.polyhedra import HPolyhedron
from .kernel.rational import parse_rational
from .packset import KnapsackIneq, PackingSet


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _rat_list(values, where):
    if not isinstance(values, list):
        raise InstanceError(f"{where}: expected a list")
    return tuple(parse_rational(v, f"{where}[{i}]") for i, v in enumerate(values))


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f"{where}: expected an integer")
    return value


def polyhedron_from_json(obj, where: str = "$") -> PackingPolyhedron:
    if not isinstance(obj, dict):
        raise InstanceError(f"{where}: expected an object with A and b")
    if "A" not in obj or "b" not in obj:
        raise InstanceError(f"{where}: missing A or b")
    A_raw = obj["A"]
    if not isinstance(A_raw, list):
        raise InstanceError(f"{where}.A: expected a list of rows")
    A = tuple(_rat_list(row, f"{where}.A[{i}]") for i, row in enumerate(A_raw))
    b = _rat_list(obj["b"], f"{where}.b")
    dim = obj.get("dim", len(A[0]) if A else 0)
    dim = _int(dim, f"{where}.dim")
    try:
        return PackingPolyhedron(A, b, dim)
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from None


def raw_pieces_from_json(obj):
    """``(dim, [(A, b), ...])`` without the packing-form checks, so that
    callers can try to normalize rows with negative entries."""
    if not isinstance(obj, dict):
        raise InstanceError("$: expected an instance object")
    if "pieces" not in obj:
        if "A" in obj:
            obj = {"dim": obj.get("dim"), "pieces": [obj]}
        else:
            raise InstanceError('$: missing "pieces"')
    pieces = obj["pieces"]
    if not isinstance(pieces, list) or not pieces:
        raise InstanceError("$.pieces: expected a nonempty list")
    out = []
    for k, piece in enumerate(pieces):
        where = f"$.pieces[{k}]"
        if not isinstance(piece, dict) or "A" not in piece or "b" not in piece:
            raise InstanceError(f"{where}: expected an object with A and b")
        if not isinstance(piece["A"], list):
            raise InstanceError(f"{where}.A: expected a list of rows")
        A = tuple(_rat_list(row, f"{where}.A[{i}]") for i, row in enumerate(piece["A"]))
        b = _rat_list(piece["b"], f"{where}.b")
        if len(A) != len(b):
            raise InstanceError(f"{where}: A has {len(A)} rows but b has {len(b)} entries")
        out.append((A, b))
    dim = obj.get("dim")
    if dim is None:
        dim = next((len(A[0]) for A, _ in out if A), None)
        if dim is None:
            raise InstanceError("$.dim: required when no piece has rows")
    dim = _int(dim, "$.dim")
    if dim < 1:
        raise InstanceError("$.dim: must be positive")
    for k, (A, _) in enumerate(out):
        for i, row in enumerate(A):
            if len(row) != dim:
                raise InstanceError(f"$.pieces[{k}].A[{i}]: expected {dim} entries, got {len(row)}")
    return dim, out


def model_from_json(obj) -> DownsetModel:
    dim, raw = raw_pieces_from_json(obj)
    pieces = []
    for k, (A, b) in enumerate(raw):
        try:
            pieces.append(PackingPolyhedron(A, b, dim))
        except ValueError as exc:
            raise InstanceError(f"$.pieces[{k}]: {exc}") from None
    return DownsetModel(dim, tuple(pieces))


def model_to_json(D: DownsetModel) -> dict:
    return {"dim": D.dim, "pieces": [{"A": [[str(a) for a in row] for row in p.A], "b": [str(v) for v in p.b]} for p in D.pieces]}


def polyhedron_to_json(P: PackingPolyhedron) -> dict:
    return {"dim": P.dim, "A": [[str(a) for a in row] for row in P.A], "b": [str(v) for v in P.b]}


def hpolyhedron_to_json(p: HPolyhedron) -> dict:
    return {
        "dim": p.dim,
        "nonneg": p.nonneg,
        "halfspaces": [{"normal": [str(a) for a in h.normal], "rhs": str(h.rhs)} for h in p.halfspaces],
    }


def packset_to_json(s: PackingSet) -> dict:
    return packset.to_json(s)


def packset_from_json(obj, where: str = "$") -> PackingSet:
    try:
        return packset.from_json(obj)
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from None


def knapsack_from_json(obj, where: str = "$") -> KnapsackIneq:
    if not isinstance(obj, dict) or "c" not in obj or "d" not in obj:
        raise InstanceError(f'{where}: expected an object with "c" and "d"')
    c = _rat_list(obj["c"], f"{where}.c")
    d = parse_rational(obj["d"], f"{where}.d")
    try:
        return KnapsackIneq(c, d)
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from None


def closure_to_json(r: ClosureResult) -> dict:
    return {
        "hull": None if r.hull is None else polyhedron_to_json(r.hull),
        "exact": r.exact,
        "certificate": r.certificate,
        "empty": r.empty,
        "family": [
            {"multiplier": [str(v) for v in rep.multiplier], "set": packset.to_json(rep.set)}
            for rep in r.family.reps
        ],
        "family_minimal": r.family.minimal,
        "truncation_box": None if r.truncation_box is None else list(r.truncation_box),
        "warnings": list(r.warnings),
    }


def closure_from_json(obj) -> ClosureResult:
    if not isinstance(obj, dict):
        raise InstanceError("$: expected a closure result object")
    for key in ("hull", "exact", "certificate", "family"):
        if key not in obj:
            raise InstanceError(f'$: missing "{key}"')
    hull = None if obj["hull"] is None else polyhedron_from_json(obj["hull"], "$.hull")
    reps = []
    for i, item in enumerate(obj["family"]):
        where = f"$.family[{i}]"
        if not isinstance(item, dict):
            raise InstanceError(f"{where}: expected an object")
        reps.append(Representative(_rat_list(item.get("multiplier"), f"{where}.multiplier"),
                                   packset_from_json(item.get("set"), f"{where}.set")))
    box = obj.get("truncation_box")
    return ClosureResult(
        hull,
        bool(obj["exact"]),
        str(obj["certificate"]),
        RepresentativeFamily(tuple(reps), bool(obj.get("family_minimal", True))),
        None if box is None else tuple(_int(v, "$.truncation_box") for v in box),
        bool(obj.get("empty", hull is None)),
        tuple(obj.get("warnings", ())),
    )
