"""Command-line front end.

Exit codes: 0 success, 2 malformed input or dimension mismatch,
3 input is not a downset, 4 budget exceeded, 5 verification failed.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from typing import List, Optional

from . import packset, serialize
from .closure import (
    closure,
    closure_inf,
    closure_k,
    verify_closure,
)
from .downset import DownsetModel, PackingPolyhedron, normalize_downset, polyhedron_integer_hull
from .errors import BudgetExceeded, InstanceError, NotADownset
from .kernel.polyhedra import HPolyhedron, h_to_v, poly_contains
from .limits import override_limits
from .wqo import BasisState, basis_insert

EXIT_OK, EXIT_INPUT, EXIT_NOT_DOWNSET, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4, 5

PACKSET_OPS = (
    "canonicalize", "contains", "subset", "union", "intersect",
    "slice", "blocks", "from-knapsack", "integer-hull",
)


class _Inputs:
    """Reads operands and accumulates a digest over their raw bytes."""

    def __init__(self):
        self._hash = hashlib.sha256()

    def read(self, spec: str, inline_ok: bool = False):
        if spec == "-":
            data = sys.stdin.buffer.read()
        elif inline_ok and spec.lstrip()[:1] in ("{", "["):
            data = spec.encode("utf-8")
        else:
            try:
                with open(spec, "rb") as fh:
                    data = fh.read()
            except OSError as exc:
                raise InstanceError(f"{spec}: {exc.strerror}") from None
        self._hash.update(len(data).to_bytes(8, "big"))
        self._hash.update(data)
        try:
            return json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise InstanceError(f"{spec}: invalid JSON: {exc}") from None

    @property
    def digest(self) -> str:
        return "sha256:" + self._hash.hexdigest()


def _parse_box(text: Optional[str]):
    if text is None:
        return None
    try:
        box = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InstanceError(f"--box: expected comma-separated naturals, got {text!r}") from None
    if any(v < 0 for v in box):
        raise InstanceError("--box: entries must be nonnegative")
    return box


def _load_model(obj) -> DownsetModel:
    """Instance pieces; rows with negative data are normalized first."""
    dim, raw = serialize.raw_pieces_from_json(obj)
    pieces = []
    for A, b in raw:
        if all(a >= 0 for row in A for a in row) and all(v >= 0 for v in b):
            pieces.append(PackingPolyhedron(A, b, dim))
        else:
            pieces.append(normalize_downset(HPolyhedron.from_rows(A, b, True, dim=dim)))
    return DownsetModel(dim, tuple(pieces))


def _single(model: DownsetModel) -> PackingPolyhedron:
    if len(model.pieces) != 1:
        raise InstanceError(f"$.pieces: expected a single piece, got {len(model.pieces)}")
    return model.pieces[0]


def cmd_hull(args, inputs: _Inputs) -> dict:
    P = _single(_load_model(inputs.read(args.instance)))
    return {"hull": serialize.polyhedron_to_json(polyhedron_integer_hull(P))}


def cmd_closure(args, inputs: _Inputs):
    model = _load_model(inputs.read(args.instance))
    if args.k < 1:
        raise InstanceError("--k must be at least 1")
    box = _parse_box(args.box)
    if box is not None and len(box) != model.dim:
        raise InstanceError(f"--box: expected {model.dim} entries, got {len(box)}")
    result = closure(model, args.k, box)
    out = {"closure": serialize.closure_to_json(result)}
    ok = True
    if args.verify is not None:
        report = verify_closure(result, model, samples=args.verify, seed=args.seed)
        out["verification"] = report.to_json()
        ok = report.passed
        if args.k >= 2 and len(model.pieces) == 1:
            prev = closure_k(model.pieces[0], args.k - 1, box)
            contained = (
                result.hull is None
                or prev.hull is not None
                and poly_contains(prev.hull.to_h(), h_to_v(result.hull.to_h()))
            )
            out["monotonicity"] = {"previous_k": args.k - 1, "contained_in_previous": contained}
            ok = ok and contained
    return out, ok


def cmd_closure_inf(args, inputs: _Inputs) -> dict:
    model = _load_model(inputs.read(args.instance))
    return {"closure": serialize.closure_to_json(closure_inf(model))}


def cmd_verify(args, inputs: _Inputs):
    obj = inputs.read(args.result)
    # accept a full report written by `closure --out` as well as a bare result
    if isinstance(obj, dict) and isinstance(obj.get("results"), dict) and "closure" in obj["results"]:
        obj = obj["results"]["closure"]
    result = serialize.closure_from_json(obj)
    model = _load_model(inputs.read(args.instance))
    if result.hull is not None and result.hull.dim != model.dim:
        raise InstanceError("result and instance dimensions differ")
    report = verify_closure(result, model, samples=args.samples, seed=args.seed)
    return {"verification": report.to_json()}, report.passed


def cmd_blocks(args, inputs: _Inputs) -> dict:
    s = serialize.packset_from_json(inputs.read(args.set, inline_ok=True))
    return {"blocks": packset.blocks(s)}


def cmd_packset(args, inputs: _Inputs) -> dict:
    op, operands = args.op, args.operands
    arity = {"union": 2, "intersect": 2, "subset": 2, "contains": 2, "slice": 2}.get(op, 1)
    if len(operands) != arity:
        raise InstanceError(f"packset {op}: expected {arity} operand(s), got {len(operands)}")
    if op == "from-knapsack":
        k = serialize.knapsack_from_json(inputs.read(operands[0], inline_ok=True))
        return {"set": packset.to_json(packset.from_knapsack(k))}
    if op == "canonicalize":
        obj = inputs.read(operands[0], inline_ok=True)
        return {"set": packset.to_json(serialize.packset_from_json(obj))}
    s = serialize.packset_from_json(inputs.read(operands[0], inline_ok=True), operands[0])
    if op == "blocks":
        return {"blocks": packset.blocks(s)}
    if op == "integer-hull":
        if s.is_empty:
            raise InstanceError("integer hull of the empty set")
        return {"hull": serialize.polyhedron_to_json(PackingPolyhedron.from_h(packset.integer_hull(s)))}
    if op == "slice":
        try:
            level = int(operands[1])
        except ValueError:
            raise InstanceError(f"slice level must be a natural, got {operands[1]!r}") from None
        if s.dim < 2 or level < 0:
            raise InstanceError("slice needs dimension >= 2 and a natural level")
        return {"set": packset.to_json(packset.slice(s, level))}
    if op == "contains":
        point = inputs.read(operands[1], inline_ok=True)
        if not isinstance(point, list) or len(point) != s.dim or not all(isinstance(v, int) for v in point):
            raise InstanceError(f"point must be a list of {s.dim} integers")
        return {"result": packset.contains_point(s, point)}
    t = serialize.packset_from_json(inputs.read(operands[1], inline_ok=True), operands[1])
    if s.dim != t.dim:
        raise InstanceError(f"dimension mismatch: {s.dim} vs {t.dim}")
    if op == "subset":
        return {"result": packset.subset(s, t)}
    if op == "union":
        return {"set": packset.to_json(packset.union(s, t))}
    return {"set": packset.to_json(packset.intersect(s, t))}


def cmd_wqo_basis(args, inputs: _Inputs) -> dict:
    obj = inputs.read(args.stream)
    if isinstance(obj, dict):
        obj = obj.get("sets")
    if not isinstance(obj, list) or not obj:
        raise InstanceError("$: expected a nonempty list of packing sets")
    sets = [serialize.packset_from_json(item, f"$[{i}]") for i, item in enumerate(obj)]
    dim = sets[0].dim
    for i, s in enumerate(sets):
        if s.dim != dim:
            raise InstanceError(f"$[{i}]: dimension {s.dim}, expected {dim}")
    state = BasisState(leq=packset.subset)
    absorbed = [basis_insert(state, s) for s in sets]
    replay = all(any(packset.subset(b, s) for b in state.basis) for s in sets)
    return {
        "basis": [packset.to_json(b) for b in sorted(state.basis, key=lambda s: s.generators)],
        "basis_size": len(state.basis),
        "last_change_index": state.last_change_index,
        "stream_length": len(sets),
        "absorbed": absorbed,
        "replay_all_absorbed": replay,
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled verification")
    common.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical reruns)")

    parser = argparse.ArgumentParser(prog="packclosure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hull", parents=[common], help="integer hull of a single packing polyhedron")
    p.add_argument("instance")

    p = sub.add_parser("closure", parents=[common], help="k-aggregation closure")
    p.add_argument("instance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--box", help="truncation box, comma-separated naturals")
    p.add_argument("--verify", type=int, metavar="N", help="run verification with N samples")

    p = sub.add_parser("closure-inf", parents=[common], help="infinite aggregation closure")
    p.add_argument("instance")

    p = sub.add_parser("packset", parents=[common], help="packing-set operations")
    p.add_argument("op", choices=PACKSET_OPS)
    p.add_argument("operands", nargs="+")

    p = sub.add_parser("blocks", parents=[common], help="block decomposition of a packing set")
    p.add_argument("set")

    p = sub.add_parser("wqo-basis", parents=[common], help="finite basis of a stream of packing sets")
    p.add_argument("stream")

    p = sub.add_parser("verify", parents=[common], help="verify a stored closure result")
    p.add_argument("result")
    p.add_argument("instance")
    p.add_argument("--samples", type=int, default=100)
    return parser


_COMMANDS = {
    "hull": cmd_hull,
    "closure": cmd_closure,
    "closure-inf": cmd_closure_inf,
    "packset": cmd_packset,
    "blocks": cmd_blocks,
    "wqo-basis": cmd_wqo_basis,
    "verify": cmd_verify,
}


def _echo(args) -> dict:
    skip = {"out", "timing"}
    return {"name": args.command, "options": {k: v for k, v in sorted(vars(args).items()) if k not in skip | {"command"}}}


def _budget_overrides() -> dict:
    raw = os.environ.get("PACKSET_BUDGET")
    if not raw:
        return {}
    try:
        value = int(raw)
    except ValueError:
        raise InstanceError(f"PACKSET_BUDGET must be an integer, got {raw!r}") from None
    return {"point_budget": value, "cell_budget": value}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    inputs = _Inputs()
    start = time.perf_counter()
    try:
        with override_limits(**_budget_overrides()):
            out = _COMMANDS[args.command](args, inputs)
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotADownset as exc:
        witness = ""
        if exc.x is not None:
            witness = f" (x={[str(a) for a in exc.x]}, y={[str(a) for a in exc.y]})"
        print(f"error: not a downset: {exc}{witness}", file=sys.stderr)
        return EXIT_NOT_DOWNSET
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    ok = True
    if isinstance(out, tuple):
        out, ok = out
    report = {
        "command": _echo(args),
        "input_digest": inputs.digest,
        "results": out,
        "timing": {"seconds": round(time.perf_counter() - start, 6)} if args.timing else None,
        "warnings": list(out.get("closure", {}).get("warnings", [])),
    }
    text = serialize.dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
