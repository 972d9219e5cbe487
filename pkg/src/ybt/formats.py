"""JSON (de)serialization for operators, pairs, bases and component maps.

The operator file format is bit-exact for rationals: entries are strings
"p/q" or "p".  Complex entries are two-element arrays [re, im] of decimal
numbers.  Rows are row-major over the lexicographic multi-index basis
(i1..in), each index in 1..N, leftmost index slowest.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import FormatError
from .tensor_core import COMPLEX64, RATIONAL, Operator, Scalar


def parse_rational(raw, where: str = "value") -> Fraction:
    """Parse "p/q" or "p" (also plain ints) into an exact Fraction."""
    if isinstance(raw, bool):
        raise FormatError("expected a rational, got a boolean", where)
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational literal {raw!r}: {exc}", where) from None
    raise FormatError(f"expected a rational string, got {type(raw).__name__}", where)


def format_rational(value: Fraction) -> str:
    return str(value)


def scalar_to_obj(value: Scalar, backend: str):
    if backend == RATIONAL:
        return str(value)
    return [value.real, value.imag]


def scalar_from_obj(raw, backend: str, where: str) -> Scalar:
    if backend == RATIONAL:
        if not isinstance(raw, str):
            raise FormatError(
                f"rational entries must be strings, got {type(raw).__name__}", where
            )
        return parse_rational(raw, where)
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in raw)
    ):
        raise FormatError("complex entries must be [re, im] number pairs", where)
    return complex(raw[0], raw[1])


def operator_to_obj(op: Operator) -> dict:
    return {
        "scalar": op.backend,
        "site_dim": op.site_dim,
        "legs": op.legs,
        "rows": [[scalar_to_obj(v, op.backend) for v in row] for row in op.rows],
    }


def operator_from_obj(obj, where: str = "operator") -> Operator:
    if not isinstance(obj, dict):
        raise FormatError(f"expected an object, got {type(obj).__name__}", where)
    missing = {"scalar", "site_dim", "legs", "rows"} - obj.keys()
    if missing:
        raise FormatError(f"missing keys {sorted(missing)}", where)
    backend = obj["scalar"]
    if backend not in (RATIONAL, COMPLEX64):
        raise FormatError(f"unknown scalar backend {backend!r}", f"{where}.scalar")
    site_dim, legs = obj["site_dim"], obj["legs"]
    if not isinstance(site_dim, int) or site_dim < 1:
        raise FormatError("site_dim must be a positive integer", f"{where}.site_dim")
    if not isinstance(legs, int) or legs < 0:
        raise FormatError("legs must be a non-negative integer", f"{where}.legs")
    side = site_dim**legs
    rows = obj["rows"]
    if not isinstance(rows, list) or len(rows) != side:
        raise FormatError(f"rows must be a list of {side} rows", f"{where}.rows")
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != side:
            raise FormatError(f"row must hold {side} entries", f"{where}.rows[{i}]")
        parsed.append(
            tuple(
                scalar_from_obj(v, backend, f"{where}.rows[{i}][{j}]")
                for j, v in enumerate(row)
            )
        )
    return Operator(site_dim, legs, backend, tuple(parsed))


def twist_pair_to_obj(pair) -> dict:
    return {"f": operator_to_obj(pair.f), "g": operator_to_obj(pair.g)}


def twist_pair_from_obj(obj, where: str = "pair"):
    from .twist_engine import TwistPair  # local import avoids a cycle

    if not isinstance(obj, dict) or {"f", "g"} - obj.keys():
        raise FormatError('expected an object with keys "f" and "g"', where)
    return TwistPair(
        operator_from_obj(obj["f"], f"{where}.f"),
        operator_from_obj(obj["g"], f"{where}.g"),
    )


def subspace_to_obj(basis) -> dict:
    return {
        "dimension": basis.dimension,
        "basis": [operator_to_obj(op) for op in basis.basis],
    }


def subspace_from_obj(obj, where: str = "subspace"):
    from .subspace_solver import SubspaceBasis

    if not isinstance(obj, dict) or {"dimension", "basis"} - obj.keys():
        raise FormatError('expected an object with "dimension" and "basis"', where)
    ops = tuple(
        operator_from_obj(o, f"{where}.basis[{i}]") for i, o in enumerate(obj["basis"])
    )
    if not ops:
        raise FormatError("basis must be non-empty to fix the shape", where)
    if obj["dimension"] != len(ops):
        raise FormatError(
            f'dimension {obj["dimension"]} does not match basis size {len(ops)}', where
        )
    first = ops[0]
    return SubspaceBasis(first.site_dim, first.legs, first.backend, ops)


def components_to_obj(components: dict) -> dict:
    entries = [
        {"m": m, "n": n, "operator": operator_to_obj(op)}
        for (m, n), op in sorted(components.items())
    ]
    return {"components": entries}


def components_from_obj(obj, where: str = "components") -> dict:
    if not isinstance(obj, dict) or "components" not in obj:
        raise FormatError('expected an object with a "components" list', where)
    out = {}
    for i, item in enumerate(obj["components"]):
        here = f"{where}.components[{i}]"
        if not isinstance(item, dict) or {"m", "n", "operator"} - item.keys():
            raise FormatError('expected keys "m", "n", "operator"', here)
        m, n = item["m"], item["n"]
        if not isinstance(m, int) or not isinstance(n, int) or m < 0 or n < 0:
            raise FormatError("m and n must be non-negative integers", here)
        out[(m, n)] = operator_from_obj(item["operator"], f"{here}.operator")
    return out


def certificate_to_obj(coefficients) -> dict:
    return {"coefficients": [str(c) for c in coefficients]}


def canonical_dumps(obj) -> str:
    """Deterministic, compact JSON used for machine-readable reports."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def pretty_dumps(obj) -> str:
    """Deterministic, human-readable JSON used for files on disk."""
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def load_json(path) -> object:
    """Read a JSON file, reporting parse failures with line/column."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}"
        ) from None


def load_operator(path) -> Operator:
    return operator_from_obj(load_json(path), str(path))


def save_operator(op: Operator, path):
    Path(path).write_text(pretty_dumps(operator_to_obj(op)))
