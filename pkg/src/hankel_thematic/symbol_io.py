"""JSON encoding of symbols and factor bundles.

Symbol::

    {"rows": m, "cols": n, "kind": "laurent" | "rational",
     "terms": [{"power": k, "matrix": [[[re, im], ...], ...]}, ...],
     "denominator": [{"power": k, "value": [re, im]}, ...]}

Bundle::

    {"m": m, "n": n, "left": [block, ...], "right": [block, ...],
     "diag": [{"t": t, "u": symbol}, ...], "residual": symbol | null}

with ``block = {"offset": j, "v": symbol, "theta": symbol, "side": "left" | "right"}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .circle_fn import CircleFunction
from .errors import ParseError, ThematicError
from .thematic import FactorBundle, LiftedBlock, ThematicBlock


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return [[complex_to_json(x) for x in row] for row in a]


def _complex(obj, where: str) -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(x, (int, float)) for x in obj)):
        raise ParseError(f"{where}: expected [re, im], got {obj!r}")
    return complex(obj[0], obj[1])


def _int(obj, where: str, minimum: int | None = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ParseError(f"{where}: expected an integer, got {obj!r}")
    if minimum is not None and obj < minimum:
        raise ParseError(f"{where}: must be >= {minimum}")
    return obj


def symbol_to_dict(f: CircleFunction) -> dict:
    out = {
        "rows": f.rows,
        "cols": f.cols,
        "kind": f.kind,
        "terms": [{"power": k, "matrix": matrix_to_json(c)} for k, c in sorted(f.terms.items())],
    }
    if not f.is_laurent:
        out["denominator"] = [{"power": k, "value": complex_to_json(v)} for k, v in sorted(f.denominator.items())]
    return out


def symbol_from_dict(d: dict, where: str = "symbol") -> CircleFunction:
    if not isinstance(d, dict):
        raise ParseError(f"{where}: expected an object")
    for key in ("rows", "cols", "kind", "terms"):
        if key not in d:
            raise ParseError(f"{where}: missing {key!r}")
    rows = _int(d["rows"], f"{where}.rows", 0)
    cols = _int(d["cols"], f"{where}.cols", 0)
    kind = d["kind"]
    if kind not in ("laurent", "rational"):
        raise ParseError(f"{where}.kind: expected 'laurent' or 'rational', got {kind!r}")
    if not isinstance(d["terms"], list):
        raise ParseError(f"{where}.terms: expected a list")
    terms = {}
    for i, term in enumerate(d["terms"]):
        w = f"{where}.terms[{i}]"
        if not isinstance(term, dict) or "power" not in term or "matrix" not in term:
            raise ParseError(f"{w}: expected {{'power', 'matrix'}}")
        k = _int(term["power"], f"{w}.power")
        if k in terms:
            raise ParseError(f"{w}: duplicate power {k}")
        mat = term["matrix"]
        if not isinstance(mat, list) or len(mat) != rows or any(not isinstance(r, list) or len(r) != cols for r in mat):
            raise ParseError(f"{w}.matrix: expected {rows}x{cols} entries")
        terms[k] = np.array([[_complex(x, f"{w}.matrix") for x in row] for row in mat], dtype=complex).reshape(rows, cols)
    den = None
    if kind == "rational":
        if not isinstance(d.get("denominator"), list) or not d["denominator"]:
            raise ParseError(f"{where}.denominator: required non-empty list for rational symbols")
        den = {}
        for i, term in enumerate(d["denominator"]):
            w = f"{where}.denominator[{i}]"
            if not isinstance(term, dict) or "power" not in term or "value" not in term:
                raise ParseError(f"{w}: expected {{'power', 'value'}}")
            k = _int(term["power"], f"{w}.power")
            if k in den:
                raise ParseError(f"{w}: duplicate power {k}")
            den[k] = _complex(term["value"], f"{w}.value")
    elif "denominator" in d and d["denominator"] not in (None, []):
        raise ParseError(f"{where}: laurent symbols take no denominator")
    try:
        return CircleFunction(terms, (rows, cols), den)
    except ThematicError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def block_to_dict(b: LiftedBlock) -> dict:
    return {"offset": b.offset, "v": symbol_to_dict(b.inner.v), "theta": symbol_to_dict(b.inner.theta),
            "side": b.inner.side}


def block_from_dict(d: dict, where: str) -> LiftedBlock:
    if not isinstance(d, dict):
        raise ParseError(f"{where}: expected an object")
    for key in ("offset", "v", "theta", "side"):
        if key not in d:
            raise ParseError(f"{where}: missing {key!r}")
    if d["side"] not in ("left", "right"):
        raise ParseError(f"{where}.side: expected 'left' or 'right'")
    try:
        inner = ThematicBlock(symbol_from_dict(d["v"], f"{where}.v"), symbol_from_dict(d["theta"], f"{where}.theta"),
                              d["side"])
    except ParseError:
        raise
    except (ThematicError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from exc
    return LiftedBlock(_int(d["offset"], f"{where}.offset", 0), inner)


def bundle_to_dict(b: FactorBundle) -> dict:
    return {
        "m": b.m,
        "n": b.n,
        "left": [block_to_dict(x) for x in b.left],
        "right": [block_to_dict(x) for x in b.right],
        "diag": [{"t": t, "u": symbol_to_dict(u)} for t, u in b.diag],
        "residual": None if b.residual is None else symbol_to_dict(b.residual),
    }


def bundle_from_dict(d: dict) -> FactorBundle:
    if not isinstance(d, dict):
        raise ParseError("bundle: expected an object")
    for key in ("m", "n", "left", "diag", "right"):
        if key not in d:
            raise ParseError(f"bundle: missing {key!r}")
    for key in ("left", "right", "diag"):
        if not isinstance(d[key], list):
            raise ParseError(f"bundle.{key}: expected a list")
    left = [block_from_dict(x, f"bundle.left[{i}]") for i, x in enumerate(d["left"])]
    right = [block_from_dict(x, f"bundle.right[{i}]") for i, x in enumerate(d["right"])]
    diag = []
    for i, x in enumerate(d["diag"]):
        if not isinstance(x, dict) or "t" not in x or "u" not in x:
            raise ParseError(f"bundle.diag[{i}]: expected {{'t', 'u'}}")
        if isinstance(x["t"], bool) or not isinstance(x["t"], (int, float)):
            raise ParseError(f"bundle.diag[{i}].t: expected a real number")
        diag.append((float(x["t"]), symbol_from_dict(x["u"], f"bundle.diag[{i}].u")))
    residual = d.get("residual")
    residual = None if residual is None else symbol_from_dict(residual, "bundle.residual")
    return FactorBundle(_int(d["m"], "bundle.m", 1), _int(d["n"], "bundle.n", 1), left, right, diag, residual)


def _read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_symbol(path) -> CircleFunction:
    return symbol_from_dict(_read_json(path))


def load_bundle(path) -> FactorBundle:
    return bundle_from_dict(_read_json(path))


def save_symbol(f: CircleFunction, path) -> None:
    Path(path).write_text(json.dumps(symbol_to_dict(f), indent=1), encoding="utf-8")


def save_bundle(b: FactorBundle, path) -> None:
    Path(path).write_text(json.dumps(bundle_to_dict(b), indent=1), encoding="utf-8")
