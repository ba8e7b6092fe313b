"""JSON documents for every structure kind.

A document is a JSON object with a ``kind`` tag (``algebra``, ``groupoid``,
``internal``, ``xmod``, ``action`` or ``morphism``), ``"version": 1``, optional
``name`` and ``comment`` strings and a kind-specific payload. Compound kinds
embed their parts as payloads; actions and morphisms embed tagged
sub-documents (``{"kind": ..., ...}``) because the part's kind varies.

:func:`serialize` writes keys in a fixed order with no insignificant
whitespace, so ``serialize(parse(text))`` is a canonical form.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import DerivedActionData, OpAlgebra
from .errors import (
    IdentitySyntaxError,
    MalformedTable,
    ParseError,
    SchemaError,
    SignatureMismatch,
    UnknownOperationName,
)
from .groupoid import FinGroupoid, GpdAction, GpdMorphism
from .internal import InternalAction, InternalGroupoid, InternalMorphism
from .xmod import CrossedModule, XModMorphism

VERSION = 1
KINDS = ("algebra", "groupoid", "internal", "xmod", "action", "morphism")


@dataclass
class StructureDocument:
    kind: str
    value: object
    name: str | None = None
    comment: str | None = None


def kind_of(value) -> str:
    if isinstance(value, OpAlgebra):
        return "algebra"
    if isinstance(value, FinGroupoid):
        return "groupoid"
    if isinstance(value, InternalGroupoid):
        return "internal"
    if isinstance(value, CrossedModule):
        return "xmod"
    if isinstance(value, (GpdAction, InternalAction)):
        return "action"
    if isinstance(value, (GpdMorphism, InternalMorphism, XModMorphism)):
        return "morphism"
    raise TypeError(f"cannot serialize {type(value).__name__}")


# ---------------------------------------------------------------- encoding


def _ints(arr):
    return [int(v) for v in np.asarray(arr).ravel()]


def _rows(arr):
    return [[int(v) for v in row] for row in np.asarray(arr)]


def _algebra_payload(alg: OpAlgebra) -> dict:
    return {
        "add": _rows(alg.add),
        "neg": _ints(alg.neg),
        "binary_ops": {k: _rows(v) for k, v in alg.binary_ops.items()},
        "unary_ops": {k: _ints(v) for k, v in alg.unary_ops.items()},
        "opposites": dict(alg.opposites),
        "identities": list(alg.identities),
    }


def _default_labels(labels, n):
    return list(labels) == [str(i) for i in range(n)]


def _groupoid_payload(G: FinGroupoid) -> dict:
    out = {
        "objects": G.num_objects,
        "src": _ints(G.src),
        "tgt": _ints(G.tgt),
        "identity": _ints(G.identity),
        "comp": [[a, b, c] for (a, b), c in sorted(G.comp.items())],
    }
    if not _default_labels(G.object_labels, G.num_objects):
        out["object_labels"] = list(G.object_labels)
    if not _default_labels(G.arrow_labels, G.num_arrows):
        out["arrow_labels"] = list(G.arrow_labels)
    return out


def _internal_payload(G: InternalGroupoid) -> dict:
    return {
        "groupoid": _groupoid_payload(G.gpd),
        "arrow_algebra": _algebra_payload(G.arrow_alg),
        "object_algebra": _algebra_payload(G.object_alg),
    }


def _xmod_payload(X: CrossedModule) -> dict:
    return {
        "A": _algebra_payload(X.A),
        "B": _algebra_payload(X.B),
        "alpha": _ints(X.alpha),
        "dot": _rows(X.dot),
        "star_actions": {k: _rows(v) for k, v in X.star_actions.items()},
    }


def _tagged(value) -> dict:
    return {"kind": kind_of(value), **_payload(value)}


def _payload(value) -> dict:
    if isinstance(value, OpAlgebra):
        return _algebra_payload(value)
    if isinstance(value, FinGroupoid):
        return _groupoid_payload(value)
    if isinstance(value, InternalGroupoid):
        return _internal_payload(value)
    if isinstance(value, CrossedModule):
        return _xmod_payload(value)
    if isinstance(value, InternalAction):
        return {
            "base": _tagged(value.G),
            "X": _algebra_payload(value.X),
            "theta": _ints(value.theta),
            "phi": _rows(value.phi),
        }
    if isinstance(value, GpdAction):
        return {
            "base": _tagged(value.groupoid),
            "size": value.size,
            "theta": _ints(value.theta),
            "phi": _rows(value.phi),
        }
    if isinstance(value, XModMorphism):
        return {
            "source": _tagged(value.source),
            "target": _tagged(value.target),
            "f1": _ints(value.f1),
            "f2": _ints(value.f2),
        }
    if isinstance(value, (GpdMorphism, InternalMorphism)):
        return {
            "source": _tagged(value.source),
            "target": _tagged(value.target),
            "arrow_map": _ints(value.arrow_map),
            "object_map": _ints(value.object_map),
        }
    raise TypeError(f"cannot serialize {type(value).__name__}")


def to_dict(doc: StructureDocument) -> dict:
    out = {"kind": doc.kind, "version": VERSION}
    if doc.name is not None:
        out["name"] = doc.name
    if doc.comment is not None:
        out["comment"] = doc.comment
    out.update(_payload(doc.value))
    return out


def serialize(doc) -> str:
    """Canonical text: fixed key order, no insignificant whitespace."""
    if not isinstance(doc, StructureDocument):
        doc = StructureDocument(kind_of(doc), doc)
    return json.dumps(to_dict(doc), ensure_ascii=False, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------- decoding


@contextmanager
def _field(path: str):
    """Re-raise construction errors as :class:`SchemaError` naming ``path``."""
    try:
        yield
    except SchemaError:
        raise
    except (MalformedTable, SignatureMismatch, UnknownOperationName, IdentitySyntaxError) as exc:
        msg = str(exc)
        head, sep, rest = msg.partition(": ")
        if sep and head and " " not in head:
            field = f"{path}.{head}" if path else head
            raise SchemaError(field, rest) from None
        raise SchemaError(path or "document", msg) from None


def _join(path, key):
    return f"{path}.{key}" if path else key


def _get(obj: dict, key: str, path: str, kind=None):
    if key not in obj:
        raise SchemaError(_join(path, key), "missing field")
    value = obj[key]
    if kind is not None and not _is(value, kind):
        raise SchemaError(_join(path, key), f"expected {kind}")
    return value


def _is(value, kind) -> bool:
    if kind == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == "object":
        return isinstance(value, dict)
    if kind == "string":
        return isinstance(value, str)
    if kind == "list":
        return isinstance(value, list)
    if kind == "int_list":
        return isinstance(value, list) and all(_is(v, "int") for v in value)
    if kind == "int_rows":
        return isinstance(value, list) and all(_is(r, "int_list") for r in value)
    raise ValueError(kind)


def _only(obj: dict, allowed, path):
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise SchemaError(_join(path, extra[0]), "unknown field")


def _square(rows, n, path):
    if len(rows) != n or any(len(r) != n for r in rows):
        raise SchemaError(path, f"expected a {n}x{n} table")


def _algebra(obj, path, name=None) -> OpAlgebra:
    if not isinstance(obj, dict):
        raise SchemaError(path or "document", "expected an object")
    _only(obj, ("kind", "version", "name", "comment", "add", "neg", "binary_ops",
                "unary_ops", "opposites", "identities"), path)
    add = _get(obj, "add", path, "int_rows")
    n = len(add)
    if n == 0:
        raise SchemaError(_join(path, "add"), "empty table")
    _square(add, n, _join(path, "add"))
    neg = _get(obj, "neg", path, "int_list")
    if len(neg) != n:
        raise SchemaError(_join(path, "neg"), f"expected {n} entries")
    ops = _get(obj, "binary_ops", path, "object") if "binary_ops" in obj else {}
    for k, t in ops.items():
        p = _join(path, f"binary_ops.{k}")
        if not _is(t, "int_rows"):
            raise SchemaError(p, "expected an integer table")
        _square(t, n, p)
    unary = _get(obj, "unary_ops", path, "object") if "unary_ops" in obj else {}
    for k, t in unary.items():
        p = _join(path, f"unary_ops.{k}")
        if not _is(t, "int_list") or len(t) != n:
            raise SchemaError(p, f"expected {n} integers")
    opp = _get(obj, "opposites", path, "object") if "opposites" in obj else {}
    if not all(isinstance(v, str) for v in opp.values()):
        raise SchemaError(_join(path, "opposites"), "expected operation names")
    idents = _get(obj, "identities", path, "list") if "identities" in obj else []
    if not all(isinstance(v, str) for v in idents):
        raise SchemaError(_join(path, "identities"), "expected equation strings")
    with _field(path):
        return OpAlgebra(add, neg, ops, unary, opposites=opp, identities=tuple(idents), name=name)


def _groupoid(obj, path) -> FinGroupoid:
    if not isinstance(obj, dict):
        raise SchemaError(path or "document", "expected an object")
    _only(obj, ("kind", "version", "name", "comment", "objects", "src", "tgt", "identity",
                "comp", "object_labels", "arrow_labels"), path)
    k = _get(obj, "objects", path, "int")
    src = _get(obj, "src", path, "int_list")
    tgt = _get(obj, "tgt", path, "int_list")
    ident = _get(obj, "identity", path, "int_list")
    comp = _get(obj, "comp", path, "int_rows")
    if len(tgt) != len(src):
        raise SchemaError(_join(path, "tgt"), "length differs from src")
    if len(ident) != k:
        raise SchemaError(_join(path, "identity"), f"expected {k} entries")
    labels = {}
    for key in ("object_labels", "arrow_labels"):
        if key in obj:
            v = obj[key]
            if not isinstance(v, list) or not all(isinstance(s, str) for s in v):
                raise SchemaError(_join(path, key), "expected strings")
            labels[key] = v
    with _field(path):
        return FinGroupoid(k, src, tgt, ident, comp, **labels)


def _internal(obj, path) -> InternalGroupoid:
    _only(obj, ("kind", "version", "name", "comment", "groupoid", "arrow_algebra",
                "object_algebra"), path)
    G = _groupoid(_get(obj, "groupoid", path, "object"), _join(path, "groupoid"))
    A = _algebra(_get(obj, "arrow_algebra", path, "object"), _join(path, "arrow_algebra"))
    O = _algebra(_get(obj, "object_algebra", path, "object"), _join(path, "object_algebra"))
    with _field(path):
        return InternalGroupoid(G, A, O)


def _xmod(obj, path) -> CrossedModule:
    _only(obj, ("kind", "version", "name", "comment", "A", "B", "alpha", "dot",
                "star_actions"), path)
    A = _algebra(_get(obj, "A", path, "object"), _join(path, "A"))
    B = _algebra(_get(obj, "B", path, "object"), _join(path, "B"))
    alpha = _get(obj, "alpha", path, "int_list")
    dot = _get(obj, "dot", path, "int_rows")
    stars = _get(obj, "star_actions", path, "object")
    for k, t in stars.items():
        if not _is(t, "int_rows"):
            raise SchemaError(_join(path, f"star_actions.{k}"), "expected an integer table")
    with _field(path):
        act = DerivedActionData(B, A, dot, stars)
    with _field(path):
        return CrossedModule(A, B, alpha, act)


def _sub(obj, path, allowed):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    kind = obj.get("kind")
    if kind not in allowed:
        raise SchemaError(_join(path, "kind"), f"expected one of {', '.join(allowed)}")
    return _READERS[kind](obj, path)


def _action(obj, path):
    _only(obj, ("kind", "version", "name", "comment", "base", "X", "size", "theta", "phi"), path)
    base = _sub(_get(obj, "base", path, "object"), _join(path, "base"), ("groupoid", "internal"))
    theta = _get(obj, "theta", path, "int_list")
    phi = _get(obj, "phi", path, "int_rows")
    if isinstance(base, InternalGroupoid):
        X = _algebra(_get(obj, "X", path, "object"), _join(path, "X"))
        with _field(path):
            return InternalAction(base, X, theta, phi)
    size = _get(obj, "size", path, "int")
    with _field(path):
        return GpdAction(base, size, theta, phi)


def _morphism(obj, path):
    _only(obj, ("kind", "version", "name", "comment", "source", "target", "arrow_map",
                "object_map", "f1", "f2"), path)
    kinds = ("groupoid", "internal", "xmod")
    S = _sub(_get(obj, "source", path, "object"), _join(path, "source"), kinds)
    T = _sub(_get(obj, "target", path, "object"), _join(path, "target"), kinds)
    if type(S) is not type(T):
        raise SchemaError(_join(path, "target"), "source and target kinds differ")
    if isinstance(S, CrossedModule):
        f1 = _get(obj, "f1", path, "int_list")
        f2 = _get(obj, "f2", path, "int_list")
        with _field(path):
            return XModMorphism(S, T, f1, f2)
    am = _get(obj, "arrow_map", path, "int_list")
    om = _get(obj, "object_map", path, "int_list")
    with _field(path):
        if isinstance(S, InternalGroupoid):
            return InternalMorphism(S, T, am, om)
        return GpdMorphism(S, T, am, om)


_READERS = {
    "algebra": lambda obj, path: _algebra(obj, path),
    "groupoid": _groupoid,
    "internal": _internal,
    "xmod": _xmod,
    "action": _action,
    "morphism": _morphism,
}


def from_dict(obj) -> StructureDocument:
    if not isinstance(obj, dict):
        raise SchemaError("document", "expected a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise SchemaError("kind", f"expected one of {', '.join(KINDS)}")
    version = obj.get("version")
    if version != VERSION:
        raise SchemaError("version", f"expected {VERSION}")
    for key in ("name", "comment"):
        if key in obj and not isinstance(obj[key], str):
            raise SchemaError(key, "expected a string")
    value = _READERS[kind](obj, "")
    return StructureDocument(kind, value, obj.get("name"), obj.get("comment"))


def parse(text) -> StructureDocument:
    """Decode and validate the shape of a document (axioms are not checked)."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"invalid UTF-8: {exc.reason}", 1, exc.start + 1) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_dict(obj)


def load(path) -> StructureDocument:
    return parse(Path(path).read_bytes())


def dump(doc, path) -> None:
    Path(path).write_text(serialize(doc), encoding="utf-8")
