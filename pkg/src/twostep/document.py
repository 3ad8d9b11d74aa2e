"""JSON documents for triples: ``{"forms": [...], "m": 1, "n": 2}``.

Canonical emission sorts keys and uses no whitespace, so ``emit_triple``
of a parsed canonical document reproduces its bytes.
"""

from __future__ import annotations

import json

from .group import DimensionMismatch, NotSkew, SkewTriple


class MalformedDocument(ValueError):
    pass


_KEYS = {"m", "n", "forms"}


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_triple(text: str | bytes) -> SkewTriple:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"document is not UTF-8: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise MalformedDocument("top level must be a JSON object")
    if set(data) != _KEYS:
        extra, missing = sorted(set(data) - _KEYS), sorted(_KEYS - set(data))
        raise MalformedDocument(f"expected keys m, n, forms (missing {missing}, unexpected {extra})")
    m, n, forms = data["m"], data["n"], data["forms"]
    for name, v in (("m", m), ("n", n)):
        if not _is_int(v) or v < 0:
            raise MalformedDocument(f"field {name!r} must be a non-negative integer, got {v!r}")
    if not isinstance(forms, list):
        raise MalformedDocument("field 'forms' must be a list")
    if len(forms) != m:
        raise DimensionMismatch(f"field 'forms' has {len(forms)} entries, m = {m}")
    for k, f in enumerate(forms):
        if not isinstance(f, list) or len(f) != n:
            raise DimensionMismatch(f"forms[{k}] must be a list of {n} rows")
        for i, row in enumerate(f):
            if not isinstance(row, list) or len(row) != n:
                raise DimensionMismatch(f"forms[{k}][{i}] must be a list of {n} integers")
            for j, x in enumerate(row):
                if not _is_int(x):
                    raise MalformedDocument(f"forms[{k}][{i}][{j}] must be an integer, got {x!r}")
        for i in range(n):
            for j in range(i, n):
                if f[i][j] != -f[j][i]:
                    raise NotSkew(
                        f"forms[{k}][{i}][{j}] = {f[i][j]} and forms[{k}][{j}][{i}] = {f[j][i]} "
                        "are not negatives of each other"
                    )
    return SkewTriple(m, n, forms)


def triple_to_dict(t: SkewTriple) -> dict:
    return {"m": t.m, "n": t.n, "forms": [[list(row) for row in f] for f in t.forms]}


def emit_triple(t: SkewTriple) -> str:
    return json.dumps(triple_to_dict(t), sort_keys=True, separators=(",", ":"))
