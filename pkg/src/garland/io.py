"""File formats and deterministic JSON output."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .complex import GroupAction, SimplicialComplex, WeightedGraph, build_complex
from .exceptions import InputError

FLOAT_DIGITS = 17


def dumps(obj, indent: int = 2) -> str:
    """JSON with keys in insertion order and floats at 17 significant digits.

    Non-finite floats become ``null``.  Output is byte-identical for equal input.
    """
    out: list[str] = []
    _emit(obj, out, 0, indent)
    return "".join(out) + "\n"


def _emit(obj, out, level, indent):
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append("null" if obj is None else ("true" if obj else "false"))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating, Fraction)):
        x = float(obj)
        out.append(_float(x))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + json.dumps(str(k)) + ": ")
            _emit(v, out, level + 1, indent)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        if all(isinstance(x, (int, float, np.number, bool, str)) or x is None for x in seq):
            out.append("[")
            for i, v in enumerate(seq):
                if i:
                    out.append(", ")
                _emit(v, out, level + 1, indent)
            out.append("]")
            return
        out.append("[")
        for i, v in enumerate(seq):
            out.append(("," if i else "") + pad)
            _emit(v, out, level + 1, indent)
        out.append(end + "]")
    elif hasattr(obj, "to_json"):
        _emit(obj.to_json(), out, level, indent)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, f".{FLOAT_DIGITS}g")
    return text if any(c in text for c in ".en") else text + ".0"


def read_json(path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def complex_from_json(data) -> SimplicialComplex:
    """``{"top_simplices": [[...], ...]}`` or a bare list of top simplices."""
    tops = data.get("top_simplices") if isinstance(data, dict) else data
    if not isinstance(tops, list):
        raise InputError("complex file needs a 'top_simplices' list")
    return build_complex([_hashable(s) for s in tops])


def _hashable(simplex):
    if not isinstance(simplex, list):
        raise InputError(f"simplex {simplex!r} is not a list")
    return tuple(tuple(v) if isinstance(v, list) else v for v in simplex)


def complex_to_json(cx: SimplicialComplex) -> dict:
    return {"top_simplices": [sorted(s, key=repr) for s in
                              sorted((list(x) for x in cx.labelled_top()), key=repr)]}


def action_from_json(cx: SimplicialComplex, data) -> GroupAction:
    """Generators as label-to-label maps, or as lists giving the image of each
    vertex in sorted label order."""
    gens = data.get("generators") if isinstance(data, dict) else data
    if not isinstance(gens, list):
        raise InputError("action file needs a 'generators' list")
    index = {str(l): i for i, l in enumerate(cx.labels)}
    index.update({l: i for i, l in enumerate(cx.labels) if isinstance(l, (int, str))})
    perms = []
    for g in gens:
        if isinstance(g, dict):
            perm = list(range(cx.n_vertices))
            for src, dst in g.items():
                try:
                    perm[index[src]] = index[dst if not isinstance(dst, list) else tuple(dst)]
                except KeyError as e:
                    raise InputError(f"unknown vertex {e.args[0]!r} in generator") from e
            perms.append(perm)
        elif isinstance(g, list):
            try:
                perms.append([index[x] for x in g])
            except (KeyError, TypeError) as e:
                raise InputError(f"generator {g} does not list vertex labels") from e
        else:
            raise InputError(f"cannot read generator {g!r}")
    return GroupAction(cx, perms)


def graph_from_json(data) -> WeightedGraph:
    """``{"edges": [[u, v, w], ...]}``; weights may be ``"p/q"`` strings."""
    edges = data.get("edges") if isinstance(data, dict) else data
    if not isinstance(edges, list):
        raise InputError("graph file needs an 'edges' list")
    out = []
    for e in edges:
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise InputError(f"edge {e!r} must be [u, v] or [u, v, w]")
        w = Fraction(str(e[2])) if len(e) == 3 else 1
        out.append((e[0], e[1], w))
    return WeightedGraph.from_edges(out, vertices=data.get("vertices") if isinstance(data, dict)
                                    else None)
