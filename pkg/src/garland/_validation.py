"""Input coercion shared by the estimator wrappers."""

from __future__ import annotations

from .bounds import BanachClassSpec, CurveModulus, parse_class
from .complex import SimplicialComplex, WeightedGraph, build_complex
from .exceptions import InputError


def check_complex(X) -> SimplicialComplex:
    if isinstance(X, SimplicialComplex):
        return X
    if isinstance(X, dict) and "top_simplices" in X:
        X = X["top_simplices"]
    try:
        return build_complex([tuple(s) for s in X])
    except TypeError as e:
        raise InputError(f"cannot read a complex from {type(X).__name__}") from e


def check_graph_or_complex(X):
    if isinstance(X, WeightedGraph):
        return X
    if isinstance(X, dict) and "edges" in X:
        return WeightedGraph.from_edges([tuple(e) for e in X["edges"]])
    return check_complex(X)


def check_class(banach_class) -> BanachClassSpec:
    if isinstance(banach_class, BanachClassSpec):
        return banach_class
    if isinstance(banach_class, CurveModulus):
        return BanachClassSpec(banach_class)
    if isinstance(banach_class, str):
        return parse_class(banach_class)
    raise InputError(f"cannot read a Banach class from {banach_class!r}")


def check_degree(k, cx: SimplicialComplex) -> int:
    if isinstance(k, bool) or int(k) != k:
        raise InputError(f"degree must be an integer, got {k!r}")
    k = int(k)
    if not 1 <= k <= cx.dim - 1:
        from .exceptions import DegreeOutOfRange

        raise DegreeOutOfRange(f"k must satisfy 1 <= k <= {cx.dim - 1}, got {k}")
    return k
