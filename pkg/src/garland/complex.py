"""Finite pure simplicial complexes with the canonical weight, links, and
finite simplicial group actions.

Vertices are stored as dense integer ids ``0..N-1``; the labels supplied by
the caller are kept in :attr:`SimplicialComplex.labels`.  Weights are exact
Python integers: the canonical weight of a ``k``-simplex is
``(n - k)! * #{top simplices containing it}``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exceptions import (
    DimensionError,
    DimensionZero,
    DuplicateVertexInSimplex,
    EmptyGraph,
    EmptyInput,
    GroupTooLarge,
    InputError,
    MixedDimension,
    NotASimplex,
    NotAnAutomorphism,
)

MAX_GROUP_ORDER = 10**6


def _faces_of(simplex: tuple, size: int):
    return itertools.combinations(simplex, size)


class SimplicialComplex:
    """A finite pure ``n``-dimensional simplicial complex.

    Use :func:`build_complex` to construct one.  Instances are immutable.
    """

    def __init__(self, top: Sequence[tuple[int, ...]], labels: Sequence):
        top = tuple(sorted(set(top)))
        self.dim = len(top[0]) - 1
        self.top = top
        self.labels = tuple(labels)
        counts: dict[tuple[int, ...], int] = defaultdict(int)
        for sigma in top:
            for size in range(0, self.dim + 2):
                for face in _faces_of(sigma, size):
                    counts[face] += 1
        self._count = dict(counts)
        self._faces = {k: tuple(sorted(f for f in counts if len(f) == k + 1))
                       for k in range(-1, self.dim + 1)}
        self._vertex_tops: dict[int, list[tuple[int, ...]]] = defaultdict(list)
        for sigma in top:
            for v in sigma:
                self._vertex_tops[v].append(sigma)

    # -- queries ---------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self._faces[0])

    def faces(self, k: int) -> tuple[tuple[int, ...], ...]:
        """The ``k``-simplices as sorted vertex tuples (``k = -1`` gives ``((),)``)."""
        if not -1 <= k <= self.dim:
            return ()
        return self._faces[k]

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self._count

    def count_tops(self, simplex) -> int:
        return self._count.get(tuple(sorted(simplex)), 0)

    def weight(self, simplex) -> int:
        key = tuple(sorted(simplex))
        if key not in self._count:
            raise NotASimplex(f"{key} is not a simplex")
        k = len(key) - 1
        return math.factorial(self.dim - k) * self._count[key]

    @property
    def weights(self) -> dict[tuple[int, ...], int]:
        return {f: self.weight(f) for f in self._count}

    @property
    def m_empty(self) -> int:
        return self.weight(())

    def tops_containing(self, simplex) -> list[tuple[int, ...]]:
        key = tuple(sorted(simplex))
        if not key:
            return list(self.top)
        return [s for s in self._vertex_tops.get(key[0], ()) if set(key) <= set(s)]

    def labelled_top(self) -> set[frozenset]:
        return {frozenset(self.labels[v] for v in s) for s in self.top}

    def fingerprint(self) -> str:
        import hashlib

        text = ";".join(",".join(map(str, s)) for s in self.top)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.top == other.top

    def __hash__(self):
        return hash(self.top)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, vertices={self.n_vertices}, top={len(self.top)})"


def build_complex(top_simplices: Iterable[Iterable]) -> SimplicialComplex:
    """Generate the downward closure of ``top_simplices`` with its canonical weight.

    All top simplices must have the same number of vertices; labels are
    relabelled densely in sorted order.
    """
    tops = [list(s) for s in top_simplices]
    if not tops or any(len(s) == 0 for s in tops):
        raise EmptyInput("need at least one nonempty top simplex")
    for s in tops:
        if len(set(s)) != len(s):
            raise DuplicateVertexInSimplex(f"repeated vertex in {s}")
    if len({len(s) for s in tops}) != 1:
        raise MixedDimension("top simplices have unequal sizes")
    labels = sorted({v for s in tops for v in s})
    dense = {lab: i for i, lab in enumerate(labels)}
    return SimplicialComplex([tuple(sorted(dense[v] for v in s)) for s in tops], labels)


def _check_simplex(cx: SimplicialComplex, tau) -> tuple[int, ...]:
    key = tuple(sorted(tau))
    if key not in cx:
        raise NotASimplex(f"{key} is not a simplex of the complex")
    return key


def link(cx: SimplicialComplex, tau) -> SimplicialComplex:
    """The link of ``tau`` as a weighted complex.

    Vertices are re-densified; ``labels`` carries the original labels of
    ``cx`` so links of links compare against links of unions.
    """
    key = _check_simplex(cx, tau)
    if len(key) - 1 >= cx.dim:
        raise DimensionError(f"link of a top simplex is empty (dim {len(key) - 1} = n)")
    tset = set(key)
    link_tops = [tuple(v for v in s if v not in tset) for s in cx.tops_containing(key)]
    verts = sorted({v for s in link_tops for v in s})
    dense = {v: i for i, v in enumerate(verts)}
    out = SimplicialComplex([tuple(dense[v] for v in s) for s in link_tops],
                            [cx.labels[v] for v in verts])
    for eta in out._count:
        parent = key + tuple(verts[i] for i in eta)
        if out.weight(eta) != cx.weight(parent):
            raise AssertionError("link weight differs from m(tau | eta)")
    return out


@dataclass(frozen=True)
class WeightedGraph:
    """A finite graph with positive edge weights and no isolated vertices."""

    vertices: tuple
    edges: dict  # (u, v) with u before v in ``vertices`` -> Fraction

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence], vertices: Sequence | None = None):
        """Build from ``(u, v, weight)`` triples; parallel edges are merged by summing."""
        merged: dict = {}
        seen = []
        for e in edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1
            else:
                u, v, w = e
            if u == v:
                raise InputError(f"self-loop at {u}")
            w = Fraction(w)
            if w <= 0:
                raise InputError(f"nonpositive weight on edge {(u, v)}")
            seen += [u, v]
            key = (v, u) if (v, u) in merged else (u, v)
            merged[key] = merged.get(key, 0) + w
        if not merged:
            raise EmptyGraph("graph has no edges")
        if vertices is None:
            try:
                vertices = sorted(set(seen))
            except TypeError:
                vertices = list(dict.fromkeys(seen))
        vertices = tuple(vertices)
        touched = set(seen)
        isolated = [v for v in vertices if v not in touched]
        if isolated:
            raise InputError(f"isolated vertices {isolated}")
        pos = {v: i for i, v in enumerate(vertices)}
        canon = {}
        for (u, v), w in merged.items():
            if u not in pos or v not in pos:
                raise InputError(f"edge {(u, v)} uses an unknown vertex")
            canon[(u, v) if pos[u] < pos[v] else (v, u)] = w
        return cls(vertices, canon)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v) -> int:
        return self._index[v]

    def vertex_weight(self, v) -> Fraction:
        return sum((w for e, w in self.edges.items() if v in e), Fraction(0))

    @property
    def vertex_weights(self) -> dict:
        out = {v: Fraction(0) for v in self.vertices}
        for (u, v), w in self.edges.items():
            out[u] += w
            out[v] += w
        return out

    @property
    def m_empty(self) -> Fraction:
        return sum(self.vertex_weights.values(), Fraction(0))

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def is_connected(self) -> bool:
        adj = self.adjacency()
        start = self.vertices[0]
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    def is_bipartite(self) -> bool:
        adj = self.adjacency()
        color: dict = {}
        for s in self.vertices:
            if s in color:
                continue
            color[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in color:
                        color[w] = 1 - color[u]
                        queue.append(w)
                    elif color[w] == color[u]:
                        return False
        return True

    def to_json(self) -> dict:
        return {"edges": [[u, v, _num(w)] for (u, v), w in self.edges.items()]}


def _num(w: Fraction):
    return int(w) if w.denominator == 1 else float(w)


def skeleton_graph(cx: SimplicialComplex) -> WeightedGraph:
    """The 1-skeleton of ``cx`` weighted by ``m`` on edges."""
    if cx.dim < 1:
        raise DimensionZero("complex has dimension 0; no 1-skeleton")
    return WeightedGraph.from_edges(((u, v, cx.weight((u, v))) for u, v in cx.faces(1)),
                                    vertices=range(cx.n_vertices))


def link_graph(cx: SimplicialComplex, tau) -> WeightedGraph:
    """1-skeleton of the link of ``tau`` on the parent's vertex ids.

    Edge ``{u, v}`` carries ``m(tau | {u, v})``.
    """
    key = _check_simplex(cx, tau)
    if len(key) - 1 > cx.dim - 2:
        raise DimensionError(f"link of {key} has dimension < 1")
    tset = set(key)
    edges = {}
    for s in cx.tops_containing(key):
        rest = [v for v in s if v not in tset]
        for u, v in itertools.combinations(rest, 2):
            if (u, v) not in edges:
                edges[(u, v)] = cx.weight(key + (u, v))
    verts = sorted({v for e in edges for v in e})
    return WeightedGraph.from_edges(((u, v, w) for (u, v), w in edges.items()), vertices=verts)


# -- group actions -----------------------------------------------------------

def _perm_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``range(len(perm))`` in one-line notation."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def reorder_sign(source: Sequence, target: Sequence) -> int:
    """Sign of the permutation taking the tuple ``source`` to ``target``."""
    pos = {v: i for i, v in enumerate(source)}
    return _perm_sign([pos[v] for v in target])


class GroupAction:
    """A finite group acting on the vertices of a complex by simplicial maps.

    Group elements are vertex permutations in one-line notation over the
    dense ids; element ``0`` is the identity.  The closure of the generators
    is enumerated up front.
    """

    def __init__(self, cx: SimplicialComplex, generators: Sequence[Sequence[int]] = (),
                 max_order: int = MAX_GROUP_ORDER):
        self.complex = cx
        nv = cx.n_vertices
        gens = []
        tops = set(cx.top)
        for g in generators:
            g = tuple(int(x) for x in g)
            if sorted(g) != list(range(nv)):
                raise NotAnAutomorphism(f"generator {g} is not a permutation of {nv} vertices")
            for s in cx.top:
                if tuple(sorted(g[v] for v in s)) not in tops:
                    raise NotAnAutomorphism(f"generator {g} does not map {s} to a top simplex")
            gens.append(g)
        self.generators = tuple(gens)
        identity = tuple(range(nv))
        elements = [identity]
        index = {identity: 0}
        queue = deque([identity])
        while queue:
            h = queue.popleft()
            for g in gens:
                gh = tuple(g[h[v]] for v in range(nv))
                if gh not in index:
                    if len(elements) >= max_order:
                        raise GroupTooLarge(f"group closure exceeds {max_order} elements")
                    index[gh] = len(elements)
                    elements.append(gh)
                    queue.append(gh)
        self.elements = elements
        self._index = index
        self._inverse: list[int] | None = None

    @classmethod
    def trivial(cls, cx: SimplicialComplex) -> "GroupAction":
        return cls(cx, ())

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm) -> int:
        return self._index[tuple(perm)]

    def compose(self, i: int, j: int) -> int:
        """Index of ``g_i o g_j`` (apply ``g_j`` first)."""
        gi, gj = self.elements[i], self.elements[j]
        return self._index[tuple(gi[v] for v in gj)]

    def inverse(self, i: int) -> int:
        if self._inverse is None:
            inv = []
            for g in self.elements:
                h = [0] * len(g)
                for v, w in enumerate(g):
                    h[w] = v
                inv.append(self._index[tuple(h)])
            self._inverse = inv
        return self._inverse[i]

    def act(self, i: int, simplex: Sequence[int]) -> tuple[int, ...]:
        g = self.elements[i]
        return tuple(g[v] for v in simplex)

    def generator_words(self) -> list[tuple[int, int]]:
        """For each element (except identity): ``(generator index, predecessor)`` with
        ``g = gen o predecessor``; used to extend generator images to homomorphisms."""
        nv = self.complex.n_vertices
        words = [(-1, -1)] * self.order
        seen = {0}
        queue = deque([0])
        while queue:
            h = queue.popleft()
            hp = self.elements[h]
            for gi, g in enumerate(self.generators):
                idx = self._index[tuple(g[hp[v]] for v in range(nv))]
                if idx not in seen:
                    seen.add(idx)
                    words[idx] = (gi, h)
                    queue.append(idx)
        return words


@dataclass
class OrbitData:
    """Orbit representatives and stabilizer data in degree ``k``.

    ``primary`` holds one sorted vertex tuple per orbit of the group on
    unordered ``k``-simplices (the alternation/equivariance transversal);
    ``representatives`` holds one ordered tuple per group orbit on ordered
    ``k``-simplices.  Stabilizer lists are element indices of the action.
    """

    k: int
    primary: list
    representatives: list
    plus: dict = field(default_factory=dict)
    minus: dict = field(default_factory=dict)
    pointwise: dict = field(default_factory=dict)
    _locator: dict = field(default_factory=dict, repr=False)
    _primary_index: dict = field(default_factory=dict, repr=False)

    def locate(self, sigma: Sequence[int]) -> tuple[int, int, int]:
        """``(primary index, g, sign)`` with ``phi(sigma) = sign * pi(g) phi(primary)``."""
        key = tuple(sorted(sigma))
        rep_idx, g, image = self._locator[key]
        return rep_idx, g, reorder_sign(image, tuple(sigma))

    def setwise_order(self, rep) -> int:
        return len(self.plus[rep]) + len(self.minus[rep])


def orbit_data(action: GroupAction, k: int) -> OrbitData:
    cx = action.complex
    if not 0 <= k <= cx.dim:
        raise DimensionError(f"degree {k} outside [0, {cx.dim}]")
    data = OrbitData(k=k, primary=[], representatives=[])
    for s in cx.faces(k):
        if s in data._locator:
            continue
        r_idx = len(data.primary)
        data.primary.append(s)
        data._primary_index[s] = r_idx
        plus, minus, pointwise = [], [], 0
        orbit_size = 0
        for gi in range(action.order):
            image = action.act(gi, s)
            t = tuple(sorted(image))
            if t not in data._locator:
                data._locator[t] = (r_idx, gi, image)
                orbit_size += 1
            if t == s:
                (plus if reorder_sign(s, image) > 0 else minus).append(gi)
                if image == s:
                    pointwise += 1
        if orbit_size * (len(plus) + len(minus)) != action.order:
            raise AssertionError("orbit-stabilizer count failed")
        # ordered representatives: one per coset of the induced permutation group
        covered = set()
        for ordering in itertools.permutations(s):
            if ordering in covered:
                continue
            data.representatives.append(ordering)
            for gi in plus + minus:
                covered.add(action.act(gi, ordering))
            data.plus[ordering] = plus
            data.minus[ordering] = minus
            data.pointwise[ordering] = pointwise
        data.plus[s] = plus
        data.minus[s] = minus
        data.pointwise[s] = pointwise
    return data
