import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complete_skeleton, octahedron, sphere
from garland import (
    DescentInterval,
    GroupAction,
    WeightedGraph,
    descent_map,
    expander_profile,
    min_link_profiles,
    spectrum,
)
from garland.exceptions import Disconnected, DisconnectedLink, EmptyGraph, OutOfRange
from garland.spectral import jacobi_eigh, projection_matrix, random_walk_matrix
from oracles import isclose_all, random_walk_eigenvalues


@st.composite
def weighted_graphs(draw, max_v=6):
    v = draw(st.integers(2, max_v))
    pairs = list(itertools.combinations(range(v), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, unique=True))
    ws = draw(st.lists(st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9),
                       min_size=len(chosen), max_size=len(chosen)))
    return WeightedGraph.from_edges([(a, b, w) for (a, b), w in zip(chosen, ws)])


def complete(n):
    return WeightedGraph.from_edges(itertools.combinations(range(n), 2))


def cycle(n):
    return WeightedGraph.from_edges([(i, (i + 1) % n) for i in range(n)])


class TestOperators:
    def test_rows_sum_to_one(self):
        A = random_walk_matrix(complete(5))
        assert np.allclose(A.sum(axis=1), 1)

    def test_projection_idempotent(self):
        g = WeightedGraph.from_edges([(0, 1, 2), (1, 2, 1), (0, 2, 3)])
        M = projection_matrix(g)
        A = random_walk_matrix(g)
        assert np.allclose(M @ M, M) and np.allclose(A @ M, M)

    @given(weighted_graphs())
    def test_walk_self_adjoint(self, g):
        A = random_walk_matrix(g)
        m = np.array([float(g.vertex_weights[v]) for v in g.vertices])
        D = np.diag(m)
        assert np.allclose(D @ A, (D @ A).T)


class TestJacobi:
    def test_random_symmetric(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((40, 40))
        B = X + X.T
        w, V = jacobi_eigh(B)
        assert np.allclose(w, np.sort(np.linalg.eigvalsh(B))[::-1], atol=1e-10)
        assert np.allclose(V.T @ V, np.eye(40), atol=1e-10)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))

    @given(weighted_graphs())
    def test_matches_exact_oracle(self, g):
        ours = spectrum(g).eigenvalues
        ref = random_walk_eigenvalues(g.vertices, g.edges)
        assert isclose_all(list(ours), ref, 1e-9)

    @given(weighted_graphs())
    def test_flags_match_combinatorics(self, g):
        assert spectrum(g).spectral_flags_agree


class TestSpectrum:
    def test_triangle(self):
        p = spectrum(complete(3))
        assert np.allclose(p.eigenvalues, [1, -0.5, -0.5])
        assert p.lambda_one == pytest.approx(-0.5) and not p.bipartite

    def test_four_cycle(self):
        p = spectrum(cycle(4))
        assert np.allclose(p.eigenvalues, [1, 0, 0, -1]) and p.bipartite

    def test_disconnected(self):
        p = spectrum(WeightedGraph.from_edges([(0, 1), (2, 3)]))
        assert p.trivial_multiplicity == 2 and not p.connected

    def test_empty(self):
        with pytest.raises(EmptyGraph):
            spectrum(WeightedGraph((), {}))

    def test_lapack_agrees(self):
        g = WeightedGraph.from_edges([(0, 1, 3), (1, 2, 1), (2, 3, 2), (3, 0, 1), (0, 2, 1)])
        assert np.allclose(spectrum(g).eigenvalues, spectrum(g, solver="lapack").eigenvalues)


class TestExpansion:
    def test_complete(self):
        p = expander_profile(complete(6))
        assert p.one_sided == pytest.approx(-0.2) and p.two_sided == pytest.approx(0.2)

    def test_bipartite_two_sided_one(self):
        assert expander_profile(cycle(4)).two_sided == pytest.approx(1.0)

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            expander_profile(WeightedGraph.from_edges([(0, 1), (2, 3)]))

    @given(weighted_graphs())
    def test_one_sided_below_two_sided(self, g):
        if not g.is_connected():
            return
        p = expander_profile(g)
        assert p.one_sided <= p.two_sided + 1e-12 and 0 <= p.two_sided <= 1 + 1e-12


class TestDescent:
    def test_forward_inverse_roundtrip(self):
        iv = DescentInterval(-0.3, 0.2, 3)
        back = descent_map(descent_map(iv, "forward"), "inverse")
        assert back.lo == pytest.approx(-0.3) and back.hi == pytest.approx(0.2)

    def test_l_two_identity(self):
        out = descent_map(DescentInterval(-1, 0.5, 2))
        assert out.lo == pytest.approx(-0.5) and out.hi == pytest.approx(1.0)

    def test_range_checked(self):
        with pytest.raises(OutOfRange):
            descent_map(DescentInterval(-0.1, 0.6, 2))
        with pytest.raises(OutOfRange):
            DescentInterval(0, 0.1, 1)

    @given(st.floats(-1, 0), st.floats(0, 1), st.integers(2, 6))
    def test_inverse_then_forward(self, lo, hi, l):
        mapped = descent_map(DescentInterval(lo, hi, l), "inverse")
        again = descent_map(mapped, "forward")
        assert again.hi == pytest.approx(hi, abs=1e-9)
        assert again.lo >= lo - 1e-9
        if lo > -1 / l:
            assert again.lo == pytest.approx(lo, abs=1e-9)

    def test_sphere_skeleton_inside_interval(self):
        cx = sphere(3)  # vertex links are 2-spheres, edge links triangles
        links = min_link_profiles(cx, None, 1, "two")
        lo = min(0.0, min(p.lambda_min for _, p in links.links))
        hi = max(0.0, max(p.one_sided for _, p in links.links))
        iv = descent_map(DescentInterval(lo, hi, 3))
        from garland import skeleton_graph

        prof = spectrum(skeleton_graph(cx))
        assert all(iv.contains(x) for x in prof.eigenvalues[1:])


class TestSurvey:
    def test_k7_vertex_links(self):
        s = min_link_profiles(complete_skeleton(7, 2), None, 0)
        assert s.value == pytest.approx(0.2) and len(s.links) == 7

    def test_orbit_reps_only(self):
        cx = complete_skeleton(5, 2)
        a = GroupAction(cx, [(1, 2, 3, 4, 0)])
        assert len(min_link_profiles(cx, a, 0).links) == 1

    def test_octahedron(self):
        assert min_link_profiles(octahedron(), None, 0).value == pytest.approx(1.0)

    def test_disconnected_link_named(self):
        from garland import build_complex

        cx = build_complex([(0, 1, 2), (0, 3, 4)])
        with pytest.raises(DisconnectedLink) as e:
            min_link_profiles(cx, None, 0)
        assert e.value.simplex == (0,)

    def test_parallel_matches_serial(self):
        cx = complete_skeleton(6, 2)
        a = min_link_profiles(cx, None, 0, jobs=1)
        b = min_link_profiles(cx, None, 0, jobs=2)
        assert a.value == b.value and a.witness == b.witness
