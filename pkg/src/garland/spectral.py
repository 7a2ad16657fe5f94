"""Random-walk spectra of weighted graphs and link expansion surveys.

The random walk ``A`` on a weighted graph is self-adjoint for the
``m``-weighted inner product, so its spectrum is computed from the similar
symmetric matrix ``B[u, v] = m(uv) / sqrt(m(u) m(v))`` with cyclic Jacobi
rotations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .complex import GroupAction, SimplicialComplex, WeightedGraph, link_graph, orbit_data
from .exceptions import (
    Disconnected,
    DisconnectedLink,
    DimensionError,
    EigensolveFailure,
    EmptyGraph,
    OutOfRange,
)

TOL = 1e-9
JACOBI_TOL = 1e-13
MAX_SWEEPS = 100


# -- operators ---------------------------------------------------------------

def random_walk_matrix(g: WeightedGraph) -> np.ndarray:
    """``A[v, u] = m({u, v}) / m(v)``; rows sum to one."""
    if g.n == 0:
        raise EmptyGraph("empty graph")
    mv = g.vertex_weights
    A = np.zeros((g.n, g.n))
    for (u, v), w in g.edges.items():
        i, j = g.index(u), g.index(v)
        A[i, j] = float(w / mv[u])
        A[j, i] = float(w / mv[v])
    return A


def projection_matrix(g: WeightedGraph) -> np.ndarray:
    """Orthogonal projection onto constants in ``l2(V, m)``: ``M[v, u] = m(u) / m(empty)``."""
    mv = g.vertex_weights
    total = g.m_empty
    row = np.array([float(mv[v] / total) for v in g.vertices])
    return np.tile(row, (g.n, 1))


def symmetrized_matrix(g: WeightedGraph) -> np.ndarray:
    mv = g.vertex_weights
    B = np.zeros((g.n, g.n))
    for (u, v), w in g.edges.items():
        i, j = g.index(u), g.index(v)
        B[i, j] = B[j, i] = float(w) / math.sqrt(float(mv[u]) * float(mv[v]))
    return B


# -- eigensolver -------------------------------------------------------------

@numba.njit(cache=True)
def _jacobi_kernel(a, v, tol, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        fro = 0.0
        for i in range(n):
            for j in range(n):
                x = a[i, j] * a[i, j]
                fro += x
                if i != j:
                    off += x
        if math.sqrt(off) < tol * max(1.0, math.sqrt(fro)):
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for r in range(n):
                    if r != p and r != q:
                        arp = a[r, p]
                        arq = a[r, q]
                        a[r, p] = c * arp - s * arq
                        a[p, r] = a[r, p]
                        a[r, q] = s * arp + c * arq
                        a[q, r] = a[r, q]
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    vrp = v[r, p]
                    vrq = v[r, q]
                    v[r, p] = c * vrp - s * vrq
                    v[r, q] = s * vrp + c * vrq
    return -1


def jacobi_eigh(B: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Stops when the off-diagonal Frobenius mass falls below
    ``tol * max(1, ||B||_F)``.  Returns ``(eigenvalues, eigenvectors)`` in
    descending order, eigenvectors as columns.
    """
    a = np.array(B, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    if not np.allclose(a, a.T, atol=1e-14):
        raise ValueError("matrix is not symmetric")
    v = np.eye(a.shape[0])
    sweeps = _jacobi_kernel(a, v, tol, max_sweeps)
    if sweeps < 0:
        raise EigensolveFailure(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigh(B: np.ndarray, solver: str = "jacobi"):
    if solver == "jacobi":
        return jacobi_eigh(B)
    if solver == "lapack":
        w, v = np.linalg.eigh(B)
        return w[::-1].copy(), v[:, ::-1].copy()
    raise ValueError(f"unknown solver {solver!r}")


# -- spectra -----------------------------------------------------------------

@dataclass
class SpectralProfile:
    eigenvalues: np.ndarray
    lambda_one: float
    lambda_two: float
    lambda_min: float
    connected: bool
    bipartite: bool
    trivial_multiplicity: int
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def spectral_flags_agree(self) -> bool:
        # -1 is an eigenvalue iff some component is bipartite
        spec_bip = abs(self.lambda_min + 1.0) <= TOL
        if (self.trivial_multiplicity == 1) != self.connected:
            return False
        return spec_bip == self.bipartite if self.connected else (spec_bip or not self.bipartite)

    def to_json(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "lambda_one": self.lambda_one,
            "lambda_two": self.lambda_two,
            "lambda_min": self.lambda_min,
            "connected": self.connected,
            "bipartite": self.bipartite,
            "trivial_multiplicity": self.trivial_multiplicity,
        }


def spectrum(g: WeightedGraph, solver: str = "jacobi", tol: float = TOL) -> SpectralProfile:
    """Random-walk spectrum with combinatorial connectivity/bipartiteness flags."""
    if g.n == 0:
        raise EmptyGraph("empty graph")
    B = symmetrized_matrix(g)
    w, vecs = eigh(B, solver)
    resid = np.linalg.norm(B @ vecs - vecs * w, axis=0)
    if resid.size and resid.max() > tol:
        raise EigensolveFailure(f"eigenpair residual {resid.max():.3e} exceeds {tol}")
    nontrivial = w[1:]
    lam1 = float(nontrivial[0]) if nontrivial.size else -1.0
    lam2 = float(np.abs(nontrivial).max()) if nontrivial.size else 0.0
    return SpectralProfile(
        eigenvalues=w,
        lambda_one=lam1,
        lambda_two=lam2,
        lambda_min=float(w[-1]),
        connected=g.is_connected(),
        bipartite=g.is_bipartite(),
        trivial_multiplicity=int(np.sum(np.abs(w - 1.0) <= tol)),
        eigenvectors=vecs,
    )


@dataclass(frozen=True)
class ExpanderProfile:
    one_sided: float
    two_sided: float
    lambda_min: float
    bipartite: bool

    def value(self, sided: str) -> float:
        return self.one_sided if sided == "one" else self.two_sided


def expander_profile(g: WeightedGraph, solver: str = "jacobi") -> ExpanderProfile:
    """Least ``lambda`` for which ``g`` is a one-/two-sided ``lambda``-spectral expander."""
    prof = spectrum(g, solver)
    if not prof.connected:
        raise Disconnected("expansion is only defined for connected graphs")
    return ExpanderProfile(
        one_sided=prof.lambda_one,
        two_sided=max(abs(prof.lambda_one), abs(prof.lambda_min)),
        lambda_min=prof.lambda_min,
        bipartite=prof.bipartite,
    )


# -- spectral descent --------------------------------------------------------

@dataclass(frozen=True)
class DescentInterval:
    lo: float
    hi: float
    l: int

    def __post_init__(self):
        if self.l < 2:
            raise OutOfRange("descent needs link dimension l >= 2")

    def contains(self, x: float, tol: float = TOL) -> bool:
        return self.lo - tol <= x <= self.hi + tol


def descent_map(interval: DescentInterval, direction: str = "forward") -> DescentInterval:
    """Map a bound on top-link spectra to a bound on the 1-skeleton spectrum.

    ``forward`` sends ``[k1, k2]`` (with ``-1 <= k1 <= 0 <= k2 <= 1/l``) to
    ``[k1/(1-(l-1)k1), k2/(1-(l-1)k2)]``; ``inverse`` sends the skeleton
    interval ``[l1, l2]`` to the link interval that guarantees it.
    """
    lo, hi, l = interval.lo, interval.hi, interval.l
    if direction == "forward":
        if not (-1 - 1e-12 <= lo <= 0 <= hi <= 1 / l + 1e-12):
            raise OutOfRange(f"forward descent needs -1 <= k1 <= 0 <= k2 <= 1/{l}")
        lo = max(lo, -1.0)
        return DescentInterval(lo / (1 - (l - 1) * lo), hi / (1 - (l - 1) * hi), l)
    if direction == "inverse":
        if not (-1 <= lo <= 0 <= hi <= 1):
            raise OutOfRange("inverse descent needs -1 <= l1 <= 0 <= l2 <= 1")
        # below -1/(l-1) every link bound suffices; links never go under -1
        den = 1 + (l - 1) * lo
        new_lo = max(-1.0, lo / den) if den > 0 else -1.0
        return DescentInterval(new_lo, hi / (1 + (l - 1) * hi), l)
    raise ValueError(f"unknown direction {direction!r}")


# -- link surveys ------------------------------------------------------------

@dataclass
class LinkSurvey:
    """Worst expansion over the ``j``-links of a complex."""

    j: int
    sided: str
    value: float
    witness: tuple
    links: list  # (tau, ExpanderProfile)

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "sided": self.sided,
            "value": self.value,
            "witness": list(self.witness),
            "links": [{"tau": list(t), "one_sided": p.one_sided, "two_sided": p.two_sided}
                      for t, p in self.links],
        }


def link_representatives(cx: SimplicialComplex, action: GroupAction | None, j: int) -> list:
    if j == -1:
        return [()]
    if action is None:
        return list(cx.faces(j))
    return list(orbit_data(action, j).primary)


def min_link_profiles(cx: SimplicialComplex, action: GroupAction | None, j: int,
                      sided: str = "two", solver: str = "jacobi", jobs: int = 1) -> LinkSurvey:
    """Maximum expansion value over ``j``-link representatives, with the witness."""
    if sided not in ("one", "two"):
        raise ValueError("sided must be 'one' or 'two'")
    if not -1 <= j <= cx.dim - 2:
        raise DimensionError(f"{j}-links of an {cx.dim}-complex are not >= 1-dimensional")
    reps = link_representatives(cx, action, j)
    graphs = []
    for tau in reps:
        g = link_graph(cx, tau)
        if not g.is_connected():
            raise DisconnectedLink(tau)
        graphs.append(g)
    if jobs > 1 and len(graphs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            profiles = list(ex.map(expander_profile, graphs, [solver] * len(graphs)))
    else:
        profiles = [expander_profile(g, solver) for g in graphs]
    links = list(zip(reps, profiles))
    worst_tau, worst = max(links, key=lambda tp: tp[1].value(sided))
    return LinkSurvey(j=j, sided=sided, value=worst.value(sided), witness=tuple(worst_tau),
                      links=links)
