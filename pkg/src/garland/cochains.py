"""Twisted cochains with finite-dimensional ``l^p`` coefficients.

A ``k``-cochain twisted by ``pi`` is an alternating, equivariant map on
ordered ``k``-simplices.  It is stored by its values on one sorted vertex
tuple per group orbit; every other value follows from

    phi(g . sigma^gamma) = sgn(gamma) pi(g) phi(sigma).

Dual cochains live in ``l^q`` (``q = p/(p-1)``) and transform by the inverse
transpose representation.  All couplings are real bilinear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .complex import GroupAction, OrbitData, SimplicialComplex, link_graph, orbit_data
from .exceptions import (
    DegenerateSubspace,
    DegreeMismatch,
    DimensionError,
    InvalidRepresentation,
    NotInComplex,
    TopDegree,
    UnsupportedDegree,
)
from .rng import make_rng
from .spectral import projection_matrix, random_walk_matrix

MEMBERSHIP_TOL = 1e-10


# -- coefficients -------------------------------------------------------------

class CoefficientSpace:
    """``R^d`` with the ``l^p`` norm and an isometric representation of the group.

    The representation is given on the action's generators and extended along
    the closure; it is checked to be a homomorphism and an isometry.
    """

    def __init__(self, action: GroupAction, generator_matrices, p: float = 2.0):
        self.action = action
        self.p = float(p)
        if not 1 < self.p < math.inf:
            raise InvalidRepresentation("norm exponent must satisfy 1 < p < inf")
        gens = [np.atleast_2d(np.asarray(m, dtype=float)) for m in generator_matrices]
        if len(gens) != len(action.generators):
            raise InvalidRepresentation(
                f"{len(action.generators)} generators but {len(gens)} matrices")
        if gens:
            d = gens[0].shape[0]
        else:
            d = None
        self._gens = gens
        self.d = d if d is not None else 1
        self.matrices = self._extend(gens)
        self._check()

    @classmethod
    def trivial(cls, action: GroupAction, d: int = 1, p: float = 2.0):
        return cls._with_dim(action, [np.eye(d)] * len(action.generators), p, d)

    @classmethod
    def sign(cls, action: GroupAction, p: float = 2.0):
        """One-dimensional sign of the vertex permutation."""
        from .complex import _perm_sign

        mats = [np.array([[float(_perm_sign(g))]]) for g in action.generators]
        return cls._with_dim(action, mats, p, 1)

    @classmethod
    def _with_dim(cls, action, mats, p, d):
        obj = cls.__new__(cls)
        obj.action = action
        obj.p = float(p)
        if not 1 < obj.p < math.inf:
            raise InvalidRepresentation("norm exponent must satisfy 1 < p < inf")
        obj.d = d
        obj._gens = [np.atleast_2d(np.asarray(m, dtype=float)) for m in mats]
        obj.matrices = obj._extend(obj._gens)
        obj._check()
        return obj

    @classmethod
    def direct_sum(cls, *spaces: "CoefficientSpace"):
        action = spaces[0].action
        p = spaces[0].p
        mats = []
        for gi in range(len(action.generators)):
            blocks = [s._gens[gi] for s in spaces]
            mats.append(_block_diag(blocks))
        return cls._with_dim(action, mats, p, sum(s.d for s in spaces))

    def _extend(self, gens) -> np.ndarray:
        order = self.action.order
        mats = np.zeros((order, self.d, self.d))
        mats[0] = np.eye(self.d)
        for idx, (gi, pred) in enumerate(self.action.generator_words()):
            if idx == 0:
                continue
            if gens[gi].shape != (self.d, self.d):
                raise InvalidRepresentation("generator matrices must be d x d")
            mats[idx] = gens[gi] @ mats[pred]
        return mats

    def _check(self):
        act = self.action
        nv = act.complex.n_vertices
        for gi, (g, G) in enumerate(zip(act.generators, self._gens)):
            for h in range(act.order):
                hp = act.elements[h]
                gh = act.index(tuple(g[hp[v]] for v in range(nv)))
                if np.abs(self.matrices[gh] - G @ self.matrices[h]).max() > 1e-10:
                    raise InvalidRepresentation("generator images do not define a homomorphism")
        rng = np.random.default_rng(0)
        probes = np.vstack([np.eye(self.d), rng.standard_normal((4, self.d))])
        for M in self.matrices:
            if self.p != 2 and not _is_signed_permutation(M):
                raise InvalidRepresentation("l^p isometries for p != 2 must be signed permutations")
            for x in probes:
                if abs(self.norm(M @ x) - self.norm(x)) > 1e-10 * max(1.0, self.norm(x)):
                    raise InvalidRepresentation("representation is not isometric")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @cached_property
    def dual_matrices(self) -> np.ndarray:
        inv = [self.action.inverse(i) for i in range(self.action.order)]
        return np.transpose(self.matrices[inv], (0, 2, 1)).copy()

    def exponent(self, dual: bool) -> float:
        return self.q if dual else self.p

    def norm(self, x, dual: bool = False) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=float).ravel(), ord=self.exponent(dual)))

    def duality_map(self, x, dual: bool = False) -> np.ndarray:
        """The unique norming functional: ``(x, x*) = |x|^2`` and ``|x*| = |x|``."""
        x = np.asarray(x, dtype=float)
        r = self.exponent(dual)
        nx = self.norm(x, dual)
        if nx == 0:
            return np.zeros_like(x)
        return np.sign(x) * np.abs(x) ** (r - 1) * nx ** (2 - r)


def _block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def _is_signed_permutation(M) -> bool:
    A = np.abs(M)
    return (np.all((np.abs(A - 1) < 1e-12) | (A < 1e-12))
            and np.all(np.abs(A.sum(axis=0) - 1) < 1e-12)
            and np.all(np.abs(A.sum(axis=1) - 1) < 1e-12))


# -- the cochain complex ------------------------------------------------------

@dataclass
class LocalData:
    """One ``(k-1)``-representative ``tau`` with its weighted link 1-skeleton."""

    tau: tuple
    pointwise: int
    vertices: list
    weights: np.ndarray  # m_tau(v)
    A: np.ndarray
    M: np.ndarray


class CochainComplex:
    """``C^k(X, pi)`` for all degrees, with cached orbit and link data."""

    def __init__(self, cx: SimplicialComplex, action: GroupAction | None = None,
                 coeff: CoefficientSpace | None = None):
        self.complex = cx
        self.action = action if action is not None else GroupAction.trivial(cx)
        if coeff is None:
            coeff = CoefficientSpace.trivial(self.action)
        if coeff.action is not self.action:
            raise InvalidRepresentation("coefficient space is defined for a different action")
        self.coeff = coeff
        self._orbits: dict[int, OrbitData] = {}
        self._local: dict[int, list[LocalData]] = {}

    @property
    def n(self) -> int:
        return self.complex.dim

    @property
    def d(self) -> int:
        return self.coeff.d

    def orbits(self, k: int) -> OrbitData:
        if k not in self._orbits:
            self._orbits[k] = orbit_data(self.action, k)
        return self._orbits[k]

    def mats(self, dual: bool) -> np.ndarray:
        return self.coeff.dual_matrices if dual else self.coeff.matrices

    def projector(self, k: int, rep: tuple, dual: bool = False) -> np.ndarray:
        """Signed average over the setwise stabilizer; projects onto ``E_{sigma, pi}``."""
        od = self.orbits(k)
        mats = self.mats(dual)
        plus, minus = od.plus[rep], od.minus[rep]
        P = mats[plus].sum(axis=0)
        if minus:
            P = P - mats[minus].sum(axis=0)
        return P / (len(plus) + len(minus))

    def membership_residual(self, k: int, rep: tuple, x, dual: bool = False) -> float:
        od = self.orbits(k)
        mats = self.mats(dual)
        x = np.asarray(x, dtype=float)
        res = 0.0
        for sign, group in ((1.0, od.plus[rep]), (-1.0, od.minus[rep])):
            for g in group:
                res = max(res, float(np.abs(mats[g] @ x - sign * x).max()))
        return res

    def local(self, k: int) -> list[LocalData]:
        """Link data over the ordered representatives of ``Sigma(k-1, Gamma)``."""
        if not 1 <= k <= self.n - 1:
            raise UnsupportedDegree(f"localization needs 1 <= k <= n-1, got k={k}")
        if k not in self._local:
            od = self.orbits(k - 1)
            out = []
            graphs: dict[tuple, tuple] = {}
            for tau in od.representatives:
                key = tuple(sorted(tau))
                if key not in graphs:
                    g = link_graph(self.complex, key)
                    mv = g.vertex_weights
                    graphs[key] = (list(g.vertices),
                                   np.array([float(mv[v]) for v in g.vertices]),
                                   random_walk_matrix(g), projection_matrix(g))
                verts, w, A, M = graphs[key]
                out.append(LocalData(tau, od.pointwise[tau], verts, w, A, M))
            self._local[k] = out
        return self._local[k]

    def zero(self, k: int, dual: bool = False) -> "Cochain":
        return Cochain(self, k, np.zeros((len(self.orbits(k).primary), self.d)), dual)


@dataclass
class Cochain:
    cc: CochainComplex = field(repr=False)
    k: int
    values: np.ndarray
    dual: bool = False

    def __call__(self, sigma) -> np.ndarray:
        """Value at an arbitrary ordered simplex."""
        sigma = tuple(sigma)
        if len(sigma) != self.k + 1 or len(set(sigma)) != len(sigma) or sigma not in self.cc.complex:
            raise NotInComplex(f"{sigma} is not an ordered {self.k}-simplex")
        rep, g, sign = self.cc.orbits(self.k).locate(sigma)
        return sign * (self.cc.mats(self.dual)[g] @ self.values[rep])

    def __add__(self, other: "Cochain") -> "Cochain":
        _match(self, other)
        return Cochain(self.cc, self.k, self.values + other.values, self.dual)

    def __mul__(self, c: float) -> "Cochain":
        return Cochain(self.cc, self.k, c * self.values, self.dual)

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def extension_residual(self) -> float:
        od = self.cc.orbits(self.k)
        return max((self.cc.membership_residual(self.k, r, x, self.dual)
                    for r, x in zip(od.primary, self.values)), default=0.0)

    def to_json(self) -> dict:
        od = self.cc.orbits(self.k)
        return {"k": self.k, "dual": self.dual,
                "values": [{"simplex": list(r), "value": [float(t) for t in x]}
                           for r, x in zip(od.primary, self.values)]}


def _match(a: Cochain, b: Cochain):
    if a.k != b.k:
        raise DegreeMismatch(f"degrees {a.k} and {b.k} differ")
    if a.cc is not b.cc:
        raise DegreeMismatch("cochains belong to different complexes")


def _from_values(cc: CochainComplex, k: int, values: np.ndarray, dual: bool,
                 check: bool = True) -> Cochain:
    phi = Cochain(cc, k, values, dual)
    if check:
        res = phi.extension_residual()
        if res > MEMBERSHIP_TOL * max(1.0, phi.max_abs()):
            raise AssertionError(f"cochain leaves E_sigma (residual {res:.2e})")
    return phi


# -- operations ----------------------------------------------------------------

def random_cochain(cc: CochainComplex, k: int, seed=None, dual: bool = False,
                   rng: np.random.Generator | None = None,
                   require_nonzero: bool = False) -> Cochain:
    """Gaussian values projected onto the extendable subspaces.

    Simplices whose subspace ``E_{sigma, pi}`` is zero get the value zero.
    """
    if not 0 <= k <= cc.n:
        raise DimensionError(f"degree {k} outside [0, {cc.n}]")
    rng = rng if rng is not None else make_rng(seed)
    od = cc.orbits(k)
    raw = rng.standard_normal((len(od.primary), cc.d))
    vals = np.array([cc.projector(k, r, dual) @ x for r, x in zip(od.primary, raw)])
    vals = vals.reshape(len(od.primary), cc.d)
    phi = _from_values(cc, k, vals, dual)
    if require_nonzero and phi.max_abs() < 1e-12:
        raise DegenerateSubspace(f"every E_sigma vanishes in degree {k}")
    return phi


def differential(phi: Cochain) -> Cochain:
    """``d phi(sigma) = sum_i (-1)^i phi(sigma with vertex i removed)``."""
    cc, k = phi.cc, phi.k
    if k >= cc.n:
        raise TopDegree("no differential out of the top degree")
    od = cc.orbits(k + 1)
    vals = np.zeros((len(od.primary), cc.d))
    for row, sigma in enumerate(od.primary):
        acc = np.zeros(cc.d)
        for i in range(k + 2):
            face = sigma[:i] + sigma[i + 1:]
            acc += (-1) ** i * phi(face)
        vals[row] = acc
    return _from_values(cc, k + 1, vals, phi.dual)


def codifferential(psi: Cochain) -> Cochain:
    """Adjoint of the differential: ``d* psi(tau) = sum_v m(v tau)/m(tau) psi(v tau)``.

    The result stays on the same side (primal or dual) as ``psi``.
    """
    cc, k = psi.cc, psi.k
    if k < 1:
        raise DimensionError("codifferential needs degree >= 1")
    cx = cc.complex
    od = cc.orbits(k - 1)
    vals = np.zeros((len(od.primary), cc.d))
    for row, tau in enumerate(od.primary):
        m_tau = cx.weight(tau)
        acc = np.zeros(cc.d)
        for v in _link_vertices(cx, tau):
            acc += cx.weight(tau + (v,)) / m_tau * psi((v,) + tau)
        vals[row] = acc
    return _from_values(cc, k - 1, vals, psi.dual)


def _link_vertices(cx: SimplicialComplex, tau) -> list:
    tset = set(tau)
    return sorted({v for s in cx.tops_containing(tau) for v in s if v not in tset})


def _site_weights(cc: CochainComplex, k: int):
    """``(sigma, m(sigma) / ((k+1)! |Gamma_sigma|))`` over ordered representatives."""
    od = cc.orbits(k)
    cx = cc.complex
    f = math.factorial(k + 1)
    return [(s, cx.weight(s) / (f * od.pointwise[s])) for s in od.representatives]


def couple(phi: Cochain, psi: Cochain) -> float:
    """``<phi, psi> = sum_sigma m(sigma)/((k+1)!|Gamma_sigma|) (phi(sigma), psi(sigma))``."""
    _match(phi, psi)
    return float(sum(w * np.dot(phi(s), psi(s)) for s, w in _site_weights(phi.cc, phi.k)))


def norm(phi: Cochain) -> float:
    coeff = phi.cc.coeff
    total = sum(w * coeff.norm(phi(s), phi.dual) ** 2 for s, w in _site_weights(phi.cc, phi.k))
    return math.sqrt(total)


def duality_partner(phi: Cochain) -> Cochain:
    """A cochain ``phi*`` on the opposite side with ``||phi*||^2 = ||phi||^2 = <phi, phi*>``."""
    cc = phi.cc
    od = cc.orbits(phi.k)
    vals = np.zeros_like(phi.values)
    for row, (rep, x) in enumerate(zip(od.primary, phi.values)):
        xs = cc.coeff.duality_map(x, phi.dual)
        vals[row] = cc.projector(phi.k, rep, not phi.dual) @ xs
    return _from_values(cc, phi.k, vals, not phi.dual)


@dataclass
class Localization:
    tau: tuple
    vertices: list
    values: np.ndarray  # row per link vertex
    weights: np.ndarray
    exponent: float

    def norm(self) -> float:
        pt = np.linalg.norm(self.values, ord=self.exponent, axis=1) if self.values.size else 0
        return float(np.sqrt(np.sum(self.weights * pt ** 2)))


def localize(phi: Cochain, tau) -> Localization:
    """``phi_tau(v) = phi(v tau)`` on the vertices of the link of ``tau``."""
    tau = tuple(tau)
    cx = phi.cc.complex
    if len(tau) != phi.k or tau not in cx or len(set(tau)) != len(tau):
        raise NotInComplex(f"{tau} is not an ordered {phi.k - 1}-simplex of the complex")
    verts = _link_vertices(cx, tau)
    vals = np.array([phi((v,) + tau) for v in verts]).reshape(len(verts), phi.cc.d)
    w = np.array([float(cx.weight(tau + (v,))) for v in verts])
    return Localization(tau, verts, vals, w, phi.cc.coeff.exponent(phi.dual))


def _local_values(phi: Cochain, data: LocalData) -> np.ndarray:
    return np.array([phi((v,) + data.tau) for v in data.vertices]).reshape(len(data.vertices),
                                                                           phi.cc.d)


def local_sum(phi: Cochain, psi: Cochain, operator: str | None = None) -> float:
    """``sum_tau 1/|Gamma_tau| <(T (x) id) phi_tau, psi_tau>_tau`` for ``T`` in {I, A, M, A(I-M)}."""
    _match(phi, psi)
    total = 0.0
    for data in phi.cc.local(phi.k):
        F = _local_values(phi, data)
        G = _local_values(psi, data)
        if operator == "A":
            F = data.A @ F
        elif operator == "M":
            F = data.M @ F
        elif operator == "A(I-M)":
            F = data.A @ (F - data.M @ F)
        elif operator is not None:
            raise ValueError(operator)
        total += float(np.sum(data.weights * np.sum(F * G, axis=1))) / data.pointwise
    return total


def local_norm_sum(phi: Cochain) -> float:
    """``sum_tau 1/|Gamma_tau| ||phi_tau||_tau^2``."""
    r = phi.cc.coeff.exponent(phi.dual)
    total = 0.0
    for data in phi.cc.local(phi.k):
        F = _local_values(phi, data)
        pt = np.linalg.norm(F, ord=r, axis=1)
        total += float(np.sum(data.weights * pt ** 2)) / data.pointwise
    return total


def relative_residual(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))


# -- identity verification ----------------------------------------------------

IDENTITIES = ("NORM_LOCALIZATION", "DSTAR_LOCALIZATION", "GARLAND", "COMBINED",
              "ADJOINT", "DD_ZERO", "D_BOUND", "NOWAK", "DUALITY")

DEFAULT_TOL = {"COMBINED": 1e-9, "DUALITY": 1e-9, "DD_ZERO": 1e-12}

# admissible k as (low, offset from n)
_DEGREES = {"NORM_LOCALIZATION": (1, -1), "DSTAR_LOCALIZATION": (1, -1), "GARLAND": (1, -1),
            "COMBINED": (1, -1), "NOWAK": (1, -1), "DD_ZERO": (1, -1), "ADJOINT": (0, -1),
            "D_BOUND": (0, -1), "DUALITY": (0, 0)}


@dataclass
class VerificationReport:
    identity: str
    k: int
    trials: int
    max_residual: float
    tolerance: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_json(self) -> dict:
        return {"identity": self.identity, "k": self.k, "trials": self.trials,
                "max_residual": self.max_residual, "tolerance": self.tolerance,
                "passed": self.passed, "details": self.details}


def nowak_constant(cc: CochainComplex, k: int) -> float:
    """``(k+1) C'`` with ``C'`` the tensor-norm bound over the ``(k-1)``-links."""
    from .bounds import CurveModulus, tensor_norm_bound, theta_of_p
    from .spectral import min_link_profiles

    p = cc.coeff.p
    modulus = CurveModulus.hilbert() if p == 2 else CurveModulus.power(theta_of_p(p))
    lam = min_link_profiles(cc.complex, cc.action, k - 1, "two").value
    return (k + 1) * tensor_norm_bound(min(lam, 1.0), modulus)


def _trial(cc: CochainComplex, identity: str, k: int, rng, trial: int, C: float | None):
    """One sample; returns ``(residual, extra)``."""
    if identity == "DD_ZERO":
        phi = random_cochain(cc, k - 1, rng=rng)
        dd = differential(differential(phi))
        return dd.max_abs() / (1.0 + phi.max_abs()), {}
    if identity == "D_BOUND":
        phi = random_cochain(cc, k, rng=rng)
        nphi = norm(phi)
        ratio = norm(differential(phi)) / nphi if nphi > 1e-14 else 0.0
        return max(0.0, ratio - math.sqrt(k + 2)), {"ratio": ratio}
    if identity == "ADJOINT":
        phi = random_cochain(cc, k, rng=rng)
        psi = random_cochain(cc, k + 1, rng=rng, dual=True)
        return relative_residual(couple(differential(phi), psi),
                                 couple(phi, codifferential(psi))), {}
    if identity == "DUALITY":
        phi = random_cochain(cc, k, rng=rng, dual=bool(trial % 2))
        star = duality_partner(phi)
        n2 = norm(phi) ** 2
        return max(relative_residual(norm(star) ** 2, n2),
                   relative_residual(couple(phi, star), n2)), {}

    phi = random_cochain(cc, k, rng=rng)
    if identity == "NOWAK" and trial % 2:
        psi = duality_partner(phi)
    else:
        psi = random_cochain(cc, k, rng=rng, dual=True)
    kf = math.factorial(k)
    if identity == "NORM_LOCALIZATION":
        res = relative_residual((k + 1) * kf * couple(phi, psi), local_sum(phi, psi))
        res_p = relative_residual((k + 1) * kf * norm(phi) ** 2, local_norm_sum(phi))
        res_d = relative_residual((k + 1) * kf * norm(psi) ** 2, local_norm_sum(psi))
        return max(res, res_p, res_d), {}
    if identity == "DSTAR_LOCALIZATION":
        lhs = couple(codifferential(phi), codifferential(psi))
        return relative_residual(lhs, local_sum(phi, psi, "M") / kf), {}
    if identity == "GARLAND":
        lhs = couple(differential(phi), differential(psi))
        return relative_residual(lhs, couple(phi, psi) - local_sum(phi, psi, "A") / kf), {}
    if identity == "COMBINED":
        lhs = (couple(differential(phi), differential(psi))
               + couple(codifferential(phi), codifferential(psi)))
        rhs = couple(phi, psi) - local_sum(phi, psi, "A(I-M)") / kf
        return relative_residual(lhs, rhs), {}
    if identity == "NOWAK":
        lhs = (abs(couple(differential(phi), differential(psi)))
               + abs(couple(codifferential(phi), codifferential(psi))))
        rhs = abs(couple(phi, psi)) - C * (norm(phi) ** 2 + norm(psi) ** 2) / 2
        return max(0.0, rhs - lhs) / (1.0 + abs(lhs) + abs(rhs)), {}
    raise ValueError(f"unknown identity {identity!r}")


def verify_identity(cx: SimplicialComplex, action: GroupAction | None, k: int, identity: str,
                    coeff: CoefficientSpace | None = None, trials: int = 20, seed=None,
                    tol: float | None = None, C: float | None = None) -> VerificationReport:
    """Sample ``trials`` cochain pairs and compare both sides of ``identity``.

    Equalities report ``|L - R| / (1 + |L| + |R|)``; the inequalities
    ``D_BOUND`` and ``NOWAK`` report their largest violation.  ``NOWAK`` uses
    the constant ``C`` if given, otherwise one derived from the link spectra.
    """
    identity = identity.upper()
    if identity not in IDENTITIES:
        raise ValueError(f"unknown identity {identity!r}; choose from {', '.join(IDENTITIES)}")
    cc = CochainComplex(cx, action if action is not None else (coeff.action if coeff else None),
                        coeff)
    lo, off = _DEGREES[identity]
    if not lo <= k <= cx.dim + off:
        raise UnsupportedDegree(f"{identity} needs {lo} <= k <= {cx.dim + off}, got {k}")
    if identity == "NOWAK" and C is None:
        C = nowak_constant(cc, k)
    tol = DEFAULT_TOL.get(identity, 1e-10) if tol is None else tol
    worst, extra = 0.0, {}
    for t in range(trials):
        rng = make_rng(seed, t)
        r, info = _trial(cc, identity, k, rng, t, C)
        worst = max(worst, r)
        for key, val in info.items():
            extra[f"max_{key}"] = max(extra.get(f"max_{key}", -math.inf), val)
    details = {"d": cc.d, "p": cc.coeff.p, "group_order": cc.action.order, **extra}
    if C is not None:
        details["C"] = C
    return VerificationReport(identity, k, trials, worst, tol, details)
