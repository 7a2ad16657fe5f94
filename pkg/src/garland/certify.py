"""Vanishing certificates from link spectra, and what they imply.

``certify_local`` bounds ``||A_tau (I - M_tau) (x) id_E||`` on every
``(k-1)``-link and compares with ``1/(k+1)``.  ``certify_descent`` reaches the
same conclusion from the ``(n-2)``-links alone by pushing the local threshold
through spectral descent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__
from .bounds import BanachClassSpec, CurveModulus, local_threshold, stability_p_range, tensor_norm_bound
from .complex import GroupAction, SimplicialComplex
from .exceptions import DegreeOutOfRange, InconsistentInputs, OneSidedInapplicable
from .spectral import min_link_profiles

# margins at or below this are ties
MARGIN_TOL = 1e-9


@dataclass
class Certificate:
    criterion: str  # LOCAL | DESCENT_TWO | DESCENT_ONE
    k: int
    n: int
    banach_class: BanachClassSpec
    measured: float
    raw_lambda: float
    witness: tuple
    threshold: float
    margin: float
    certified: bool
    conclusion: str
    assumptions: list = field(default_factory=list)
    fingerprint: str = ""

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion,
            "k": self.k,
            "n": self.n,
            "class": self.banach_class.to_json(),
            "measured": {"value": self.measured, "lambda": self.raw_lambda,
                         "witness": list(self.witness)},
            "threshold": self.threshold,
            "margin": self.margin,
            "certified": self.certified,
            "conclusion": self.conclusion,
            "assumptions": list(self.assumptions),
            "complex": self.fingerprint,
            "version": __version__,
        }


def _check_degree(cx: SimplicialComplex, k: int):
    if not 1 <= k <= cx.dim - 1:
        raise DegreeOutOfRange(f"k must satisfy 1 <= k <= n-1 = {cx.dim - 1}, got {k}")


def _action_note(action: GroupAction | None) -> str:
    if action is None or action.order == 1:
        return "trivial group action"
    return f"group of order {action.order} acting simplicially (finite data: proper, cocompact)"


def _verdict(ok: bool, k: int, cls: BanachClassSpec) -> str:
    label = cls.label or cls.to_json()["label"]
    if ok:
        return f"certified: equivariant H^{k}(X, pi) = 0 for every isometric pi on {label}"
    return "not certified (inconclusive)"


def certify_local(cx: SimplicialComplex, action: GroupAction | None, k: int,
                  banach_class: BanachClassSpec, solver: str = "jacobi",
                  jobs: int = 1) -> Certificate:
    _check_degree(cx, k)
    survey = min_link_profiles(cx, action, k - 1, "two", solver=solver, jobs=jobs)
    lam = min(survey.value, 1.0)
    measured = tensor_norm_bound(lam, banach_class.modulus)
    threshold = 1.0 / (k + 1)
    margin = threshold - measured
    ok = margin > MARGIN_TOL
    return Certificate(
        criterion="LOCAL", k=k, n=cx.dim, banach_class=banach_class,
        measured=measured, raw_lambda=survey.value, witness=survey.witness,
        threshold=threshold, margin=margin, certified=ok,
        conclusion=_verdict(ok, k, banach_class),
        assumptions=[f"all {k - 1}-links connected (checked)", _action_note(action)],
        fingerprint=cx.fingerprint(),
    )


def descent_threshold(k: int, n: int, modulus: CurveModulus) -> float:
    """Expansion bound on ``(n-2)``-links that forces the local criterion in degree ``k``."""
    lam = local_threshold(k, modulus)
    return lam / (1.0 + (n - k - 1) * lam)


def certify_descent(cx: SimplicialComplex, action: GroupAction | None, k: int,
                    banach_class: BanachClassSpec, sided: str = "two",
                    solver: str = "jacobi", jobs: int = 1) -> Certificate:
    _check_degree(cx, k)
    if sided not in ("one", "two"):
        raise ValueError("sided must be 'one' or 'two'")
    n = cx.dim
    lam_star = local_threshold(k, banach_class.modulus)
    if sided == "one" and not k < n - 1.0 / lam_star:
        raise OneSidedInapplicable(
            f"one-sided descent needs k < n - 1/lambda* = {n - 1.0 / lam_star:g}, got k={k}")
    # every link of dimension >= 1 must be connected; DisconnectedLink otherwise
    for j in range(-1, n - 2):
        min_link_profiles(cx, action, j, "two", solver=solver, jobs=jobs)
    survey = min_link_profiles(cx, action, n - 2, sided, solver=solver, jobs=jobs)
    threshold = descent_threshold(k, n, banach_class.modulus)
    margin = threshold - survey.value
    ok = margin > MARGIN_TOL
    assumptions = ["all links of dimension >= 1 connected (checked)", _action_note(action)]
    if sided == "one":
        assumptions.append(f"k < n - 1/lambda* with lambda* = {lam_star!r} (checked)")
    return Certificate(
        criterion="DESCENT_ONE" if sided == "one" else "DESCENT_TWO", k=k, n=n,
        banach_class=banach_class, measured=survey.value, raw_lambda=survey.value,
        witness=survey.witness, threshold=threshold, margin=margin, certified=ok,
        conclusion=_verdict(ok, k, banach_class), assumptions=assumptions,
        fingerprint=cx.fingerprint(),
    )


@dataclass
class Conclusions:
    vanishing: list
    fixed_point: dict | None
    stability: dict | None
    group_level: bool
    assumptions: list

    def to_json(self) -> dict:
        return {"vanishing": self.vanishing, "fixed_point": self.fixed_point,
                "stability": self.stability, "group_level": self.group_level,
                "assumptions": self.assumptions}


def conclude(certificates: list, aspherical: bool = False) -> Conclusions:
    """Turn certified vanishing statements into the downstream consequences.

    Fixed-point conclusions need a certified ``k = 1`` and carry a
    simple-connectivity assumption.  Stability needs a certified ``k = 2``
    on a complex of dimension at least 3 that the caller asserts is
    aspherical; only then are statements made about the group itself.
    """
    prints = {c.fingerprint for c in certificates}
    if len(prints) > 1:
        raise InconsistentInputs("certificates refer to different complexes")
    good = [c for c in certificates if c.certified]
    vanishing = [{"k": c.k, "class": c.banach_class.to_json(), "criterion": c.criterion}
                 for c in good]
    assumptions = ["aspherical: user-asserted"] if aspherical else []

    fixed_point = None
    thetas = [c.banach_class.modulus.theta0 for c in good if c.k == 1]
    if any(c.k == 1 for c in good):
        known = [t for t in thetas if t is not None]
        theta = min(known) if known else None
        fixed_point = {
            "classes": [c.banach_class.to_json() for c in good if c.k == 1],
            "lp_interval": [2.0, 2.0 / theta] if theta is not None else None,
            "theta_closure": theta,
            "assumptions": ["X simply connected (not checked)"],
        }
        assumptions.append("X simply connected for fixed-point conclusions (not checked)")

    stability = None
    if aspherical:
        cands = [c for c in good if c.k == 2 and c.n >= 3
                 and c.banach_class.modulus.theta0 is not None]
        if cands:
            theta0 = min(c.banach_class.modulus.theta0 for c in cands)
            lo, hi = stability_p_range(theta0)
            stability = {"theta0": theta0, "p_interval": [lo, hi]}
    return Conclusions(vanishing, fixed_point, stability, bool(aspherical and good), assumptions)

