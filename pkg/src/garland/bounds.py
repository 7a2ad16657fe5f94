"""Threshold arithmetic for classes of Banach coefficient spaces.

A class is described by a curvature modulus ``alpha``: if a fully
contractive operator has scalar norm ``<= delta`` then its vector-valued
extension has norm ``<= alpha(delta)``.  Strictly ``theta``-Hilbertian spaces
(e.g. ``L^p`` with ``theta = 2/p``) have ``alpha(t) = t**theta``; Hilbert
spaces need no modulus at all because the extension norm is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exceptions import InputError, OutOfRange, UnreachableThreshold

BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class CurveModulus:
    kind: str  # "hilbert" | "power" | "table"
    theta: float | None = None
    points: tuple = field(default=())

    def __post_init__(self):
        if self.kind == "power":
            if self.theta is None or not 0 < self.theta <= 1:
                raise OutOfRange("power modulus needs 0 < theta <= 1")
        elif self.kind == "table":
            pts = tuple((float(t), float(a)) for t, a in self.points)
            if len(pts) < 2:
                raise InputError("table modulus needs at least two points")
            for (t0, a0), (t1, a1) in zip(pts, pts[1:]):
                if not (t1 > t0 and a1 > a0):
                    raise InputError("table modulus must be strictly increasing in t and alpha")
            if not all(0 < t <= 1 and 0 < a <= 1 for t, a in pts):
                raise InputError("table points must lie in (0, 1] x (0, 1]")
            object.__setattr__(self, "points", pts)
        elif self.kind != "hilbert":
            raise InputError(f"unknown modulus kind {self.kind!r}")

    @classmethod
    def hilbert(cls):
        return cls("hilbert")

    @classmethod
    def power(cls, theta: float):
        return cls("power", theta=float(theta))

    @classmethod
    def table(cls, points):
        return cls("table", points=tuple(points))

    @classmethod
    def from_json(cls, spec: dict) -> "CurveModulus":
        kind = spec.get("kind")
        if kind == "power":
            return cls.power(spec["theta"])
        if kind == "table":
            return cls.table(spec["points"])
        if kind == "hilbert":
            return cls.hilbert()
        raise InputError(f"unknown modulus kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "theta": self.theta}
        if self.kind == "table":
            return {"kind": "table", "points": [list(p) for p in self.points]}
        return {"kind": "hilbert"}

    @property
    def theta0(self) -> float | None:
        """Hilbertian exponent, when the class has one."""
        return 1.0 if self.kind == "hilbert" else self.theta

    def alpha(self, t: float) -> float:
        """Evaluate the modulus.  Table moduli interpolate linearly and are
        held at the first sample below the grid."""
        if self.kind == "hilbert":
            return t
        if self.kind == "power":
            return t ** self.theta
        pts = self.points
        if t <= pts[0][0]:
            return pts[0][1]
        for (t0, a0), (t1, a1) in zip(pts, pts[1:]):
            if t <= t1:
                return a0 + (a1 - a0) * (t - t0) / (t1 - t0)
        return pts[-1][1]

    def alpha_inverse(self, target: float) -> float:
        if self.kind == "hilbert":
            return target
        if self.kind == "power":
            return target ** (1.0 / self.theta)
        pts = self.points
        if target <= pts[0][1]:
            raise UnreachableThreshold(
                f"table modulus never drops below {pts[0][1]} (needed {target})")
        if target >= pts[-1][1]:
            return pts[-1][0]
        lo, hi = pts[0][0], pts[-1][0]
        while hi - lo > BISECTION_TOL:
            mid = 0.5 * (lo + hi)
            if self.alpha(mid) < target:
                lo = mid
            else:
                hi = mid
        return lo


@dataclass(frozen=True)
class BanachClassSpec:
    modulus: CurveModulus
    label: str = ""

    def to_json(self) -> dict:
        return {"label": self.label or describe(self.modulus), "modulus": self.modulus.to_json()}


def describe(modulus: CurveModulus) -> str:
    if modulus.kind == "hilbert":
        return "Hilbert spaces"
    if modulus.kind == "power":
        return f"strictly theta-Hilbertian, theta >= {modulus.theta:g}"
    return "uniformly curved, tabulated modulus"


def parse_class(text: str) -> BanachClassSpec:
    """Parse ``hilbert``, ``power:<theta>``, ``lp:<p>`` or a JSON modulus spec."""
    import json

    text = text.strip()
    if text.startswith("{"):
        spec = json.loads(text)
        return BanachClassSpec(CurveModulus.from_json(spec), spec.get("label", ""))
    if text == "hilbert":
        return BanachClassSpec(CurveModulus.hilbert(), "Hilbert spaces")
    kind, _, arg = text.partition(":")
    if kind == "power" and arg:
        return BanachClassSpec(CurveModulus.power(float(arg)))
    if kind == "lp" and arg:
        p = float(arg)
        return BanachClassSpec(CurveModulus.power(theta_of_p(p)), f"L^p, p={arg}")
    raise InputError(f"cannot parse Banach class {text!r}")


def theta_of_p(p: float) -> float:
    """Interpolation exponent of ``L^p``: ``2/p`` for ``p >= 2``, ``2 - 2/p`` below."""
    if not p > 1 or math.isinf(p):
        raise OutOfRange("p must satisfy 1 < p < inf")
    return 2.0 / p if p >= 2 else 2.0 - 2.0 / p


def tensor_norm_bound(lam: float, modulus: CurveModulus) -> float:
    """Bound on ``||A(I-M) (x) id_E||`` for a two-sided ``lam``-expander."""
    if not 0 <= lam <= 1 + 1e-12:
        raise OutOfRange("lambda must lie in [0, 1]")
    if modulus.kind == "hilbert":
        return lam
    if lam <= 0:
        return 0.0
    return min(2.0 * modulus.alpha(min(lam, 1.0)), 2.0)


def local_threshold(k: int, modulus: CurveModulus) -> float:
    """Strict upper bound on two-sided link expansion that forces vanishing in degree ``k``."""
    if k < 1:
        raise OutOfRange("degree k must be >= 1")
    if modulus.kind == "hilbert":
        return 1.0 / (k + 1)
    return modulus.alpha_inverse(1.0 / (2 * (k + 1)))


def p_max_for_lambda(lam: float, k: int = 1) -> float | None:
    """Largest ``p >= 2`` with ``lam < (1/(2(k+1)))**(p/2)``; ``None`` if below 2."""
    if not 0 < lam < 1:
        raise OutOfRange("lambda must lie in (0, 1)")
    if k < 1:
        raise OutOfRange("degree k must be >= 1")
    p = 2.0 * math.log(1.0 / lam) / math.log(2 * (k + 1))
    return p if p >= 2 else None


def stability_p_range(theta0: float) -> tuple[float, float]:
    """Schatten exponents for which vanishing of degree-2 cohomology gives stability."""
    if not 0 < theta0 <= 1:
        raise OutOfRange("theta0 must lie in (0, 1]")
    return (1.0 + theta0 / (2.0 - theta0), 2.0 / theta0)


def l_contractive_bound(L: float, delta: float, modulus: CurveModulus) -> float:
    if L < 1:
        raise OutOfRange("L must be >= 1")
    if not 0 < delta <= 1:
        raise OutOfRange("delta must lie in (0, 1]")
    return L * modulus.alpha(delta)
