"""Random triangular presentations and the spectra of their vertex links.

Letters are integers ``0 .. 2m-1``: ``i < m`` is the generator ``a{i+1}``
and ``m + i`` its inverse ``A{i+1}``.  A relator is a cyclically reduced
word of length three, stored as a tuple of letters.
"""

from __future__ import annotations

import math
import re
import statistics
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

import numpy as np

from .complex import WeightedGraph
from .exceptions import InputError, OutOfRange, ParameterOutOfRange, TooManyRelators
from .rng import make_rng
from .spectral import spectrum

ENUMERATE_LIMIT = 2_000_000
RHO_EXPONENT = 1.42


# -- words ---------------------------------------------------------------------

def inverse_letter(x: int, m: int) -> int:
    return (x + m) % (2 * m)


def letter_name(x: int, m: int) -> str:
    return f"a{x + 1}" if x < m else f"A{x - m + 1}"


def word_name(word, m: int) -> str:
    return "".join(letter_name(x, m) for x in word)


def is_cyclically_reduced(word, m: int) -> bool:
    n = len(word)
    return all(word[(i + 1) % n] != inverse_letter(word[i], m) for i in range(n))


def canonical_rotation(word) -> tuple:
    return min(tuple(word[i:]) + tuple(word[:i]) for i in range(len(word)))


def inverse_word(word, m: int) -> tuple:
    return tuple(inverse_letter(x, m) for x in reversed(word))


def relator_space_size(m: int, rotation_classes: bool = False) -> int:
    """Number of cyclically reduced length-3 words: ``(2m-1)^3 + 1``.

    With ``rotation_classes`` words equal up to cyclic rotation count once;
    the ``2m`` constant words are the only ones fixed by rotation.
    """
    if m < 1:
        raise OutOfRange("m must be >= 1")
    total = (2 * m - 1) ** 3 + 1
    if rotation_classes:
        return (total - 2 * m) // 3 + 2 * m
    return total


def enumerate_relator_space(m: int, rotation_classes: bool = False) -> tuple[int, Iterator[tuple]]:
    """``(count, iterator)`` over the words in lexicographic letter order."""
    count = relator_space_size(m, rotation_classes)

    def gen():
        for w in product(range(2 * m), repeat=3):
            if is_cyclically_reduced(w, m) and (not rotation_classes or canonical_rotation(w) == w):
                yield w

    return count, gen()


def _good_mask(idx: np.ndarray, m: int, rotation_classes: bool) -> np.ndarray:
    b = 2 * m
    s1, s2, s3 = idx // (b * b), (idx // b) % b, idx % b
    inv = lambda x: (x + m) % b  # noqa: E731
    ok = (s2 != inv(s1)) & (s3 != inv(s2)) & (s1 != inv(s3))
    if rotation_classes:
        r1 = s2 * b * b + s3 * b + s1
        r2 = s3 * b * b + s1 * b + s2
        ok &= (idx <= r1) & (idx <= r2)
    return ok


def _decode(idx, m: int) -> tuple:
    b = 2 * m
    idx = int(idx)
    return (idx // (b * b), (idx // b) % b, idx % b)


def _uniform_subset(m: int, size: int, rng: np.random.Generator, rotation_classes: bool) -> list:
    """A uniformly random ``size``-subset of the relator space, sorted."""
    count = relator_space_size(m, rotation_classes)
    if size > count:
        raise TooManyRelators(f"requested {size} relators from a space of {count}")
    if size == 0:
        return []
    full = (2 * m) ** 3
    if full <= ENUMERATE_LIMIT or 2 * size > count:
        idx = np.arange(full, dtype=np.int64)
        good = idx[_good_mask(idx, m, rotation_classes)]
        chosen = rng.choice(good, size=size, replace=False)
    else:
        # draws are uniform over words not yet taken, so the set is uniform
        taken: dict[int, None] = {}
        while len(taken) < size:
            batch = rng.integers(0, full, size=max(64, 2 * (size - len(taken))))
            for x in batch[_good_mask(batch, m, rotation_classes)].tolist():
                if x not in taken:
                    taken[x] = None
                    if len(taken) == size:
                        break
        chosen = list(taken)
    return sorted(_decode(x, m) for x in chosen)


# -- presentations -------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    m: int
    relators: tuple

    def __post_init__(self):
        if self.m < 1:
            raise InputError("a presentation needs m >= 1 generators")
        seen = set()
        for w in self.relators:
            if len(w) != 3 or not all(0 <= x < 2 * self.m for x in w):
                raise InputError(f"relator {w} is not a length-3 word over {2 * self.m} letters")
            if not is_cyclically_reduced(w, self.m):
                raise InputError(f"relator {word_name(w, self.m)} is not cyclically reduced")
            if w in seen:
                raise InputError(f"duplicate relator {word_name(w, self.m)}")
            seen.add(w)

    def to_text(self) -> str:
        lines = [f"# m = {self.m}"] + [word_name(w, self.m) for w in self.relators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, m: int | None = None) -> "Presentation":
        """One relator per line in letters ``a1..am`` and inverses ``A1..Am``.

        Lines made only of letters use ``a, b, c, ...`` for the generators and
        capitals for their inverses.  ``# m = N`` fixes the rank.
        """
        words = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                hit = re.match(r"#\s*m\s*=\s*(\d+)", line)
                if hit and m is None:
                    m = int(hit.group(1))
                continue
            line = line.replace(" ", "")
            if re.fullmatch(r"[a-zA-Z]+", line):
                # short form: a, b, c, ... with capitals for inverses
                words.append([("a" if ch.islower() else "A", ord(ch.lower()) - ord("a") + 1)
                              for ch in line])
                continue
            toks = re.findall(r"([aA])(\d+)", line)
            if "".join(c + d for c, d in toks) != line:
                raise InputError(f"cannot parse relator {line!r}")
            words.append([(c, int(d)) for c, d in toks])
        top = max((i for w in words for _, i in w), default=1)
        m = m if m is not None else top
        if top > m or any(i < 1 for w in words for _, i in w):
            raise InputError("generator index outside 1..m")
        rel = tuple(tuple(i - 1 if c == "a" else m + i - 1 for c, i in w) for w in words)
        return cls(m, rel)


def sample_presentation(model: str, m: int, param: float, seed=None,
                        rotation_classes: bool = False) -> Presentation:
    """Density model: ``floor((2m-1)^(3d))`` distinct relators, uniformly.
    Binomial model: every relator independently with probability ``rho``."""
    if m < 1:
        raise OutOfRange("m must be >= 1")
    rng = make_rng(seed, m)
    count = relator_space_size(m, rotation_classes)
    if model == "density":
        d = float(param)
        if not 0 < d < 1:
            raise OutOfRange("density d must lie in (0, 1)")
        x = (2 * m - 1) ** (3 * d)
        size = math.floor(x * (1 + 1e-12))
        words = _uniform_subset(m, size, rng, rotation_classes)
    elif model == "binomial":
        rho = float(param)
        if not 0 <= rho <= 1:
            raise OutOfRange("rho must lie in [0, 1]")
        size = int(rng.binomial(count, rho))
        words = _uniform_subset(m, size, rng, rotation_classes)
    else:
        raise InputError(f"unknown model {model!r}")
    return Presentation(m, tuple(words))


# -- links ---------------------------------------------------------------------

def zuk_link(pres: Presentation, symmetrize: bool = False) -> WeightedGraph:
    """Vertex link of the presentation complex.

    Each cyclically consecutive pair ``(x, y)`` of a relator adds weight one
    to the edge ``{x^-1, y}``.  With ``symmetrize`` the inverse of every
    relator contributes as well.  Letters on no edge are dropped with a
    warning; an empty relator set gives the empty graph.
    """
    m = pres.m
    words = list(pres.relators)
    if symmetrize:
        words += [inverse_word(w, m) for w in words]
    names = [letter_name(x, m) for x in range(2 * m)]
    weights: dict[tuple, int] = {}
    for w in words:
        for i in range(3):
            a, b = inverse_letter(w[i], m), w[(i + 1) % 3]
            key = (min(a, b), max(a, b))
            weights[key] = weights.get(key, 0) + 1
    used = sorted({x for e in weights for x in e})
    if len(used) < 2 * m:
        warnings.warn(f"{2 * m - len(used)} letters lie on no edge of the link and were dropped",
                      stacklevel=2)
    if not weights:
        return WeightedGraph((), {})
    edges = {(names[a], names[b]): Fraction(c) for (a, b), c in sorted(weights.items())}
    return WeightedGraph(tuple(names[x] for x in used), edges)


# -- experiments ---------------------------------------------------------------

@dataclass
class ExperimentRow:
    m: int
    rho: float
    seed: int
    link_vertices: int
    link_edges: int
    connected: bool
    two_sided: float
    one_sided: float


COLUMNS = [f for f in ExperimentRow.__dataclass_fields__]


def rho_multiplier(c: float) -> Callable[[int], float]:
    """``m -> c log(m) / (8 m^2)``."""
    return lambda m: c * math.log(m) / (8.0 * m * m)


def check_rho(m: int, rho: float, eta: float = 0.5):
    upper = m ** -RHO_EXPONENT
    lower = (1 + eta) * math.log(m) / (8.0 * m * m)
    if not 0 < rho < upper:
        raise ParameterOutOfRange(f"rho={rho:g} must lie in (0, m^-{RHO_EXPONENT}={upper:g})")
    if rho < lower:
        raise ParameterOutOfRange(f"rho={rho:g} is below (1+eta) log m / (8 m^2) = {lower:g}")


@dataclass
class ExperimentResult:
    rows: list
    summary: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
        return buf.getvalue()


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return x


def run_trial(m: int, rho: float, seed: int, trial: int, symmetrize: bool = False,
              rotation_classes: bool = False, solver: str = "jacobi") -> ExperimentRow:
    rng = make_rng(seed, m, trial)
    count = relator_space_size(m, rotation_classes)
    words = _uniform_subset(m, int(rng.binomial(count, rho)), rng, rotation_classes)
    pres = Presentation(m, tuple(words))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = zuk_link(pres, symmetrize)
    if g.n == 0:
        return ExperimentRow(m, rho, seed, 0, 0, False, float("nan"), float("nan"))
    prof = spectrum(g, solver)
    connected = prof.connected and g.n == 2 * m
    two = max(abs(prof.lambda_one), abs(prof.lambda_min))
    return ExperimentRow(m, rho, seed, g.n, len(g.edges), connected, two, prof.lambda_one)


def link_expansion_experiment(m_list, rho_rule, trials: int = 20, seed=None, eta: float = 0.5,
                              symmetrize: bool = False, rotation_classes: bool = False,
                              solver: str = "jacobi", jobs: int = 1) -> ExperimentResult:
    """Binomial presentations for each ``m`` and trial, with link spectra.

    ``rho_rule`` is a callable ``m -> rho`` or a number ``c`` meaning
    ``rho = c log(m) / (8 m^2)``.
    """
    from .rng import resolve_seed

    seed = resolve_seed(seed)
    rule = rho_rule if callable(rho_rule) else rho_multiplier(float(rho_rule))
    tasks = []
    for m in m_list:
        rho = rule(m)
        check_rho(m, rho, eta)
        tasks += [(m, rho, seed, t, symmetrize, rotation_classes, solver) for t in range(trials)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(run_trial, *zip(*tasks)))
    else:
        rows = [run_trial(*t) for t in tasks]
    summary = {}
    for m in dict.fromkeys(m_list):
        rs = [r for r in rows if r.m == m]
        lams = [r.two_sided for r in rs if not math.isnan(r.two_sided)]
        med = statistics.median(lams) if lams else float("nan")
        chat = [r.two_sided ** 2 * r.rho * m * m for r in rs if not math.isnan(r.two_sided)]
        summary[str(m)] = {
            "rho": rs[0].rho,
            "trials": len(rs),
            "connected_fraction": sum(r.connected for r in rs) / len(rs),
            "median_two_sided": med,
            "C_hat": statistics.median(chat) if chat else float("nan"),
        }
    return ExperimentResult(rows, summary)


# -- asymptotic formulas ---------------------------------------------------------

def asymptotic_report(m: int, d: float, C: float = 1.0, eta: float = 1.0,
                      log_base: float = math.e) -> dict:
    """Closed-form consequences for density-``d`` groups on ``m`` generators.

    ``C`` is an unspecified universal constant; every quantity that depends
    on it is reported as conditional.
    """
    if m < 2:
        raise OutOfRange("m must be >= 2")
    if not 0 < d < 1:
        raise OutOfRange("d must lie in (0, 1)")
    if not C > 0:
        raise OutOfRange("C must be positive")
    if not 0 < eta < 2:
        raise OutOfRange("eta must lie in (0, 2)")
    if not log_base > 1:
        raise OutOfRange("log base must exceed 1")

    def log(x):
        return math.log(x) / math.log(log_base)

    upper_p = 0.5 * (3 * d - 1) * log(2 * m - 1) - 0.5 * log(C)
    in_pair = 1 / 3 <= d < 1 / 2
    threshold = 1 / 3 + (log(log(m)) - log(2 - eta)) / (3 * log(m))
    return {
        "m": m,
        "d": d,
        "C": C,
        "eta": eta,
        "log_base": log_base,
        "conditional_on_C": True,
        "p_interval": [2.0, upper_p] if upper_p >= 2 else None,
        "confdim_lower": upper_p if in_pair else None,
        "confdim_upper": 30.0 / (1.0 - 2.0 * d) * log(2 * m - 1) if in_pair else None,
        "density_threshold": threshold,
        "above_density_threshold": d > threshold,
    }

