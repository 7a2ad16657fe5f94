"""Acceptance criteria; each test records one PASS/FAIL line."""

import io
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import complete_skeleton, octahedron, record, sphere
from garland import (
    CoefficientSpace,
    CurveModulus,
    DescentInterval,
    GroupAction,
    WeightedGraph,
    build_complex,
    certify_local,
    descent_map,
    local_threshold,
    p_max_for_lambda,
    parse_class,
    skeleton_graph,
    spectrum,
    stability_p_range,
    verify_identity,
)
from garland.cli import run
from garland.random_groups import asymptotic_report, link_expansion_experiment
from garland.spectral import min_link_profiles
from oracles import random_walk_eigenvalues, weights_by_recursion

pytestmark = pytest.mark.acceptance


def test_weight_combinatorics():
    start = time.perf_counter()
    rng = np.random.default_rng(20241)
    mismatches = 0
    for _ in range(50):
        n = int(rng.integers(0, 5))
        v = int(rng.integers(n + 1, n + 6))
        pool = list(itertools.combinations(range(v), n + 1))
        size = int(rng.integers(1, min(40, len(pool)) + 1))
        tops = [pool[i] for i in rng.choice(len(pool), size, replace=False)]
        cx = build_complex(tops)
        ref = weights_by_recursion(cx.top)
        ours = {f: Fraction(w) for f, w in cx.weights.items()}
        mismatches += ours != ref
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 10
    record(1, "weight recursion equals closed form", ok,
           f"50 complexes, {mismatches} mismatches, {elapsed:.2f}s")
    assert ok


def test_spectral_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        v = int(rng.integers(2, 7))
        pairs = list(itertools.combinations(range(v), 2))
        pick = rng.choice(len(pairs), int(rng.integers(1, len(pairs) + 1)), replace=False)
        edges = [(*pairs[i], Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20))))
                 for i in pick]
        g = WeightedGraph.from_edges(edges)
        ours = spectrum(g).eigenvalues
        ref = random_walk_eigenvalues(g.vertices, g.edges)
        assert len(ref) == len(ours)
        worst = max(worst, max(abs(a - b) for a, b in zip(ours, ref)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30
    record(2, "Jacobi spectra match exact char-poly roots", ok,
           f"200 graphs, max error {worst:.2e}, {elapsed:.2f}s")
    assert ok


def _perm_matrix(perm):
    P = np.zeros((len(perm), len(perm)))
    for i, j in enumerate(perm):
        P[j, i] = 1
    return P


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _suite_configs():
    """(complex, action, coefficient space) over the suite grid."""
    for n in (2, 3, 4):
        cx = sphere(n)
        nv = n + 2
        rot = (1, 2, 0) + tuple(range(3, nv))
        swap = (1, 0, 2) + tuple(range(3, nv))
        actions = {"trivial": [], "C3": [rot], "S3": [rot, swap]}
        for name, gens in actions.items():
            a = GroupAction(cx, gens)
            for p in (2.0, 3.0, 4.0):
                spaces = [CoefficientSpace.trivial(a, d, p) for d in (1, 2, 3)]
                if gens:
                    spaces.append(CoefficientSpace.sign(a, p))
                    spaces.append(CoefficientSpace.direct_sum(CoefficientSpace.sign(a, p),
                                                              CoefficientSpace.trivial(a, 1, p)))
                    spaces.append(CoefficientSpace(a, [_perm_matrix(g[:3]) for g in gens], p))
                    if name == "C3" and p == 2.0:
                        spaces.append(CoefficientSpace(a, [_rotation(2 * math.pi / 3)], p))
                for cs in spaces:
                    yield n, name, cx, a, cs


SUITE = ("NORM_LOCALIZATION", "DSTAR_LOCALIZATION", "GARLAND", "COMBINED", "DD_ZERO",
         "ADJOINT", "DUALITY")


@pytest.fixture(scope="module")
def cochain_suite():
    start = time.perf_counter()
    reports, ratios = [], []
    seed = 0
    for n, name, cx, a, cs in _suite_configs():
        for k in range(1, n):
            for ident in SUITE + ("D_BOUND",):
                seed += 1
                r = verify_identity(cx, a, k, ident, cs, trials=2, seed=seed)
                if ident == "D_BOUND":
                    ratios.append((r.details.get("max_ratio", 0.0), k))
                else:
                    reports.append(r)
    return reports, ratios, time.perf_counter() - start


def test_cochain_identity_suite(cochain_suite):
    reports, _, elapsed = cochain_suite
    trials = sum(r.trials for r in reports)
    worst = max(r.max_residual for r in reports)
    covered = {r.identity for r in reports}
    ok = worst <= 1e-9 and trials >= 200 and covered == set(SUITE) and elapsed < 120
    record(3, "cochain identities on the suite", ok,
           f"{len(reports)} checks, {trials} trials, max residual {worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_differential_bound(cochain_suite):
    _, ratios, _ = cochain_suite
    excess = max(r - math.sqrt(k + 2) for r, k in ratios)
    ok = excess <= 1e-9
    record(4, "||d_k phi|| <= sqrt(k+2) ||phi||", ok,
           f"{len(ratios)} checks, max ratio - sqrt(k+2) = {excess:.3f}")
    assert ok


def test_thresholds():
    checks = [
        local_threshold(1, CurveModulus.power(1)) == 1 / 4,
        local_threshold(2, CurveModulus.power(1)) == 1 / 6,
        local_threshold(1, CurveModulus.hilbert()) == 1 / 2,
        abs(p_max_for_lambda(1 / 8, 1) - 3) <= 1e-12,
        all(abs(x - y) <= 1e-12 for x, y in zip(stability_p_range(1), (2, 2))),
        all(abs(x - y) <= 1e-12 for x, y in zip(stability_p_range(2 / 3), (1.5, 3))),
    ]
    ok = all(checks)
    record(5, "threshold values", ok, f"{sum(checks)}/{len(checks)} exact")
    assert ok


def test_end_to_end_certification():
    start = time.perf_counter()
    k7 = complete_skeleton(7, 2)
    h = certify_local(k7, None, 1, parse_class("hilbert"))
    pw = certify_local(k7, None, 1, parse_class("power:1"))
    octa = certify_local(octahedron(), None, 1, parse_class("hilbert"))
    gate = verify_identity(k7, None, 1, "NOWAK", trials=50, seed=6, C=2 * h.measured)
    elapsed = time.perf_counter() - start
    ok = (h.certified and abs(h.measured - 0.2) <= 1e-9
          and pw.certified and abs(pw.measured - 0.4) <= 1e-9
          and not octa.certified and abs(octa.measured - 1) <= 1e-9
          and gate.max_residual <= 1e-9 and elapsed < 10)
    record(6, "certification end to end and the Nowak gate", ok,
           f"hilbert {h.measured:.6f}, power {pw.measured:.6f}, octahedron {octa.measured:.6f}, "
           f"gate violation {gate.max_residual:.1e}, {elapsed:.2f}s")
    assert ok


def test_descent_containment():
    start = time.perf_counter()
    rng = np.random.default_rng(99)
    accepted, worst, bad = 0, -math.inf, 0
    while accepted < 100:
        v = int(rng.integers(6, 10))
        tops = [c for c in itertools.combinations(range(v), 3) if rng.random() < 0.7]
        if not tops:
            continue
        cx = build_complex(tops)
        g = skeleton_graph(cx)
        if not g.is_connected():
            continue
        try:
            survey = min_link_profiles(cx, None, 0, "two")
        except Exception:
            continue
        k1 = min(0.0, min(p.lambda_min for _, p in survey.links))
        k2 = max(0.0, max(p.one_sided for _, p in survey.links))
        if k2 > 1 / 2:
            continue
        accepted += 1
        iv = descent_map(DescentInterval(k1, k2, 2))
        ev = spectrum(g).eigenvalues[1:]
        gap = max(max(iv.lo - x, x - iv.hi) for x in ev) if len(ev) else -1
        worst = max(worst, gap)
        bad += gap > 1e-9
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 60
    record(7, "1-skeleton spectrum inside the descent interval", ok,
           f"100 complexes, {bad} outside, worst excess {worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_random_group_empirics():
    start = time.perf_counter()
    res = link_expansion_experiment([50, 100, 150], 4, trials=20, seed=2024)
    fractions = {m: s["connected_fraction"] for m, s in res.summary.items()}
    c_hat = {m: round(s["C_hat"], 4) for m, s in res.summary.items()}
    batches = []
    for batch in range(5):
        meds = [link_expansion_experiment([100], c, trials=20, seed=1000 + batch)
                .summary["100"]["median_two_sided"] for c in (2, 4, 8)]
        batches.append(all(b <= a for a, b in zip(meds, meds[1:])))
    elapsed = time.perf_counter() - start
    monotone = sum(batches) / len(batches)
    ok = min(fractions.values()) >= 0.9 and monotone >= 0.8 and elapsed < 300
    record(8, "random-group link empirics", ok,
           f"connected {fractions}, monotone in {sum(batches)}/5 batches, C_hat {c_hat}, "
           f"{elapsed:.0f}s")
    assert ok


def test_formula_evaluation():
    r = asymptotic_report(1000, 0.4, C=1)
    lo = 0.1 * math.log(1999)
    hi = 150 * math.log(1999)
    ok = abs(r["confdim_lower"] - lo) <= 1e-12 and abs(r["confdim_upper"] - hi) <= 1e-12
    record(9, "asymptotic formulas", ok,
           f"lower {r['confdim_lower']:.12f}, upper {r['confdim_upper']:.10f}")
    assert ok


def test_reproducibility(tmp_path):
    import json

    cx = tmp_path / "k7.json"
    cx.write_text(json.dumps({"top_simplices": [list(c) for c in
                                                itertools.combinations(range(7), 3)]}))
    pres = tmp_path / "p.txt"
    pres.write_text("a1a2a3\nA1a2a2\na3a1A2\n")
    runs = [
        ["certify", "--complex", str(cx), "--k", "1", "--class", "lp:3"],
        ["verify", "--complex", str(cx), "--trials", "3", "--seed", "11", "--p", "3", "--dim", "2"],
        ["spectra", "--complex", str(cx), "--j", "0"],
        ["randgroup", "sample", "--model", "binomial", "--m", "30", "--param", "0.001",
         "--seed", "5"],
        ["randgroup", "link", "--presentation", str(pres)],
        ["randgroup", "experiment", "--m", "20", "--trials", "3", "--seed", "8"],
        ["report", "--m", "500", "--d", "0.42"],
        ["thresholds", "--lambda", "0.1"],
    ]
    same = 0
    for argv in runs:
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            run(argv, stdout=buf)
            outs.append(buf.getvalue().encode())
        same += outs[0] == outs[1] and len(outs[0]) > 0
    ok = same == len(runs)
    record(10, "byte-identical CLI output per seed", ok, f"{same}/{len(runs)} subcommands")
    assert ok
