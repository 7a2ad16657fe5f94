import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from garland.exceptions import InputError, OutOfRange, ParameterOutOfRange, TooManyRelators
from garland.random_groups import (
    COLUMNS,
    Presentation,
    asymptotic_report,
    canonical_rotation,
    enumerate_relator_space,
    inverse_letter,
    link_expansion_experiment,
    relator_space_size,
    sample_presentation,
    zuk_link,
)
from garland.random_groups import _uniform_subset
from garland.rng import make_rng


def brute_force(m):
    inv = lambda x: (x + m) % (2 * m)  # noqa: E731
    return [w for w in itertools.product(range(2 * m), repeat=3)
            if w[1] != inv(w[0]) and w[2] != inv(w[1]) and w[0] != inv(w[2])]


class TestEnumeration:
    def test_m1(self):
        count, it = enumerate_relator_space(1)
        assert count == 2 and list(it) == [(0, 0, 0), (1, 1, 1)]

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_brute_force(self, m):
        count, it = enumerate_relator_space(m)
        words = list(it)
        assert words == brute_force(m) and count == len(words)
        assert count % 2 == 0

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_rotation_classes(self, m):
        count, it = enumerate_relator_space(m, rotation_classes=True)
        classes = {canonical_rotation(w) for w in brute_force(m)}
        assert count == len(classes) and set(it) == classes


class TestSampling:
    def test_density_m1(self):
        p = sample_presentation("density", 1, 0.3, seed=0)
        assert len(p.relators) == 1 and p.relators[0] in {(0, 0, 0), (1, 1, 1)}

    @given(st.integers(2, 30), st.floats(0.05, 0.6), st.integers(0, 1000))
    def test_density_exact_count(self, m, d, seed):
        p = sample_presentation("density", m, d, seed=seed)
        assert len(p.relators) == math.floor((2 * m - 1) ** (3 * d) * (1 + 1e-12))
        assert len(set(p.relators)) == len(p.relators)

    def test_binomial_extremes(self):
        assert sample_presentation("binomial", 3, 0.0, seed=1).relators == ()
        full = sample_presentation("binomial", 3, 1.0, seed=1)
        assert len(full.relators) == relator_space_size(3)

    def test_binomial_inclusion_frequency(self):
        m, rho, n = 2, 0.3, 10_000
        space = brute_force(m)
        counts = dict.fromkeys(space, 0)
        for s in range(n):
            for w in sample_presentation("binomial", m, rho, seed=s).relators:
                counts[w] += 1
        sigma = math.sqrt(n * rho * (1 - rho))
        assert all(abs(c - n * rho) <= 3 * sigma for c in counts.values())

    def test_rejection_path_uniform_distinct(self):
        rng = make_rng(0)
        words = _uniform_subset(200, 500, rng, False)
        assert len(set(words)) == 500
        assert all(w[1] != inverse_letter(w[0], 200) for w in words)

    def test_too_many(self):
        with pytest.raises(TooManyRelators):
            _uniform_subset(1, 3, make_rng(0), False)

    def test_reproducible(self):
        a = sample_presentation("binomial", 40, 0.001, seed=9)
        b = sample_presentation("binomial", 40, 0.001, seed=9)
        assert a == b

    def test_bad_params(self):
        with pytest.raises(OutOfRange):
            sample_presentation("density", 3, 1.2, seed=0)
        with pytest.raises(InputError):
            sample_presentation("other", 3, 0.1, seed=0)


class TestPresentation:
    def test_roundtrip_text(self):
        p = sample_presentation("density", 4, 0.4, seed=2)
        assert Presentation.from_text(p.to_text()) == p

    def test_short_letters(self):
        p = Presentation.from_text("aba\n", m=2)
        assert p.relators == ((0, 1, 0),)

    def test_rejects_unreduced(self):
        with pytest.raises(InputError):
            Presentation.from_text("a1A1a2\n")
        with pytest.raises(InputError):
            Presentation.from_text("a1a2A1\n")  # cyclic cancellation A1.a1

    def test_rejects_duplicates(self):
        with pytest.raises(InputError):
            Presentation(2, ((0, 1, 0), (0, 1, 0)))


class TestZukLink:
    def test_aba(self):
        g = zuk_link(Presentation.from_text("aba", m=2))
        assert g.edges == {("a1", "A1"): 1, ("a1", "A2"): 1, ("a2", "A1"): 1}

    def test_empty(self):
        with pytest.warns(UserWarning):
            g = zuk_link(Presentation(2, ()))
        assert g.n == 0

    @given(st.integers(2, 12), st.integers(0, 500))
    def test_mass_is_three_per_relator(self, m, seed):
        p = sample_presentation("density", m, 0.4, seed=seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            g = zuk_link(p)
            gs = zuk_link(p, symmetrize=True)
        assert sum(g.edges.values()) == 3 * len(p.relators)
        assert sum(gs.edges.values()) == 6 * len(p.relators)

    def test_rotation_invariant(self):
        a = zuk_link(Presentation.from_text("a1a2a3", m=3))
        b = zuk_link(Presentation.from_text("a2a3a1", m=3))
        assert a.edges == b.edges


class TestExperiment:
    def test_rows_and_summary(self):
        res = link_expansion_experiment([30], 4, trials=4, seed=1)
        assert len(res.rows) == 4
        assert res.to_csv().splitlines()[0] == ",".join(COLUMNS)
        s = res.summary["30"]
        assert 0 <= s["connected_fraction"] <= 1 and "C_hat" in s
        for r in res.rows:
            if r.connected:
                assert 0 <= r.two_sided <= 1 and r.one_sided <= r.two_sided + 1e-12

    def test_reproducible(self):
        a = link_expansion_experiment([20], 4, trials=2, seed=5).to_csv()
        b = link_expansion_experiment([20], 4, trials=2, seed=5).to_csv()
        assert a == b

    def test_rho_bounds(self):
        with pytest.raises(ParameterOutOfRange):
            link_expansion_experiment([100], lambda m: m ** -1.4, trials=1, seed=0)
        with pytest.raises(ParameterOutOfRange):
            link_expansion_experiment([100], 1.0, trials=1, seed=0)


class TestReport:
    def test_worked_values(self):
        r = asymptotic_report(1000, 0.4, C=1)
        assert r["confdim_lower"] == pytest.approx(0.1 * math.log(1999), abs=1e-12)
        assert r["confdim_upper"] == pytest.approx(150 * math.log(1999), abs=1e-12)
        assert r["conditional_on_C"]

    def test_boundary_density(self):
        r = asymptotic_report(50, 1 / 3, C=math.e ** 2)
        assert r["confdim_lower"] == pytest.approx(-1.0)

    def test_p_interval(self):
        r = asymptotic_report(10 ** 8, 0.45, C=1)
        assert r["p_interval"][0] == 2 and r["p_interval"][1] == pytest.approx(
            0.5 * 0.35 * math.log(2 * 10 ** 8 - 1))

    def test_log_base(self):
        r = asymptotic_report(1000, 0.4, log_base=2)
        assert r["confdim_lower"] == pytest.approx(0.1 * math.log2(1999))

    def test_threshold(self):
        r = asymptotic_report(1000, 0.4, eta=1)
        ref = 1 / 3 + (math.log(math.log(1000)) - math.log(1)) / (3 * math.log(1000))
        assert r["density_threshold"] == pytest.approx(ref)

    @pytest.mark.parametrize("kw", [dict(m=1, d=0.4), dict(m=10, d=1.5), dict(m=10, d=0.4, C=0),
                                    dict(m=10, d=0.4, eta=2)])
    def test_ranges(self, kw):
        with pytest.raises(OutOfRange):
            asymptotic_report(**kw)


def test_substreams_independent():
    a = make_rng(1, 2, 3).random(4)
    b = make_rng(1, 2, 4).random(4)
    assert not np.allclose(a, b)
