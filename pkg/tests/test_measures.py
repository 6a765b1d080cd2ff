import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from alphaleak import (
    DimensionMismatch,
    KNVariant,
    UnsupportedOrder,
    alpha_loss,
    alternate_cross_entropy_vv,
    arimoto_conditional_entropy,
    bsc,
    conditional_renyi_probability,
    cross_entropy,
    identity_channel,
    induce,
    kn_mean,
    liao_loss,
    min_cross_entropy,
    renyi_divergence,
    renyi_entropy,
    renyi_probability,
    restrict,
    subset_uncertainty,
    tilt,
    uniform,
)
from alphaleak.measures import alpha_loss_power_mean
from conftest import any_order, finite_orders, pmfs, priors_and_channels, tagged_orders

INF = math.inf
LN2 = math.log(2)


class TestKNMean:
    def test_cross_entropy_example(self):
        v = -np.log([0.9, 0.1])
        assert kn_mean(v, [0.75, 0.25], 2, KNVariant.F) == pytest.approx(-math.log(0.7), abs=1e-12)

    @given(pmfs())
    def test_against_uniform_gives_log_n(self, p):
        v = np.full(p.size, math.log(p.size))
        assert kn_mean(v, p, 2, KNVariant.F) == pytest.approx(math.log(p.size), abs=1e-12)

    @given(pmfs(zeros=False), finite_orders)
    def test_self_information_gives_entropy(self, p, a):
        assert kn_mean(-np.log(p), p, a, KNVariant.F) == pytest.approx(renyi_entropy(p, a), abs=1e-10)

    def test_order_one_is_arithmetic_mean(self):
        assert kn_mean([1.0, 3.0], [0.5, 0.5], 1) == 2.0

    @pytest.mark.parametrize("a", [0, INF])
    def test_extended_tags_rejected(self, a):
        with pytest.raises(UnsupportedOrder):
            kn_mean([1.0], [1.0], a)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            kn_mean([1.0, 2.0], [1.0], 2)


class TestEntropy:
    @given(st.integers(1, 9), any_order)
    def test_uniform(self, n, a):
        assert renyi_entropy(uniform(n), a) == pytest.approx(math.log(n), abs=1e-12)

    @pytest.mark.parametrize("a,want", [(0, math.log(3)), (1, 1.5 * LN2), (INF, LN2)])
    def test_tags(self, a, want):
        assert renyi_entropy([0.5, 0.25, 0.25], a) == pytest.approx(want, abs=1e-15)

    def test_square(self):
        assert renyi_entropy([0.75, 0.25], 2) == pytest.approx(math.log(1.6), abs=1e-15)

    @given(pmfs())
    def test_nonincreasing_in_order(self, p):
        grid = [0, 0.1, 0.5, 0.9, 1, 1.1, 2, 5, 10, 100, INF]
        h = [renyi_entropy(p, a) for a in grid]
        assert all(b <= a + 1e-12 for a, b in zip(h, h[1:]))
        assert min(h) >= 0

    def test_huge_order_on_skewed_pmf(self):
        h = renyi_entropy([1 - 1e-12, 1e-12], 5000)
        assert math.isfinite(h) and h >= 0


class TestSubsetUncertainty:
    @given(pmfs(zeros=False), finite_orders, st.data())
    def test_singletons(self, p, a, data):
        x = data.draw(st.integers(0, p.size - 1))
        s = restrict(p, {x})
        assert subset_uncertainty(s, p, a, KNVariant.F) == pytest.approx(-math.log(p[x]), abs=1e-10)
        assert subset_uncertainty(s, p, a, KNVariant.FTILDE) == pytest.approx(
            -math.log(tilt(p, a)[x]), abs=1e-10
        )

    @given(pmfs(), finite_orders)
    def test_full_set(self, p, a):
        s = restrict(p, range(p.size))
        for variant in KNVariant:
            assert subset_uncertainty(s, p, a, variant) == pytest.approx(renyi_entropy(p, a), abs=1e-10)

    def test_tags_rejected(self):
        with pytest.raises(UnsupportedOrder):
            subset_uncertainty(restrict([1.0], {0}), [1.0], 1)


class TestCrossEntropy:
    @given(pmfs(), any_order)
    def test_against_uniform(self, p, a):
        assert cross_entropy(p, uniform(p.size), a) == pytest.approx(math.log(p.size), abs=1e-12)

    def test_minimizer_case(self):
        assert cross_entropy([0.75, 0.25], [0.9, 0.1], 2) == pytest.approx(math.log(1.6), abs=1e-12)

    def test_log_loss_on_zero_mass(self):
        assert cross_entropy([0.5, 0.5], [1, 0], 1) == INF

    @pytest.mark.parametrize("a,want", [(0, INF), (0.5, INF), (1, INF), (2, None), (INF, None)])
    def test_zero_mass_conventions(self, a, want):
        p, q = [0.5, 0.5], [1.0, 0.0]
        v = cross_entropy(p, q, a)
        if want is None:
            assert math.isfinite(v)
        else:
            assert v == want

    def test_infinity_disjoint_support(self):
        assert cross_entropy([1, 0], [0, 1], INF) == INF
        assert cross_entropy([1, 0], [0, 1], 3) == INF  # nothing left of the sum

    def test_zero_mass_in_p_ignored(self):
        assert cross_entropy([1.0, 0.0], [0.5, 0.5], 0.5) == pytest.approx(LN2)

    @given(pmfs())
    def test_self_at_one_is_shannon(self, p):
        assert cross_entropy(p, p, 1) == pytest.approx(renyi_entropy(p, 1), abs=1e-12)

    @given(pmfs(2, 6), tagged_orders, st.lists(pmfs(6, 6), min_size=20, max_size=20))
    def test_minimum_at_tilt(self, p, a, qs):
        h = renyi_entropy(p, a)
        assert cross_entropy(p, tilt(p, a), a) == pytest.approx(h, abs=1e-10)
        for q in qs:
            q = q[: p.size] / q[: p.size].sum() if q[: p.size].sum() > 0 else uniform(p.size).masses
            assert cross_entropy(p, q, a) >= h - 1e-10

    @given(pmfs(), pmfs())
    def test_decomposition_at_one(self, p, q):
        if p.size != q.size:
            return
        xe = cross_entropy(p, q, 1)
        rhs = renyi_entropy(p, 1) + renyi_divergence(p, q, 1)
        assert (xe == rhs == INF) or xe == pytest.approx(rhs, abs=1e-12)

    @given(st.integers(2, 5), finite_orders, st.floats(0.01, 0.99), st.randoms(use_true_random=False))
    def test_convexity_flip(self, n, a, t, rnd):
        rng = np.random.default_rng(rnd.randint(0, 2**31))
        p, q1, q2 = rng.dirichlet(np.ones(n), size=3)
        beta = (a - 1) / a
        g = lambda q: float(np.dot(p, q**beta))
        mid, chord = g(t * q1 + (1 - t) * q2), t * g(q1) + (1 - t) * g(q2)
        if a > 1:
            assert mid >= chord - 1e-12  # concave
        else:
            assert mid <= chord * (1 + 1e-12)  # convex

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cross_entropy([1.0], [0.5, 0.5], 2)


class TestMinCrossEntropy:
    def test_examples(self):
        q, h = min_cross_entropy([0.75, 0.25], 2)
        np.testing.assert_allclose(q.masses, [0.9, 0.1])
        assert h == pytest.approx(0.470004, abs=1e-6)
        q, h = min_cross_entropy([0.5, 0.25, 0.25], 0)
        np.testing.assert_allclose(q.masses, np.full(3, 1 / 3))
        assert h == pytest.approx(math.log(3))

    @given(pmfs())
    def test_one(self, p):
        q, h = min_cross_entropy(p, 1)
        assert np.array_equal(q.masses, p) and h == renyi_entropy(p, 1)


class TestDivergence:
    @given(pmfs(), any_order)
    def test_self_is_zero(self, p, a):
        assert renyi_divergence(p, p, a) == pytest.approx(0, abs=1e-12)

    def test_examples(self):
        assert renyi_divergence([0.9, 0.1], [0.75, 0.25], 2) == pytest.approx(math.log(1.12), abs=1e-12)
        assert renyi_divergence([0.9, 0.1], [0.5, 0.5], INF) == pytest.approx(math.log(1.8), abs=1e-12)

    def test_support_mismatch(self):
        assert renyi_divergence([0.5, 0.5], [1, 0], 1) == INF
        assert renyi_divergence([0.5, 0.5], [1, 0], 2) == INF
        assert renyi_divergence([0.5, 0.5], [1, 0], 0) == 0.0  # q covers the support of p
        assert renyi_divergence([1, 0], [0.5, 0.5], 0) == pytest.approx(LN2)
        assert math.isfinite(renyi_divergence([0.5, 0.5], [1, 0], 0.5))

    @given(pmfs(), pmfs(), any_order)
    def test_nonnegative(self, p, q, a):
        if p.size == q.size:
            assert renyi_divergence(p, q, a) >= -1e-12


class TestLoss:
    @given(pmfs(), any_order)
    def test_uniform_decision(self, p, a):
        assert alpha_loss(p, uniform(p.size), a) == pytest.approx(p.size, rel=1e-12)

    def test_examples(self):
        assert alpha_loss([0.75, 0.25], [0.9, 0.1], 2) == pytest.approx(1.6, rel=1e-12)
        assert alpha_loss([0.5, 0.5], [0, 1], 0) == INF

    @given(pmfs(), pmfs(), any_order)
    def test_exp_of_cross_entropy_and_power_mean(self, p, q, a):
        if p.size != q.size:
            return
        xe, loss = cross_entropy(p, q, a), alpha_loss(p, q, a)
        if xe > 709.78:  # beyond the float range
            assert loss == INF == alpha_loss_power_mean(p, q, a)
        else:
            assert loss == pytest.approx(math.exp(xe), rel=1e-12)
            assert alpha_loss_power_mean(p, q, a) == pytest.approx(loss, rel=1e-10)
            assert loss >= 1 - 1e-12


class TestLiaoLoss:
    def test_examples(self):
        assert liao_loss([1, 0], [1, 0], INF) == 0
        assert liao_loss([0.5, 0.5], [0.5, 0.5], INF) == pytest.approx(0.5)
        direct = 0.75 * -math.log(0.9) + 0.25 * -math.log(0.1)
        assert liao_loss([0.75, 0.25], [0.9, 0.1], 1) == pytest.approx(direct, abs=1e-12)
        assert direct == pytest.approx(0.654667, abs=1e-6)

    @pytest.mark.parametrize("a", [0, 0.5])
    def test_domain(self, a):
        with pytest.raises(UnsupportedOrder):
            liao_loss([0.5, 0.5], [0.5, 0.5], a)

    def test_finite_order_between_log_loss_and_zero_one(self):
        p, q = [0.75, 0.25], [0.9, 0.1]
        v = liao_loss(p, q, 2)
        assert liao_loss(p, q, INF) < v < liao_loss(p, q, 1)


class TestRenyiProbability:
    def test_examples(self):
        assert renyi_probability(uniform(4), 2) == pytest.approx(0.25, abs=1e-15)
        assert renyi_probability([0.75, 0.25], 2) == pytest.approx(0.625, abs=1e-15)
        assert renyi_probability([1.0, 0.0], 3) == 1.0
        assert renyi_probability([1.0, 0.0], INF) == 1.0

    @given(pmfs(), any_order)
    def test_negative_log_is_entropy(self, p, a):
        assert -math.log(renyi_probability(p, a)) == pytest.approx(renyi_entropy(p, a), abs=1e-12)


class TestArimotoConditional:
    def test_bsc(self):
        jv = induce(uniform(2), bsc(0.1))
        assert arimoto_conditional_entropy(jv, 2) == pytest.approx(-math.log(0.82), abs=1e-12)
        assert arimoto_conditional_entropy(jv, 0) == pytest.approx(LN2)

    def test_identity_channel(self):
        jv = induce([0.2, 0.3, 0.5], identity_channel(3))
        assert arimoto_conditional_entropy(jv, INF) == 0

    @given(priors_and_channels(), any_order)
    def test_power_mean_route(self, inst, a):
        jv = induce(*inst)
        h = arimoto_conditional_entropy(jv, a)
        assert -math.log(conditional_renyi_probability(jv, a)) == pytest.approx(h, abs=1e-12)

    @given(priors_and_channels(), any_order)
    def test_conditioning_reduces(self, inst, a):
        jv = induce(*inst)
        assert arimoto_conditional_entropy(jv, a) <= renyi_entropy(jv.prior, a) + 1e-12

    @given(priors_and_channels(zeros=False))
    def test_zero_tag_is_limit(self, inst):
        from alphaleak import limit_probe

        # p ** a -> 1 only like 1 + a log p, so tiny masses need far smaller a
        assume(inst[0].min() > 1e-3)
        jv = induce(*inst)
        res = limit_probe(lambda a: arimoto_conditional_entropy(jv, a), 0, [1e-2, 1e-3, 1e-4])
        assert res.estimate == pytest.approx(arimoto_conditional_entropy(jv, 0), abs=2e-2)


class TestAlternateCrossEntropy:
    @given(pmfs(), finite_orders)
    def test_self(self, p, a):
        assert alternate_cross_entropy_vv(p, p, a) == pytest.approx(renyi_entropy(p, a), abs=1e-10)

    def test_minimum_is_not_renyi_entropy(self):
        p = np.array([0.75, 0.25])
        best = min(alternate_cross_entropy_vv(p, [t, 1 - t], 2) for t in np.linspace(0.001, 0.999, 999))
        assert best < renyi_entropy(p, 2) - 1e-3

    def test_tags_rejected(self):
        with pytest.raises(UnsupportedOrder):
            alternate_cross_entropy_vv([1.0], [1.0], INF)
