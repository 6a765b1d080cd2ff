import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from alphaleak import (
    Channel,
    DimensionMismatch,
    EmptySubset,
    EmptyVector,
    InvalidIndex,
    NegativeMass,
    NonFiniteMass,
    ProbVec,
    SumOutOfTolerance,
    ZeroTotal,
    binomial,
    bsc,
    induce,
    joint_to_prior_channel,
    markov_chain,
    point_mass,
    restrict,
    support,
    tilt,
    uniform,
    validate_pmf,
)
from conftest import finite_orders, pmfs, priors_and_channels, tagged_orders


class TestValidation:
    def test_valid_passes_unchanged(self):
        p = validate_pmf([0.75, 0.25])
        assert list(p.masses) == [0.75, 0.25]

    def test_sum_out_of_tolerance(self):
        with pytest.raises(SumOutOfTolerance) as exc:
            validate_pmf([0.5, 0.5, 0.1])
        assert exc.value.actual_sum == pytest.approx(1.1)

    def test_negative_mass_index(self):
        with pytest.raises(NegativeMass) as exc:
            validate_pmf([1.0, -1e-6])
        assert exc.value.index == 1

    def test_empty(self):
        with pytest.raises(EmptyVector):
            validate_pmf([])

    def test_non_finite(self):
        with pytest.raises(NonFiniteMass):
            validate_pmf([math.nan, 1.0])

    def test_no_renormalization(self):
        p = validate_pmf([0.5, 0.5 + 5e-10])
        assert p.masses[1] == 0.5 + 5e-10

    def test_masses_are_read_only(self):
        p = validate_pmf([0.5, 0.5])
        with pytest.raises(ValueError):
            p.masses[0] = 1.0

    def test_label_length_checked(self):
        with pytest.raises(DimensionMismatch):
            ProbVec([0.5, 0.5], labels=["a"])

    def test_channel_rows_validated(self):
        with pytest.raises(SumOutOfTolerance) as exc:
            Channel([[0.5, 0.5], [0.3, 0.3]])
        assert exc.value.where == 1

    def test_ragged_channel(self):
        with pytest.raises(DimensionMismatch):
            Channel([[1.0], [0.5, 0.5]])


class TestSupport:
    def test_examples(self):
        assert support([0.5, 0, 0.5]) == {0, 2}
        assert support([1.0]) == {0}
        assert support(binomial(20, 0.5)) == set(range(21))


class TestTilt:
    def test_square(self):
        np.testing.assert_allclose(tilt([0.75, 0.25], 2).masses, [0.9, 0.1], atol=1e-15)

    @pytest.mark.parametrize("a,x,want", [(10, 10, 0.55101042022581), (0.01, 10, 0.0495378599076811)])
    def test_tilted_binomial_points(self, a, x, want):
        assert tilt(binomial(20, 0.5), a)[x] == pytest.approx(want, abs=1e-13)

    def test_infinity_unique_argmax(self):
        assert list(tilt([0.5, 0.25, 0.25], math.inf).masses) == [1, 0, 0]

    def test_zero_is_uniform_on_support(self):
        assert list(tilt([0.5, 0, 0.5], 0).masses) == [0.5, 0, 0.5]

    def test_infinity_ties_within_relative_tolerance(self):
        p = [0.4, 0.4 * (1 - 1e-13), 0.2 + 0.4e-13]
        np.testing.assert_allclose(tilt(p, math.inf).masses, [0.5, 0.5, 0])

    def test_large_order_no_overflow(self):
        q = tilt(binomial(20, 0.5), 2000).masses
        assert np.all(np.isfinite(q)) and q[10] > 0.999

    @given(pmfs())
    def test_one_is_identity(self, p):
        assert np.array_equal(tilt(p, 1).masses, p)

    @given(st.integers(1, 8), tagged_orders)
    def test_uniform_fixed_point(self, n, a):
        np.testing.assert_allclose(tilt(uniform(n), a).masses, np.full(n, 1 / n), atol=1e-15)

    @given(pmfs(), finite_orders, finite_orders)
    def test_escort_composition(self, p, a, b):
        lhs = tilt(tilt(p, a), b).masses
        rhs = tilt(p, a * b).masses if a * b != 1 else p
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    @given(pmfs())
    def test_sharpening_above_one(self, p):
        top = p >= (1 - 1e-12) * p.max()
        maxima = []
        for a in (1, 2, 5, 10, 50):
            q = tilt(p, a).masses
            if a > 1:
                assert np.array_equal(q >= (1 - 1e-9) * q.max(), top)
            maxima.append(q.max())
        assert all(b >= a - 1e-12 for a, b in zip(maxima, maxima[1:]))

    @given(pmfs(), st.floats(0.01, 0.99))
    def test_flattening_below_one(self, p, a):
        q = tilt(p, a).masses
        s = p > 0
        assert q.max() <= p.max() + 1e-12
        assert q[s].min() >= p[s].min() - 1e-12

    @given(pmfs(), finite_orders)
    def test_result_is_pmf_on_same_support(self, p, a):
        q = tilt(p, a).masses
        assert abs(q.sum() - 1) < 1e-12
        assert np.all(q[p == 0] == 0)
        # kept wherever the tilted mass is representable
        with np.errstate(divide="ignore"):
            visible = a * np.log(p / p.max()) > -650
        assert np.all(q[visible] > 0)


class TestInduce:
    def test_bsc_uniform(self):
        jv = induce(uniform(2), bsc(0.1))
        np.testing.assert_allclose(jv.output_marginal.masses, [0.5, 0.5])
        np.testing.assert_allclose(jv.posterior(0).masses, [0.9, 0.1])

    def test_point_mass_input(self):
        ch = Channel([[0.3, 0.7], [0.6, 0.4]])
        jv = induce(point_mass(2, 0), ch)
        np.testing.assert_allclose(jv.output_marginal.masses, [0.3, 0.7])
        for y in jv.observed:
            assert list(jv.posterior(y).masses) == [1.0, 0.0]

    def test_z_channel(self):
        jv = induce(uniform(2), [[1, 0], [0.5, 0.5]])
        np.testing.assert_allclose(jv.posterior(1).masses, [0, 1])

    def test_absent_posterior(self):
        jv = induce([1.0, 0.0], [[1, 0], [0, 1]])
        assert jv.posterior(1) is None and jv.observed == [0]

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            induce(uniform(3), bsc(0.1))

    @given(priors_and_channels())
    def test_bayes_consistency(self, inst):
        px, w = inst
        jv = induce(px, w)
        py = jv.output_marginal.masses
        np.testing.assert_allclose(py, px @ w, atol=1e-15)
        for y in range(py.size):
            post = jv.posterior(y)
            if py[y] == 0:
                assert post is None
                continue
            assert abs(post.masses.sum() - 1) < 1e-9
            np.testing.assert_allclose(px * w[:, y], py[y] * post.masses, atol=1e-12)


class TestRestrict:
    def test_examples(self):
        s = restrict([0.5, 0.25, 0.25], {1, 2})
        assert list(s.masses) == [0.25, 0.25] and s.total == 0.5
        assert restrict([0.5, 0.5], {0, 1}).total == 1.0

    def test_errors(self):
        with pytest.raises(ZeroTotal):
            restrict([0.5, 0.5, 0], {2})
        with pytest.raises(EmptySubset):
            restrict([1.0], set())
        with pytest.raises(InvalidIndex):
            restrict([1.0], {3})


def test_binomial_exact_center():
    assert binomial(20, 0.5)[10] == pytest.approx(math.comb(20, 10) / 2**20, abs=1e-16)


def test_joint_factorization():
    prior, ch = joint_to_prior_channel([[0.2, 0.2], [0.0, 0.0], [0.1, 0.5]])
    np.testing.assert_allclose(prior.masses, [0.4, 0.0, 0.6])
    np.testing.assert_allclose(ch.rows[2], [1 / 6, 5 / 6])
    np.testing.assert_allclose(ch.rows[1], [0.5, 0.5])


@given(priors_and_channels(), st.integers(2, 4), st.randoms(use_true_random=False))
def test_markov_chain_output_law(inst, nu, rnd):
    px, w = inst
    rng = np.random.default_rng(rnd.randint(0, 2**31))
    kern = rng.dirichlet(np.ones(nu), size=px.size)
    pu, wu = markov_chain(px, kern, w)
    # same output marginal through U as through X
    np.testing.assert_allclose(pu.masses @ wu.rows, px @ w, atol=1e-12)
    np.testing.assert_allclose(pu.masses, px @ kern, atol=1e-15)
