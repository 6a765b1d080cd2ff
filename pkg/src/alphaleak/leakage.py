"""Leakage of a channel: alpha-leakage, Sibson information, PML and friends.

Outputs with zero probability never enter an average over ``Y`` and are
left out of per-outcome reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._numerics import log_sum_powers, lse, projected_ascent
from .core import (
    Channel,
    JointView,
    ProbVec,
    as_channel,
    as_pmf,
    induce,
    tilt,
    uniform,
)
from .exceptions import NonConvergence, UnsupportedOrder, ZeroOutputMass
from .measures import (
    KNVariant,
    arimoto_conditional_entropy,
    check_routes,
    cross_entropy,
    kn_mean,
    renyi_divergence,
    renyi_entropy,
)
from .orders import Order, as_order

ROUTE_TOL = 1e-10
POINTWISE_TOL = 1e-12
SIBSON_ZERO_PROBES = (1e-3, 1e-4, 1e-5)
SIBSON_ZERO_SPREAD = 1e-3


@dataclass(frozen=True)
class LeakageReport:
    """Prior and posterior uncertainty and their difference, in nats.

    ``per_outcome`` holds ``(y, D_a(P_{X|Y=y} || P_X))`` for every output
    with positive probability.
    """

    order: Order
    prior_uncertainty: float
    posterior_uncertainty: float
    leakage: float
    per_outcome: tuple


def _setup(prior, ch):
    return induce(as_pmf(prior), as_channel(ch))


def _posterior(jv: JointView, y):
    post = jv.posteriors[y]
    if post is None:
        raise ZeroOutputMass(y)
    return post


def _ftilde_of_minima(jv: JointView, a: Order):
    """Posterior uncertainty as an f~-mean of minimized cross entropies.

    Each output contributes ``cross_entropy(P_{X|Y=y}, tilt(P_{X|Y=y}))``;
    the mean over outputs is taken in the codomain of ``exp((1-a)/a t)``.
    """
    ys = jv.observed
    py = jv.output_marginal.masses[ys]
    minima = np.array(
        [cross_entropy(jv.posteriors[y], tilt(jv.posteriors[y], a), a) for y in ys]
    )
    if a.is_zero:
        # (a/(1-a)) log E exp(((1-a)/a) h) -> max h as a -> 0
        return float(minima.max())
    if a.is_inf:
        return -lse(np.log(py) - minima)
    return kn_mean(minima, ProbVec._trusted(py), a, KNVariant.FTILDE)


def alpha_leakage(prior, ch, a) -> LeakageReport:
    """Reduction in f~-mean uncertainty about the input after seeing the output.

    Computed as prior Rényi entropy minus Arimoto conditional entropy, and
    cross-checked against the mean of minimized posterior cross entropies.
    """
    a = as_order(a)
    jv = _setup(prior, ch)
    h_prior = renyi_entropy(jv.prior, a)
    h_post = arimoto_conditional_entropy(jv, a)

    h_prior_xe = cross_entropy(jv.prior, tilt(jv.prior, a), a)
    h_post_xe = _ftilde_of_minima(jv, a)
    check_routes("alpha_leakage", h_prior - h_post, h_prior_xe - h_post_xe, ROUTE_TOL)

    per_outcome = tuple(
        (y, renyi_divergence(jv.posteriors[y], jv.prior, a)) for y in jv.observed
    )
    return LeakageReport(a, h_prior, h_post, h_prior - h_post, per_outcome)


def arimoto_mi(prior, ch, a):
    """Arimoto mutual information; same value as ``alpha_leakage(...).leakage``."""
    a = as_order(a)
    jv = _setup(prior, ch)
    return renyi_entropy(jv.prior, a) - arimoto_conditional_entropy(jv, a)


def _sibson_finite(px, w, alpha):
    supp = px > 0
    px, w = px[supp], w[supp]
    per_y = np.array(
        [log_sum_powers((w[:, y], alpha), weight=px) / alpha for y in range(w.shape[1])]
    )
    return alpha / (alpha - 1.0) * lse(per_y)


def _shannon_mi(px, w):
    joint = px[:, None] * w
    py = joint.sum(axis=0)
    nz = joint > 0
    ratio = np.where(nz, w / np.where(py > 0, py, 1.0)[None, :], 1.0)
    return float(np.sum(joint[nz] * np.log(ratio[nz])))


def sibson_mi(prior, ch, a):
    """Sibson mutual information of order ``a``.

    Order 0 has no closed form here; it is the Richardson extrapolation of
    finite probes at ``1e-3, 1e-4, 1e-5`` and raises
    :class:`NonConvergence` if the probes do not settle.
    """
    a = as_order(a)
    px = as_pmf(prior).masses
    w = _setup(prior, ch).channel.rows
    if a.is_one:
        return _shannon_mi(px, w) + 0.0
    if a.is_inf:
        return maximal_leakage(prior, ch)
    if a.is_finite:
        return _sibson_finite(px, w, a.value) + 0.0
    return _sibson_zero_limit(px, w)


def _sibson_zero_limit(px, w):
    probes = SIBSON_ZERO_PROBES
    vals = [_sibson_finite(px, w, b) for b in probes]
    # linear extrapolation to 0 from each consecutive pair of probes
    extrap = [
        v2 - b2 * (v1 - v2) / (b1 - b2)
        for (b1, v1), (b2, v2) in zip(zip(probes, vals), zip(probes[1:], vals[1:]))
    ]
    spread = max(extrap) - min(extrap)
    if not spread < SIBSON_ZERO_SPREAD:
        raise NonConvergence(len(probes), spread)
    # the information is nonnegative; extrapolation noise is not
    return max(extrap[-1], 0.0)


def _likelihood_ratio(jv: JointView, y, supp):
    """``P(x|y) / P(x)`` on ``supp``, via ``P(y|x) / P(y)`` unless that overflows."""
    with np.errstate(over="ignore"):
        r = jv.channel.rows[supp, y] / jv.output_marginal.masses[y]
    if np.all(np.isfinite(r)):
        return r
    return jv.posteriors[y].masses[supp] / jv.prior.masses[supp]


def elementary_leakage(prior, ch, y, a):
    """Leakage caused by observing the single output ``y``.

    Equals ``D_a(P_{X|Y=y} || P_X)``; for finite orders the raw likelihood
    ratio form is evaluated too and the two must agree.
    """
    a = as_order(a)
    jv = _setup(prior, ch)
    post = _posterior(jv, y)
    d = renyi_divergence(post, jv.prior, a)
    if a.is_finite:
        px = jv.prior.masses
        supp = px > 0
        ratio = _likelihood_ratio(jv, y, supp)
        raw = log_sum_powers((ratio, a.value), weight=px[supp]) / (a.value - 1.0)
        check_routes("elementary_leakage", d, raw, POINTWISE_TOL)
    return d


def pml(prior, ch, y):
    """Pointwise maximal leakage of output ``y``, in nats."""
    jv = _setup(prior, ch)
    post = _posterior(jv, y)
    d = renyi_divergence(post, jv.prior, Order.infinity())
    supp = jv.prior.masses > 0
    py = jv.output_marginal.masses[y]
    direct = math.log(float(jv.channel.rows[supp, y].max())) - math.log(py)
    check_routes("pml", d, direct, POINTWISE_TOL)
    return direct + 0.0


def maximal_leakage(prior, ch):
    """``log sum_y max_{x in supp P_X} P(y|x)``, checked against E_Y[exp(PML)]."""
    jv = _setup(prior, ch)
    supp = jv.prior.masses > 0
    direct = math.log(float(jv.channel.rows[supp].max(axis=0).sum()))
    py = jv.output_marginal.masses
    ys = jv.observed
    pmls = np.array([renyi_divergence(jv.posteriors[y], jv.prior, Order.infinity()) for y in ys])
    via_pml = lse(np.log(py[ys]) + pmls)
    check_routes("maximal_leakage", direct, via_pml, ROUTE_TOL)
    return direct + 0.0


def alpha_lift(prior, ch, y, a):
    """Multiplicative per-outcome leakage ``(sum_x P_X (P_{X|y}/P_X)^a)^(1/a)``."""
    a = as_order(a)
    if a.is_zero or a.is_one:
        raise UnsupportedOrder(a, "alpha_lift")
    jv = _setup(prior, ch)
    _posterior(jv, y)  # raises on an unobserved output
    if a.is_inf:
        return math.exp(pml(prior, ch, y))
    px = jv.prior.masses
    supp = px > 0
    ratio = _likelihood_ratio(jv, y, supp)
    return math.exp(log_sum_powers((ratio, a.value), weight=px[supp]) / a.value)


def liao_leakage(prior, ch, a):
    """Log-ratio of best expected alpha-gains after and before observing Y.

    Defined for orders in ``[1, inf]``.  The maximizing decisions are the
    tilted posterior and tilted prior.
    """
    a = as_order(a)
    if a.is_zero or (a.is_finite and a.value < 1.0):
        raise UnsupportedOrder(a, "liao_leakage")
    jv = _setup(prior, ch)
    px = jv.prior.masses
    py = jv.output_marginal.masses
    ys = jv.observed
    if a.is_one:
        # log-gain limit: E log q*(X|Y) - E log q*(X)
        post_gain = sum(
            py[y] * float(np.dot(q[q > 0], np.log(q[q > 0])))
            for y in ys
            for q in [tilt(jv.posteriors[y], a).masses]
        )
        prior_gain = float(np.dot(px[px > 0], np.log(px[px > 0])))
        value = post_gain - prior_gain
    else:
        beta = 1.0 if a.is_inf else (a.value - 1.0) / a.value

        def best_gain(p):
            q = tilt(p, a).masses
            keep = p.masses > 0
            return float(np.dot(p.masses[keep], q[keep] ** beta))

        num = sum(py[y] * best_gain(jv.posteriors[y]) for y in ys)
        den = best_gain(jv.prior)
        value = math.log(num / den) / beta
    check_routes("liao_leakage", value, arimoto_mi(prior, ch, a), ROUTE_TOL)
    return value + 0.0


def optimal_estimator(jv: JointView, a) -> Channel:
    """Decision rule ``P(xhat | y)``: the tilted posterior for each output.

    Rows for outputs of zero probability are uniform; every decision is
    optimal there since they are never observed.
    """
    a = as_order(a)
    n = len(jv.prior)
    rows = []
    for post in jv.posteriors:
        rows.append(np.full(n, 1.0 / n) if post is None else tilt(post, a).masses)
    return Channel._trusted(np.array(rows))


class CapacityResult(NamedTuple):
    best_prior: ProbVec
    value: float
    iterations: int


def _sibson_and_grad(px, w, a: Order):
    if a.is_one:
        py = np.maximum(px @ w, 1e-300)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(w > 0, w * (np.log(np.where(w > 0, w, 1.0)) - np.log(py)), 0.0)
        d = terms.sum(axis=1)  # D(W_x || P_Y)
        return float(np.dot(px, d)), d - 1.0
    alpha = a.value
    g = px @ (w**alpha)  # g_y = sum_x P(x) W(y|x)^a
    s = float(np.sum(g ** (1.0 / alpha)))
    value = alpha / (alpha - 1.0) * math.log(s)
    gf = np.maximum(g, 1e-300) ** (1.0 / alpha - 1.0)
    grad = (w**alpha) @ gf / ((alpha - 1.0) * s)
    return value, grad


def renyi_capacity(ch, a, restarts=8, seed=0, max_iter=20000, tol=1e-10) -> CapacityResult:
    """Order-``a`` channel capacity: the sup over priors of Sibson information.

    Projected gradient ascent from the uniform prior plus ``restarts - 1``
    seeded Dirichlet(0.5) starts.  Order infinity is closed form: maximal
    leakage only depends on the prior's support, so any full-support prior
    attains ``log sum_y max_x P(y|x)``.
    """
    a = as_order(a)
    ch = as_channel(ch)
    if a.is_zero:
        raise UnsupportedOrder(a, "renyi_capacity")
    n = ch.input_size
    if a.is_inf:
        u = uniform(n)
        return CapacityResult(u, maximal_leakage(u, ch), 0)
    w = ch.rows
    rng = np.random.default_rng(seed)
    starts = [np.full(n, 1.0 / n)] + [rng.dirichlet(np.full(n, 0.5)) for _ in range(restarts - 1)]
    runs = [
        projected_ascent(lambda x: _sibson_and_grad(x, w, a), x0, tol, max_iter)
        for x0 in starts
    ]
    done = [r for r in runs if r[4]]
    if not done:
        worst = max(runs, key=lambda r: r[3])
        raise NonConvergence(worst[2], worst[3])
    x, f, iters, _, _ = max(done, key=lambda r: r[1])
    x = np.maximum(x, 0.0)
    x = x / x.sum()
    prior = ProbVec._trusted(x)
    return CapacityResult(prior, sibson_mi(prior, ch, a), iters)
