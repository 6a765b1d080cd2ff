"""Rényi-order measures of a single pmf, a pair of pmfs, or a joint view.

Every value is in nats.  Sums run over the support of the averaging pmf
(0 * log 0 = 0 and 0 * inf = 0 inside sums) and are evaluated as
log-sum-exp, so orders in the thousands on skewed pmfs stay finite.

Zero-mass conventions for a decision ``q`` that vanishes on part of the
support of ``p``: finite orders below 1, order 1 and order 0 give ``+inf``;
finite orders above 1 just drop those terms; order infinity is ``+inf``
only if ``sum(p * q) == 0``.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from ._numerics import close, log0, log_sum_powers, lse
from .core import JointView, ProbVec, as_pmf, tilt
from .exceptions import DimensionMismatch, RouteMismatch, UnsupportedOrder
from .orders import as_order


class KNVariant(enum.Enum):
    """Generator of a Kolmogorov-Nagumo mean.

    ``F`` is ``exp((1 - a) t)``; ``FTILDE`` is ``exp((1 - a) / a * t)``.
    """

    F = "f"
    FTILDE = "ftilde"


def _pair(p, q):
    p, q = as_pmf(p), as_pmf(q)
    if len(p) != len(q):
        raise DimensionMismatch(f"alphabets differ: {len(p)} vs {len(q)}")
    return p.masses, q.masses


def _nonneg(v):
    # Turns -0.0 into 0.0; leaves roundoff negatives visible.
    return float(v) + 0.0


def _kn_coefficient(a, variant):
    return (1.0 - a) if variant is KNVariant.F else (1.0 - a) / a


def kn_mean(values, weights, a, variant=KNVariant.FTILDE):
    """Kolmogorov-Nagumo mean ``g^-1(sum_i w_i g(v_i))`` of ``values``.

    Only finite orders and order 1 are accepted; at order 1 both generators
    degenerate to the arithmetic mean.
    """
    a = as_order(a)
    v = np.asarray(values, dtype=float)
    w = as_pmf(weights).masses
    if v.shape != w.shape:
        raise DimensionMismatch(f"{v.size} values for {w.size} weights")
    if not (a.is_finite or a.is_one):
        raise UnsupportedOrder(a, "kn_mean")
    keep = w > 0
    v, w = v[keep], w[keep]
    if a.is_one:
        if np.any(np.isinf(v)):
            return math.inf
        return float(np.dot(w, v))
    c = _kn_coefficient(a.value, variant)
    with np.errstate(invalid="ignore"):
        terms = np.log(w) + c * v
    return lse(terms) / c


def renyi_entropy(p, a):
    """Rényi entropy of order ``a`` in nats."""
    p = as_pmf(p)
    a = as_order(a)
    m = p.masses[p.masses > 0]
    if a.is_zero:
        return math.log(m.size)
    if a.is_one:
        return _nonneg(-np.dot(m, np.log(m)))
    if a.is_inf:
        return _nonneg(-math.log(m.max()))
    return _nonneg(log_sum_powers((m, a.value)) / (1.0 - a.value))


def subset_uncertainty(s, p_full, a, variant=KNVariant.F):
    """Uncertainty of a generalized (sub-normalized) distribution.

    ``F`` measures the raw masses; ``FTILDE`` measures the tilted masses of
    ``p_full`` on the same indices.  A singleton ``{x}`` gives
    ``-log p(x)`` and ``-log tilt(p)(x)`` respectively.
    """
    a = as_order(a)
    if not a.is_finite:
        raise UnsupportedOrder(a, "subset_uncertainty")
    alpha = a.value
    m = np.asarray(s.masses)
    keep = m > 0
    w = m[keep] / s.total
    if variant is KNVariant.F:
        return log_sum_powers((m[keep], alpha - 1.0), weight=w) / (1.0 - alpha)
    pa = tilt(p_full, a).masses[np.asarray(s.indices)[keep]]
    beta = (alpha - 1.0) / alpha
    return alpha / (1.0 - alpha) * log_sum_powers((pa, beta), weight=w)


def cross_entropy(p, q, a):
    """Order-``a`` cross entropy of decision ``q`` averaged under ``p``.

    Minimized over ``q`` by ``tilt(p, a)``, where it equals
    ``renyi_entropy(p, a)``.
    """
    pm, qm = _pair(p, q)
    a = as_order(a)
    supp = pm > 0
    pm, lq = pm[supp], log0(qm[supp])
    if a.is_zero:
        return _nonneg(-lq.min())
    if a.is_one:
        if np.any(np.isneginf(lq)):
            return math.inf
        return _nonneg(-np.dot(pm, lq))
    if a.is_inf:
        s = float(np.dot(pm, qm[supp]))
        return math.inf if s == 0.0 else _nonneg(-math.log(s))
    alpha = a.value
    beta = (alpha - 1.0) / alpha
    return _nonneg(alpha / (1.0 - alpha) * log_sum_powers((qm[supp], beta), weight=pm))


class MinCrossEntropy(NamedTuple):
    minimizer: ProbVec
    minimum: float


def min_cross_entropy(p, a):
    """Closed-form minimum of :func:`cross_entropy` over the decision."""
    return MinCrossEntropy(tilt(p, a), renyi_entropy(p, a))


def renyi_divergence(p, q, a):
    """Rényi divergence ``D_a(p || q)`` in nats (``+inf`` when undefined)."""
    pm, qm = _pair(p, q)
    a = as_order(a)
    supp = pm > 0
    pm, qs = pm[supp], qm[supp]
    if a.is_zero:
        s = float(qs.sum())
        return math.inf if s == 0.0 else _nonneg(-math.log(s))
    lp, lq = np.log(pm), log0(qs)
    if a.is_one:
        if np.any(qs == 0):
            return math.inf
        return _nonneg(np.dot(pm, lp - lq))
    if a.is_inf:
        return _nonneg(np.max(lp - lq))
    alpha = a.value
    return _nonneg(log_sum_powers((pm, alpha), (qs, 1.0 - alpha)) / (alpha - 1.0))


def alpha_loss(p, q, a):
    """Multiplicative loss ``exp(cross_entropy(p, q, a))``, in ``[1, inf]``."""
    h = cross_entropy(p, q, a)
    # past the float range the loss saturates to inf
    return math.inf if h > 709.78 else math.exp(h)


def alpha_loss_power_mean(p, q, a):
    """The same loss written as a power mean of ``1 / q``.

    Evaluated as a weighted power mean; kept separate from
    :func:`alpha_loss` so the two can be checked against each other.
    """
    pm, qm = _pair(p, q)
    a = as_order(a)
    supp = pm > 0
    pm, qs = pm[supp], qm[supp]
    with np.errstate(divide="ignore"):
        if a.is_zero:
            return float(np.max(1.0 / qs))
        if a.is_one:
            return float(np.prod(qs ** (-pm)))
        if a.is_inf:
            s = float(np.dot(pm, qs))
            return math.inf if s == 0.0 else 1.0 / s
        alpha = a.value
        r = (1.0 - alpha) / alpha
        if np.any(qs == 0):
            return math.inf if r > 0 else float(np.power(np.dot(pm, (1.0 / qs) ** r), 1.0 / r))
        z = lse(np.log(pm) - r * np.log(qs)) / r
        return math.inf if z > 709.78 else math.exp(z)


def liao_loss(p, q, a):
    """Expected loss with elementary loss ``a/(a-1) * (1 - q^((a-1)/a))``.

    Defined for orders in ``[1, inf]``: order 1 is the expected log-loss and
    order infinity the expected 0-1 loss.
    """
    pm, qm = _pair(p, q)
    a = as_order(a)
    if a.is_zero or (a.is_finite and a.value < 1.0):
        raise UnsupportedOrder(a, "liao_loss")
    supp = pm > 0
    pm, qs = pm[supp], qm[supp]
    if a.is_one:
        if np.any(qs == 0):
            return math.inf
        return float(-np.dot(pm, np.log(qs)))
    if a.is_inf:
        return float(1.0 - np.dot(pm, qs))
    alpha = a.value
    beta = (alpha - 1.0) / alpha
    return float(np.dot(pm, (1.0 - qs**beta) / beta))


def renyi_probability(p, a):
    """``(sum p^a)^(1/(a-1))``, whose negative log is the Rényi entropy."""
    p = as_pmf(p)
    a = as_order(a)
    if not a.is_finite:
        return math.exp(-renyi_entropy(p, a))
    m = p.masses[p.masses > 0]
    return float(np.sum(m**a.value) ** (1.0 / (a.value - 1.0)))


def arimoto_conditional_entropy(jv: JointView, a):
    """Arimoto conditional entropy of the input given the output.

    Order 0 uses the exact limit ``max_y log |supp P_{X|Y=y}|``.
    """
    a = as_order(a)
    py = jv.output_marginal.masses
    ys = jv.observed
    posts = [jv.posteriors[y].masses for y in ys]
    if a.is_zero:
        return max(math.log(np.count_nonzero(q)) for q in posts)
    if a.is_one:
        return _nonneg(sum(py[y] * renyi_entropy(q, a) for y, q in zip(ys, posts)))
    if a.is_inf:
        return _nonneg(-math.log(float(jv.joint.max(axis=0).sum())))
    alpha = a.value
    # log (sum_x q^a)^(1/a) for each observed output
    inner = np.array([log_sum_powers((q[q > 0], alpha)) / alpha for q in posts])
    if np.all(np.abs(inner) < 600):
        s = math.log(float(np.dot(py[ys], np.exp(inner))))
    else:
        s = lse(np.log(py[ys]) + inner)
    return _nonneg(alpha / (1.0 - alpha) * s)


def conditional_renyi_probability(jv: JointView, a):
    """Power mean over outputs of the posterior Rényi probabilities.

    Computed in the linear domain from the posteriors, as a second route to
    ``exp(-arimoto_conditional_entropy(jv, a))``.
    """
    a = as_order(a)
    if a.is_inf:
        return float(jv.joint.max(axis=0).sum())
    if not a.is_finite:
        return math.exp(-arimoto_conditional_entropy(jv, a))
    alpha = a.value
    py = jv.output_marginal.masses
    r = (alpha - 1.0) / alpha
    s = sum(py[y] * renyi_probability(jv.posteriors[y], a) ** r for y in jv.observed)
    return float(s ** (1.0 / r))


def alternate_cross_entropy_vv(p, q, a):
    """``1/(1-a) * log sum p q^(a-1)``; its minimum over ``q`` is not H_a."""
    pm, qm = _pair(p, q)
    a = as_order(a)
    if not a.is_finite:
        raise UnsupportedOrder(a, "alternate_cross_entropy_vv")
    alpha = a.value
    supp = pm > 0
    return _nonneg(
        log_sum_powers((qm[supp], alpha - 1.0), weight=pm[supp]) / (1.0 - alpha)
    )


def check_routes(what, first, second, tol):
    """Raise :class:`RouteMismatch` unless two evaluations agree."""
    if not close(first, second, tol):
        raise RouteMismatch(what, first, second, tol)
