"""Row producers shared by the CLI and the verification suites."""

from __future__ import annotations

from .core import binomial, induce, tilt
from .leakage import arimoto_mi, liao_leakage, maximal_leakage, sibson_mi
from .measures import arimoto_conditional_entropy, renyi_entropy, renyi_probability
from .orders import as_order

FIG1_ALPHAS = (10.0, 5.0, 1.0, 0.5, 0.01)


def fig1_rows(n=20, p=0.5, alphas=FIG1_ALPHAS):
    """``(alpha, x, mass)`` rows of the tilted Binomial(n, p) pmf."""
    base = binomial(n, p)
    rows = []
    for a in alphas:
        q = tilt(base, as_order(a)).masses
        rows += [(float(a), x, float(q[x])) for x in range(n + 1)]
    return rows


# name -> (input kind, function of (input, order), additive in nats?)
SWEEP_MEASURES = {
    "entropy": ("dist", lambda p, a: renyi_entropy(p, a), True),
    "renyi-probability": ("dist", lambda p, a: renyi_probability(p, a), False),
    "arimoto-cond": (
        "channel", lambda c, a: arimoto_conditional_entropy(induce(c.prior, c.channel), a), True,
    ),
    "leakage": ("channel", lambda c, a: arimoto_mi(c.prior, c.channel, a), True),
    "sibson": ("channel", lambda c, a: sibson_mi(c.prior, c.channel, a), True),
    "liao": ("channel", lambda c, a: liao_leakage(c.prior, c.channel, a), True),
    "maxleak": ("channel", lambda c, a: maximal_leakage(c.prior, c.channel), True),
}
