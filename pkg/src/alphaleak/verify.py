"""Randomized verification suites.

Each suite draws its instances from a seeded generator, compares two
independent evaluations of the same quantity, and returns one
:class:`Check` per property.  The CLI ``verify`` command and the acceptance
tests both run these.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional

import numpy as np

from .core import ProbVec, bsc, induce, markov_chain, restrict, tilt, uniform
from .exceptions import AlphaLeakError, BoundExceeded, NumericalError
from .leakage import (
    alpha_leakage,
    arimoto_mi,
    liao_leakage,
    maximal_leakage,
    pml,
    renyi_divergence,
    sibson_mi,
)
from .measures import (
    KNVariant,
    alpha_loss,
    alpha_loss_power_mean,
    arimoto_conditional_entropy,
    conditional_renyi_probability,
    cross_entropy,
    kn_mean,
    renyi_entropy,
    renyi_probability,
    subset_uncertainty,
)
from .oracle import (
    DEFAULT_SEED,
    GridSpec,
    limit_probe,
    projected_gradient_min,
    simplex_grid_min,
    sup_leakage_search,
)
from .orders import Order, as_order
from .tables import FIG1_ALPHAS, fig1_rows

INF = math.inf
TAG_GRID = (0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, INF)


@dataclass
class Check:
    """Outcome of one property over many instances."""

    name: str
    checked: int = 0
    failures: int = 0
    worst: float = 0.0
    tol: float = 0.0
    note: str = ""

    @property
    def passed(self):
        return self.checked > 0 and self.failures == 0

    def record(self, err, ok=None):
        """Count one instance; ``err`` is the discrepancy (``inf`` if undefined)."""
        self.checked += 1
        if not (err <= self.worst):
            self.worst = float(err)
        if ok is None:
            ok = err <= self.tol
        if not ok:
            self.failures += 1

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status} {self.name}: {self.checked - self.failures}/{self.checked} ok, "
            f"worst {self.worst:.3g} (tol {self.tol:g})"
        )
        return text + (f"; {self.note}" if self.note else "")


def gap(a, b, relative=False):
    """Absolute (or relative) discrepancy; matching infinities give 0."""
    if math.isinf(a) or math.isinf(b):
        return 0.0 if a == b else INF
    d = abs(a - b)
    return d / max(1.0, abs(a)) if relative else d


# ---------------------------------------------------------------- instances


def random_pmf(rng, n, zero_prob=0.0):
    p = rng.dirichlet(np.ones(n))
    if zero_prob and n > 1:
        drop = rng.random(n) < zero_prob
        if drop.all():
            drop[rng.integers(n)] = False
        p = np.where(drop, 0.0, p)
        p = p / p.sum()
    return p


def random_channel(rng, nx, ny, zero_prob=0.0):
    return np.array([random_pmf(rng, ny, zero_prob) for _ in range(nx)])


def random_order(rng, tags=TAG_GRID):
    """A tagged order half the time, else log-uniform on (0.05, 50)."""
    if rng.random() < 0.5:
        return as_order(tags[rng.integers(len(tags))])
    a = float(np.exp(rng.uniform(math.log(0.05), math.log(50.0))))
    return as_order(a)


def random_instance(rng, zero_prob=0.15):
    nx, ny = int(rng.integers(2, 6)), int(rng.integers(2, 6))
    return random_pmf(rng, nx, zero_prob), random_channel(rng, nx, ny, zero_prob)


def _guard(check: Check, fn: Callable[[], float]):
    """Run one comparison; library exceptions count as failures."""
    try:
        check.record(fn())
    except (AlphaLeakError, NumericalError) as exc:
        check.record(INF)
        if not check.note:
            check.note = f"first error: {type(exc).__name__}: {exc}"


# ------------------------------------------------------------------- suites


def load_fig1_reference(path):
    """Rows ``alpha,x,mass`` into ``{(alpha, x): mass}``."""
    with open(path, newline="", encoding="utf-8") as fh:
        return {
            (float(r["alpha"]), int(r["x"])): float(r["mass"]) for r in csv.DictReader(fh)
        }


def fig1_suite(reference: dict, n=20, p=0.5, alphas=FIG1_ALPHAS, tol=1e-9, time_limit=1.0):
    t0 = time.perf_counter()
    rows = fig1_rows(n, p, alphas)
    elapsed = time.perf_counter() - t0
    values = {(float(a), int(x)): m for a, x, m in rows}
    match = Check("fig1/values", tol=tol)
    for key, want in reference.items():
        got = values.get(key, math.nan)
        match.record(abs(got - want) if got == got else INF)
    match.note = f"{len(reference)} reference points"
    speed = Check("fig1/runtime", tol=time_limit)
    speed.record(elapsed)
    return [match, speed]


def minimizer_suite(n_pmfs=200, seed=DEFAULT_SEED, resolution=1 / 400,
                   orders=(0.0, 0.25, 0.5, 2.0, 5.0, 10.0, INF), time_limit=120.0):
    """Closed-form minimum (tilt, Rényi entropy) against the numerical oracles."""
    rng = np.random.default_rng(seed)
    checks = {
        "grid_floor": Check("minimizer/grid-min>=H-1e-12", tol=1e-12),
        "grid_value": Check("minimizer/grid-value", tol=1e-5),
        "grid_arg": Check("minimizer/grid-argmin", tol=5e-3),
        "grad_floor": Check("minimizer/gradient-min>=H-1e-12", tol=1e-12),
        "grad_value": Check("minimizer/gradient-value", tol=1e-7),
        "grad_arg": Check("minimizer/gradient-argmin", tol=1e-6),
    }
    per_order = {}
    t0 = time.perf_counter()
    for _ in range(n_pmfs):
        n = int(rng.integers(2, 6))
        p = ProbVec(random_pmf(rng, n))
        for a in map(as_order, orders):
            h = renyi_entropy(p, a)
            q_star = tilt(p, a).masses
            g = simplex_grid_min(p, a, GridSpec(n, resolution))
            checks["grid_floor"].record(max(0.0, h - g.minimum))
            err = abs(g.minimum - h)
            checks["grid_value"].record(err)
            if err > 1e-5:
                per_order[str(a)] = per_order.get(str(a), 0) + 1
            checks["grid_arg"].record(float(np.max(np.abs(g.argmin.masses - q_star))))
            if a.is_finite:
                try:
                    d = projected_gradient_min(p, a)
                except NumericalError:
                    for k in ("grad_floor", "grad_value", "grad_arg"):
                        checks[k].record(INF)
                    continue
                checks["grad_floor"].record(max(0.0, h - d.minimum))
                checks["grad_value"].record(abs(d.minimum - h))
                checks["grad_arg"].record(float(np.max(np.abs(d.argmin.masses - q_star))))
    elapsed = time.perf_counter() - t0
    if per_order:
        checks["grid_value"].note = "misses by order: " + ", ".join(
            f"{k}:{v}" for k, v in sorted(per_order.items())
        )
    speed = Check("minimizer/runtime", tol=time_limit)
    speed.record(elapsed)
    return list(checks.values()) + [speed]


def identity_suite(n=500, seed=DEFAULT_SEED + 1, tol=1e-10, prob_tol=1e-12):
    """Pairs of independent routes to the same quantity."""
    rng = np.random.default_rng(seed)
    decomposition = Check("identity/xent=H+D@1", tol=tol)
    loss = Check("identity/loss=exp(xent)", tol=tol, note="relative")
    sibson = Check("identity/sibson=ftilde-mean(D)", tol=tol)
    maxleak = Check("identity/maxleak=log E exp(pml)", tol=tol)
    routes = Check("identity/leakage-two-routes", tol=tol)
    liao = Check("identity/liao=arimoto on (1,inf]", tol=tol)
    rprob = Check("identity/H=-log R", tol=prob_tol)
    crprob = Check("identity/H_cond=-log R_cond", tol=prob_tol)

    for _ in range(n):
        nx = int(rng.integers(2, 6))
        p = random_pmf(rng, nx, 0.15)
        q = random_pmf(rng, nx, 0.15)
        _guard(decomposition, lambda: gap(
            cross_entropy(p, q, Order.one()),
            renyi_entropy(p, Order.one()) + renyi_divergence(p, q, Order.one()),
        ))
        a = random_order(rng)
        _guard(loss, lambda: gap(alpha_loss(p, q, a), alpha_loss_power_mean(p, q, a), relative=True))

    for _ in range(n):
        px, w = random_instance(rng)
        jv = induce(px, w)
        py = jv.output_marginal.masses
        ys = jv.observed

        a = random_order(rng, (0.25, 0.5, 2.0, 5.0, 10.0, INF))
        if not a.is_finite:
            a = Order.infinity()
        d = np.zeros(py.size)
        d[ys] = [renyi_divergence(jv.posteriors[y], jv.prior, a) for y in ys]
        if a.is_inf:
            other = math.log(float(np.dot(py[ys], np.exp(d[ys]))))
        else:
            other = -kn_mean(-d, jv.output_marginal, a, KNVariant.FTILDE)
        _guard(sibson, lambda: gap(sibson_mi(px, w, a), other))

        pmls = np.array([pml(px, w, y) for y in ys])
        _guard(maxleak, lambda: gap(
            maximal_leakage(px, w), math.log(float(np.dot(py[ys], np.exp(pmls))))
        ))

        b = random_order(rng)
        _guard(routes, lambda: gap(arimoto_mi(px, w, b), _leakage_via_minima(jv, b)))

        c = random_order(rng, (1.0, 2.0, 5.0, 10.0, INF))
        if c.is_finite and c.value < 1.0:
            c = Order.finite(1.0 + c.value)
        _guard(liao, lambda: gap(liao_leakage(px, w, c), alpha_leakage(px, w, c).leakage))

        e = random_order(rng)
        _guard(rprob, lambda: gap(renyi_entropy(px, e), -math.log(renyi_probability(px, e))))
        _guard(crprob, lambda: gap(
            arimoto_conditional_entropy(jv, e),
            -math.log(conditional_renyi_probability(jv, e)),
        ))
    return [decomposition, loss, sibson, maxleak, routes, liao, rprob, crprob]


def _leakage_via_minima(jv, a: Order):
    """Prior minus posterior minimized cross entropy, averaged over outputs."""
    ys = jv.observed
    py = jv.output_marginal.masses
    h_prior = cross_entropy(jv.prior, tilt(jv.prior, a), a)
    minima = np.array([cross_entropy(jv.posteriors[y], tilt(jv.posteriors[y], a), a) for y in ys])
    if a.is_zero:
        h_post = float(minima.max())
    elif a.is_inf:
        h_post = -math.log(float(np.dot(py[ys], np.exp(-minima))))
    else:
        weights = np.zeros(py.size)
        weights[ys] = py[ys]
        vals = np.zeros(py.size)
        vals[ys] = minima
        h_post = kn_mean(vals, ProbVec._trusted(weights), a, KNVariant.FTILDE)
    return h_prior - h_post


CONTINUITY_PROBES = (
    ("one", Order.one(), (1 - 1e-4, 1 + 1e-4), 1e-3),
    ("zero", Order.zero(), (1e-4,), 1e-2),
    ("inf", Order.infinity(), (1e4,), 1e-2),
)


def continuity_suite(n=50, seed=DEFAULT_SEED + 2):
    """Finite orders next to each tag against the tag's closed form.

    Instances have full support: at a zero mass the measures jump between
    the finite orders above and below 1 by construction, so continuity is
    only claimed on the interior.
    """
    rng = np.random.default_rng(seed)
    checks = {}
    for _ in range(n):
        nx, ny = int(rng.integers(2, 6)), int(rng.integers(2, 6))
        p, q = random_pmf(rng, nx), random_pmf(rng, nx)
        w = random_channel(rng, nx, ny)
        jv = induce(p, w)
        measures = {
            "entropy": lambda a: renyi_entropy(p, a),
            "cross-entropy": lambda a: cross_entropy(p, q, a),
            "arimoto-cond": lambda a: arimoto_conditional_entropy(jv, a),
            "sibson": lambda a: sibson_mi(p, w, a),
        }
        for mname, fn in measures.items():
            for tname, tag, probes, tol in CONTINUITY_PROBES:
                key = f"continuity/{mname}@{tname}"
                chk = checks.setdefault(key, Check(key, tol=tol))

                def err(fn=fn, tag=tag, probes=probes):
                    res = limit_probe(fn, tag, probes)
                    return max(gap(v, fn(tag)) for v in res.values)

                _guard(chk, err)
    return list(checks.values())


def sibson_bound_suite(n_chains=10_000, n_search=20, seed=DEFAULT_SEED + 3,
                orders=(0.5, 1.0, 2.0, 5.0, INF), u_size=256, search_budget=60):
    """Leakage about any U behind X never beats the Sibson information of X."""
    rng = np.random.default_rng(seed)
    bound = Check("sibson-bound/leakage(U;Y)<=sibson(X;Y)+1e-9", tol=1e-9)
    by_order = {}
    for _ in range(n_chains):
        nx, nu, ny = (int(v) for v in rng.integers(2, 5, size=3))
        px = random_pmf(rng, nx, 0.1)
        kern = random_channel(rng, nx, nu, 0.1)
        w = random_channel(rng, nx, ny, 0.1)
        pu, wu = markov_chain(px, kern, w)
        for a in map(as_order, orders):
            before = bound.failures
            _guard(bound, lambda: max(
                0.0, alpha_leakage(pu, wu, a).leakage - sibson_mi(px, w, a)
            ))
            if bound.failures > before:
                by_order[str(a)] = by_order.get(str(a), 0) + 1
    if by_order:
        bound.note = "violations by order: " + ", ".join(f"{k}:{v}" for k, v in by_order.items())
    never_above = Check("sibson-bound/search<=bound", tol=1e-9)
    reaches = Check("sibson-bound/search-reaches-bound@inf", tol=1e-2,
                    note=f"|U|={u_size}, seed {seed}")
    above_by_order = {}
    for _ in range(n_search):
        nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        px, w = random_pmf(rng, nx), random_channel(rng, nx, ny)
        search_seed = int(rng.integers(2**31))
        for a in map(as_order, orders):
            target = sibson_mi(px, w, a)
            try:
                res = sup_leakage_search(px, w, a, max(u_size, nx), budget=search_budget,
                                         seed=search_seed)
                value = res.value
            except BoundExceeded as exc:
                value = exc.value
            except NumericalError:
                value = math.inf
            never_above.record(max(0.0, value - target))
            if value > target + never_above.tol:
                above_by_order[str(a)] = above_by_order.get(str(a), 0) + 1
            if a.is_inf:
                reaches.record(abs(target - value))
    if above_by_order:
        never_above.note = "above the bound by order: " + ", ".join(
            f"{k}:{v}" for k, v in above_by_order.items())
    return [bound, never_above, reaches]


def random_partition(rng, n):
    labels = rng.integers(0, int(rng.integers(1, n + 1)), size=n)
    return [np.flatnonzero(labels == k) for k in np.unique(labels)]


def partition_suite(n=100, seed=DEFAULT_SEED + 4, tol=1e-10):
    """Both mean forms rebuild the entropy from any partition of the alphabet."""
    rng = np.random.default_rng(seed)
    checks = {v: Check(f"partition/{v.name}", tol=tol) for v in KNVariant}
    for _ in range(n):
        nx = int(rng.integers(2, 7))
        p = ProbVec(random_pmf(rng, nx, 0.1))
        a = random_order(rng, (0.25, 0.5, 2.0, 5.0, 10.0))
        if not a.is_finite:
            a = Order.finite(2.0)
        parts = [restrict(p, s) for s in random_partition(rng, nx) if p.masses[s].sum() > 0]
        weights = ProbVec._trusted(np.array([s.total for s in parts]))
        h = renyi_entropy(p, a)
        for variant, chk in checks.items():
            u = [subset_uncertainty(s, p, a, variant) for s in parts]
            _guard(chk, lambda: gap(kn_mean(u, weights, a, variant), h))
    return list(checks.values())


def worked_suite():
    """The binary symmetric channel with crossover 0.1 and a uniform input."""
    prior, ch = uniform(2), bsc(0.1)
    two = Order.finite(2.0)
    out = []

    def exact(name, got, want, tol):
        chk = Check(f"worked/{name}", tol=tol)
        chk.record(gap(got, want))
        out.append(chk)

    exact("arimoto_2", arimoto_mi(prior, ch, two), 0.494696, 1e-6)
    exact("sibson_2", sibson_mi(prior, ch, two), 0.494696, 1e-6)
    exact("maxleak", maximal_leakage(prior, ch), math.log(1.8), 1e-12)
    for y in (0, 1):
        exact(f"pml_y{y}", pml(prior, ch, y), math.log(1.8), 1e-12)
    zero = Check("worked/leakage_0_exact", tol=0.0)
    zero.record(abs(alpha_leakage(prior, ch, Order.zero()).leakage), ok=(
        alpha_leakage(prior, ch, Order.zero()).leakage == 0.0
    ))
    out.append(zero)
    exact("arimoto_cond_2", arimoto_conditional_entropy(induce(prior, ch), two),
          -math.log(0.82), 1e-12)
    return out


SUITES = {
    "minimizer": minimizer_suite,
    "identities": identity_suite,
    "continuity": continuity_suite,
    "sibson-bound": sibson_bound_suite,
    "partition": partition_suite,
    "worked": worked_suite,
}


def run_suites(names: Optional[Iterable[str]] = None, fig1_reference: Optional[dict] = None,
               scale: float = 1.0) -> List[Check]:
    """Run the named suites (default: all).

    ``scale`` shrinks instance counts for quick smoke runs; ``fig1`` runs
    only when reference coordinates are supplied.
    """
    names = list(names) if names else list(SUITES) + (["fig1"] if fig1_reference else [])
    out = []
    for name in names:
        if name == "fig1":
            if fig1_reference is None:
                raise ValueError("the fig1 suite needs reference coordinates")
            out += fig1_suite(fig1_reference)
            continue
        fn = SUITES[name]
        if scale != 1.0 and name in _SIZE_ARG:
            arg, full = _SIZE_ARG[name]
            out += fn(**{arg: max(1, int(round(full * scale)))})
        else:
            out += fn()
    return out


_SIZE_ARG = {
    "minimizer": ("n_pmfs", 200),
    "identities": ("n", 500),
    "continuity": ("n", 50),
    "sibson-bound": ("n_chains", 10_000),
    "partition": ("n", 100),
}

__all__ = [
    "Check",
    "SUITES",
    "run_suites",
    "load_fig1_reference",
    "fig1_suite",
    "minimizer_suite",
    "identity_suite",
    "continuity_suite",
    "sibson_bound_suite",
    "partition_suite",
    "worked_suite",
]
