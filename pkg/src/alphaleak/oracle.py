"""Independent brute-force and limit-based checks of the closed forms.

Nothing here calls :func:`alphaleak.core.tilt` or the measure functions
whose closed forms are being checked; objectives are re-evaluated from the
plain definitions so a bug in the fast path cannot hide in its own oracle.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._numerics import project_simplex
from .core import ProbVec, as_channel, as_pmf, markov_chain
from .exceptions import BoundExceeded, BudgetExceeded, NonConvergence, UnsupportedOrder
from .leakage import alpha_leakage, sibson_mi
from .orders import Order, as_order

DEFAULT_BUDGET = 10**7
DEFAULT_SEED = 20240607


def default_budget():
    """Grid budget, overridable through ``ALPHALEAK_BUDGET``."""
    raw = os.environ.get("ALPHALEAK_BUDGET")
    return int(float(raw)) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class GridSpec:
    """Rational grid ``{k / steps : sum k = steps}`` on the simplex."""

    dimension: int
    resolution: float
    budget: int = field(default_factory=default_budget)

    @property
    def steps(self):
        n = round(1.0 / self.resolution)
        if n < 1 or abs(n * self.resolution - 1.0) > 1e-9:
            raise ValueError(f"resolution {self.resolution} is not 1/integer")
        return n

    @property
    def size(self):
        """Number of grid points."""
        return math.comb(self.steps + self.dimension - 1, self.dimension - 1)


class GridResult(NamedTuple):
    argmin: ProbVec
    minimum: float


def _compositions(total, parts):
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    # nondecreasing cut points 0 <= c_1 <= ... <= c_{parts-1} <= total
    cuts = np.zeros((1, 0), dtype=np.int64)
    last = np.zeros(1, dtype=np.int64)
    for _ in range(parts - 1):
        counts = total - last + 1
        rows = np.repeat(cuts, counts, axis=0)
        start = np.repeat(last, counts)
        offset = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        last = start + offset
        cuts = np.hstack([rows, last[:, None]])
    edges = np.hstack([np.zeros((cuts.shape[0], 1), np.int64), cuts,
                       np.full((cuts.shape[0], 1), total)])
    return np.diff(edges, axis=1)


def _objective_batch(p, q, a: Order):
    """Cross entropy of every row of ``q`` under ``p``, straight from the definition."""
    supp = p > 0
    p, q = p[supp], q[:, supp]
    with np.errstate(divide="ignore", over="ignore"):
        if a.is_zero:
            return np.log(np.max(1.0 / q, axis=1))
        if a.is_one:
            return -np.sum(p * np.log(q), axis=1)
        if a.is_inf:
            return -np.log(q @ p)
        alpha = a.value
        beta = (alpha - 1.0) / alpha
        s = np.power(q, beta) @ p
        return alpha / (1.0 - alpha) * np.log(s)


def _dp_costs(p, steps, a: Order):
    """Per-coordinate costs on ``k = 0..steps`` for the separable DP.

    Returns ``(costs, combine)`` where ``combine`` is ``"sum"`` or ``"max"``;
    the grid optimum minimizes the combined cost.
    """
    q = np.arange(steps + 1) / steps
    with np.errstate(divide="ignore", invalid="ignore"):
        if a.is_zero:
            c = np.where(p[:, None] > 0, 1.0 / q[None, :], 0.0)
            return c, "max"
        if a.is_one:
            c = np.where(p[:, None] > 0, -p[:, None] * np.log(q[None, :]), 0.0)
            return c, "sum"
        if a.is_inf:
            return -p[:, None] * q[None, :], "sum"
        alpha = a.value
        beta = (alpha - 1.0) / alpha
        pw = np.where(p[:, None] > 0, p[:, None] * np.power(q[None, :], beta), 0.0)
        # a > 1 maximizes sum p q^beta; a < 1 minimizes it
        return (-pw if alpha > 1.0 else pw), "sum"


def _dp_grid_argmin(p, steps, a):
    costs, combine = _dp_costs(p, steps, a)
    d = costs.shape[0]
    k = np.arange(steps + 1)
    # value[m] = best combined cost of coordinates 0..i using m grid units
    value = costs[0].copy()
    choice = []
    for i in range(1, d):
        # cand[m, j] = value[m - j] (+|max) costs[i, j]
        prev = np.where(k[:, None] >= k[None, :], value[np.clip(k[:, None] - k[None, :], 0, None)], np.inf)
        if combine == "sum":
            cand = prev + costs[i][None, :]
        else:
            cand = np.maximum(prev, costs[i][None, :])
        cand[k[:, None] < k[None, :]] = np.inf
        j = np.argmin(cand, axis=1)
        choice.append(j)
        value = cand[k, j]
    units = np.empty(d, dtype=np.int64)
    m = steps
    for i in range(d - 1, 0, -1):
        units[i] = choice[i - 1][m]
        m -= units[i]
    units[0] = m
    return units


def simplex_grid_min(p, a, grid: GridSpec, method="auto") -> GridResult:
    """Minimize the cross entropy of ``p`` over every point of a simplex grid.

    ``method="enumerate"`` evaluates all ``grid.size`` points.
    ``method="dp"`` finds the same grid minimum exactly by dynamic
    programming over the separable objective, in ``dimension * steps**2``
    work; ``"auto"`` enumerates when the grid fits the budget.
    """
    p = as_pmf(p)
    a = as_order(a)
    pm = p.masses
    if grid.dimension != pm.size:
        raise ValueError(f"grid dimension {grid.dimension} != alphabet size {pm.size}")
    steps = grid.steps
    dp_cost = grid.dimension * (steps + 1) ** 2
    if method == "auto":
        method = "enumerate" if grid.size <= grid.budget else "dp"
    if method == "enumerate":
        if grid.size > grid.budget:
            raise BudgetExceeded(grid.size, grid.budget)
        best_val, best_q = math.inf, None
        # chunk on the first coordinate to bound memory
        for k0 in range(steps + 1):
            rest = _compositions(steps - k0, pm.size - 1) if pm.size > 1 else np.zeros((1, 0), np.int64)
            if pm.size == 1 and k0 != steps:
                continue
            units = np.hstack([np.full((rest.shape[0], 1), k0), rest])
            q = units / steps
            vals = _objective_batch(pm, q, a)
            i = int(np.argmin(vals))
            if vals[i] < best_val or best_q is None:
                best_val, best_q = float(vals[i]), q[i]
        return GridResult(ProbVec._trusted(best_q), best_val)
    if method == "dp":
        if dp_cost > grid.budget:
            raise BudgetExceeded(dp_cost, grid.budget)
        q = _dp_grid_argmin(pm, steps, a) / steps
        return GridResult(ProbVec._trusted(q), float(_objective_batch(pm, q[None, :], a)[0]))
    raise ValueError(f"unknown method {method!r}")


class DescentResult(NamedTuple):
    argmin: ProbVec
    minimum: float
    iterations: int


def _interior_newton(fgh, x0, active, tol, max_iter, shrink=0.5):
    """Minimize a separable convex function over the simplex.

    Steps are equality-constrained Newton directions of the diagonal
    Hessian; inactive coordinates are sent straight to zero, active ones may
    shrink by at most ``shrink`` per step, then Armijo backtracking.  The
    stopping test is the Euclidean gradient mapping ``|x - P(x - g)|_inf``.
    """
    x = np.where(active, x0, 0.0)
    x = x / x.sum()
    f, g, h = fgh(x)
    res = math.inf
    for it in range(1, max_iter + 1):
        res = float(np.max(np.abs(project_simplex(x - g) - x)))
        if res < tol:
            return x, f, it, res, True
        ga, ha = g[active], h[active]
        mu = float(np.sum(ga / ha) / np.sum(1.0 / ha))
        d = -x.copy()
        d[active] = (mu - ga) / ha
        d[active] -= d.sum() * (1.0 / ha) / np.sum(1.0 / ha)
        neg = d < 0
        step = 1.0
        if np.any(neg & active):
            m = neg & active
            step = min(1.0, float(np.min(shrink * x[m] / -d[m])))
        slope = float(g @ d)
        for _ in range(60):
            x_new = x + step * d
            x_new[~active] = np.maximum(x_new[~active], 0.0)
            f_new, g_new, h_new = fgh(x_new)
            if np.isfinite(f_new) and f_new <= f + 1e-4 * step * slope:
                break
            step *= 0.5
        else:
            return x, f, it, res, False
        if np.array_equal(x_new, x):
            return x, f, it, res, False
        x, f, g, h = x_new, f_new, g_new, h_new
    return x, f, max_iter, res, False


def projected_gradient_min(p, a, tol=1e-10, max_iter=10_000) -> DescentResult:
    """Minimize the cross entropy of ``p`` numerically, from the uniform start.

    For ``a > 1`` the equivalent convex problem ``min -sum p q^beta`` is
    solved, for ``a < 1`` ``min sum p q^beta`` (``beta = (a - 1) / a``); the
    minimizer is then scored with the cross entropy itself.  Stops when the
    gradient-mapping norm drops below ``tol``.
    """
    p = as_pmf(p)
    a = as_order(a)
    if not a.is_finite:
        raise UnsupportedOrder(a, "projected_gradient_min")
    alpha = a.value
    beta = (alpha - 1.0) / alpha
    sign = -1.0 if alpha > 1.0 else 1.0
    pm = p.masses
    supp = pm > 0
    ps = pm[supp]
    curv = abs(beta * (beta - 1.0))

    def fgh(q):
        qs = q[supp]
        with np.errstate(divide="ignore", over="ignore"):
            f = sign * float(ps @ np.power(qs, beta))
            g = np.zeros_like(q)
            g[supp] = sign * beta * ps * np.power(qs, beta - 1.0)
            h = np.ones_like(q)
            h[supp] = curv * ps * np.power(qs, beta - 2.0)
        return f, g, h

    x0 = np.full(pm.size, 1.0 / pm.size)
    q, _, iters, res, ok = _interior_newton(fgh, x0, supp, tol, max_iter)
    if not ok:
        raise NonConvergence(iters, res)
    value = float(_objective_batch(pm, q[None, :], a)[0])
    return DescentResult(ProbVec._trusted(q), value, iters)


class ProbeResult(NamedTuple):
    estimate: float
    spread: float
    values: tuple


def limit_probe(measure: Callable[[Order], float], target, probes: Sequence[float]) -> ProbeResult:
    """Evaluate ``measure`` at finite orders approaching ``target``.

    Returns the value at the last probe and the largest pairwise gap; the
    caller decides whether the spread is small enough and compares the
    estimate with the closed-form branch at ``target``.
    """
    target = as_order(target)
    if target.is_finite:
        raise ValueError("target must be one of the tags 0, 1 or inf")
    vals = [float(measure(Order.finite(b))) for b in probes]
    spread = max(vals) - min(vals) if len(vals) > 1 else 0.0
    return ProbeResult(vals[-1], spread, tuple(vals))


class SearchResult(NamedTuple):
    kernel: np.ndarray
    value: float
    evaluations: int
    seed: int


def _refinement_kernel(px, rows, u_size):
    """Split inputs into atoms so one atom size ``s`` dominates every column.

    ``kernel[x, u]`` is P(u | x) and every ``u`` is owned by one ``x``.
    Inputs that maximize some column of ``rows`` get atoms of mass exactly
    ``s`` (plus a smaller remainder); the rest are cut into pieces of mass
    at most ``s``.  At order infinity such a ``U`` leaks
    ``log sum_y max_x W(y|x)`` once ``s <= p_x`` for every maximizing
    ``x``.  Returns ``None`` when ``u_size`` cannot hold one atom per input.
    """
    n = px.size
    if u_size < n:
        return None
    live = px > 0
    tops = np.zeros(n, dtype=bool)
    masked = np.where(live[:, None], rows, -1.0)
    tops[np.argmax(masked, axis=0)] = True

    def atoms_needed(s):
        return sum(max(1, math.ceil(px[x] / s - 1e-9)) if live[x] else 1 for x in range(n))

    s = min(px[tops & live]) if np.any(tops & live) else px.max()
    if atoms_needed(s) > u_size:
        lo, hi = s, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            lo, hi = (lo, mid) if atoms_needed(mid) <= u_size else (mid, hi)
        s = hi
    k = np.zeros((n, u_size))
    u = 0
    for x in range(n):
        c = max(1, math.ceil(px[x] / s - 1e-9)) if live[x] else 1
        k[x, u:u + c] = s / px[x] if live[x] else 1.0
        k[x, u + c - 1] = 0.0
        k[x, u + c - 1] = 1.0 - k[x, u:u + c].sum()
        u += c
    return k


def _identity_kernel(n, u_size):
    k = np.zeros((n, u_size))
    for x in range(n):
        k[x, x % u_size] = 1.0
    return k


def sup_leakage_search(prior, ch, a, u_size, budget=10_000, seed=DEFAULT_SEED) -> SearchResult:
    """Search kernels P(u | x) for the largest alpha-leakage about ``U``.

    Candidates are the identity kernel (``U = X`` when ``u_size >= |X|``),
    an equal-atom refinement of ``X``, random Dirichlet kernels, and
    hill-climbing perturbations of the incumbent.  The result is a lower
    bound on the supremum; it must never exceed the Sibson information of
    ``(prior, ch)``, and :class:`BoundExceeded` is raised if it does.
    """
    prior = as_pmf(prior)
    ch = as_channel(ch)
    a = as_order(a)
    n = len(prior)
    rng = np.random.default_rng(seed)

    def score(kern):
        pu, w = markov_chain(prior, kern, ch)
        return alpha_leakage(pu, w, a).leakage

    candidates = [_identity_kernel(n, u_size)]
    ref = _refinement_kernel(prior.masses, ch.rows, u_size)
    if ref is not None:
        candidates.append(ref)
    best_k, best_v = None, -math.inf
    evals = 0
    for kern in candidates:
        v = score(kern)
        evals += 1
        if v > best_v:
            best_k, best_v = kern, v
    n_random = max(1, budget // 4)
    while evals < budget:
        if evals < n_random:
            kern = rng.dirichlet(np.full(u_size, 0.3), size=n)
        else:
            scale = rng.choice([0.5, 0.1, 0.02])
            noise = rng.dirichlet(np.full(u_size, 0.3), size=n)
            kern = (1 - scale) * best_k + scale * noise
        v = score(kern)
        evals += 1
        if v > best_v:
            best_k, best_v = kern, v
    bound = sibson_mi(prior, ch, a)
    if best_v > bound + 1e-9:
        raise BoundExceeded(best_v, bound, best_k)
    return SearchResult(best_k, best_v, evals, seed)
