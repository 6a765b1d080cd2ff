"""Distributions, channels, Bayes inversion and the tilted (escort) pmf.

All containers are immutable: arrays are copied on construction and marked
read-only.  Inputs are validated but never renormalized, so an upstream
normalization error stays visible instead of being silently absorbed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from ._numerics import normalized_power
from .exceptions import (
    DimensionMismatch,
    EmptySubset,
    EmptyVector,
    InvalidIndex,
    NegativeMass,
    NonFiniteMass,
    SumOutOfTolerance,
    ZeroTotal,
)
from .orders import as_order

SUM_TOL = 1e-9
ARGMAX_RTOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_masses(arr, where=None):
    if arr.size == 0:
        raise EmptyVector()
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        idx = int(bad[0])
        raise NonFiniteMass(idx if where is None else (where, idx))
    neg = np.flatnonzero(arr < 0)
    if neg.size:
        idx = int(neg[0])
        raise NegativeMass(idx if where is None else (where, idx))
    s = float(arr.sum())
    if abs(s - 1.0) > SUM_TOL:
        raise SumOutOfTolerance(s, where)


@dataclass(frozen=True, eq=False)
class ProbVec:
    """A pmf over an indexed finite alphabet.

    Parameters
    ----------
    masses : array_like
        Nonnegative masses summing to 1 within ``1e-9``.
    labels : sequence of str, optional
        Symbol names, same length as ``masses``.
    """

    masses: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        arr = np.asarray(self.masses, dtype=float)
        if arr.ndim != 1:
            raise DimensionMismatch(f"pmf must be 1-D, got shape {arr.shape}")
        _check_masses(arr)
        object.__setattr__(self, "masses", _frozen(arr))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != arr.size:
                raise DimensionMismatch(
                    f"{len(labels)} labels for {arr.size} masses"
                )
            object.__setattr__(self, "labels", labels)

    @classmethod
    def _trusted(cls, masses, labels=None):
        # Skips validation; for values derived from already-valid inputs.
        obj = object.__new__(cls)
        object.__setattr__(obj, "masses", _frozen(masses))
        object.__setattr__(obj, "labels", labels)
        return obj

    def __len__(self):
        return self.masses.size

    def __getitem__(self, i):
        return float(self.masses[i])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.masses, dtype=dtype)

    def __repr__(self):
        body = ", ".join(format(m, ".6g") for m in self.masses)
        return f"ProbVec({body})"


@dataclass(frozen=True, eq=False)
class SubDist:
    """Unnormalized masses of a pmf restricted to a subset of its alphabet."""

    masses: np.ndarray
    total: float
    indices: tuple = ()

    def __post_init__(self):
        arr = _frozen(self.masses)
        object.__setattr__(self, "masses", arr)
        if np.any(arr < 0):
            raise NegativeMass(int(np.flatnonzero(arr < 0)[0]))
        if not (0.0 < self.total <= 1.0 + 1e-12):
            raise ZeroTotal() if self.total <= 0 else SumOutOfTolerance(self.total)
        if abs(arr.sum() - self.total) > SUM_TOL:
            raise SumOutOfTolerance(float(arr.sum()))


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic transition matrix; entry ``(x, y)`` is P(y | x)."""

    rows: np.ndarray
    input_labels: Optional[tuple] = None
    output_labels: Optional[tuple] = None

    def __post_init__(self):
        try:
            arr = np.array(self.rows, dtype=float)
        except ValueError as exc:
            raise DimensionMismatch(f"ragged transition matrix: {exc}") from None
        if arr.ndim != 2:
            raise DimensionMismatch(f"channel must be 2-D, got shape {arr.shape}")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise EmptyVector()
        for x in range(arr.shape[0]):
            _check_masses(arr[x], where=x)
        object.__setattr__(self, "rows", _frozen(arr))

    @classmethod
    def _trusted(cls, rows):
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", _frozen(rows))
        object.__setattr__(obj, "input_labels", None)
        object.__setattr__(obj, "output_labels", None)
        return obj

    @property
    def input_size(self):
        return self.rows.shape[0]

    @property
    def output_size(self):
        return self.rows.shape[1]

    def row(self, x):
        return ProbVec._trusted(self.rows[x])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.rows, dtype=dtype)

    def __repr__(self):
        return f"Channel({self.input_size}x{self.output_size})"


def validate_pmf(raw, labels=None) -> ProbVec:
    """Validate ``raw`` as a pmf without renormalizing it."""
    return ProbVec(raw, labels)


def as_pmf(p) -> ProbVec:
    return p if isinstance(p, ProbVec) else ProbVec(p)


def as_channel(ch) -> Channel:
    return ch if isinstance(ch, Channel) else Channel(ch)


def uniform(n) -> ProbVec:
    return ProbVec._trusted(np.full(n, 1.0 / n))


def point_mass(n, i) -> ProbVec:
    m = np.zeros(n)
    m[i] = 1.0
    return ProbVec._trusted(m)


def binomial(n, p) -> ProbVec:
    """Binomial(n, p) pmf from exact integer coefficients."""
    if n < 1 or not (0.0 < p < 1.0):
        raise ValueError(f"need n >= 1 and 0 < p < 1, got n={n}, p={p}")
    m = np.array([math.comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)])
    return ProbVec(m, labels=[str(k) for k in range(n + 1)])


def bsc(eps) -> Channel:
    """Binary symmetric channel with crossover probability ``eps``."""
    return Channel([[1 - eps, eps], [eps, 1 - eps]])


def identity_channel(n) -> Channel:
    return Channel(np.eye(n))


def support(p) -> set:
    """Indices with strictly positive mass."""
    return {int(i) for i in np.flatnonzero(as_pmf(p).masses > 0)}


def argmax_set(masses):
    """Boolean mask of near-maximal entries (relative tolerance ``1e-12``)."""
    m = np.asarray(masses)
    return m >= (1.0 - ARGMAX_RTOL) * m.max()


def tilt(p, a) -> ProbVec:
    """Tilted (escort) pmf: masses proportional to ``p ** a``.

    Order 0 gives the uniform pmf on the support, order 1 returns ``p``
    itself, and order infinity is uniform on the argmax set.  Finite orders
    are normalized in the log domain, so large ``a`` cannot overflow.

    >>> tilt([0.75, 0.25], 2)
    ProbVec(0.9, 0.1)
    """
    p = as_pmf(p)
    a = as_order(a)
    if a.is_one:
        return p
    m = p.masses
    out = np.zeros_like(m)
    supp = m > 0
    if a.is_zero:
        out[supp] = 1.0 / np.count_nonzero(supp)
    elif a.is_inf:
        top = argmax_set(m)
        out[top] = 1.0 / np.count_nonzero(top)
    else:
        out[supp] = normalized_power(m[supp], a.value)
    return ProbVec._trusted(out, p.labels)


def restrict(p, subset) -> SubDist:
    """Masses of ``p`` on ``subset``, left unnormalized."""
    p = as_pmf(p)
    idx = sorted({int(i) for i in subset})
    if not idx:
        raise EmptySubset()
    if idx[0] < 0 or idx[-1] >= len(p):
        raise InvalidIndex(f"subset {idx} outside alphabet of size {len(p)}")
    m = p.masses[idx]
    total = float(m.sum())
    if total <= 0:
        raise ZeroTotal()
    return SubDist(m, total, tuple(idx))


@dataclass(frozen=True, eq=False)
class JointView:
    """A prior pushed through a channel.

    Posteriors exist only for outputs with positive probability; the entry
    for any other output is ``None``.
    """

    prior: ProbVec
    channel: Channel

    @cached_property
    def joint(self):
        j = self.prior.masses[:, None] * self.channel.rows
        j.setflags(write=False)
        return j

    @cached_property
    def output_marginal(self) -> ProbVec:
        return ProbVec._trusted(self.joint.sum(axis=0))

    @cached_property
    def posteriors(self) -> tuple:
        py = self.output_marginal.masses
        out = []
        for y in range(py.size):
            if py[y] > 0:
                # likelihood ratio first: exact when the prior is subnormal
                with np.errstate(over="ignore"):
                    ratio = self.channel.rows[:, y] / py[y]
                if np.all(np.isfinite(ratio)):
                    post = self.prior.masses * ratio
                else:
                    post = self.joint[:, y] / py[y]
                out.append(ProbVec._trusted(post, self.prior.labels))
            else:
                out.append(None)
        return tuple(out)

    @property
    def observed(self):
        """Output indices with positive probability."""
        return [y for y, post in enumerate(self.posteriors) if post is not None]

    def posterior(self, y):
        return self.posteriors[y]


def induce(prior, ch) -> JointView:
    """Bayes machinery for ``prior`` observed through ``ch``."""
    prior = as_pmf(prior)
    ch = as_channel(ch)
    if len(prior) != ch.input_size:
        raise DimensionMismatch(
            f"prior has {len(prior)} symbols, channel expects {ch.input_size}"
        )
    return JointView(prior, ch)


def joint_to_prior_channel(joint):
    """Factor a joint pmf matrix into ``(prior, channel)``.

    Rows of zero prior mass get a uniform channel row; those rows never
    influence any measure.
    """
    j = np.asarray(joint, dtype=float)
    if j.ndim != 2:
        raise DimensionMismatch(f"joint must be 2-D, got shape {j.shape}")
    _check_masses(j.ravel())
    px = j.sum(axis=1)
    rows = np.empty_like(j)
    for x in range(j.shape[0]):
        rows[x] = j[x] / px[x] if px[x] > 0 else 1.0 / j.shape[1]
    return ProbVec(px), Channel(rows)


def markov_chain(prior, kernel, ch):
    """Prior and channel of ``U`` for the chain U - X - Y.

    ``kernel[x, u]`` is P(u | x).  Returns ``(P_U, P_{Y|U})``; rows of
    ``P_{Y|U}`` for zero-probability ``u`` are set to ``P_Y``.
    """
    prior = as_pmf(prior)
    ch = as_channel(ch)
    k = as_channel(kernel).rows
    if k.shape[0] != len(prior) or ch.input_size != len(prior):
        raise DimensionMismatch("kernel, prior and channel sizes disagree")
    j_ux = prior.masses[:, None] * k  # (x, u)
    pu = j_ux.sum(axis=0)
    j_uy = j_ux.T @ ch.rows
    py = prior.masses @ ch.rows
    w = np.where(pu[:, None] > 0, j_uy / np.where(pu > 0, pu, 1.0)[:, None], py)
    return ProbVec._trusted(pu), Channel._trusted(w)


__all__ = [
    "ProbVec",
    "SubDist",
    "Channel",
    "JointView",
    "validate_pmf",
    "as_pmf",
    "as_channel",
    "uniform",
    "point_mass",
    "binomial",
    "bsc",
    "identity_channel",
    "support",
    "tilt",
    "restrict",
    "induce",
    "joint_to_prior_channel",
    "markov_chain",
]
