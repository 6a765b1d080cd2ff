"""The Rényi order as an extended value.

Orders 0, 1 and infinity are limits of the finite formulas and get their own
closed forms everywhere, so they are kept as distinct tags rather than
as floats that happen to equal 0, 1 or ``inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import InvalidOrder

ZERO = "zero"
ONE = "one"
INF = "inf"
FINITE = "finite"


@dataclass(frozen=True)
class Order:
    """A Rényi order: one of the tags ``zero``, ``one``, ``inf`` or ``finite``.

    Build instances with :meth:`zero`, :meth:`one`, :meth:`infinity`,
    :meth:`finite`, or the lenient :func:`as_order`.
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind == FINITE:
            a = self.value
            if not math.isfinite(a) or a <= 0.0 or a == 1.0:
                raise InvalidOrder(
                    f"finite order must be positive, finite and != 1, got {a!r}"
                )
        elif self.kind not in (ZERO, ONE, INF):
            raise InvalidOrder(f"unknown order kind {self.kind!r}")

    @classmethod
    def zero(cls):
        return cls(ZERO, 0.0)

    @classmethod
    def one(cls):
        return cls(ONE, 1.0)

    @classmethod
    def infinity(cls):
        return cls(INF, math.inf)

    @classmethod
    def finite(cls, alpha):
        return cls(FINITE, float(alpha))

    @classmethod
    def parse(cls, token: str) -> "Order":
        """Parse ``"0"``, ``"1"``, ``"inf"`` or a positive decimal."""
        tok = token.strip().lower()
        if tok in ("inf", "infinity", "+inf"):
            return cls.infinity()
        try:
            a = float(tok)
        except ValueError:
            raise InvalidOrder(f"cannot parse order {token!r}") from None
        if math.isnan(a):
            raise InvalidOrder(f"cannot parse order {token!r}")
        return as_order(a)

    @property
    def is_zero(self):
        return self.kind == ZERO

    @property
    def is_one(self):
        return self.kind == ONE

    @property
    def is_inf(self):
        return self.kind == INF

    @property
    def is_finite(self):
        return self.kind == FINITE

    def __float__(self):
        return self.value

    def __str__(self):
        if self.kind == INF:
            return "inf"
        if self.kind == ZERO:
            return "0"
        if self.kind == ONE:
            return "1"
        return format(self.value, ".15g")

    def __repr__(self):
        return f"Order({self})"


def as_order(a) -> Order:
    """Coerce a number or :class:`Order` to an :class:`Order`.

    Exact 0, 1 and ``inf`` map to their tags; anything else must be a valid
    finite order.
    """
    if isinstance(a, Order):
        return a
    if isinstance(a, str):
        return Order.parse(a)
    a = float(a)
    if a == 0.0:
        return Order.zero()
    if a == 1.0:
        return Order.one()
    if a == math.inf:
        return Order.infinity()
    return Order.finite(a)
