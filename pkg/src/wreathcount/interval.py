"""Certified real enclosures backed by Arb ball arithmetic (python-flint)."""

from __future__ import annotations

import contextlib
import math

from flint import arb, ctx

DEFAULT_PREC = 96


@contextlib.contextmanager
def working_precision(prec: int = DEFAULT_PREC):
    """Temporarily set the Arb working precision in bits."""
    old = ctx.prec
    ctx.prec = max(int(prec), 53)
    try:
        yield
    finally:
        ctx.prec = old


def _as_arb(x) -> arb:
    if isinstance(x, ErrorInterval):
        return x.ball
    if isinstance(x, arb):
        return x
    if isinstance(x, float):
        return arb(x)
    return arb(x)


class ErrorInterval:
    """A real number known to lie in ``[lo, hi]``.

    Arithmetic delegates to Arb, whose operations round outward, so every
    result still encloses the true value. ``lo`` and ``hi`` are floats rounded
    outward from the ball endpoints.
    """

    __slots__ = ("ball",)

    def __init__(self, ball):
        self.ball = _as_arb(ball)
        if not self.ball.is_finite():
            raise ValueError("non-finite enclosure")

    @classmethod
    def from_bounds(cls, lo, hi) -> "ErrorInterval":
        lo_b, hi_b = arb(lo), arb(hi)
        if hi_b < lo_b:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        return cls(lo_b.union(hi_b))

    @classmethod
    def from_float(cls, value: float, err: float) -> "ErrorInterval":
        """Ball ``value +/- err`` with both inputs taken as exact binary floats."""
        if err < 0 or not math.isfinite(err):
            raise ValueError("error bound must be finite and non-negative")
        return cls(arb(value, err))

    @property
    def lo(self) -> float:
        b = self.ball.lower()
        f = float(b)
        return f if arb(f) <= b else math.nextafter(f, -math.inf)

    @property
    def hi(self) -> float:
        b = self.ball.upper()
        f = float(b)
        return f if arb(f) >= b else math.nextafter(f, math.inf)

    @property
    def mid(self) -> float:
        return float(self.ball.mid())

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        other = _as_arb(x)
        return bool(self.ball.lower() <= other.lower() and other.upper() <= self.ball.upper())

    def overlaps(self, other) -> bool:
        return bool(self.ball.overlaps(_as_arb(other)))

    def intersect(self, other) -> "ErrorInterval":
        o = _as_arb(other)
        if not self.ball.overlaps(o):
            raise ValueError(f"disjoint enclosures {self} and {ErrorInterval(o)}")
        return ErrorInterval(self.ball.intersection(o))

    def union(self, other) -> "ErrorInterval":
        return ErrorInterval(self.ball.union(_as_arb(other)))

    def __add__(self, other):
        return ErrorInterval(self.ball + _as_arb(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ErrorInterval(self.ball - _as_arb(other))

    def __rsub__(self, other):
        return ErrorInterval(_as_arb(other) - self.ball)

    def __mul__(self, other):
        return ErrorInterval(self.ball * _as_arb(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ErrorInterval(self.ball / _as_arb(other))

    def __rtruediv__(self, other):
        return ErrorInterval(_as_arb(other) / self.ball)

    def __neg__(self):
        return ErrorInterval(-self.ball)

    def __repr__(self):
        return f"ErrorInterval([{self.lo!r}, {self.hi!r}])"

    def to_json(self, prefix: str) -> dict:
        return {f"{prefix}_lo": self.lo, f"{prefix}_hi": self.hi}
