"""Residue series, the l-rank extension bound, and power-law fits."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from flint import arb
from sympy import primefactors

from . import kernels
from .interval import DEFAULT_PREC, ErrorInterval, working_precision
from .quadfield import (
    QuadraticField,
    fundamental_discs,
    is_fundamental,
    l2_tail,
    l2_terms_for,
)

# ------------------------------------------------------------ residue series


def tail_bound(D: float) -> float:
    """Upper bound for ``sum_{|d| > D} R(K)/d^2`` over all quadratic ``K``.

    Taking eps = 1/log d in ``res zeta_K <= 8 d^eps / eps`` gives
    ``res zeta_K <= 8e log d``.  With ``zeta_K(2) > 1`` and ``2^{-i} <= 1``
    each term is at most ``8e log d / d^2``; there are at most two fundamental
    discriminants of each absolute value, and ``log t / t^2`` decreases for
    ``t > sqrt(e)``, so the tail is at most
    ``16e * int_D^oo log t / t^2 dt = 16e (log D + 1) / D``.
    """
    if D < 16:
        raise ValueError("tail bound stated for D >= 16")
    return 16 * math.e * (math.log(D) + 1) / D


def required_D(target: float) -> int:
    """Smallest ``D >= 16`` whose tail bound is at most ``target``."""
    if target <= 0:
        raise ValueError("target must be positive")
    lo, hi = 16, 16
    while tail_bound(hi) > target:
        lo, hi = hi, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_bound(mid) <= target:
            hi = mid
        else:
            lo = mid + 1
    return hi


@dataclass
class ResidueSeries:
    D: int
    field_filter: str
    partial_sum: ErrorInterval
    tail: float | None
    n_fields: int
    tol: float
    restricted_sum: ErrorInterval | None = None
    required_D: int | None = None

    @property
    def width(self) -> float:
        return self.partial_sum.width

    @property
    def certified(self) -> bool:
        """Whether enclosure width plus tail already meets ``tol``."""
        return self.tail is not None and self.width + self.tail <= self.tol

    @property
    def upper(self) -> float:
        return self.partial_sum.hi + (self.tail or 0.0)

    def to_json(self) -> dict:
        out = {"D": self.D, "field_filter": self.field_filter, "n_fields": self.n_fields}
        out.update(self.partial_sum.to_json("partial"))
        out["tail"] = self.tail
        out["width"] = self.width
        out["tol"] = self.tol
        out["certified"] = self.certified
        out["required_D"] = self.required_D
        if self.restricted_sum is not None:
            out.update(self.restricted_sum.to_json("restricted"))
        return out


def series_term(d: int, l2_tol: float) -> arb:
    """``R(K)/d^2`` as an Arb ball through the compiled L-value kernels."""
    q = abs(d)
    if d < 0:
        S = int(kernels.odd_char_moment(d))
        L1 = -arb.pi() * S / (arb(q) * arb(q).sqrt())
    else:
        s, err = kernels.even_logsin_sum(d)
        L1 = -arb(float(s), float(err)) / arb(d).sqrt()
    N = l2_terms_for(d, l2_tol)
    s2, e2 = kernels.l2_partial(d, N)
    L2 = arb(float(s2), float(e2) + l2_tail(d, N))
    zeta2 = arb.pi() ** 2 / 6 * L2
    i = 1 if d < 0 else 0
    return L1 / (2**i * zeta2 * d * d)


def residue_series(D: int, tol: float = 1e-6, field_filter: str = "all", K_set=None) -> ResidueSeries:
    """Partial sum of ``R(K)/d_K^2`` over fundamental ``|d_K| <= D``.

    ``tol`` bounds the numerical width of the partial sum.  The omitted mass is
    reported separately as ``tail``; ``required_D`` is the truncation point at
    which width plus tail would fall below ``tol``.
    """
    if D < 3:
        raise ValueError("D must be at least 3")
    if field_filter not in ("all", "h1"):
        raise ValueError("field_filter must be 'all' or 'h1'")
    ds = list(fundamental_discs(D))
    if field_filter == "h1":
        ds = [d for d in ds if QuadraticField(d).h == 1]
    n = max(1, len(ds))
    with working_precision(DEFAULT_PREC):
        total = arb(0)
        for d in ds:
            # each term gets an equal share of half the width budget; L(2) is
            # at least 1/2, so a relative L(2) error maps to at most twice that in R
            budget = tol * d * d / (8 * n)
            total += series_term(d, min(1e-2, budget))
        partial = ErrorInterval(total)
    if partial.width > tol:
        raise ValueError(f"partial sum width {partial.width} exceeds tol {tol}")
    tail = tail_bound(D) if D >= 16 else None
    slack = tol - partial.width
    req = required_D(slack) if slack > 0 else None
    restricted = restricted_sum(K_set) if K_set is not None else None
    return ResidueSeries(D, field_filter, partial, tail, len(ds), tol, restricted, req)


def restricted_sum(K_set) -> ErrorInterval:
    """``sum R(K)/d_K^2`` over an explicit field list, ascending ``(|d|, d)``."""
    fields = sorted((K if isinstance(K, QuadraticField) else QuadraticField(int(K)) for K in K_set),
                    key=lambda K: (abs(K.d), K.d))
    with working_precision(DEFAULT_PREC):
        total = arb(0)
        for K in fields:
            total += K.R.ball / (K.d * K.d)
        return ErrorInterval(total)


# ------------------------------------------------------------ rank bound


def _prime_divisors(n: int) -> list[int]:
    return list(primefactors(abs(n)))


@dataclass(frozen=True)
class RankBoundQuery:
    base: QuadraticField | None  # None means Q
    ell: int
    S: frozenset[int]

    @property
    def degree(self) -> int:
        return 1 if self.base is None else 2

    @property
    def r1(self) -> int:
        return 1 if self.base is None else self.base.r1

    def class_rank(self) -> int:
        """An upper bound for ``rk_ell`` of the class group (exact for ``ell = 2``)."""
        if self.base is None:
            return 0
        if self.ell == 2:
            # genus theory: t prime discriminant factors give rk_2 = t - 1
            return len(_prime_divisors(self.base.d)) - 1
        h = self.base.h
        if h % self.ell:
            return 0
        r = 0
        while self.ell ** (r + 1) <= h:
            r += 1
        return r

    def s1_size(self) -> int:
        """Primes of the base above ``S`` that do not lie over ``ell``."""
        rest = [p for p in self.S if p != self.ell]
        if self.base is None:
            return len(rest)
        d = self.base.d
        total = 0
        for p in rest:
            chi = kernels.kronecker(d, p)
            total += 2 if chi == 1 else 1
        return total

    @property
    def s_exponent(self) -> int:
        s = self.class_rank() + self.s1_size() + 2 * self.degree
        if self.ell == 2:
            s += self.r1
        return s

    @property
    def bound(self) -> int:
        return (self.ell**self.s_exponent - 1) // (self.ell - 1)


def ell_rank_bound(q: RankBoundQuery) -> int:
    return q.bound


def _prime_discriminants(S) -> tuple[list[int], list[int]]:
    odd = [p if p % 4 == 1 else -p for p in sorted(S) if p != 2]
    two = [-4, 8, -8] if 2 in S else []
    return odd, two


def exact_quadratic_ramified_count(S, method: str = "formula") -> int:
    """Quadratic fields unramified outside ``S`` and infinity.

    ``"formula"``: ``2^(a+b) - 1`` with ``a`` odd primes in S and ``b = 2`` if 2
    is in S.  ``"products"``: distinct products of prime discriminants.
    ``"filter"``: test every ``+-n, +-4n`` (``n`` a squarefree S-product) for
    being a fundamental discriminant.  ``"sieve"``: scan all fundamental
    discriminants up to ``8 prod(S)``.
    """
    S = sorted(set(int(p) for p in S))
    if method == "formula":
        a = sum(1 for p in S if p != 2)
        b = 2 if 2 in S else 0
        return 2 ** (a + b) - 1
    if method == "products":
        odd, two = _prime_discriminants(S)
        found = set()
        for r in range(len(odd) + 1):
            for sub in itertools.combinations(odd, r):
                base = math.prod(sub)
                for t in [1] + two:
                    found.add(base * t)
        found.discard(1)
        return len(found)
    if method == "filter":
        found = set()
        for r in range(len(S) + 1):
            for sub in itertools.combinations(S, r):
                n = math.prod(sub)
                cands = (n, -n, 4 * n, -4 * n) if 2 in S else (n, -n)
                for cand in cands:
                    if is_fundamental(cand):
                        found.add(cand)
        return len(found)
    if method == "sieve":
        bound = 8 * math.prod(S) if S else 1
        if bound > 10**7:
            raise ValueError("sieve path limited to 8*prod(S) <= 10^7")
        Sset = set(S)
        count = 0
        for d in fundamental_discs(bound):
            if set(_prime_divisors(d)) <= Sset:
                count += 1
        return count
    raise ValueError(f"unknown method {method!r}")


# ------------------------------------------------------------ slope fits


@dataclass(frozen=True)
class SlopeFit:
    samples: tuple[tuple[float, float], ...]
    exponent: float
    intercept: float
    log_power: float | None
    residual: float


def slope_fit(samples, log_power: bool = False) -> SlopeFit:
    """Least squares fit of ``log count = a log x + c (+ b log log x)``."""
    pts = sorted((float(x), float(c)) for x, c in samples)
    if len(pts) < 4:
        raise ValueError("slope_fit needs at least 4 samples")
    xs = np.array([p[0] for p in pts])
    cs = np.array([p[1] for p in pts])
    if np.any(cs <= 0) or np.any(xs <= 1):
        raise ValueError("slope_fit needs x > 1 and positive counts")
    if xs[-1] / xs[0] < 100 * (1 - 1e-12):
        raise ValueError("samples must span at least two decades")
    lx = np.log(xs)
    cols = [lx, np.ones_like(lx)]
    if log_power:
        cols.append(np.log(lx))
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, np.log(cs), rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - np.log(cs)) ** 2)))
    return SlopeFit(
        samples=tuple(pts),
        exponent=float(coef[0]),
        intercept=float(coef[1]),
        log_power=float(coef[2]) if log_power else None,
        residual=resid,
    )


def y_exponent_check(counts, y_max: float = 0.85, d4_window=(0.9, 1.1)) -> dict:
    """Fit exponents of ``Y`` and ``Z_D4`` from a list of :class:`TowerCount`."""
    fy = slope_fit([(c.x, c.y) for c in counts])
    fd = slope_fit([(c.x, c.z_d4) for c in counts])
    ok = fy.exponent <= y_max and d4_window[0] <= fd.exponent <= d4_window[1]
    return {"a_y": fy.exponent, "a_d4": fd.exponent, "pass": bool(ok)}
