"""Quadratic extensions ``L = K(sqrt(delta))`` of class-number-one quadratic fields.

With ``h(K) = 1`` the square classes of ``K*`` are ``u * pi_1 ... pi_r`` with
``u`` a unit modulo squares and distinct prime elements ``pi_i``.  The
relative discriminant is the odd part of ``N(delta)`` times a 2-part read off
from ``delta mod 4 O_K`` by testing solvability of ``a^2 = delta`` modulo
powers of each prime over 2.  The absolute discriminant of the quartic field
is ``d_K^2 * N(d_{L/K})``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import factorint

from .quadfield import (
    PrimeElement,
    QuadraticField,
    UnsupportedField,
    fundamental_discs,
    fundamental_part,
    prime_elements,
)

D4, C4, V4 = "D4", "C4", "V4"


def coprime_part(a: int, S) -> int:
    """Largest divisor of ``a`` coprime to every prime in ``S``."""
    if a < 1:
        raise ValueError("a must be positive")
    for p in S:
        while a % p == 0:
            a //= p
    return a


def _is_square_int(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


@dataclass(frozen=True, slots=True)
class KummerClass:
    d_K: int
    delta: tuple[int, int]
    square_class_id: tuple  # (unit index, sorted prime-ideal ids)
    rel_disc_norm: int
    tower_disc: int
    galois_type: str
    witness: int | None

    def to_row(self) -> dict:
        return {
            "d_K": self.d_K,
            "delta_x": self.delta[0],
            "delta_y": self.delta[1],
            "rel_disc_norm": self.rel_disc_norm,
            "tower_disc": self.tower_disc,
            "type": self.galois_type,
            "witness": "" if self.witness is None else self.witness,
        }


# ------------------------------------------------------------ 2-adic data


class _TwoAdic:
    """Valuations at the primes over 2 for elements known modulo ``4 O_K``."""

    def __init__(self, K: QuadraticField):
        self.K = K
        d = K.d
        if d % 2 == 0:
            self.kind, self.e, self.f = "ramified", 2, 1
            self.roots = [None]
        elif d % 8 == 5:
            self.kind, self.e, self.f = "inert", 1, 2
            self.roots = [None]
        else:
            self.kind, self.e, self.f = "split", 1, 1
            # 2-adic roots of t^2 - t - c modulo 4, one per prime over 2
            self.roots = sorted(t for t in range(4) if (t * t - t - K.c) % 4 == 0)

    def valuation(self, a, which: int) -> int:
        """``v_p(a)`` capped at ``2e`` for the ``which``-th prime over 2."""
        x, y = a[0] % 4, a[1] % 4
        cap = 2 * self.e
        if self.kind == "inert":
            if x == 0 and y == 0:
                return cap
            return min(_v2(x) if x else 2, _v2(y) if y else 2)
        if self.kind == "ramified":
            if x == 0 and y == 0:
                return cap
            return min(_v2(self.K.norm((x, y))), cap)
        r = self.roots[which]
        v = (x + y * r) % 4
        return cap if v == 0 else min(_v2(v), cap)

    def exponent(self, delta, which: int) -> int | None:
        """``v_p(d_{L/K})`` at the ``which``-th prime over 2; None if ``p^2 | delta``."""
        e = self.e
        v = self.valuation(delta, which)
        if v >= 2:
            return None
        if v == 1:
            return 2 * e + 1
        K = self.K
        k = 0
        for bx in range(4):
            for by in range(4):
                sq = K.mul((bx, by), (bx, by))
                k = max(k, self.valuation((sq[0] - delta[0], sq[1] - delta[1]), which))
        return 0 if k >= 2 * e else 2 * e + 1 - k

    def two_part(self, delta) -> int | None:
        out = 1
        for which in range(len(self.roots)):
            ex = self.exponent(delta, which)
            if ex is None:
                return None
            out *= 2 ** (self.f * ex)
        return out


@lru_cache(maxsize=None)
def _two_part_table(d: int) -> dict[tuple[int, int], int | None]:
    K = QuadraticField(d)
    ta = _TwoAdic(K)
    return {(x, y): ta.two_part((x, y)) for x in range(4) for y in range(4)}


def relative_discriminant(K: QuadraticField, delta) -> int:
    """``N(d_{L/K})`` for ``L = K(sqrt(delta))`` with ``delta`` squarefree in ``O_K``."""
    n = abs(K.norm(delta))
    if n == 0:
        raise ValueError("delta must be nonzero")
    two = _two_part_table(K.d)[(delta[0] % 4, delta[1] % 4)]
    if two is None:
        raise ValueError(f"delta {delta} is divisible by the square of a prime over 2")
    return coprime_part(n, (2,)) * two


def galois_type(K: QuadraticField, delta) -> str:
    n = K.norm(delta)
    if _is_square_int(n):
        return V4
    if _is_square_int(K.m * n):
        return C4
    return D4


def lemma_tower_witness(K: QuadraticField, delta) -> int | None:
    """Smallest prime unramified in ``K`` that divides ``N(d_{L/K})`` exactly once."""
    rel = relative_discriminant(K, delta)
    hits = [p for p, e in factorint(rel).items() if e == 1 and K.d % p]
    return min(hits) if hits else None


def is_square(K: QuadraticField, a) -> bool:
    """Whether ``a`` is a square in ``O_K``."""
    if a == (0, 0):
        return True
    n = K.norm(a)
    if not _is_square_int(n):
        return False
    r = math.isqrt(n)
    tr = K.trace(a)
    for s in (r, -r):
        T = tr + 2 * s
        if T == 0:
            # beta has trace zero, so beta = k*sqrt(d) or k*sqrt(m) and a is rational
            if a[1] != 0:
                continue
            base = K.d if K.sigma else K.m
            if a[0] % base == 0 and _is_square_int(a[0] // base):
                return True
            continue
        if not _is_square_int(T):
            continue
        t = math.isqrt(T)
        # beta^2 - t*beta + N(beta) = 0 and beta^2 = a give beta = (a + N(beta))/t
        num = (a[0] + s, a[1])
        if num[0] % t or num[1] % t:
            continue
        beta = (num[0] // t, num[1] // t)
        if K.mul(beta, beta) == tuple(a):
            return True
    return False


# ------------------------------------------------------------ enumeration


@dataclass(frozen=True)
class _Setup:
    K: QuadraticField
    odd: tuple[PrimeElement, ...]
    two: tuple[PrimeElement, ...]
    units: tuple[tuple[int, int], ...]


def _setup(K: QuadraticField, norm_bound: int) -> _Setup:
    if K.h != 1:
        raise UnsupportedField(f"Q(sqrt({K.d})) has class number {K.h}")
    odd = tuple(pe for pe in prime_elements(K, norm_bound) if pe.p != 2)
    two = tuple(pe for pe in prime_elements(K, 4) if pe.p == 2)
    return _Setup(K, odd, two, tuple(K.unit_square_classes()))


def _ideal_id(pe: PrimeElement) -> tuple[int, int]:
    return (pe.p, -1 if pe.root is None else pe.root)


def _odd_products(st: _Setup, bound: int):
    """Yield ``(element, ideal norm, chosen indices)`` over squarefree odd products."""
    K, primes = st.K, st.odd
    yield (1, 0), 1, ()
    stack = [(0, (1, 0), 1, ())]
    while stack:
        start, elem, nrm, idx = stack.pop()
        for i in range(start, len(primes)):
            q = nrm * primes[i].ideal_norm
            if q > bound:
                break
            e2 = K.mul(elem, primes[i].element)
            idx2 = idx + (i,)
            yield e2, q, idx2
            stack.append((i + 1, e2, q, idx2))


def squarefree_elements(K: QuadraticField, norm_bound: int):
    """Yield ``(delta, square_class_id)`` for every nontrivial square class of ``K*``
    whose odd prime support has norm at most ``norm_bound``."""
    st = _setup(K, norm_bound)
    yield from _classes(st, norm_bound)


def _classes(st: _Setup, bound: int):
    K = st.K
    twos = st.two
    two_subsets = [()]
    for j in range(len(twos)):
        two_subsets += [s + (j,) for s in two_subsets]
    for elem, _, idx in _odd_products(st, bound):
        odd_ids = tuple(_ideal_id(st.odd[i]) for i in idx)
        for sub in two_subsets:
            e2 = elem
            for j in sub:
                e2 = K.mul(e2, twos[j].element)
            ids = tuple(sorted(odd_ids + tuple(_ideal_id(twos[j]) for j in sub)))
            for ui, u in enumerate(st.units):
                if ui == 0 and not ids:
                    continue  # delta = 1
                yield K.mul(u, e2), (ui, ids)


def _witness_from_ids(K: QuadraticField, ids, two_part: int) -> int | None:
    count: dict[int, int] = {}
    for p, root in ids:
        if p == 2 or K.d % p == 0:
            continue
        count[p] = count.get(p, 0) + (2 if root == -1 else 1)
    hits = [p for p, c in count.items() if c == 1]
    if K.d % 2 and two_part == 2:
        hits.append(2)
    return min(hits) if hits else None


def kummer_classes(K: QuadraticField, rel_bound: int, setup: _Setup | None = None) -> list[KummerClass]:
    """Every quadratic extension of ``K`` with ``N(d_{L/K}) <= rel_bound``."""
    st = setup if setup is not None else _setup(K, rel_bound)
    table = _two_part_table(K.d)
    dK2 = K.d * K.d
    out = []
    for delta, scid in _classes(st, rel_bound):
        two = table[(delta[0] % 4, delta[1] % 4)]
        n = K.norm(delta)
        rel = coprime_part(abs(n), (2,)) * two
        if rel > rel_bound:
            continue
        if _is_square_int(n):
            gt = V4
        elif _is_square_int(K.m * n):
            gt = C4
        else:
            gt = D4
        out.append(
            KummerClass(K.d, delta, scid, rel, dK2 * rel, gt, _witness_from_ids(K, scid[1], two))
        )
    out.sort(key=lambda kc: (kc.tower_disc, kc.square_class_id))
    return out


def count_quadratic_ext(K: QuadraticField, x: int) -> int:
    """``Z(K, C2; x)``: quadratic extensions of ``K`` with ``N(d_{L/K}) <= x``."""
    return len(kummer_classes(K, int(x)))


def towers_for_field(d: int, x: int) -> list[KummerClass]:
    K = QuadraticField(d)
    B = int(x) // (d * d)
    if B < 1:
        return []
    return kummer_classes(K, B)


def v4_subfields(K: QuadraticField, delta) -> tuple[int, int, int]:
    """Discriminants of the three quadratic subfields of a biquadratic ``K(sqrt(delta))``."""
    n = K.norm(delta)
    r = math.isqrt(n)
    tr = K.trace(delta)
    rho = tr + 2 * r if tr + 2 * r != 0 else tr - 2 * r
    d2 = fundamental_part(rho)
    d3 = fundamental_part(rho * K.d)
    return tuple(sorted((K.d, d2, d3)))


# ------------------------------------------------------------ counting


@dataclass(frozen=True)
class TowerCount:
    x: int
    z_tilde: int
    z_d4: int
    y: int
    mode: str


@dataclass
class TowerReport:
    counts: list[TowerCount]
    towers: list[KummerClass] = field(repr=False, default_factory=list)


def _field_key(kc: KummerClass, K: QuadraticField):
    if kc.galois_type == V4:
        return (V4, v4_subfields(K, kc.delta))
    # D4 and C4 quartics contain exactly one quadratic field; distinct square
    # classes over the same K are distinct fields (conjugates included)
    return (kc.galois_type, kc.d_K, kc.square_class_id)


def count_towers(fields, x: int, mode: str = "tower", samples=None, workers: int = 1,
                 keep_towers: bool = False) -> TowerReport:
    """Count towers ``L/K/Q`` with ``d_K^2 N(d_{L/K}) <= x`` over ``K`` in ``fields``.

    ``mode="tower"`` counts pairs ``(K, L)``; ``mode="field"`` counts distinct
    quartic fields ``L``.  ``samples`` lists additional bounds ``<= x`` at which
    the counts are reported.
    """
    if mode not in ("tower", "field"):
        raise ValueError("mode must be 'tower' or 'field'")
    ds = [K.d if isinstance(K, QuadraticField) else int(K) for K in fields]
    bad = [d for d in ds if QuadraticField(d).h != 1]
    if bad:
        raise UnsupportedField(f"class number > 1 for d in {bad}")
    x = int(x)
    xs = sorted(set(int(s) for s in (samples or [])) | {x})
    if xs[-1] > x:
        raise ValueError("sample bounds must not exceed x")
    if workers > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_field = list(pool.map(towers_for_field, ds, [x] * len(ds)))
    else:
        per_field = [towers_for_field(d, x) for d in ds]
    towers = sorted((kc for lst in per_field for kc in lst), key=lambda kc: (kc.tower_disc, kc.d_K, kc.square_class_id))
    return TowerReport(tally(towers, xs, mode), towers if keep_towers else [])


def tally(towers: list[KummerClass], xs, mode: str = "tower") -> list[TowerCount]:
    """Counts at each bound in ``xs`` from towers sorted by ``tower_disc``."""
    if mode == "field":
        seen = set()
        items = []
        for kc in towers:
            key = _field_key(kc, QuadraticField(kc.d_K))
            if key not in seen:
                seen.add(key)
                items.append(kc)
    else:
        items = towers
    counts = []
    for xb in sorted(xs):
        z = d4 = y = 0
        for kc in items:
            if kc.tower_disc > xb:
                break
            z += 1
            if kc.galois_type == D4:
                d4 += 1
            else:
                y += 1
        counts.append(TowerCount(xb, z, d4, y, mode))
    return counts


def h1_fields(bound: int) -> list[int]:
    """Fundamental discriminants with ``|d| <= bound`` and class number one."""
    return [d for d in fundamental_discs(bound) if QuadraticField(d).h == 1]


# ------------------------------------------------------------ abelian oracles


def _prime_disc_factors(d: int) -> tuple[int | None, list[int]]:
    """Split ``d`` into its 2-part prime discriminant and odd primes."""
    odd = [p for p in factorint(abs(d)) if p != 2]
    rest = d
    for p in odd:
        rest //= p if p % 4 == 1 else -p
    return (None if rest == 1 else rest), odd


def c4_disc_multiset(d: int, x: int) -> dict[int, int]:
    """Cyclic quartic fields containing ``Q(sqrt(d))`` with ``|disc| <= x``,
    counted by discriminant, from quartic Dirichlet characters ``psi``
    with ``psi^2 = chi_d``: disc = ``d * f(psi)^2``, two characters per field."""
    two, odd = _prime_disc_factors(d)
    if d < 0 or any(p % 4 != 1 for p in odd):
        return {}
    base = math.prod(odd)
    mult = 2 ** len(odd)
    if two is None:
        two_opts = [(1, 1), (4, 1), (8, 2)]  # trivial, chi_-4, chi_+-8
    elif two == 8:
        two_opts = [(16, 4)]
    else:
        return {}
    fmax = math.isqrt(x // d) if x >= d else 0
    out: dict[int, int] = {}
    for f2, c2 in two_opts:
        f0 = base * f2
        if f0 > fmax:
            continue
        # squarefree odd n coprime to d: one Legendre character per prime
        for n in range(1, fmax // f0 + 1, 2):
            if math.gcd(n, d) != 1 or any(e > 1 for e in factorint(n).values()):
                continue
            f = f0 * n
            disc = d * f * f
            out[disc] = out.get(disc, 0) + mult * c2
    return {k: v // 2 for k, v in out.items() if v // 2}


def v4_disc_multiset(d: int, x: int) -> dict[int, int]:
    """Biquadratic fields containing ``Q(sqrt(d))`` with ``|disc| <= x``."""
    seen = set()
    out: dict[int, int] = {}
    m1 = d if d % 4 == 1 else d // 4
    for d2 in fundamental_discs(max(1, x // (3 * abs(d)))):
        if d2 == d:
            continue
        m2 = d2 if d2 % 4 == 1 else d2 // 4
        g = math.gcd(m1, m2)
        m3 = (m1 // g) * (m2 // g)
        d3 = m3 if m3 % 4 == 1 else 4 * m3
        disc = abs(d * d2 * d3)
        key = frozenset((d2, d3))
        if disc <= x and key not in seen:
            seen.add(key)
            out[disc] = out.get(disc, 0) + 1
    return out


def abelian_disc_multiset(towers: list[KummerClass], kind: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for kc in towers:
        if kc.galois_type == kind:
            out[kc.tower_disc] = out.get(kc.tower_disc, 0) + 1
    return out
