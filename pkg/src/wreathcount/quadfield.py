"""Quadratic fields over Q: class numbers, units, L-values and zeta residues.

Elements of the maximal order are pairs ``(x, y)`` meaning ``x + y*omega``
with ``omega = (sigma + sqrt(d)) / 2`` and ``sigma = d mod 2``, so that
``omega**2 = sigma*omega + c`` with ``c = (d - sigma) / 4``.

Analytic quantities are returned as :class:`ErrorInterval` enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

from flint import arb, fmpq, fmpz
from sympy import factorint
from sympy.ntheory import sqrt_mod

from . import kernels
from .interval import DEFAULT_PREC, ErrorInterval, working_precision

DEFAULT_L2_TOL = 1e-10
DEFAULT_MAX_TERMS = 2 * 10**8
DEFAULT_UNIT_DIGITS = 20000


class NotFundamental(ValueError):
    pass


class TermBudgetExceeded(RuntimeError):
    pass


class UnitOverflow(RuntimeError):
    pass


class InconsistentEnclosure(RuntimeError):
    pass


class UnsupportedField(ValueError):
    pass


def kronecker(d: int, n: int) -> int:
    return int(kernels.kronecker(int(d), int(n)))


def _squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental(d: int) -> bool:
    d = int(d)
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def fundamental_part(n: int) -> int:
    """Discriminant of ``Q(sqrt(n))`` for a nonsquare integer ``n``."""
    if n == 0:
        raise ValueError("zero has no square class")
    core = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            core *= p
    if core == 1:
        raise ValueError(f"{n} is a square")
    return core if core % 4 == 1 else 4 * core


def fundamental_discs(x: int):
    """Yield every fundamental discriminant with ``1 < |d| <= x``, by ``(|d|, d)``."""
    for d in kernels.fundamental_discriminants(int(x)):
        yield int(d)


def count_quadratic_Q(x: int) -> int:
    return len(kernels.fundamental_discriminants(int(x)))


# ---------------------------------------------------------------- forms, units


def _reduced_indefinite_forms(d: int) -> list[tuple[int, int, int]]:
    s = math.isqrt(d)
    forms = []
    for b in range(1, s + 1):
        if (b - d) % 2:
            continue
        n = (d - b * b) // 4
        # reduced: s + 1 - b <= 2|a| <= s + b
        lo = max(1, (s + 2 - b) // 2)
        for A in range(lo, (s + b) // 2 + 1):
            if n % A == 0:
                forms.append((A, b, -(n // A)))
                forms.append((-A, b, n // A))
    return forms


def _rho(form, d: int, s: int):
    a, b, c = form
    m = 2 * abs(c)
    r = s - ((s + b) % m)
    return (c, r, (r * r - d) // (4 * c))


def narrow_class_number(d: int) -> int:
    """Number of proper classes of primitive forms of discriminant ``d``."""
    if d < 0:
        # reduced forms are automatically primitive for fundamental d
        return int(kernels.count_reduced_forms(d))
    s = math.isqrt(d)
    forms = _reduced_indefinite_forms(d)
    unseen = set(forms)
    cycles = 0
    for f in forms:
        if f not in unseen:
            continue
        cycles += 1
        g = f
        while g in unseen:
            unseen.discard(g)
            g = _rho(g, d, s)
    return cycles


def fundamental_unit(d: int, max_digits: int = DEFAULT_UNIT_DIGITS) -> tuple[tuple[int, int], int]:
    """Fundamental unit ``(a + b*sqrt(d))/2 > 1`` as ``((a, b), norm)``.

    Continued fraction of ``omega``; the first convergent ``p/q`` with
    ``N(p - q*omega) = +-1`` yields the unit ``p - q*conj(omega)``.
    """
    if d <= 0:
        raise ValueError("fundamental unit requested for an imaginary field")
    sigma = d % 2
    c = (d - sigma) // 4
    s = math.isqrt(d)
    P, Q = sigma, 2
    # seeded so the first update yields p0 = a0, q0 = 1
    p_prev, p, q_prev, q = 0, 1, 1, 0
    limit = 10**max_digits
    while True:
        a = (P + s) // Q if Q > 0 else -((P + s) // -Q + 1)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        x, y = p, -q
        n = x * x + sigma * x * y - c * y * y
        if n in (1, -1):
            X, Y = p - q * sigma, q
            return (2 * X + Y * sigma, Y), n
        if p > limit:
            raise UnitOverflow(f"fundamental unit of Q(sqrt({d})) exceeds {max_digits} digits")
        P = a * Q - P
        Q = (d - P * P) // Q


# ------------------------------------------------------------------ L-values


@dataclass(frozen=True)
class LValue:
    s: int
    chi_discriminant: int
    value: ErrorInterval
    truncation_N: int


def _l1_arb(d: int) -> arb:
    if d < 0:
        S = int(kernels.odd_char_moment(d))
        q = -d
        return -arb.pi() * S / (arb(q) * arb(q).sqrt())
    tab = kernels.kronecker_table(d)
    total = arb(0)
    for a in range(1, (d - 1) // 2 + 1):
        ch = int(tab[a])
        if ch:
            term = arb.sin_pi_fmpq(fmpq(a, d)).log()
            total = total + term if ch > 0 else total - term
    # chi(d - a) = chi(a) for even chi, and the half sum covers a <= d/2
    return -2 * total / arb(d).sqrt()


def _l1_kernel(d: int) -> arb:
    if d < 0:
        return _l1_arb(d)
    s, err = kernels.even_logsin_sum(d)
    return -arb(float(s), float(err)) / arb(d).sqrt()


def l2_terms_for(d: int, tail: float) -> int:
    """Smallest N whose tail bound ``min(1/N, |d|/(N+1)^2)`` is at most ``tail``."""
    q = abs(d)
    n1 = math.ceil(1.0 / tail)
    n2 = max(1, math.ceil(math.sqrt(q / tail)) - 1)
    while q / (n2 + 1) ** 2 > tail:
        n2 += 1
    return max(1, min(n1, n2))


def l2_tail(d: int, N: int) -> float:
    # partial sums of chi over any interval are at most |d|/2 (Abel summation)
    return min(1.0 / N, abs(d) / (N + 1) ** 2) * (1 + 2**-50)


def L_value(d: int, s: int, tol: float | None = None, method: str = "arb",
            max_terms: int = DEFAULT_MAX_TERMS) -> LValue:
    """Enclosure of ``L(s, chi_d)`` for ``s`` in ``{1, 2}``.

    ``s = 1`` uses the finite closed form over one period (``method="arb"``
    evaluates every term in ball arithmetic, ``"kernel"`` uses the compiled
    float sum with its a priori rounding bound). ``s = 2`` sums the series
    directly and adds the tail bound.
    """
    d = int(d)
    if not is_fundamental(d):
        raise NotFundamental(d)
    if s == 1:
        prec = DEFAULT_PREC
        while True:
            with working_precision(prec):
                ball = _l1_arb(d) if method == "arb" else _l1_kernel(d)
            val = ErrorInterval(ball)
            if tol is None or val.width <= tol or method != "arb":
                break
            if prec >= 4096:
                raise TermBudgetExceeded(f"L(1, chi_{d}) width {val.width} above tol {tol}")
            prec *= 2
        if tol is not None and val.width > tol:
            raise TermBudgetExceeded(f"L(1, chi_{d}) width {val.width} above tol {tol}")
        return LValue(1, d, val, abs(d))
    if s == 2:
        tol = DEFAULT_L2_TOL if tol is None else tol
        N = l2_terms_for(d, 0.45 * tol)
        if N > max_terms:
            raise TermBudgetExceeded(
                f"L(2, chi_{d}) to tol {tol} requires N = {N} terms, budget {max_terms}"
            )
        total, err = kernels.l2_partial(d, N)
        val = ErrorInterval.from_float(float(total), float(err) + l2_tail(d, N))
        return LValue(2, d, val, N)
    raise ValueError("only s = 1 and s = 2 are supported")


# ------------------------------------------------------------------- fields


@dataclass(frozen=True)
class PrimeElement:
    """Generator of a prime ideal of norm ``ideal_norm`` above ``p``."""

    p: int
    kind: str  # "split", "ramified" or "inert"
    element: tuple[int, int]
    norm: int  # signed field norm of ``element``
    root: int | None  # omega = root mod the ideal (None when inert)

    @property
    def ideal_norm(self) -> int:
        return abs(self.norm)


class QuadraticField:
    """``Q(sqrt(d))`` for a fundamental discriminant ``d``."""

    def __init__(self, d: int, unit_digits: int = DEFAULT_UNIT_DIGITS):
        d = int(d)
        if not is_fundamental(d):
            raise NotFundamental(f"{d} is not a fundamental discriminant")
        self.d = d
        self.sigma = d % 2
        self.c = (d - self.sigma) // 4
        self.m = d if d % 4 == 1 else d // 4
        self.r1, self.r2 = (2, 0) if d > 0 else (0, 1)
        self.w = 6 if d == -3 else 4 if d == -4 else 2
        self.unit_digits = unit_digits

    def __repr__(self):
        return f"QuadraticField({self.d})"

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("QuadraticField", self.d))

    @property
    def i(self) -> int:
        return self.r2

    # element arithmetic
    def mul(self, a, b):
        x1, y1 = a
        x2, y2 = b
        return (x1 * x2 + self.c * y1 * y2, x1 * y2 + x2 * y1 + self.sigma * y1 * y2)

    def norm(self, a) -> int:
        x, y = a
        return x * x + self.sigma * x * y - self.c * y * y

    def trace(self, a) -> int:
        x, y = a
        return 2 * x + self.sigma * y

    def conj(self, a):
        x, y = a
        return (x + self.sigma * y, -y)

    def embeddings(self, a) -> tuple[complex, complex] | tuple[float, float]:
        x, y = a
        if self.d > 0:
            r = math.sqrt(self.d)
            return (x + y * (self.sigma + r) / 2, x + y * (self.sigma - r) / 2)
        z = complex(x + y * self.sigma / 2, y * math.sqrt(-self.d) / 2)
        return (z, z.conjugate())

    # class group and units
    @cached_property
    def narrow_h(self) -> int:
        return narrow_class_number(self.d)

    @cached_property
    def _unit(self):
        if self.d < 0:
            return None
        return fundamental_unit(self.d, self.unit_digits)

    @property
    def unit(self) -> tuple[int, int] | None:
        return None if self._unit is None else self._unit[0]

    @property
    def unit_norm(self) -> int | None:
        return None if self._unit is None else self._unit[1]

    @property
    def unit_element(self) -> tuple[int, int] | None:
        """Fundamental unit in ``(x, y)`` coordinates, ``x + y*omega``."""
        if self._unit is None:
            return None
        a, b = self._unit[0]
        return ((a - b * self.sigma) // 2, b)

    @cached_property
    def h(self) -> int:
        if self.d < 0 or self.unit_norm == -1:
            return self.narrow_h
        return self.narrow_h // 2

    @cached_property
    def reg(self) -> ErrorInterval:
        if self.d < 0:
            return ErrorInterval(arb(0))
        a, b = self.unit
        with working_precision(DEFAULT_PREC):
            eps = (arb(fmpz(a)) + arb(fmpz(b)) * arb(self.d).sqrt()) / 2
            return ErrorInterval(eps.log())

    def unit_square_classes(self) -> list[tuple[int, int]]:
        """Representatives of ``O_K^* / (O_K^*)^2``."""
        if self.d > 0:
            e = self.unit_element
            return [(1, 0), (-1, 0), e, (-e[0], -e[1])]
        if self.d == -4:
            return [(1, 0), (0, 1)]
        return [(1, 0), (-1, 0)]

    # analytic data
    def residue_class_number_formula(self) -> ErrorInterval:
        with working_precision(DEFAULT_PREC):
            sq = arb(abs(self.d)).sqrt()
            if self.d < 0:
                return ErrorInterval(2 * arb.pi() * self.h / (self.w * sq))
            return ErrorInterval(2 * self.h * self.reg.ball / sq)

    @cached_property
    def residue(self) -> ErrorInterval:
        return residue_zeta(self)

    @cached_property
    def zeta2(self) -> ErrorInterval:
        return zeta_K_at_2(self)

    @cached_property
    def R(self) -> ErrorInterval:
        return R_constant(self)

    def to_json(self) -> dict:
        out = {"d": self.d, "h": self.h, "w": self.w, "r1": self.r1, "r2": self.r2}
        out.update(self.reg.to_json("reg"))
        out.update(self.residue.to_json("res"))
        out.update(self.zeta2.to_json("zeta2"))
        out.update(self.R.to_json("R"))
        return out


@lru_cache(maxsize=4096)
def field(d: int) -> QuadraticField:
    """Cached constructor."""
    return QuadraticField(d)


def class_number(d: int) -> int:
    return QuadraticField(d).h


def residue_zeta(K: QuadraticField, method: str = "arb") -> ErrorInterval:
    """``res_{s=1} zeta_K = L(1, chi_d)``, cross-checked with the class number formula."""
    analytic = L_value(K.d, 1, method=method).value
    algebraic = K.residue_class_number_formula()
    if not analytic.overlaps(algebraic):
        raise InconsistentEnclosure(
            f"d={K.d}: L(1) enclosure {analytic} misses class number formula {algebraic}"
        )
    return analytic.intersect(algebraic)


def zeta_K_at_2(K: QuadraticField, tol: float | None = None) -> ErrorInterval:
    lv = L_value(K.d, 2, tol=tol)
    with working_precision(DEFAULT_PREC):
        return ErrorInterval(arb.pi() ** 2 / 6 * lv.value.ball)


def R_constant(K: QuadraticField, tol: float | None = None) -> ErrorInterval:
    """``2^{-i(K)} res zeta_K / zeta_K(2)``, the linear coefficient of ``Z(K, C2; x)``."""
    z2 = K.zeta2 if tol is None else zeta_K_at_2(K, tol)
    with working_precision(DEFAULT_PREC):
        return ErrorInterval(K.residue.ball / (z2.ball * 2**K.i))


def analytic_class_number(K: QuadraticField, method: str = "kernel") -> ErrorInterval:
    """``h`` recovered from ``L(1, chi_d)`` through the class number formula."""
    L = L_value(K.d, 1, method=method).value
    with working_precision(DEFAULT_PREC):
        sq = arb(abs(K.d)).sqrt()
        if K.d < 0:
            return ErrorInterval(L.ball * K.w * sq / (2 * arb.pi()))
        return ErrorInterval(L.ball * sq / (2 * K.reg.ball))


def residuum_check(K: QuadraticField, eps: float) -> dict:
    """Compare ``res zeta_K`` with ``2^3 |d|^eps / eps``."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    with working_precision(DEFAULT_PREC):
        e = arb(fmpq(*float(eps).as_integer_ratio()))
        rhs = ErrorInterval(8 * arb(abs(K.d)) ** e / e)
    lhs = K.residue
    return {"d": K.d, "eps": eps, "lhs_hi": lhs.hi, "rhs_lo": rhs.lo, "lhs": lhs.mid, "rhs": rhs.mid,
            "ok": lhs.hi <= rhs.lo}


def class_bound_report(d: int, h: int | None = None) -> float:
    if abs(d) < 3:
        raise ValueError("|d| must be at least 3")
    h = class_number(d) if h is None else h
    return h / (math.sqrt(abs(d)) * math.log(abs(d)))


# ---------------------------------------------------------- prime elements


def _omega_roots(K: QuadraticField, p: int) -> list[int]:
    """Roots of ``t^2 - sigma*t - c`` mod ``p``."""
    if p == 2:
        return [t for t in (0, 1) if (t * t - K.sigma * t - K.c) % 2 == 0]
    # t = (sigma + u)/2 with u^2 = d
    inv2 = (p + 1) // 2
    us = sqrt_mod(K.d % p, p, all_roots=True) or []
    return sorted({((K.sigma + u) * inv2) % p for u in us})


def _short_vectors(K: QuadraticField, basis, T: int):
    """Lattice points ``v`` of the given basis with ``Q(v) <= T``.

    ``Q(x, y) = (2x + sigma*y)^2 + |d| y^2`` is positive definite on both
    real and imaginary fields.
    """
    sig, ad = K.sigma, abs(K.d)

    def Q(v):
        x, y = v
        return (2 * x + sig * y) ** 2 + ad * y * y

    def B(u, v):
        return (Q((u[0] + v[0], u[1] + v[1])) - Q(u) - Q(v)) // 2

    b1, b2 = basis
    # Lagrange-Gauss reduction
    if Q(b1) > Q(b2):
        b1, b2 = b2, b1
    while True:
        mu = round(B(b1, b2) / Q(b1))
        b2 = (b2[0] - mu * b1[0], b2[1] - mu * b1[1])
        if Q(b2) >= Q(b1):
            break
        b1, b2 = b2, b1
    q1 = Q(b1)
    mu = B(b1, b2) / q1
    q2star = Q(b2) - B(b1, b2) ** 2 / q1
    jmax = int(math.sqrt(T / q2star)) + 1
    out = []
    for j in range(-jmax, jmax + 1):
        rem = T - j * j * q2star
        if rem < -1e-9 * T:
            continue
        w = math.sqrt(max(rem, 0.0) / q1)
        center = -mu * j
        for i in range(math.floor(center - w) - 1, math.ceil(center + w) + 2):
            v = (i * b1[0] + j * b2[0], i * b1[1] + j * b2[1])
            if Q(v) <= T:
                out.append(v)
    return out


def _unit_bound(K: QuadraticField) -> float:
    if K.d < 0:
        return 1.0
    a, b = K.unit
    return (a + b * math.sqrt(K.d)) / 2


def ideal_generator(K: QuadraticField, p: int, root: int) -> tuple[int, int]:
    """Generator of the prime ideal ``(p, omega - root)`` of a class-number-one field."""
    eps = _unit_bound(K)
    # a balanced generator has both |conjugates|^2 <= p*eps; Q = 2(a^2 + a'^2)
    # for real fields and Q = 4|a|^2 for imaginary ones
    T = 4 * p if K.d < 0 else math.ceil(2 * p * (eps + 1 / eps)) + 1
    cands = [v for v in _short_vectors(K, ((p, 0), (-root, 1)), T) if abs(K.norm(v)) == p]
    if not cands:
        raise UnsupportedField(f"no generator of norm {p} found in Q(sqrt({K.d}))")
    sig, ad = K.sigma, abs(K.d)
    return min(cands, key=lambda v: ((2 * v[0] + sig * v[1]) ** 2 + ad * v[1] ** 2, -v[0], -v[1]))


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q :: q] = bytearray(len(range(q * q, n + 1, q)))
    return [i for i in range(n + 1) if sieve[i]]


def prime_elements(K: QuadraticField, norm_bound: int) -> list[PrimeElement]:
    """One generator for each prime ideal of norm at most ``norm_bound``."""
    if K.h != 1:
        raise UnsupportedField(f"Q(sqrt({K.d})) has class number {K.h}")
    out = []
    for p in _primes_upto(int(norm_bound)):
        roots = _omega_roots(K, p)
        if not roots:
            if p * p <= norm_bound:
                out.append(PrimeElement(p, "inert", (p, 0), p * p, None))
            continue
        kind = "ramified" if len(roots) == 1 else "split"
        for r in roots:
            g = ideal_generator(K, p, r)
            out.append(PrimeElement(p, kind, g, K.norm(g), r))
    out.sort(key=lambda pe: (pe.ideal_norm, pe.root if pe.root is not None else -1))
    return out
