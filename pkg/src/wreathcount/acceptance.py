"""The twelve acceptance checks, each returning a measured record and a verdict."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from flint import arb

from . import catalog as cat
from .asymptotics import (
    RankBoundQuery,
    ell_rank_bound,
    exact_quadratic_ramified_count,
    residue_series,
    restricted_sum,
    slope_fit,
)
from .interval import DEFAULT_PREC, ErrorInterval, working_precision
from .permgroup import (
    CyclotomicAction,
    a_invariant,
    b_invariant,
    conjugacy_classes,
    wreath_decompose,
    wreath_product,
)
from .quadfield import (
    L_value,
    QuadraticField,
    count_quadratic_Q,
    fundamental_discs,
    residuum_check,
)
from .towers import (
    C4,
    D4,
    V4,
    abelian_disc_multiset,
    c4_disc_multiset,
    count_quadratic_ext,
    h1_fields,
    relative_discriminant,
    tally,
    towers_for_field,
    v4_disc_multiset,
    v4_subfields,
)

SWEEP_X = (10**4, 3 * 10**4, 10**5, 3 * 10**5, 10**6)
WREATH_SEED = 0x5EED
RANK_SEED = 0xC2A4
INV_2 = 6 / math.pi**2


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: dict
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        vals = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        lim = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{tag}] #{self.number:>2} {self.name}: {vals}; {self.seconds:.1f}s{lim}"


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _timed(number, name, limit, fn) -> CriterionResult:
    t0 = time.perf_counter()
    passed, measured = fn()
    dt = time.perf_counter() - t0
    ok = bool(passed) and (limit is None or dt <= limit)
    return CriterionResult(number, name, ok, measured, dt, limit)


# ------------------------------------------------------------ group criteria

CATALOG_EXPECTED = {
    "S3": (Fraction(1), 1),
    "C3": (Fraction(1, 2), 1),
    "C4": (Fraction(1, 2), 1),
    "D4": (Fraction(1), 1),
    "C2wrC3": (Fraction(1), 1),
    "C2wrC2wrC2": (Fraction(1), 1),
}


def check_invariant_catalog():
    got = {}
    bad = []
    for name, (a, b) in CATALOG_EXPECTED.items():
        G = cat.get_group(name)
        val = (a_invariant(G), b_invariant(G))
        got[name] = f"({val[0]},{val[1]})"
        if val != (a, b):
            bad.append(name)
    return not bad, {"mismatches": len(bad), **got}


def admissible_pairs(cap: int = 10**5) -> list[tuple[str, str]]:
    names = cat.catalog_names()
    groups = cat.catalog()
    return [
        (a, b)
        for a in names
        for b in names
        if groups[a].order ** groups[b].degree * groups[b].order <= cap
    ]


def check_wreath_lemma(n_pairs: int = 60, seed: int = WREATH_SEED):
    pairs = admissible_pairs()
    rng = random.Random(seed)
    chosen = rng.sample(pairs, min(n_pairs, len(pairs)))
    failures = 0
    for h1, h2 in chosen:
        H1, H2 = cat.get_group(h1), cat.get_group(h2)
        W = wreath_product(H1, H2)
        if a_invariant(W) != a_invariant(H1):
            failures += 1
            continue
        NW = W.exponent
        rat_ok = b_invariant(W) == b_invariant(H1)
        # base field Q(zeta_M) with M the exponent of H1
        M = H1.exponent
        cyc_h1 = CyclotomicAction.for_cyclotomic_field(M, M)
        cyc_w = CyclotomicAction.for_cyclotomic_field(M, NW)
        cyc_ok = b_invariant(W, cyc_w) == b_invariant(H1, cyc_h1)
        failures += not (rat_ok and cyc_ok)
    return failures == 0 and len(chosen) >= 50, {"pairs": len(chosen), "failures": failures}


def check_transposition_lemma():
    tested = failures = 0
    for name, G in cat.catalog().items():
        inds = G.element_inds
        hits = [i for i in range(G.order) if inds[i] == 1]
        if not hits:
            continue
        tested += 1
        table = conjugacy_classes(G)
        one_class = len({int(table.labels[i]) for i in hits}) == 1
        dec = wreath_decompose(G)
        failures += not (one_class and dec is not None and dec.verified)
    return failures == 0 and tested > 0, {"groups": tested, "failures": failures}


# ------------------------------------------------------------ counting criteria


def check_count_c2(x: int = 10**6):
    c = count_quadratic_Q(x)
    dev = abs(c / x - INV_2)
    return dev <= 0.01, {"count": c, "ratio": c / x, "deviation": dev}


def check_per_field(xs=(10**2, 10**3, 10**4)):
    K = QuadraticField(-4)
    R = K.R.mid
    discs = []
    for x in xs:
        discs.append(abs(count_quadratic_ext(K, x) / x - R) / R)
    decreasing = all(b < a for a, b in zip(discs, discs[1:]))
    measured = {"R": R, **{f"disc@{x:g}": v for x, v in zip(xs, discs)}, "strictly_decreasing": decreasing}
    return discs[-1] <= 0.15 and decreasing, measured


class TowerSweep:
    """Towers over the class-number-one fields with ``|d| <= 50`` up to ``10^6``."""

    def __init__(self, x: int = SWEEP_X[-1], bound: int = 50):
        self.x = x
        self.fields = h1_fields(bound)
        t0 = time.perf_counter()
        self.per_field = {d: towers_for_field(d, x) for d in self.fields}
        self.seconds = time.perf_counter() - t0
        self.towers = sorted(
            (kc for lst in self.per_field.values() for kc in lst),
            key=lambda kc: (kc.tower_disc, kc.d_K, kc.square_class_id),
        )

    @cached_property
    def field_counts(self):
        return tally(self.towers, SWEEP_X, "field")

    @cached_property
    def tower_counts(self):
        return tally(self.towers, SWEEP_X, "tower")

    @cached_property
    def target(self) -> ErrorInterval:
        return restricted_sum(self.fields)


_SWEEP: TowerSweep | None = None


def sweep() -> TowerSweep:
    global _SWEEP
    if _SWEEP is None:
        _SWEEP = TowerSweep()
    return _SWEEP


def check_linear_growth():
    sw = sweep()
    fit = slope_fit([(c.x, c.z_d4) for c in sw.field_counts])
    last = sw.field_counts[-1]
    ratio = last.z_d4 / last.x
    rel = abs(ratio - sw.target.mid) / sw.target.mid
    ok = 0.9 <= fit.exponent <= 1.1 and rel <= 0.15
    return ok, {"fields": len(sw.fields), "a_d4": fit.exponent, "z_d4/x": ratio,
                "target": sw.target.mid, "rel_err": rel}


def check_degenerate():
    sw = sweep()
    fit = slope_fit([(c.x, c.y) for c in sw.tower_counts])
    last = sw.tower_counts[-1]
    share = last.y / last.z_tilde
    identity = all(c.z_tilde == c.z_d4 + c.y for c in sw.tower_counts)
    return fit.exponent <= 0.85 and share <= 0.2 and identity, {
        "a_y": fit.exponent, "y/z_tilde": share, "y": last.y, "z_tilde": last.z_tilde}


def check_discriminants():
    sw = sweep()
    tower_bad = abelian_bad = 0
    for d, lst in sw.per_field.items():
        K = QuadraticField(d)
        for kc in lst:
            rel = relative_discriminant(K, kc.delta)
            tower_bad += not (rel == kc.rel_disc_norm and kc.tower_disc == d * d * rel)
            if kc.galois_type == V4:
                d1, d2, d3 = v4_subfields(K, kc.delta)
                abelian_bad += abs(d1 * d2 * d3) != kc.tower_disc
        abelian_bad += c4_disc_multiset(d, sw.x) != abelian_disc_multiset(lst, C4)
        abelian_bad += v4_disc_multiset(d, sw.x) != abelian_disc_multiset(lst, V4)
    n_ab = sum(1 for kc in sw.towers if kc.galois_type != D4)
    return tower_bad == 0 and abelian_bad == 0, {
        "towers": len(sw.towers), "abelian": n_ab, "tower_failures": tower_bad, "abelian_failures": abelian_bad}


def check_witness():
    sw = sweep()
    with_w = [kc for kc in sw.towers if kc.witness is not None]
    bad = sum(1 for kc in with_w if kc.galois_type != D4)
    return bad == 0, {"witnessed": len(with_w), "violations": bad}


# ------------------------------------------------------------ analytic criteria

FIRST_20_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


def check_rank_bound(n: int = 100, seed: int = RANK_SEED, max_size: int = 10):
    rng = random.Random(seed)
    violations = disagreements = 0
    for _ in range(n):
        S = frozenset(rng.sample(FIRST_20_PRIMES, rng.randint(0, max_size)))
        exact = exact_quadratic_ramified_count(S)
        others = {exact_quadratic_ramified_count(S, m) for m in ("products", "filter")}
        if 8 * math.prod(S) <= 10**5:
            others.add(exact_quadratic_ramified_count(S, "sieve"))
        disagreements += others != {exact}
        violations += exact > ell_rank_bound(RankBoundQuery(None, 2, S))
    return violations == 0 and disagreements == 0, {
        "sets": n, "violations": violations, "oracle_disagreements": disagreements}


def check_analytic(bound: int = 10**4, eps=(0.25, 0.5, 1.0)):
    h_bad = res_bad = 0
    n = 0
    for d in fundamental_discs(bound):
        n += 1
        K = QuadraticField(d)
        L = L_value(d, 1).value
        with working_precision(DEFAULT_PREC):
            sq = arb(abs(d)).sqrt()
            if d < 0:
                h_an = ErrorInterval(L.ball * K.w * sq / (2 * arb.pi()))
            else:
                h_an = ErrorInterval(L.ball * sq / (2 * K.reg.ball))
        if not (h_an.width < 1 and round(h_an.mid) == K.h and h_an.contains(K.h)):
            h_bad += 1
        try:
            ok = all(residuum_check(K, e)["ok"] for e in eps)
        except Exception:
            ok = False
        res_bad += not ok
    return h_bad == 0 and res_bad == 0, {"fields": n, "h_mismatches": h_bad, "residuum_failures": res_bad}


def check_residue_series(Ds=(16, 100, 1000, 3000)):
    series = [residue_series(D, tol=1e-6) for D in Ds]
    lo_mono = all(b.partial_sum.lo >= a.partial_sum.lo for a, b in zip(series, series[1:]))
    hi_mono = all(b.partial_sum.hi >= a.partial_sum.hi for a, b in zip(series, series[1:]))
    tail_mono = all(b.tail < a.tail for a, b in zip(series, series[1:]))
    F = h1_fields(50)
    rs = restricted_sum(F)
    fields = sorted((QuadraticField(d) for d in F), key=lambda K: (abs(K.d), K.d))
    with working_precision(DEFAULT_PREC):
        ref = arb(0)
        for K in fields:
            ref += K.R.ball / (K.d * K.d)
    ref = ErrorInterval(ref)
    equal = rs.lo == ref.lo and rs.hi == ref.hi
    lo_sum = sum(Fraction(K.R.lo) / (K.d * K.d) for K in fields)
    hi_sum = sum(Fraction(K.R.hi) / (K.d * K.d) for K in fields)
    inside = Fraction(rs.lo) <= hi_sum and lo_sum <= Fraction(rs.hi)
    h1_series = residue_series(50, tol=1e-6, field_filter="h1")
    agree = h1_series.partial_sum.overlaps(rs)
    ok = lo_mono and hi_mono and tail_mono and equal and inside and agree
    return ok, {"monotone": lo_mono and hi_mono and tail_mono, "restricted_equal": equal,
                "restricted_lo": rs.lo, "restricted_hi": rs.hi, "kernel_path_overlaps": agree}


CRITERIA = [
    (1, "invariant catalog", 5, check_invariant_catalog),
    (2, "wreath lemma property", 120, check_wreath_lemma),
    (3, "transposition lemma", None, check_transposition_lemma),
    (4, "Z(Q,C2;1e6)/x vs 1/zeta(2)", 10, check_count_c2),
    (5, "Z(Q(i),C2;x)/x vs R(Q(i))", 300, check_per_field),
    (6, "restricted linear growth of Z_D4", 1800, check_linear_growth),
    (7, "degenerate towers negligible", None, check_degenerate),
    (8, "discriminant identities", None, check_discriminants),
    (9, "witness soundness", None, check_witness),
    (10, "l-rank bound", 60, check_rank_bound),
    (11, "analytic consistency |d|<=1e4", 600, check_analytic),
    (12, "residue series enclosure", None, check_residue_series),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, limit, fn in CRITERIA:
        if num == number:
            return _timed(num, name, limit, fn)
    raise KeyError(number)


def run_all(numbers=None) -> list[CriterionResult]:
    wanted = set(numbers) if numbers else {c[0] for c in CRITERIA}
    return [run_criterion(n) for n, *_ in CRITERIA if n in wanted]
