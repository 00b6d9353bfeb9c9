import math
import random

import pytest

from wreathcount.asymptotics import (
    RankBoundQuery,
    ell_rank_bound,
    exact_quadratic_ramified_count,
    required_D,
    residue_series,
    restricted_sum,
    slope_fit,
    tail_bound,
    y_exponent_check,
)
from wreathcount.quadfield import QuadraticField
from wreathcount.towers import TowerCount, count_towers, h1_fields


def test_tail_bound_examples():
    assert abs(tail_bound(1e5) - 16 * math.e * (math.log(1e5) + 1) / 1e5) < 1e-15
    assert 5.3e-3 < tail_bound(1e5) < 5.5e-3
    assert 7.3e-5 < tail_bound(1e7) < 7.5e-5
    with pytest.raises(ValueError):
        tail_bound(10)


def test_tail_bound_decreasing_and_required_D():
    vals = [tail_bound(D) for D in (16, 100, 10**3, 10**5)]
    assert vals == sorted(vals, reverse=True)
    D = required_D(1e-3)
    assert tail_bound(D) <= 1e-3 < tail_bound(D - 1)


def test_residue_series_small():
    r3 = residue_series(3)
    assert r3.n_fields == 1 and abs(r3.partial_sum.mid - 0.0261353) < 1e-6
    r4 = residue_series(4)
    assert r4.n_fields == 2 and abs(r4.partial_sum.mid - 0.042425) < 1e-6
    # each term is R(K)/d^2
    K = QuadraticField(-4)
    assert abs(r4.partial_sum.mid - r3.partial_sum.mid - K.R.mid / 16) < 1e-9


def test_residue_series_width_and_json():
    rs = residue_series(500, tol=1e-8)
    assert rs.width <= 1e-8
    out = rs.to_json()
    assert out["partial_lo"] <= out["partial_hi"] and out["tail"] == tail_bound(500)
    assert not out["certified"] and out["required_D"] > 500


def test_residue_series_monotone():
    a, b = residue_series(200), residue_series(400)
    assert b.partial_sum.lo >= a.partial_sum.lo and b.tail < a.tail


def test_restricted_matches_h1_filter():
    F = h1_fields(50)
    assert residue_series(50, field_filter="h1").partial_sum.overlaps(restricted_sum(F))


def test_residue_series_rejects_bad_input():
    with pytest.raises(ValueError):
        residue_series(2)
    with pytest.raises(ValueError):
        residue_series(100, field_filter="odd")


# --- rank bound


@pytest.mark.parametrize("S,s,bound,exact", [({2}, 3, 7, 3), ({2, 3}, 4, 15, 7), ({5}, 4, 15, 1)])
def test_rank_bound_examples(S, s, bound, exact):
    q = RankBoundQuery(None, 2, frozenset(S))
    assert (q.s_exponent, ell_rank_bound(q), exact_quadratic_ramified_count(S)) == (s, bound, exact)


@pytest.mark.parametrize("S,count", [({2}, 3), ({3}, 1), (set(), 0)])
def test_exact_count_examples(S, count):
    for method in ("formula", "products", "filter", "sieve"):
        assert exact_quadratic_ramified_count(S, method) == count


def test_exact_count_methods_agree_random():
    rng = random.Random(3)
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23]
    for _ in range(40):
        S = set(rng.sample(primes, rng.randint(0, 4)))
        counts = {exact_quadratic_ramified_count(S, m) for m in ("formula", "products", "filter")}
        if 8 * math.prod(S) <= 10**6:
            counts.add(exact_quadratic_ramified_count(S, "sieve"))
        assert len(counts) == 1
        assert counts.pop() <= RankBoundQuery(None, 2, frozenset(S)).bound


def test_rank_bound_quadratic_base():
    q = RankBoundQuery(QuadraticField(-4), 2, frozenset({5}))
    # 5 splits in Q(i): two primes above it; r1 = 0, degree 2
    assert q.s1_size() == 2 and q.s_exponent == 0 + 2 + 4
    q3 = RankBoundQuery(QuadraticField(-23), 3, frozenset())
    assert q3.class_rank() == 1 and q3.bound == (3**5 - 1) // 2


# --- slope fits


def test_slope_fit_synthetic():
    xs = [10**k for k in range(2, 7)]
    assert abs(slope_fit([(x, x) for x in xs]).exponent - 1) < 1e-9
    assert abs(slope_fit([(x, x**0.75) for x in xs]).exponent - 0.75) < 1e-9
    fit = slope_fit([(x, 3 * x * math.log(x) ** 2) for x in xs], log_power=True)
    assert abs(fit.exponent - 1) < 1e-6 and abs(fit.log_power - 2) < 1e-6


def test_slope_fit_noise():
    rng = random.Random(0xC2A4)
    xs = [10**k for k in range(2, 7)]
    fit = slope_fit([(x, x * (1 + rng.uniform(-0.01, 0.01))) for x in xs])
    assert abs(fit.exponent - 1) < 0.02


def test_slope_fit_errors():
    with pytest.raises(ValueError):
        slope_fit([(10, 10), (100, 100), (1000, 1000)])
    with pytest.raises(ValueError):
        slope_fit([(10, 1), (20, 2), (40, 4), (80, 8)])
    with pytest.raises(ValueError):
        slope_fit([(100, 0), (10**3, 1), (10**4, 2), (10**5, 3)])


def test_y_exponent_check_synthetic():
    counts = [TowerCount(x, int(x / 10 + x**0.5), int(x / 10), int(x**0.5), "tower") for x in (1e3, 1e4, 1e5, 1e6)]
    out = y_exponent_check(counts)
    assert out["pass"] and abs(out["a_y"] - 0.5) < 0.01


def test_y_exponent_on_small_sweep():
    rep = count_towers(h1_fields(30), 10**5, samples=[10**3, 3 * 10**3, 10**4, 3 * 10**4])
    out = y_exponent_check(rep.counts, d4_window=(0.8, 1.3))
    assert out["a_y"] < 0.85
