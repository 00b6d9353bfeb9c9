import math

import pytest
from flint import arb
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import jacobi_symbol

from wreathcount.quadfield import (
    L_value,
    NotFundamental,
    QuadraticField,
    R_constant,
    TermBudgetExceeded,
    UnsupportedField,
    class_bound_report,
    class_number,
    count_quadratic_Q,
    fundamental_discs,
    fundamental_unit,
    is_fundamental,
    kronecker,
    prime_elements,
    residue_zeta,
    residuum_check,
    zeta_K_at_2,
)

SMALL_DISCS = list(fundamental_discs(600))
fund = st.sampled_from(SMALL_DISCS)

# --- Kronecker symbol


def test_kronecker_examples():
    assert kronecker(-4, 3) == -1
    assert kronecker(5, 4) == 1
    for d in SMALL_DISCS[:40]:
        for p in (2, 3, 5, 7, 11, 13):
            if d % p == 0:
                assert kronecker(d, p) == 0


@given(fund, st.integers(1, 10**4), st.integers(1, 10**4))
def test_kronecker_completely_multiplicative(d, m, n):
    assert kronecker(d, m * n) == kronecker(d, m) * kronecker(d, n)


@given(fund, st.integers(1, 10**4))
def test_kronecker_period_is_discriminant(d, n):
    assert kronecker(d, n) == kronecker(d, n + abs(d))


@given(fund, st.integers(0, 5000))
def test_kronecker_matches_jacobi_on_odd(d, k):
    n = 2 * k + 1
    assert kronecker(d, n) == jacobi_symbol(d % n, n) if math.gcd(d, n) == 1 else kronecker(d, n) == 0


# --- fundamental discriminants


def test_fundamental_discs_examples():
    assert sorted(fundamental_discs(10)) == sorted([5, 8, -3, -4, -7, -8])
    assert list(fundamental_discs(3)) == [-3]
    assert list(fundamental_discs(1)) == []


def test_fundamental_discs_match_predicate():
    def brute(d):
        if d in (0, 1):
            return False
        if d % 4 == 1:
            m = d
        elif d % 4 == 0 and (d // 4) % 4 in (2, 3):
            m = d // 4
        else:
            return False
        return all(m % (q * q) for q in range(2, math.isqrt(abs(m)) + 1))

    expected = {d for d in range(-3000, 3001) if brute(d)}
    assert set(fundamental_discs(3000)) == expected
    assert all(is_fundamental(d) for d in expected)


def test_non_fundamental_rejected():
    with pytest.raises(NotFundamental):
        QuadraticField(12 * 4)
    with pytest.raises(NotFundamental):
        L_value(-12, 1)


def test_count_quadratic_Q():
    assert count_quadratic_Q(10) == 6
    assert count_quadratic_Q(1) == 0
    c = count_quadratic_Q(10**6)
    assert abs(c - 6e6 / math.pi**2) / c < 0.01


# --- class numbers and units


def _reduced_form_count(d):
    q = -d
    h = 0
    for a in range(1, math.isqrt(q // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0) or math.gcd(math.gcd(a, b), c) != 1:
                continue
            h += 1
    return h


def test_class_number_examples():
    assert class_number(-4) == 1
    assert class_number(-23) == 3
    assert class_number(8) == 1
    (a, b), n = fundamental_unit(8)
    assert (a, b, n) == (2, 1, -1)  # (2 + sqrt 8)/2 = 1 + sqrt 2


def test_imaginary_class_numbers_vs_form_count():
    for d in fundamental_discs(2000):
        if d < 0:
            assert class_number(d) == _reduced_form_count(d), d


@pytest.mark.parametrize("d,h", [(40, 2), (60, 2), (65, 2), (136, 2), (145, 4), (229, 3), (12, 1), (104, 2)])
def test_real_class_numbers_known(d, h):
    assert class_number(d) == h


def test_fundamental_unit_is_minimal():
    for d in fundamental_discs(300):
        if d < 0:
            continue
        (a, b), n = fundamental_unit(d)
        assert a * a - d * b * b == 4 * n
        if b > 10**5:
            continue
        b0 = next(y for y in range(1, b + 1) if any(
            math.isqrt(d * y * y + s) ** 2 == d * y * y + s for s in (4, -4)))
        assert b == b0, d


def test_narrow_vs_wide():
    K = QuadraticField(136)
    assert K.narrow_h == 4 and K.h == 2 and K.unit_norm == 1
    K = QuadraticField(5)
    assert K.narrow_h == K.h == 1 and K.unit_norm == -1


# --- L-values


def test_lvalue_examples():
    assert L_value(-4, 1).value.contains(math.pi / 4)
    assert abs(L_value(-4, 2).value.mid - 0.915965594177219) < 1e-9
    assert L_value(-3, 1).value.contains(math.pi / (3 * math.sqrt(3)))
    assert L_value(5, 1).value.contains(2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5))


def _hurwitz_l2(d):
    q = abs(d)
    total = arb(0)
    for a in range(1, q + 1):
        ch = kronecker(d, a)
        if ch:
            total += ch * arb(2).zeta(arb(a) / q)
    return total / (q * q)


@settings(max_examples=30, deadline=None)
@given(fund)
def test_l2_matches_hurwitz_oracle(d):
    val = L_value(d, 2, tol=1e-9).value
    oracle = _hurwitz_l2(d)
    assert val.lo <= float(oracle.mid()) <= val.hi
    assert val.width <= 1e-9


def test_l2_even_closed_form():
    assert L_value(5, 2).value.contains(4 * math.pi**2 / (25 * math.sqrt(5)))


@settings(max_examples=20, deadline=None)
@given(fund)
def test_l2_contains_tenfold_sum(d):
    rough = L_value(d, 2, tol=1e-6)
    fine = L_value(d, 2, tol=1e-7)
    assert fine.truncation_N >= rough.truncation_N
    assert rough.value.overlaps(fine.value)
    assert rough.value.lo <= fine.value.mid <= rough.value.hi


@settings(max_examples=30, deadline=None)
@given(fund)
def test_l1_kernel_agrees_with_arb(d):
    assert L_value(d, 1, method="arb").value.overlaps(L_value(d, 1, method="kernel").value)


def test_l2_budget_error_names_N():
    with pytest.raises(TermBudgetExceeded, match="N ="):
        L_value(-4, 2, tol=1e-12, max_terms=1000)


# --- residues and zeta_K(2)


@pytest.mark.parametrize("d,val", [(-4, math.pi / 4), (-3, math.pi / (3 * math.sqrt(3))),
                                   (5, 2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5))])
def test_residue_examples(d, val):
    r = residue_zeta(QuadraticField(d))
    assert r.contains(val) and r.width < 1e-12


def test_zeta2_and_R_gaussian():
    K = QuadraticField(-4)
    z = zeta_K_at_2(K)
    R = R_constant(K)
    assert abs(z.mid - 1.50670301) < 1e-7
    assert abs(R.mid - 0.2606346965) < 1e-9


@settings(deadline=None)
@given(fund)
def test_zeta2_bounds(d):
    z = zeta_K_at_2(QuadraticField(d))
    assert z.lo > 1 and z.hi <= (math.pi**2 / 6) ** 2 + 1e-9


def test_residuum_check_examples():
    r = residuum_check(QuadraticField(-4), 1.0)
    assert r["ok"] and abs(r["rhs"] - 32) < 1e-9
    r = residuum_check(QuadraticField(-3), 0.25)
    assert r["ok"] and abs(r["rhs"] - 8 * 3**0.25 * 4) < 1e-9
    for d in (-4, -3, 5, 13, -163):
        K = QuadraticField(d)
        rhs = [residuum_check(K, e)["rhs"] for e in (1, 0.5, 0.25)]
        assert all(residuum_check(K, e)["ok"] for e in (1, 0.5, 0.25))
        assert len(rhs) == 3


def test_class_bound_report():
    assert abs(class_bound_report(-4) - 1 / (2 * math.log(4))) < 1e-12
    assert abs(class_bound_report(-23) - 3 / (math.sqrt(23) * math.log(23))) < 1e-12
    worst = max(class_bound_report(d) for d in fundamental_discs(10**4) if abs(d) >= 3)
    assert math.isfinite(worst)


# --- prime elements


def test_prime_elements_gaussian():
    K = QuadraticField(-4)
    pes = prime_elements(K, 5)
    assert [pe.element for pe in pes] == [(1, 1), (2, -1), (2, 1)]
    assert [pe.ideal_norm for pe in pes] == [2, 5, 5]
    assert (3, 0) in [pe.element for pe in prime_elements(K, 9)]


def test_prime_elements_sqrt2():
    pes = prime_elements(QuadraticField(8), 7)
    assert [(pe.element, pe.norm) for pe in pes] == [((0, 1), -2), ((1, 2), -7), ((1, -2), -7)]


@pytest.mark.parametrize("d", [-3, -4, -7, -8, -11, -19, -43, -163, 5, 8, 12, 13, 17, 21, 29, 41, 57, 73, 97])
def test_prime_elements_complete(d):
    K = QuadraticField(d)
    if K.h != 1:
        pytest.skip("class number above one")
    bound = 400
    pes = prime_elements(K, bound)
    expected = 0
    for p in range(2, bound + 1):
        if all(p % q for q in range(2, math.isqrt(p) + 1)):
            chi = kronecker(d, p)
            expected += 2 if chi == 1 else (1 if chi == 0 else int(p * p <= bound))
    assert len(pes) == expected
    for pe in pes:
        assert K.norm(pe.element) == pe.norm and abs(pe.norm) in (pe.p, pe.p * pe.p)
        if pe.root is not None:
            x, y = pe.element  # element lies in the ideal (p, omega - r)
            assert (x + y * pe.root) % pe.p == 0


def test_prime_elements_needs_h1():
    with pytest.raises(UnsupportedField):
        prime_elements(QuadraticField(-20), 10)
