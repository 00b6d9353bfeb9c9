import itertools
import math
import random

import pytest
from sympy import Poly, minimal_polynomial, sqrt, symbols
from sympy.polys.numberfields.basis import round_two

from wreathcount.quadfield import QuadraticField, UnsupportedField
from wreathcount.towers import (
    C4,
    D4,
    V4,
    abelian_disc_multiset,
    c4_disc_multiset,
    coprime_part,
    count_quadratic_ext,
    count_towers,
    galois_type,
    h1_fields,
    is_square,
    kummer_classes,
    lemma_tower_witness,
    relative_discriminant,
    squarefree_elements,
    towers_for_field,
    v4_disc_multiset,
    v4_subfields,
)

t = symbols("t")


def _oracle_disc(K, delta):
    """|disc L| for L = K(sqrt delta) from sympy's round-two maximal order.

    round_two occasionally raises on valid input; other primitive elements
    are tried before giving up."""
    x, y = delta
    w = (K.sigma + sqrt(K.d)) / 2
    for k in (0, 1, 2, 3, 5):
        f = Poly(minimal_polynomial(sqrt(x + y * w) + k * sqrt(K.d), t), t)
        if f.degree() != 4:
            continue
        try:
            return abs(int(round_two(f)[1]))
        except Exception:
            continue
    return None


# --- elementary helpers


def test_coprime_part():
    assert coprime_part(360, {2, 3}) == 5
    assert coprime_part(7, {7}) == 1
    assert coprime_part(100, {3}) == 100


def test_squarefree_elements_gaussian():
    got = list(squarefree_elements(QuadraticField(-4), 2))
    assert [delta for delta, _ in got] == [(0, 1), (1, 1), (-1, 1)]  # i, 1+i, i(1+i)


def test_is_square_matches_box_search():
    for d in (-4, -3, 5, 8, 12, -7):
        K = QuadraticField(d)
        squares = {K.mul(b, b) for b in itertools.product(range(-12, 13), repeat=2)}
        for a in itertools.product(range(-30, 31), range(-10, 11)):
            if K.norm(a) and abs(a[0]) + abs(a[1]) * 4 < 40:
                assert is_square(K, a) == (a in squares), (d, a)


def test_square_classes_never_collide():
    # distinct enumerated classes must differ by a non-square
    for d in (-4, 5, -3, 8):
        K = QuadraticField(d)
        lst = kummer_classes(K, 200)
        assert not any(is_square(K, kc.delta) for kc in lst)
        by_disc = {}
        for kc in lst:
            by_disc.setdefault(kc.rel_disc_norm, []).append(kc)
        for group in by_disc.values():
            for a, b in itertools.combinations(group[:12], 2):
                assert not is_square(K, K.mul(a.delta, b.delta))


# --- relative discriminants and types


def test_relative_discriminant_examples():
    assert relative_discriminant(QuadraticField(-4), (0, 1)) == 16
    assert relative_discriminant(QuadraticField(5), (-1, 0)) == 16
    assert relative_discriminant(QuadraticField(-4), (-3, 0)) == 9


def test_galois_type_examples():
    assert galois_type(QuadraticField(-4), (0, 1)) == V4
    assert galois_type(QuadraticField(8), (2, 1)) == C4  # 2 + sqrt 2
    assert galois_type(QuadraticField(-4), (2, 1)) == D4


def test_witness_examples():
    assert lemma_tower_witness(QuadraticField(-4), (2, 1)) == 5
    assert lemma_tower_witness(QuadraticField(-4), (0, 1)) is None
    assert lemma_tower_witness(QuadraticField(8), (2, 1)) is None


def test_tower_disc_matches_round_two():
    rng = random.Random(7)
    checked = agree = 0
    for d in (-4, -3, 5, 8, -7, 13, 12, -8, -11, 17):
        K = QuadraticField(d)
        lst = kummer_classes(K, 300)
        for kc in rng.sample(lst, min(6, len(lst))):
            disc = _oracle_disc(K, kc.delta)
            if disc is None:
                continue
            checked += 1
            agree += disc == kc.tower_disc
    assert checked >= 45 and agree == checked


def test_v4_subfields_product():
    for d in (-4, -3, 5, 8, 13):
        K = QuadraticField(d)
        for kc in kummer_classes(K, 2000):
            if kc.galois_type == V4:
                a, b, c = v4_subfields(K, kc.delta)
                assert abs(a * b * c) == kc.tower_disc


# --- counting


def test_count_quadratic_ext_examples():
    K = QuadraticField(-4)
    assert count_quadratic_ext(K, 1) == 0
    assert count_quadratic_ext(K, 9) >= 1


def test_count_quadratic_ext_exhaustive_gaussian():
    """Fields K(sqrt delta) with N(d_{L/K}) <= 40 found by scanning small delta."""
    K = QuadraticField(-4)
    reps = []
    for a, b in sorted(itertools.product(range(-9, 10), repeat=2), key=lambda v: (v[0] ** 2 + v[1] ** 2, v)):
        if (a, b) == (0, 0) or is_square(K, (a, b)):
            continue
        if any(is_square(K, K.mul((a, b), r)) for r in reps):
            continue
        reps.append((a, b))
    found = 0
    for r in reps:
        disc = _oracle_disc(K, r)
        if disc is not None and disc // 16 <= 40:
            found += 1
    assert found == count_quadratic_ext(K, 40)


def test_count_towers_examples():
    c = count_towers([-4], 150).counts[0]
    assert (c.z_tilde, c.z_d4, c.y) == (1, 0, 1)
    assert count_towers([-4], 100).counts[0].z_tilde == 0


def test_tower_versus_field_mode():
    # Q(i, sqrt 3) has quadratic subfields -4, -3, 12
    tower = count_towers([-4, -3, 12], 144).counts[0]
    field = count_towers([-4, -3, 12], 144, mode="field").counts[0]
    assert tower.y - field.y == 2 and tower.z_d4 == field.z_d4


def test_counts_monotone_and_split():
    rep = count_towers(h1_fields(30), 20000, samples=[1000, 3000, 10000])
    zs = [c.z_tilde for c in rep.counts]
    assert zs == sorted(zs)
    assert all(c.z_tilde == c.z_d4 + c.y for c in rep.counts)


def test_workers_agree():
    F = h1_fields(30)
    assert count_towers(F, 20000, workers=2).counts == count_towers(F, 20000).counts


def test_unsupported_field():
    with pytest.raises(UnsupportedField, match="-20"):
        count_towers([-4, -20], 100)


def test_witness_only_on_d4():
    for d in h1_fields(30):
        for kc in towers_for_field(d, 50000):
            if kc.witness is not None:
                assert kc.galois_type == D4
                assert kc.rel_disc_norm % kc.witness == 0 and d % kc.witness


# --- abelian oracles


@pytest.mark.parametrize("d", [-4, -3, 5, 8, 13, 12, 17, -7])
def test_abelian_multisets(d):
    x = 10**5
    lst = towers_for_field(d, x)
    assert c4_disc_multiset(d, x) == abelian_disc_multiset(lst, C4)
    assert v4_disc_multiset(d, x) == abelian_disc_multiset(lst, V4)


def test_known_cyclic_quartic():
    # conductor 16: Q(sqrt(2 + sqrt 2)) and Q(sqrt(-(2 + sqrt 2))), both of discriminant 2^11
    assert c4_disc_multiset(8, 2048) == {2048: 2}
    hits = [kc for kc in towers_for_field(8, 2048) if kc.galois_type == C4]
    assert sorted(kc.tower_disc for kc in hits) == [2048, 2048]
