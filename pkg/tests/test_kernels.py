import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wreathcount import _kernels_py as py

cy = pytest.importorskip("wreathcount._kernels")

DISCS = [d for d in range(-400, 400) if py.fundamental_discriminants(400).tolist().count(d)]


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_kronecker_agrees(d, n):
    assert cy.kronecker(d, n) == py.kronecker(d, n)


def test_tables_and_sieves_agree():
    assert np.array_equal(np.asarray(cy.squarefree_flags(5000)), np.asarray(py.squarefree_flags(5000)))
    assert np.array_equal(np.asarray(cy.fundamental_discriminants(5000)), np.asarray(py.fundamental_discriminants(5000)))
    for d in DISCS[::7]:
        assert np.array_equal(np.asarray(cy.kronecker_table(d)), np.asarray(py.kronecker_table(d)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(DISCS))
def test_lvalue_sums_agree(d):
    if d < 0:
        assert cy.odd_char_moment(d) == py.odd_char_moment(d)
    else:
        s1, e1 = cy.even_logsin_sum(d)
        s2, e2 = py.even_logsin_sum(d)
        assert abs(s1 - s2) <= e1 + e2
        assert cy.count_reduced_forms(d) == py.count_reduced_forms(d)
    a1, f1 = cy.l2_partial(d, 300)
    a2, f2 = py.l2_partial(d, 300)
    assert abs(a1 - a2) <= f1 + f2
