import math
from fractions import Fraction

import pytest
from flint import arb
from hypothesis import given
from hypothesis import strategies as st

from wreathcount.interval import ErrorInterval, working_precision

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_exact_endpoints():
    z = ErrorInterval(arb(0))
    assert z.lo == 0.0 and z.hi == 0.0 and z.width == 0.0


def test_from_bounds_contains():
    iv = ErrorInterval.from_bounds(1.0, 2.0)
    assert iv.lo <= 1.0 and iv.hi >= 2.0
    assert iv.contains(1.5) and not iv.contains(2.5)


def test_intersect_disjoint_raises():
    with pytest.raises(ValueError):
        ErrorInterval.from_bounds(0, 1).intersect(ErrorInterval.from_bounds(2, 3))


@given(finite, finite, st.floats(0, 10), st.floats(0, 10))
def test_arithmetic_encloses(a, b, ra, rb):
    x = ErrorInterval.from_float(a, ra)
    y = ErrorInterval.from_float(b, rb)
    fa, fb = Fraction(a), Fraction(b)
    for iv, exact in ((x + y, fa + fb), (x * y, fa * fb), (x - y, fa - fb)):
        assert Fraction(iv.lo) <= exact <= Fraction(iv.hi)


def test_json_keys():
    out = ErrorInterval.from_bounds(1, 2).to_json("v")
    assert set(out) == {"v_lo", "v_hi"}


def test_precision_context():
    with working_precision(200):
        pi = ErrorInterval(arb.pi())
    assert pi.contains(math.pi) and pi.width < 1e-15
