import pytest
from hypothesis import given, strategies as st

from gridfloer.errors import NotDivisible
from gridfloer.laurent import LaurentPoly

terms = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-4, 4), max_size=6
)


def diff(i, nvars=2):
    up = [0] * nvars
    up[i] = 1
    down = [0] * nvars
    down[i] = -1
    return LaurentPoly({tuple(up): 1, tuple(down): -1}, nvars)


def test_zero_coefficients_dropped():
    p = LaurentPoly({(1,): 2, (0,): 0})
    assert p.terms == {(1,): 2}
    assert not LaurentPoly({(1,): 0}, 1)


def test_arithmetic():
    t = LaurentPoly.monomial((1,))
    one = LaurentPoly.one(1)
    assert (t + one) * (t - one) == t * t - one
    assert t * t.substitute_negated() == one
    assert 3 * t == t * 3 == LaurentPoly({(1,): 3})


@given(terms)
def test_division_inverts_multiplication(d):
    p = LaurentPoly(d, 2)
    for i in range(2):
        assert (p * diff(i)).divide_by_difference(i) == p


def test_division_failure():
    with pytest.raises(NotDivisible):
        LaurentPoly({(2, 0): 1}, 2).divide_by_difference(0)
    with pytest.raises(NotDivisible):
        (diff(0) + LaurentPoly.one(2)).divide_by_difference(0)


def test_normalization():
    p = LaurentPoly({(4,): -1, (2,): 1, (0,): -1})
    assert p.normalized() == LaurentPoly({(2,): 1, (0,): -1, (-2,): 1})
    with pytest.raises(ValueError):
        LaurentPoly({(1,): 1, (0,): 1}).normalized()


def test_rendering():
    p = LaurentPoly({(2,): 1, (0,): -1, (-2,): 1})
    assert p.to_string(halve=True) == "t - 1 + t^-1"
    assert p.to_string() == "tau^2 - 1 + tau^-2"
    q = LaurentPoly({(1, 1): 2, (-1, -1): -1})
    assert q.to_string() == "2*tau1*tau2 - tau1^-1*tau2^-1"
    assert q.to_string(halve=True) == "2*t1^(1/2)*t2^(1/2) - t1^(-1/2)*t2^(-1/2)"
    assert q.to_json() == [
        {"exponent": [-1, -1], "coeff": -1},
        {"exponent": [1, 1], "coeff": 2},
    ]
