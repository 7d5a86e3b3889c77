from math import gcd

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kleinian.curves import (CurveError, CurveSpec, gap_sequence, genus_of, parse_curve_text,
                             rr_dimension_table, sigma_weight)


def brute_gaps(n, s):
    reach = {a * n + b * s for a in range(s + 1) for b in range(n + 1)}
    bound = (n - 1) * (s - 1)
    return [k for k in range(1, bound) if k not in reach]


coprime = st.tuples(st.integers(2, 7), st.integers(3, 20)).filter(
    lambda t: t[0] < t[1] and gcd(*t) == 1)


@given(coprime)
def test_gaps_against_enumeration(pair):
    n, s = pair
    assert list(gap_sequence(n, s).gaps) == brute_gaps(n, s)
    assert genus_of(n, s) == len(brute_gaps(n, s))


@pytest.mark.parametrize("n,s,gaps", [(2, 3, [1]), (2, 5, [1, 3]), (2, 7, [1, 3, 5]),
                                      (3, 4, [1, 2, 5]), (3, 5, [1, 2, 4, 7])])
def test_known_gaps(n, s, gaps):
    assert list(gap_sequence(n, s).gaps) == gaps


def test_weights():
    w = CurveSpec(2, 7).weights()
    assert w.wt_u == (5, 3, 1)
    assert w.wt_lambda == tuple(-2 * (7 - j) for j in range(7))
    assert (w.wt_x, w.wt_y) == (-2, -7)
    assert sigma_weight(2, 5) == 3 and sigma_weight(4, 5) == 15


def test_rr_rows_against_monomial_count():
    # independent count: x^i y^j with j < n and pole order 2i + 5j <= k
    for k, row in enumerate(rr_dimension_table(2, 5, 14)):
        count = sum(1 for j in range(2) for i in range(k + 1) if 2 * i + 5 * j <= k)
        assert row["h0"] == count
        assert row["h0"] - row["h1"] == 1 - 2 + k


def test_rejects_bad_pairs():
    with pytest.raises(CurveError):
        gap_sequence(2, 4)
    with pytest.raises(CurveError):
        CurveSpec(3, 2)


def test_parse_curve_file():
    c = parse_curve_text('n = 2\ns = 5\nclass = cyclic\nlambda.0 = "1/3"\nlambda.4 = sym\n')
    assert (c.n, c.s, c.cls) == (2, 5, "cyclic")
    assert c.numeric_lambdas() == {0: mpq(1, 3)}
    assert c.coefficient(4) == "sym" and c.coefficient(2) == "sym"
    again = parse_curve_text(c.to_text())
    assert [again.coefficient(j) for j in range(5)] == [c.coefficient(j) for j in range(5)]


@pytest.mark.parametrize("text,where", [
    ("n = 2\ns = 5\nlambda.1 = 1/0\n", ":3:"),
    ("n = 2\ns = five\n", ":2:"),
    ("n = 2\n  what\n", ":2:3"),
    ("n = 2\ns = 5\nlambda.9 = 1\n", ""),
    ("n = 2\n", "missing"),
])
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(CurveError) as e:
        parse_curve_text(text, "f.curve")
    assert where in str(e.value)
