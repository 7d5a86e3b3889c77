from fractions import Fraction

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from kleinian.algebra import (INF, GradedPoly, Ring, TruncatedSeries, matrix_rank,
                              rational, rational_str, series_compose, solve_many)

R = Ring(["a", "b", "c"], [1, 2, 3])
SYM = sp.symbols("a b c")


def to_sympy(p):
    return sp.expand(sum(sp.Rational(int(c.numerator), int(c.denominator))
                         * sp.Mul(*[v ** e for v, e in zip(SYM, exps)])
                         for exps, c in p.items()))


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=7)
exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, coeff, max_size=6).map(
    lambda d: GradedPoly.from_exps(R, {k: mpq(v.numerator, v.denominator) for k, v in d.items()}))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms_against_sympy(p, q, r):
    assert to_sympy(p * q) == sp.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p + q) == sp.expand(to_sympy(p) + to_sympy(q))
    assert (p * (q + r)) == p * q + p * r
    assert p * q == q * p
    assert (p - p).is_zero()


@settings(max_examples=30, deadline=None)
@given(polys)
def test_power_and_derivative(p):
    assert to_sympy(p ** 3) == sp.expand(to_sympy(p) ** 3)
    assert to_sympy(p.diff("b")) == sp.expand(sp.diff(to_sympy(p), SYM[1]))


def test_rational_parsing():
    assert rational("3/6") == mpq(1, 2)
    assert rational(Fraction(-2, 4)) == mpq(-1, 2)
    assert rational_str(mpq(4, 2)) == "2/1"
    with pytest.raises(TypeError):
        rational(0.5)


def test_truncated_product_cap_rule():
    fw = (1, 0, 0)
    a = TruncatedSeries(R.var("a") ** 2 + R.var("a") ** 5, 4, fw=fw)
    b = TruncatedSeries(R.var("a") ** 3, 6, fw=fw)
    prod = a * b
    # valuations 2 and 3: exact through min(4 + 3, 6 + 2) = 7
    assert prod.cap == 7
    assert prod.poly == R.var("a") ** 5
    assert (a + b).cap == 4


def test_truncation_drops_beyond_cap():
    s = TruncatedSeries(R.var("a") ** 3 + R.var("a"), 2, fw=(1, 0, 0))
    assert s.poly == R.var("a")
    assert s.lowest_terms()[0][2] == 1


def test_series_compose_matches_sympy():
    ring = Ring(["t"], [1])
    fw = (1,)
    t = ring.var("t")
    inner = TruncatedSeries(t + t * t, 6, fw=fw)
    outer_ring = Ring(["x"], [1])
    x = outer_ring.var("x")
    outer = TruncatedSeries(x + x ** 3, 6, fw=(1,))
    got = series_compose(outer, {"x": inner})
    T = sp.Symbol("t")
    want = sp.series((T + T ** 2) + (T + T ** 2) ** 3, T, 0, 7).removeO()
    assert got.cap >= 6
    got_sym = sum(sp.Rational(int(c.numerator), int(c.denominator)) * T ** e[0]
                  for e, c in got.poly.items() if e[0] <= 6)
    assert sp.expand(got_sym - want) == 0


def _sympy_solve(rows, ncols, rhs):
    M = sp.zeros(len(rows), ncols)
    for i, r in enumerate(rows):
        for j, v in r.items():
            M[i, j] = sp.Rational(int(v.numerator), int(v.denominator))
    b = sp.Matrix([sp.Rational(int(mpq(x).numerator), int(mpq(x).denominator)) for x in rhs])
    return M, b


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_solver_against_sympy(nrows, ncols, data):
    rows = []
    for _ in range(nrows):
        vals = data.draw(st.lists(st.integers(-4, 4), min_size=ncols, max_size=ncols))
        rows.append({j: mpq(v) for j, v in enumerate(vals) if v})
    rhs = data.draw(st.lists(st.integers(-4, 4), min_size=nrows, max_size=nrows))
    M, b = _sympy_solve(rows, ncols, rhs)
    sol = solve_many(rows, ncols, [rhs])[0]
    assert sol.rank == M.rank() == matrix_rank(rows, ncols)
    consistent = M.rank() == M.row_join(b).rank()
    if not consistent:
        assert sol.status == "inconsistent"
        return
    assert sol.status == ("unique" if M.rank() == ncols else "family")
    x = sp.Matrix([sp.Rational(int(v.numerator), int(v.denominator)) for v in sol.particular])
    assert M * x == b
    for v in sol.nullspace:
        assert M * sp.Matrix([sp.Rational(int(c.numerator), int(c.denominator)) for c in v]) \
            == sp.zeros(len(rows), 1)
    assert len(sol.nullspace) == ncols - M.rank()


def test_exact_series_cap_is_infinite():
    s = TruncatedSeries(R.var("a"), INF, fw=(1, 0, 0))
    assert s.cap == INF
