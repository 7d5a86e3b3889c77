import pytest
import sympy as sp

from kleinian.curves import CurveSpec
from kleinian.local import LogTermError, abel_series, puiseux_y, strata_embedding


@pytest.mark.parametrize("n,s", [(2, 3), (2, 5), (2, 7), (3, 4), (4, 5)])
def test_puiseux_residual_vanishes(n, s):
    pt = puiseux_y(CurveSpec(n, s), 10)
    assert all(not r for r in pt.residual())


def test_puiseux_against_sympy():
    # y = xi^-5 (1 + lam4 xi^2 + ... + lam0 xi^10)^(1/2) with x = xi^-2
    curve = CurveSpec(2, 5)
    pt = puiseux_y(curve, 8)
    xi = sp.Symbol("xi")
    lam = sp.symbols("lam0:5")
    P = 1 + sum(lam[j] * xi ** (10 - 2 * j) for j in range(5))
    ser = sp.series(sp.sqrt(P), xi, 0, 9).removeO()
    for m in range(9):
        want = sp.expand(ser.coeff(xi, m))
        got = pt.unit[m]
        got_sym = sum(sp.Rational(int(c.numerator), int(c.denominator))
                      * sp.Mul(*[lam[int(name[3:])] ** e
                                 for name, e in zip(got.ring.names, exps)])
                      for exps, c in got.items()) if got else 0
        assert sp.expand(got_sym - want) == 0, m


def test_abel_leading_terms():
    a = abel_series(CurveSpec(2, 5), 8)
    # u_i ~ xi^w_i / w_i up to sign: the first nonzero coefficient sits at xi^w
    for i, w in enumerate(a.weights):
        first = next(m for m, c in enumerate(a.coeffs[i]) if c)
        assert first == w


def test_strata_arity_checked():
    with pytest.raises(ValueError):
        strata_embedding(CurveSpec(2, 5), 2, 6)


def test_log_term_error_type():
    assert issubclass(LogTermError, ArithmeticError)
