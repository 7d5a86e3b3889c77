import json

import pytest
import sympy as sp

from kleinian.curves import CurveSpec
from kleinian.sigma import (SigmaModel, heldout_check, sigma_expand, sw_matches_oracle,
                            symbolic_strata_check)


def sympy_poly(poly):
    syms = sp.symbols(" ".join(poly.ring.names))
    return syms, sum(sp.Rational(int(c.numerator), int(c.denominator))
                     * sp.Mul(*[v ** e for v, e in zip(syms, exps)])
                     for exps, c in poly.items())


@pytest.mark.parametrize("fixture", ["m23", "m25", "m27", "m34"])
def test_level_zero_matches_jacobi_trudi(fixture, request):
    assert sw_matches_oracle(request.getfixturevalue(fixture))


@pytest.mark.parametrize("fixture", ["m25", "m27", "m34"])
def test_heldout_and_strata(fixture, request):
    m = request.getfixturevalue(fixture)
    assert heldout_check(m) == []
    assert symbolic_strata_check(m).is_zero_to_cap()


def test_genus_one_against_weierstrass_ode(m23):
    """wp = -(log sigma)'' must satisfy wp'^2 = 4 f(wp)."""
    syms, sig = sympy_poly(m23.sigma)
    u = syms[0]
    lam = {n: s for n, s in zip(m23.ring.names, syms)}
    order = m23.cap
    q = sp.expand(sig / u)              # exact through u^(cap-1)
    logq = sp.series(sp.log(q), u, 0, order).removeO()
    wp_ = sp.expand(1 / u ** 2 - sp.diff(logq, u, 2))
    f = lambda x: x ** 3 + lam["lam2"] * x ** 2 + lam["lam1"] * x + lam["lam0"]
    resid = sp.expand(sp.diff(wp_, u) ** 2 - 4 * f(wp_))
    for k in range(-6, 3):
        assert sp.expand(resid.coeff(u, k)) == 0, k


def test_sigma_known_leading_terms(m25):
    _, sig = sympy_poly(m25.level_part(0))
    u1, u2 = sp.symbols("u1 u2")
    assert sp.expand(sig - (u1 - u2 ** 3 / 3)) == 0


def test_json_round_trip(tmp_path, m25):
    p = tmp_path / "m.json"
    m25.save(p)
    again = SigmaModel.load(p)
    assert again.sigma == m25.sigma and again.cap == m25.cap
    assert again.model_id() == m25.model_id()
    data = json.loads(p.read_text())
    assert data["metadata"]["wt_sigma"] == 3


def test_worker_count_does_not_change_result(m25):
    m = sigma_expand(CurveSpec(2, 5), 12, workers=2)
    assert m.sigma == m25.truncated(12).sigma


def test_numeric_lambdas_specialize():
    c = CurveSpec(2, 5, coefficients=((4, 0),))
    m = sigma_expand(c, 10)
    assert all(e[m.ring.index["lam4"]] == 0 for e, _ in m.sigma.items())


def test_cap_below_sigma_weight_rejected():
    with pytest.raises(ValueError):
        sigma_expand(CurveSpec(2, 7), 4)
