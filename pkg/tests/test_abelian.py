import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from kleinian.abelian import (ArityError, Compiler, RankDeficient, WpExpr, compile_expr,
                              gamma_basis, gamma_elements, named_combination, pole_order_bound,
                              q_function, wp)


def test_atoms_are_symmetric():
    assert wp(2, 1) == wp(1, 2)
    assert str(wp(3, 1, 2)) == "P123"
    with pytest.raises(ArityError):
        wp(1)
    with pytest.raises(ArityError):
        WpExpr.q(1, 2, 2)


idx = st.tuples(st.integers(1, 3), st.integers(1, 3))


@given(idx, st.integers(1, 3), st.integers(1, 3))
def test_mixed_partials_commute(ij, a, b):
    e = wp(*ij) * wp(1, 1) + wp(*ij)
    assert e.diff(a).diff(b) == e.diff(b).diff(a)


def test_product_rule():
    e = wp(1, 1) * wp(2, 2)
    assert e.diff(1) == wp(1, 1, 1) * wp(2, 2) + wp(1, 1) * wp(1, 2, 2)


def test_pole_degree_and_weights():
    e = wp(2, 2, 2) ** 2 - 4 * wp(2, 2) ** 3
    assert e.pole_degree() == 6
    assert e.weights((3, 1)) == {-6}


def test_named_combinations():
    assert named_combination("Xi") == wp(1, 1) * wp(2, 2) - wp(1, 2) ** 2
    with pytest.raises(ArityError):
        named_combination("B", (1, 2))
    with pytest.raises(ValueError):
        named_combination("Zeta")


def test_wp_numerator_definition(m25):
    """wp_11 sigma^2 = sigma_1^2 - sigma sigma_11."""
    c = Compiler.for_model(m25)
    s = m25.series()
    want = c.partial((1,)) * c.partial((1,)) - s * s.diff("u1").diff("u1")
    got = compile_expr(wp(1, 1), m25)
    assert got.denominator_power == 2
    cap = min(got.cap, want.cap)
    assert (got.numerator.truncate(cap) - want.truncate(cap)).is_zero_to_cap()


def test_q_function_matches_wp_expression(m25):
    """Two routes to Q_2222: the Hirota form and wp_2222 - 6 wp_22^2."""
    a = q_function((2, 2, 2, 2), m25)
    b = compile_expr(wp(2, 2, 2, 2) - 6 * wp(2, 2) ** 2, m25)
    assert a.denominator_power == 2 and b.denominator_power == 4
    s = m25.series()
    lifted = a.numerator * s * s
    cap = min(lifted.cap, b.cap)
    assert cap > 8
    assert (lifted.truncate(cap) - b.numerator.truncate(cap)).is_zero_to_cap()
    with pytest.raises(ValueError):
        compile_expr(wp(1, 1), m25, extra_clear=-1)


@pytest.mark.parametrize("m,dim", [(1, 1), (2, 4), (3, 9), (4, 16)])
def test_gamma_bases_genus_two(m25, m, dim):
    b = gamma_basis(m25, m)
    assert len(b.names) == dim == m * m
    assert b.certificate["rank"] == dim


def test_gamma_three_list():
    names = [n for n, _ in gamma_elements(2, 3)]
    assert names == ["1", "P11", "P12", "P22", "P111", "P112", "P122", "P222", "Xi"]


def test_gamma_genus_one(m23):
    assert len(gamma_basis(m23, 3).names) == 3


def test_dependent_elements_detected(m25, monkeypatch):
    import kleinian.abelian as ab
    orig = ab.gamma_elements

    def doubled(g, m):
        out = orig(g, m)
        return out + [("dup", out[1][1] * mpq(2))]
    monkeypatch.setattr(ab, "gamma_elements", doubled)
    with pytest.raises(RankDeficient) as e:
        ab.gamma_basis(m25, 2)
    assert e.value.relation["dup"] != 0


@pytest.mark.parametrize("name,order", [("Xi", 3), ("P11", 2)])
def test_symbolic_pole_bound(m25, name, order):
    e = named_combination(name) if name == "Xi" else wp(1, 1)
    assert pole_order_bound(e, m25) == order
