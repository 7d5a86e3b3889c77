import pytest
from gmpy2 import mpq

from kleinian.abelian import WpExpr, named_combination, wp
from kleinian.curves import CurveSpec
from kleinian.dictionaries import (DictionaryError, octic_dictionary, quartic_dictionary,
                                   sextic_dictionary)
from kleinian.relations import (CapInsufficient, DeriveFailure, AnsatzTemplate, addition_check,
                                build_template, derive_relation, genus1_relations,
                                kdv_relation, pole_order_probe, pool_gamma2, proportional,
                                sextic_relations, verify_genus2_system, verify_relation)


def test_genus_one_identities(m23):
    for name, rel in genus1_relations(m23).items():
        assert verify_relation(rel, m23, name).ok


def test_genus_one_addition(m23):
    r = addition_check(m23)
    assert r.report.ok


def test_genus_two_system(m25):
    reps = verify_genus2_system(m25, nus=[mpq(1, 2), mpq(-3), mpq(7, 5)])
    assert [r.name for r in reps][:6] == ["P2222", "P1222", "P1122", "P1112", "P1111", "KdV"]
    assert all(r.ok for r in reps), [r.name for r in reps if not r.ok]
    assert all(r.cleared_cap > 0 for r in reps)


def test_perturbed_relation_is_refuted(m25):
    d = sextic_dictionary(m25.curve)
    rel = sextic_relations(d)["P2222"] + WpExpr.const(d.lam("L4"))
    r = verify_relation(d.translate(rel), m25)
    assert r.status == "refuted" and r.residual


@pytest.mark.parametrize("key", [(1, 1), (1, 2), (2, 2)])
def test_every_sextic_shift_is_needed(m25, key):
    d = sextic_dictionary(m25.curve).without(key)
    reps = [verify_relation(d.translate(r), m25, n) for n, r in sextic_relations(d).items()]
    assert any(not r.ok for r in reps)


def test_kdv_needs_lambda4_zero(m25):
    d = sextic_dictionary(m25.curve)
    assert not verify_relation(d.translate(kdv_relation()), m25).ok


def test_dictionary_values():
    d = sextic_dictionary(CurveSpec(2, 5)).to_json()
    assert d["u_ratio"] == "1/2"
    assert d["wp_shifts"] == {"P11": "1/10*lam2", "P12": "1/40*lam3", "P22": "1/10*lam4"}
    o = octic_dictionary(CurveSpec(2, 7)).to_json()
    assert o["wp_shifts"]["P22"] == "18/35*lam4" and o["lambda_map"]["L7"] == "1/2"
    with pytest.raises(DictionaryError):
        sextic_dictionary(CurveSpec(2, 7))
    with pytest.raises(DictionaryError):
        quartic_dictionary(CurveSpec(2, 5))


def test_derive_p2222(m25):
    t = build_template(m25, wp(2, 2, 2, 2), pool_gamma2(2))
    r = derive_relation(t, m25)
    assert r.status == "unique"
    want = (wp(2, 2, 2, 2) - 6 * wp(2, 2) ** 2 - 4 * wp(1, 2)
            - 4 * WpExpr.const(m25.curve and _lam(m25, 4)) * wp(2, 2)
            - 2 * WpExpr.const(_lam(m25, 3)))
    assert (r.relation - want).is_zero()
    d = sextic_dictionary(m25.curve)
    assert proportional(d.translate(sextic_relations(d)["P2222"]), r.relation)


def _lam(m, j):
    from kleinian.local import lam_ring
    return lam_ring(m.curve).var("lam%d" % j)


def test_derived_relation_holds_at_higher_cap(m25):
    small = m25.truncated(14)
    r = derive_relation(build_template(small, wp(2, 2, 2, 2), pool_gamma2(2)), small)
    assert verify_relation(r.relation, m25).ok


def test_derive_rejects_empty_template(m25):
    with pytest.raises(DeriveFailure):
        derive_relation(AnsatzTemplate(wp(2, 2, 2, 2), [], -4), m25)


def test_derive_inhomogeneous_target(m25):
    with pytest.raises(DeriveFailure):
        build_template(m25, wp(2, 2) + wp(1, 1), pool_gamma2(2))


def test_genus_two_addition(m25):
    r = addition_check(m25)
    assert r.report.ok and r.diagonal_zero
    assert r.table[("1", "P11")] == "1/1" and r.table[("P12", "P22")] == "-1/1"


@pytest.mark.parametrize("name,want", [("Xi", 3), ("P11", 2)])
def test_probe_orders(m25, name, want):
    e = named_combination("Xi") if name == "Xi" else wp(1, 1)
    r = pole_order_probe(e, m25, seed=1)
    assert abs(r.estimated_order - want) < 0.1 and r.residual < 0.02 and r.accepted


def test_probe_flags_shallow_numerator(m27):
    with pytest.raises(CapInsufficient) as e:
        pole_order_probe(named_combination("B", (1, 2, 1, 2, 3)), m27)
    assert e.value.suggested_cap > m27.cap


def test_proportional():
    assert proportional(2 * wp(1, 1) + wp(2, 2), 4 * wp(1, 1) + 2 * wp(2, 2))
    assert not proportional(wp(1, 1) + wp(2, 2), wp(1, 1) - wp(2, 2))
