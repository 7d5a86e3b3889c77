import random

import pytest
import sympy
from gmpy2 import mpq

from kleinian.abelian import WpExpr, wp
from kleinian.curves import CurveSpec
from kleinian.dictionaries import DictionaryError
from kleinian.equivariant import (PAIRS, QRSystem, _route_a, _same, basis_identity,
                                  build_matrices, det, dictionary_cross_check, entries_nonzero,
                                  genus1_check, grade_check, identity_check,
                                  jacobian_coords, jacobian_quadric_check, octic_polar_reports,
                                  perturbed_a, plucker_check, qr_expression, random_quadruples,
                                  wedge)
from kleinian.relations import (CapInsufficient, build_template, derive_relation, pool_gamma2,
                                proportional)


@pytest.fixture(scope="module")
def mats(m27):
    return build_matrices(m27)


@pytest.fixture(scope="module")
def system(mats):
    return QRSystem(mats)


def test_det_matches_sympy():
    rng = random.Random(3)
    for n in range(1, 7):
        M = [[mpq(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        want = sympy.Matrix([[sympy.Rational(int(x.numerator), int(x.denominator)) for x in r]
                             for r in M]).det()
        got = det(M)
        assert sympy.Rational(int(mpq(got).numerator), int(mpq(got).denominator)) == want


def test_matrix_entries(mats):
    assert (mats.P[0][2] - wp(1, 1)).is_zero()
    assert (mats.A[0][1] + wp(3, 3, 3)).is_zero()
    assert mats.H[2][2] == mats.dictionary.other().var("L4").scale(36)
    for i in range(5):
        for j in range(5):
            assert (mats.A[i][j] + mats.A[j][i]).is_zero()
            assert (mats.P[i][j] - mats.P[j][i]).is_zero()


def test_matrices_need_the_27_model(m25):
    with pytest.raises(DictionaryError):
        build_matrices(m25)


def test_dictionary_cross_check():
    assert dictionary_cross_check(CurveSpec(2, 7))


def test_bordered_determinant_expands_into_basis_identities(mats):
    l, k, lp, kp = random_quadruples(1, seed=5, bound=3)[0]
    whole = qr_expression(mats, l, k, lp, kp)
    a, b = wedge(l, k), wedge(lp, kp)
    acc = WpExpr()
    for S in PAIRS:
        for T in PAIRS:
            if a[S] and b[T]:
                acc = acc + basis_identity(mats, S, T) * (a[S] * b[T])
    assert (whole - acc).is_zero()


def test_diagonal_identity_agrees_with_derived_relation(m27, mats):
    derived = derive_relation(build_template(m27, wp(3, 3, 3) ** 2, pool_gamma2(3), 3), m27)
    assert derived.status == "unique"
    e = mats.dictionary.translate(basis_identity(mats, (0, 1), (0, 1)))
    assert proportional(e, derived.relation)


def test_basis_identities(system):
    reps = system.basis_reports()
    assert len(reps) == 55 and all(r.ok for r in reps)


def test_random_quadruples_two_routes(mats, system):
    for q in random_quadruples(2, seed=11):
        direct, parts = _route_a(mats, q)
        combined = system.check(q)
        assert direct.ok and combined.ok
        assert _same(parts, system.combine(q))


def test_zero_vectors_are_trivial(mats):
    z = [0] * 5
    r = identity_check(mats, (z, z, z, z))
    assert r.ok


def test_pfaffians_and_control(mats):
    assert all(r.ok for r in plucker_check(mats))
    assert not all(r.ok for r in plucker_check(mats, perturbed_a(mats.A)))


def test_a_entries_are_nonzero(mats):
    assert all(entries_nonzero(mats).values())


def test_genus_one_analogue(m23):
    assert genus1_check(m23).ok


def test_polar_forms():
    shown, polar = octic_polar_reports()
    assert polar.matches
    assert not shown.matches and shown.mismatched_degrees == [2, 4, 6]


def test_jacobian_quadric_and_control():
    reps = jacobian_quadric_check(cap=8)
    assert len(reps) == 6 and all(r.ok for r in reps)
    bad = jacobian_quadric_check(cap=8, perturb=True)
    assert not bad[2].ok


def test_quadric_margin_equals_cap():
    from kleinian.equivariant import _aligned_valuation, quadric_components
    for cap in (1, 3):
        for comp, right in quadric_components(jacobian_coords(cap=cap)):
            assert comp.cap - _aligned_valuation(right, comp) == cap
    assert not jacobian_quadric_check(cap=1, perturb=True)[2].ok
    with pytest.raises(ValueError):
        jacobian_quadric_check(cap=0)


def test_quadric_cap_guard(monkeypatch):
    import kleinian.equivariant as eq
    monkeypatch.setattr(eq, "_aligned_valuation", lambda fn, ref: 10 ** 6)
    with pytest.raises(CapInsufficient):
        jacobian_quadric_check(cap=2)


def test_block_grades():
    assert set(grade_check(jacobian_coords(cap=6)).values()) == {7}
