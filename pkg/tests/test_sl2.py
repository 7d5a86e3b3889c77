from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from kleinian.abelian import wp
from kleinian.equivariant import (casimir_check, derivative_module, hirota_equivariance_check,
                                  realized_components, wp_square)
from kleinian.sl2 import cg_dimensions, form_module, poly_mul, tensor, vadd


def dims(module):
    return sorted((c.dim for c in module.decompose()), reverse=True)


@given(st.integers(1, 5), st.integers(1, 5))
@settings(max_examples=25, deadline=None)
def test_tensor_matches_clebsch_gordan(a, b):
    T = tensor(form_module(a - 1), form_module(b - 1))
    T.check_relations()
    assert dims(T) == cg_dimensions(a, b)
    assert casimir_check(T)


@given(st.integers(1, 5))
@settings(max_examples=5, deadline=None)
def test_symmetric_square(a):
    V = form_module(a - 1)
    assert dims(tensor(V, V, symmetric=True)) == cg_dimensions(a, a, symmetric=True)


def test_wp_square_splits_five_plus_one():
    M = wp_square()
    assert dims(M) == [5, 1]
    assert casimir_check(M)


def test_derivative_modules():
    assert dims(derivative_module(2, 2)) == [4, 2]
    assert dims(derivative_module(2, 3)) == [5, 3]


def test_top_component_is_the_third_derivatives():
    (d, vecs), = realized_components(derivative_module(2, 2))[:1]
    assert d == 4
    want = [wp(1, 1, 1), 3 * wp(1, 1, 2), 3 * wp(1, 2, 2), wp(2, 2, 2)]
    assert all((v - w).is_zero() for v, w in zip(vecs, want))


def test_casimir_on_irreducibles():
    for k in range(6):
        V = form_module(k)
        assert V.decompose()[0].dim == k + 1
        v = V.decompose()[0].highest
        assert not vadd(V.casimir(v), {l: mpq(k * (k + 2), 4) * c for l, c in v.items()}, -1)


def test_hirota_is_equivariant():
    for degree in range(1, 6):
        assert hirota_equivariance_check(degree).ok


def test_hirota_control_with_broken_product():
    def broken(p, q):
        return vadd(poly_mul(p, q), poly_mul(p, p))
    assert not hirota_equivariance_check(3, broken).ok
