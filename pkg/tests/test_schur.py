import pytest
import sympy as sp

from kleinian.schur import (jacobi_trudi, pivot_key, schur_weierstrass_oracle, u_ring,
                            weierstrass_partition)


@pytest.mark.parametrize("n,s,part", [(2, 3, (1,)), (2, 5, (2, 1)), (2, 7, (3, 2, 1)),
                                      (3, 4, (3, 1, 1))])
def test_partitions(n, s, part):
    assert weierstrass_partition(n, s) == part


def _sympy_schur(part, times):
    """det h_{lambda_i - i + j} with h_m from exp(sum t_k z^k)."""
    z = sp.Symbol("z")
    top = sum(part) + len(part)
    gen = sp.series(sp.exp(sum(t * z ** k for k, t in times.items())), z, 0, top + 1).removeO()
    h = lambda m: 0 if m < 0 else sp.expand(gen.coeff(z, m))
    L = len(part)
    return sp.expand(sp.Matrix(L, L, lambda i, j: h(part[i] - i + j)).det())


@pytest.mark.parametrize("n,s", [(2, 5), (2, 7), (3, 4)])
def test_jacobi_trudi_against_sympy(n, s):
    ring = u_ring(n, s)
    part = weierstrass_partition(n, s)
    us = sp.symbols(" ".join(ring.names))
    times = {w: u for w, u in zip(ring.weights, us)}
    want = _sympy_schur(part, times)
    got = jacobi_trudi(part, {w: ring.var(nm) for w, nm in zip(ring.weights, ring.names)}, ring)
    got_sym = sum(sp.Rational(int(c.numerator), int(c.denominator))
                  * sp.Mul(*[u ** e for u, e in zip(us, exps)]) for exps, c in got.items())
    assert sp.expand(got_sym - want) == 0


def test_oracle_is_unit_normalized():
    norm, raw = schur_weierstrass_oracle(2, 5)
    assert norm.is_homogeneous() and norm.weight() == 3
    ratios = {c / raw.coefficient(e) for e, c in norm.items()}
    assert len(ratios) == 1
    assert norm.coefficient(pivot_key(norm)) == 1
    assert norm.pretty() == "u1 - 1/3*u2^3"
