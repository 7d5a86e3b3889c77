"""Schur polynomials of Weierstrass partitions via the Jacobi-Trudi
determinant, written in Sato times t_k."""

from itertools import permutations

from gmpy2 import mpq

from .algebra import Ring
from .curves import gap_sequence


def weierstrass_partition(n, s):
    gaps = sorted(gap_sequence(n, s).gaps, reverse=True)
    g = len(gaps)
    return tuple(w - (g - 1 - i) for i, w in enumerate(gaps))


def u_ring(n, s):
    wt = weight_table_for(n, s)
    g = len(wt)
    return Ring(["u%d" % (i + 1) for i in range(g)], wt)


def weight_table_for(n, s):
    return tuple(sorted(gap_sequence(n, s).gaps, reverse=True))


def complete_h(times, ring, top):
    """h_0..h_top with sum_m h_m z^m = exp(sum_k t_k z^k).

    times: dict k -> GradedPoly (missing k means t_k = 0).
    """
    h = [ring.one()]
    for m in range(1, top + 1):
        acc = ring.zero()
        for k, t in times.items():
            if k <= m:
                acc = acc + (t * h[m - k]).scale(k)
        h.append(acc.scale(mpq(1, m)))
    return h


def _sign(perm):
    sgn = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def jacobi_trudi(partition, times, ring):
    """det(h_{lambda_i - i + j}) expanded over permutations."""
    lam = [p for p in partition if p > 0]
    ell = len(lam)
    if ell == 0:
        return ring.one()
    top = lam[0] + ell
    h = complete_h(times, ring, top)

    def entry(i, j):
        m = lam[i] - i + j
        return h[m] if 0 <= m <= top else ring.zero()

    total = ring.zero()
    for perm in permutations(range(ell)):
        term = ring.one()
        for i in range(ell):
            e = entry(i, perm[i])
            if not e:
                term = None
                break
            term = term * e
        if term is not None:
            total = total + term.scale(_sign(perm))
    return total


def pivot_key(poly):
    """The monomial fixing the sign/scale convention: least total degree,
    ties broken towards the earliest symbols."""
    best = None
    for exps, c in poly.items():
        key = (sum(exps), tuple(-e for e in exps))
        if best is None or key < best[0]:
            best = (key, exps)
    return best[1]


def normalize_unit(poly):
    """Scale so the pivot monomial has coefficient +1."""
    if not poly:
        raise ValueError("cannot normalize the zero polynomial")
    c = poly.coefficient(pivot_key(poly))
    return poly.scale(1 / c)


def schur_weierstrass_oracle(n, s):
    """Schur polynomial of the Weierstrass partition with t_{w_i} = u_i and
    all other times zero, in unit normalization."""
    ring = u_ring(n, s)
    wts = weight_table_for(n, s)
    times = {w: ring.var("u%d" % (i + 1)) for i, w in enumerate(wts)}
    raw = jacobi_trudi(weierstrass_partition(n, s), times, ring)
    return normalize_unit(raw), raw
