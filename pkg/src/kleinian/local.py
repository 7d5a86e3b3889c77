"""Expansion of a cyclic curve at infinity in xi = x^(-1/n), the Abel map
as a xi-series, and multi-point strata embeddings."""

from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import BITS, GradedPoly, Ring, TruncatedSeries
from .curves import CurveError, differential_basis, weight_table


class LogTermError(ArithmeticError):
    """Integration hit xi^-1: the differential was not holomorphic."""


def lam_ring(curve):
    wt = weight_table(curve)
    return Ring(curve.lambda_names, wt.wt_lambda)


def lam_fw(curve):
    """Filtration weights counting lambda-weight (as a positive number)."""
    return tuple(-w for w in weight_table(curve).wt_lambda)


def xi_ring(curve, k=1):
    wt = weight_table(curve)
    names = ["xi"] if k == 1 else ["xi%d" % (i + 1) for i in range(k)]
    return Ring(names + curve.lambda_names, [1] * k + list(wt.wt_lambda))


def _require_cyclic(curve):
    if curve.cls != "cyclic":
        raise CurveError("only cyclic curves have an implemented local expansion")


def power_coefficients(p, alpha, order):
    """Coefficients r_0..r_order of P(xi)^alpha where P = sum p_m xi^m, p_0 = 1.

    Uses the recurrence obtained from R' P = alpha P' R, so each step costs
    one pass over the known coefficients.
    """
    if p[0] != 1:
        raise ValueError("leading coefficient must be 1")
    alpha = mpq(alpha)
    ring = p[0].ring
    pk = [p[m] if m < len(p) else ring.zero() for m in range(order + 1)]
    r = [ring.one()]
    for m in range(1, order + 1):
        acc = ring.zero()
        for k in range(1, m + 1):
            if pk[k]:
                f = alpha * k - (m - k)
                if f:
                    acc = acc + (pk[k] * r[m - k]).scale(f)
        r.append(acc.scale(mpq(1, m)))
    return r


def _unit_polynomial(curve, order):
    """P(xi) = 1 + sum_j lam_j xi^(n(s-j)) as coefficient list in lambda."""
    L = lam_ring(curve)
    p = [L.zero() for _ in range(order + 1)]
    p[0] = L.one()
    for j in range(curve.s):
        e = curve.n * (curve.s - j)
        if e <= order:
            p[e] = p[e] + L.var("lam%d" % j)
    return p


@dataclass
class PuiseuxPoint:
    """y = xi^lead * unit(xi); unit is stored as coefficients in lambda."""
    curve: object
    lead: int
    unit: list  # unit[m] = coefficient of xi^m, a lambda polynomial
    cap: int

    def series(self):
        """The unit factor xi^s y as a TruncatedSeries in (xi, lambda)."""
        ring = xi_ring(self.curve)
        return _coeffs_to_series(self.unit, ring, self.cap)

    def residual(self):
        """(xi^s y)^n - P(xi) through the cap; zero for a correct expansion."""
        n = self.curve.n
        lr = lam_ring(self.curve)
        acc = [lr.one()] + [lr.zero()] * self.cap
        for _ in range(n):
            nxt = [lr.zero()] * (self.cap + 1)
            for i, a in enumerate(acc):
                if not a:
                    continue
                for j in range(self.cap + 1 - i):
                    if self.unit[j]:
                        nxt[i + j] = nxt[i + j] + a * self.unit[j]
            acc = nxt
        p = _unit_polynomial(self.curve, self.cap)
        return [a - b for a, b in zip(acc, p)]


def _coeffs_to_series(coeffs, ring, cap, offset=0):
    terms = {}
    for m, c in enumerate(coeffs):
        e = m + offset
        if e < 0 or e > cap:
            continue
        for k, v in c.embed(ring).terms.items():
            terms[k + e] = v  # xi is the first symbol, so adding e bumps its exponent
    return TruncatedSeries(GradedPoly(ring, terms), cap, cap_symbols=[ring.names[0]])


def puiseux_y(curve, cap):
    _require_cyclic(curve)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    p = _unit_polynomial(curve, cap)
    unit = power_coefficients(p, mpq(1, curve.n), cap)
    return PuiseuxPoint(curve, -curve.s, unit, cap)


@dataclass
class AbelSeries:
    curve: object
    cap: int
    weights: tuple
    coeffs: list  # coeffs[i][m]: lambda polynomial multiplying xi^m in u_{i+1}

    def u_series(self, i, ring=None, var=0):
        ring = ring or xi_ring(self.curve)
        return _coeffs_to_series(self.coeffs[i], ring, self.cap)

    def series(self):
        ring = xi_ring(self.curve)
        return [self.u_series(i, ring) for i in range(len(self.coeffs))]

    def integrand(self, i):
        """Coefficients of du_i/dxi, obtained by termwise differentiation."""
        return [c.scale(m + 1) for m, c in enumerate(self.coeffs[i][1:])]

    def at_level(self, i, level):
        """Coefficient list restricted to lambda-weight exactly `level`."""
        w = self.weights[i]
        m = w + level
        return m, (self.coeffs[i][m] if m <= self.cap else None)


def abel_integrand(curve, order):
    """Per basis differential: (w_i, coefficient list of xi^(w_i-1+m))."""
    wt = weight_table(curve)
    n = curve.n
    basis = differential_basis(curve)
    p = _unit_polynomial(curve, order)
    out = []
    for (a, b), w in zip(basis, wt.wt_u):
        # h dx / f_y = -xi^(w-1) P^((b-n+1)/n) dxi; the sign is dropped
        out.append((w, power_coefficients(p, mpq(b - n + 1, n), order)))
    return out


def abel_series(curve, cap):
    _require_cyclic(curve)
    wt = weight_table(curve)
    if cap < max(wt.wt_u):
        raise ValueError("cap must be at least the largest gap %d" % max(wt.wt_u))
    lr = lam_ring(curve)
    coeffs = []
    for w, q in abel_integrand(curve, cap):
        c = [lr.zero()] * (cap + 1)
        for m, qm in enumerate(q):
            e = w - 1 + m  # exponent of xi in the integrand
            if e + 1 > cap:
                break
            if not qm:
                continue
            if e == -1:
                raise LogTermError("xi^-1 term in the integrand")
            c[e + 1] = qm.scale(mpq(1, e + 1))
        coeffs.append(c)
    return AbelSeries(curve, cap, wt.wt_u, coeffs)


@dataclass
class StrataEmbedding:
    arity: int
    u_multi: list  # TruncatedSeries in xi1..xik, lambda

    @property
    def ring(self):
        return self.u_multi[0].ring


def strata_embedding(curve, k, cap, abel=None):
    g = curve.genus
    if not 1 <= k <= max(g - 1, 1) or (g == 1 and k != 1):
        raise ValueError("strata arity must satisfy 1 <= k <= g-1")
    return point_sum_embedding(curve, k, cap, abel)


def point_sum_embedding(curve, k, cap, abel=None):
    """u(P_1) + ... + u(P_k) as series in xi_1..xi_k (any k >= 1)."""
    abel = abel or abel_series(curve, cap)
    ring = xi_ring(curve, k)
    out = []
    fw = tuple([1] * k + [0] * curve.s)
    for i in range(len(abel.coeffs)):
        terms = {}
        for j in range(k):
            for m, c in enumerate(abel.coeffs[i]):
                if m > cap or not c:
                    continue
                for key, v in c.embed(ring).terms.items():
                    kk = key + (m << (BITS * j))
                    terms[kk] = terms.get(kk, 0) + v
        out.append(TruncatedSeries(GradedPoly(ring, terms), cap, fw=fw))
    return StrataEmbedding(k, out)
