"""Convention dictionaries between the cyclic (2,2g+1) normalization used by
the sigma engine and binomial-coefficient hyperelliptic normalizations.

Our model: Y^2 = f(x) = x^(2g+1) + lam_{2g} x^(2g) + ... + lam_0, du_i =
x^(i-1) dx / (2Y), and Klein's pairwise formula

    sum_ij wp_ij x^(i-1) z^(j-1) = (F_c(x,z) - 2 Y Z) / (x-z)^2,
    F_c = sum_k (xz)^k (2 lam_{2k} + lam_{2k+1} (x+z)).

Other normalization: y^2 = sum_j binom(2p,j) L_j x^j = kappa f(x) after the
coefficient map, du = x^(i-1) dx / y, and

    sum_ij wp'_ij x^(i-1) z^(j-1) = (F(x,z) - y z) / (2 (x-z)^2)

with F the full (p,p) polarization (F(x,x) = y^2).  Then u' = (2/r) u with
r^2 = kappa, wp'_I = (r/2)^|I| wp_I for |I| >= 3, and the 2-index functions
pick up the constant shift read off from (F - kappa/2 F_c) / (2 (x-z)^2).
"""

from dataclasses import dataclass, field
from math import comb

import gmpy2
from gmpy2 import mpq

from .abelian import WpExpr
from .algebra import Ring, rational_str
from .local import lam_ring


class DictionaryError(ValueError):
    pass


def other_ring(count, prefix="L"):
    return Ring(["%s%d" % (prefix, j) for j in range(count)], [0] * count)


# ---------------------------------------------------------------------------
# bivariate forms as dicts (i, j) -> lambda polynomial (x^i z^j)


def _add(acc, key, c):
    if key in acc:
        v = acc[key] + c
        if v:
            acc[key] = v
        else:
            del acc[key]
    elif c:
        acc[key] = c


def polarization(coeffs, p, ring):
    """Symmetric (p,p) biform F with F(x,x) = sum_j coeffs[j] x^j."""
    out = {}
    for j, a in coeffs.items():
        if not a:
            continue
        for i in range(max(0, j - p), min(p, j) + 1):
            w = mpq(comb(p, i) * comb(p, j - i), comb(2 * p, j))
            _add(out, (i, j - i), a.scale(w))
    return out


def klein_form(lams, degree, ring):
    """F_c for Y^2 = sum_j lams[j] x^j (lams[degree] = 1)."""
    out = {}
    for k in range(degree // 2 + 1):
        a, b = lams.get(2 * k), lams.get(2 * k + 1)
        if a:
            _add(out, (k, k), a.scale(2))
        if b:
            _add(out, (k + 1, k), b)
            _add(out, (k, k + 1), b)
    return out


def divide_by_delta(form):
    """Exact quotient of a biform by (x - z); raises if not divisible."""
    if not form:
        return {}
    by_x = {}
    for (i, j), c in form.items():
        by_x.setdefault(i, {})[j] = c
    d = max(by_x)
    q = {}
    carry = {}
    for i in range(d, 0, -1):
        row = dict(by_x.get(i, {}))
        for j, c in carry.items():
            _add(row, j, c)
        for j, c in row.items():
            _add(q, (i - 1, j), c)
        carry = {j + 1: c for j, c in row.items()}
    rem = dict(by_x.get(0, {}))
    for j, c in carry.items():
        _add(rem, j, c)
    if rem:
        raise DictionaryError("biform is not divisible by (x - z)")
    return q


# ---------------------------------------------------------------------------


@dataclass
class CoefficientDictionary:
    """Maps expressions written in another normalization to our atoms."""
    name: str
    genus: int
    other_lambdas: list
    lambda_map: dict          # other lambda name -> our lambda polynomial
    u_ratio: mpq               # r/2: d/du' = (r/2) d/du
    wp_shifts: dict            # (i, j) -> our lambda polynomial
    omitted: tuple = ()
    extras: dict = field(default_factory=dict)

    def other(self):
        return Ring(self.other_lambdas, [0] * len(self.other_lambdas))

    def lam(self, name):
        return self.other().var(name)

    def without(self, key):
        shifts = {k: v for k, v in self.wp_shifts.items() if k != key}
        return CoefficientDictionary(self.name, self.genus, self.other_lambdas,
                                     self.lambda_map, self.u_ratio, shifts,
                                     self.omitted + (key,), self.extras)

    def map_coefficient(self, c, target):
        if hasattr(c, "ring"):
            assign = {n: self.lambda_map[n] for n in c.ring.names}
            return c.subs(assign, target)
        return target.const(c)

    def atom_image(self, atom, target):
        if atom.kind != "wp":
            raise DictionaryError("only wp atoms have a dictionary image")
        k = len(atom.indices)
        e = WpExpr({(atom,): self.u_ratio ** k})
        if k == 2 and atom.indices in self.wp_shifts:
            e = e + WpExpr.const(self.wp_shifts[atom.indices])
        return e

    def translate(self, expr, target=None):
        """Rewrite an expression in the other normalization (coefficients in
        the other lambda ring) into our atoms and lambdas."""
        target = target or next(iter(self.lambda_map.values())).ring
        out = WpExpr()
        cache = {}
        for key, c in expr.terms.items():
            t = WpExpr.const(self.map_coefficient(c, target))
            for a in key:
                if a not in cache:
                    cache[a] = self.atom_image(a, target)
                t = t * cache[a]
            out = out + t
        return out.map_coefficients(_simplify)

    def to_json(self):
        return {
            "name": self.name,
            "genus": self.genus,
            "u_ratio": rational_str(self.u_ratio),
            "lambda_map": {k: v.pretty() for k, v in sorted(self.lambda_map.items())},
            "wp_shifts": {"P%d%d" % k: v.pretty() for k, v in sorted(self.wp_shifts.items())},
            "omitted": ["P%d%d" % k for k in self.omitted],
        }


def _simplify(c):
    if hasattr(c, "ring") and all(k == 0 for k in c.terms):
        return c.constant()
    return c


def hyperelliptic_dictionary(curve, p, lambda_map, name, specialize=None):
    """Dictionary from y^2 = sum_j binom(2p,j) L_j x^j (L's given by
    lambda_map in terms of our lambdas) to the model's normalization.
    `specialize` fixes some of our lambdas to constants."""
    if curve.n != 2:
        raise DictionaryError("polar-form dictionaries exist for n = 2 only")
    g = curve.genus
    lr = lam_ring(curve)
    specialize = specialize or {}
    ours = {j: lr.const(specialize[j]) if j in specialize else lr.var("lam%d" % j)
            for j in range(curve.s)}
    ours[curve.s] = lr.one()
    other_coeffs = {}
    for j in range(2 * p + 1):
        v = lambda_map.get("L%d" % j)
        if v is not None:
            other_coeffs[j] = v.scale(comb(2 * p, j))
    # kappa from the leading coefficient, then all coefficients must agree
    kappa = other_coeffs[curve.s].constant()
    if not kappa:
        raise DictionaryError("other curve has no x^%d term" % curve.s)
    for j in range(2 * p + 1):
        mine = ours.get(j)
        mine = mine.scale(kappa) if mine is not None else lr.zero()
        if other_coeffs.get(j, lr.zero()) != mine:
            raise DictionaryError("coefficient map is not a rescaling of the model curve at x^%d" % j)
    if not gmpy2.is_square(kappa.numerator) or not gmpy2.is_square(kappa.denominator):
        raise DictionaryError("kappa = %s is not a rational square" % kappa)
    r = mpq(gmpy2.isqrt(kappa.numerator), gmpy2.isqrt(kappa.denominator))
    F = polarization(other_coeffs, p, lr)
    Fc = klein_form(ours, curve.s, lr)
    diff = dict(F)
    for k, c in Fc.items():
        _add(diff, k, c.scale(-kappa / 2))
    q = divide_by_delta(divide_by_delta(diff))
    shifts = {}
    for (i, j), c in q.items():
        if i >= g or j >= g:
            raise DictionaryError("polar forms differ beyond a 2-index shift")
        if i <= j:
            shifts[(i + 1, j + 1)] = c.scale(mpq(1, 2))
    return CoefficientDictionary(name, g, sorted(lambda_map, key=lambda s: int(s[1:])),
                                 dict(lambda_map), r / 2, shifts,
                                 extras={"kappa": kappa, "degree": 2 * p})


def sextic_dictionary(curve, specialize=None):
    """Genus 2: y^2 = L6 x^6 + 6 L5 x^5 + 15 L4 x^4 + ... + L0 with L6 = 0,
    L5 = 1/6 against the model's monic quintic."""
    if (curve.n, curve.s) != (2, 5):
        raise DictionaryError("the sextic dictionary needs a (2,5) model")
    lr = lam_ring(curve)
    specialize = specialize or {}

    def lam(j):
        if j in specialize:
            return lr.const(specialize[j])
        return lr.var("lam%d" % j)

    m = {"L%d" % j: lam(j).scale(mpq(1, comb(6, j))) for j in range(5)}
    m["L5"] = lr.const(mpq(1, 6))
    m["L6"] = lr.zero()
    return hyperelliptic_dictionary(curve, 3, m, "sextic", specialize)


def octic_dictionary(curve):
    """Genus 3: the binomial octic with L8 = 0 against the monic septic."""
    if (curve.n, curve.s) != (2, 7):
        raise DictionaryError("the octic dictionary needs a (2,7) model")
    lr = lam_ring(curve)
    # y'^2 = 4 f, so binom(8,j) L_j = 4 lam_j
    m = {"L%d" % j: lr.var("lam%d" % j).scale(mpq(4, comb(8, j))) for j in range(7)}
    m["L7"] = lr.const(mpq(1, 2))
    m["L8"] = lr.zero()
    return hyperelliptic_dictionary(curve, 4, m, "octic")


def quartic_dictionary(curve):
    """Genus 1: the binomial quartic with L4 = 0 against the monic cubic."""
    if (curve.n, curve.s) != (2, 3):
        raise DictionaryError("the quartic dictionary needs a (2,3) model")
    lr = lam_ring(curve)
    m = {"L%d" % j: lr.var("lam%d" % j).scale(mpq(4, comb(4, j))) for j in range(3)}
    m["L3"] = lr.one()
    m["L4"] = lr.zero()
    return hyperelliptic_dictionary(curve, 2, m, "quartic")


# paper-stated genus-3 dictionary, in the direction equivariant -> cyclic
OCTIC_PAPER = {
    "shifts": {(1, 1): (3, 2), (1, 2): (2, 3), (1, 3): (mpq(1, 2), 4),
               (2, 2): (9, 4), (2, 3): (2, 5), (3, 3): (3, 6)},
    "rescale": {0: mpq(4), 1: mpq(1, 2), 2: mpq(1, 7), 3: mpq(1, 14), 4: mpq(2, 35),
                5: mpq(1, 14), 6: mpq(1, 7)},
    "fixed": {7: mpq(1, 2), 8: mpq(0)},
}


def octic_paper_shifts(curve):
    """The stated shifts with the stated rescaling applied, as polynomials
    in our lambdas."""
    lr = lam_ring(curve)
    out = {}
    for k, (c, j) in OCTIC_PAPER["shifts"].items():
        out[k] = lr.var("lam%d" % j).scale(mpq(c) * OCTIC_PAPER["rescale"][j])
    return out


def weierstrass_form(curve):
    """Genus 1: x_W = x + t turns 4 f(x) into 4 x_W^3 - g2 x_W - g3.
    Returns (t, g2, g3) as lambda polynomials."""
    if (curve.n, curve.s) != (2, 3):
        raise DictionaryError("Weierstrass form needs a (2,3) model")
    lr = lam_ring(curve)
    c0, c1, c2 = (lr.var("lam%d" % j) for j in range(3))
    t = c2.scale(mpq(1, 3))
    # f(X - t) = X^3 + a1 X + a0
    a1 = t * t.scale(3) - c2 * t.scale(2) + c1
    a0 = -(t * t * t) + c2 * t * t - c1 * t + c0
    return t, a1.scale(-4), a0.scale(-4)


def weierstrass_wp(curve):
    """wp_W = wp_11 + t as a WpExpr."""
    t, _, _ = weierstrass_form(curve)
    return WpExpr.wp(1, 1) + WpExpr.const(t)
