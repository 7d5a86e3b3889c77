"""Equivariant hyperelliptic machinery: the genus-3 matrices P, H, A and the
quadratic identity family they encode, rank-two Pfaffians, the genus-one
analogue, genus-2 Jacobian coordinates and the quintic quadric."""

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from gmpy2 import mpq

from .abelian import Compiler, WpExpr, wp
from .algebra import GradedPoly, Ring, TruncatedSeries, rational_str
from .curves import CurveSpec
from .dictionaries import (OCTIC_PAPER, CoefficientDictionary, DictionaryError,
                           octic_dictionary, octic_paper_shifts, polarization,
                           quartic_dictionary)
from .local import lam_ring, puiseux_y
from .relations import (CapInsufficient, RelationReport, expr_weight, monomial_text, pole_order_probe,
                        series_report, verify_relation)
from .sl2 import (apply_partials, form_module, hirota_equivariance, index_module, tensor,
                  vadd, vscale)


# ---------------------------------------------------------------------------
# generic determinant (entries from any commutative ring; None is zero)


def det(M):
    """Determinant by expansion over column subsets, memoized on the set of
    columns still free.  Exact for any entries supporting + - *."""
    n = len(M)
    memo = {}

    def rec(row, free):
        if row == n:
            return 1
        if free in memo:
            return memo[free]
        acc = None
        sign = 1
        for c in range(n):
            if not free >> c & 1:
                continue
            a = M[row][c]
            if a is not None and not _is_zero(a):
                sub = rec(row + 1, free & ~(1 << c))
                if not (isinstance(sub, int) and sub == 0):
                    t = a * sub if sign > 0 else -(a * sub)
                    acc = t if acc is None else acc + t
            sign = -sign
        memo[free] = 0 if acc is None else acc
        return memo[free]

    return rec(0, (1 << n) - 1)


def _is_zero(a):
    if isinstance(a, WpExpr):
        return a.is_zero()
    if isinstance(a, GradedPoly):
        return not a
    return a == 0


def minor(M, rows, cols):
    return det([[M[r][c] for c in cols] for r in rows])


# ---------------------------------------------------------------------------
# the genus-3 matrices


def p_matrix():
    """5x5 P of 2-index wp's."""
    z = WpExpr()
    P11, P12, P13, P22, P23, P33 = (wp(1, 1), wp(1, 2), wp(1, 3), wp(2, 2),
                                    wp(2, 3), wp(3, 3))
    return [
        [z, z, P11, P12, P13],
        [z, -2 * P11, -P12, P22 - 2 * P13, P23],
        [P11, -P12, 2 * P13 - 2 * P22, -P23, P33],
        [P12, P22 - 2 * P13, -P23, -2 * P33, z],
        [P13, P23, P33, z, z],
    ]


def h_matrix(ring):
    """5x5 H with entries binom(4,i) binom(4,j) L_(i+j)."""
    return [[ring.var("L%d" % (i + j)).scale(comb(4, i) * comb(4, j)) for j in range(5)]
            for i in range(5)]


def a_matrix():
    """5x5 antisymmetric A of 3-index wp's."""
    z = WpExpr()
    w = wp
    upper = {
        (0, 1): -w(3, 3, 3), (0, 2): w(2, 3, 3), (0, 3): w(1, 3, 3) - w(2, 2, 3),
        (0, 4): w(2, 2, 2) - 2 * w(1, 2, 3),
        (1, 2): -w(1, 3, 3), (1, 3): w(1, 2, 3), (1, 4): w(1, 1, 3) - w(1, 2, 2),
        (2, 3): -w(1, 1, 3), (2, 4): w(1, 1, 2),
        (3, 4): -w(1, 1, 1),
    }
    A = [[z] * 5 for _ in range(5)]
    for (i, j), e in upper.items():
        A[i][j] = e
        A[j][i] = -e
    return A


def equivariant_dictionary(curve):
    """The stated map from the equivariant octic to the cyclic (2,7) model:
    2-index shifts and the lambda rescaling, higher wp's unchanged."""
    if (curve.n, curve.s) != (2, 7):
        raise DictionaryError("the equivariant genus-3 dictionary needs a (2,7) model")
    lr = lam_ring(curve)
    lmap = {"L%d" % j: lr.var("lam%d" % j).scale(r) for j, r in OCTIC_PAPER["rescale"].items()}
    for j, v in OCTIC_PAPER["fixed"].items():
        lmap["L%d" % j] = lr.const(v)
    return CoefficientDictionary("equivariant-octic", 3, ["L%d" % j for j in range(9)],
                                 lmap, mpq(1), octic_paper_shifts(curve))


def dictionaries_agree(a, b):
    """Same lambda map, u scale and shifts."""
    return (a.u_ratio == b.u_ratio
            and set(a.lambda_map) == set(b.lambda_map)
            and all(a.lambda_map[k] == b.lambda_map[k] for k in a.lambda_map)
            and set(a.wp_shifts) == set(b.wp_shifts)
            and all(a.wp_shifts[k] == b.wp_shifts[k] for k in a.wp_shifts))


def dictionary_cross_check(curve):
    """The transcribed map against the one derived from the polar forms."""
    return dictionaries_agree(equivariant_dictionary(curve), octic_dictionary(curve))


@dataclass
class EquivariantMatrices:
    P: list
    H: list
    A: list
    dictionary: CoefficientDictionary
    model: object

    def m_matrix(self):
        """H - 2P as WpExpr entries."""
        return [[WpExpr.const(self.H[i][j]) - 2 * self.P[i][j] for j in range(5)]
                for i in range(5)]


def build_matrices(model, dictionary=None):
    if model.genus != 3 or model.curve.n != 2:
        raise DictionaryError("the equivariant matrices are for a (2,7) model")
    d = dictionary or equivariant_dictionary(model.curve)
    A = a_matrix()
    for i in range(5):
        for j in range(5):
            if not (A[i][j] + A[j][i]).is_zero():
                raise AssertionError("A is not antisymmetric")
    return EquivariantMatrices(p_matrix(), h_matrix(d.other()), A, d, model)


# ---------------------------------------------------------------------------
# the quadratic identity family


def bilinear(A, l, k):
    acc = WpExpr()
    for i in range(5):
        for j in range(5):
            if l[i] and k[j] and not A[i][j].is_zero():
                acc = acc + A[i][j] * (mpq(l[i]) * mpq(k[j]))
    return acc


def qr_expression(mats, l, k, lp, kp):
    """(l^T A k)(l'^T A k') + 1/4 det[[H-2P, l, k], [l', 0, 0], [k', 0, 0]]
    in the equivariant frame, the determinant taken over all 7x7 entries."""
    M = mats.m_matrix()
    big = [M[i] + [WpExpr.const(l[i]), WpExpr.const(k[i])] for i in range(5)]
    big.append([WpExpr.const(x) for x in lp] + [None, None])
    big.append([WpExpr.const(x) for x in kp] + [None, None])
    D = det(big)
    D = WpExpr() if isinstance(D, int) else D
    return bilinear(mats.A, l, k) * bilinear(mats.A, lp, kp) + D * mpq(1, 4)


PAIRS = list(combinations(range(5), 2))


def basis_identity(mats, S, T):
    """Coefficient of (l^k)_S (l'^k')_T in the identity."""
    M = mats.m_matrix()
    rows = [r for r in range(5) if r not in S]
    cols = [c for c in range(5) if c not in T]
    sign = -1 if (sum(S) + sum(T)) % 2 else 1
    m = minor(M, rows, cols)
    m = WpExpr() if isinstance(m, int) else m
    return mats.A[S[0]][S[1]] * mats.A[T[0]][T[1]] + m * mpq(sign, 4)


def wedge(l, k):
    return {S: mpq(l[S[0]]) * k[S[1]] - mpq(l[S[1]]) * k[S[0]] for S in PAIRS}


def identity_check(mats, vectors, name=None):
    """Route A: assemble the full expression, translate, verify."""
    return _route_a(mats, vectors, name)[0]


def _route_a(mats, vectors, name=None):
    l, k, lp, kp = vectors
    expr = mats.dictionary.translate(qr_expression(mats, l, k, lp, kp))
    name = name or "QR l=%s k=%s l'=%s k'=%s" % tuple(_vec(v) for v in vectors)
    model = mats.model
    comp = Compiler.for_model(model)
    parts = {}
    for w, piece in graded_parts(expr, model.weights.wt_u).items():
        parts[w] = comp.compile(piece, QRSystem.D - piece.pole_degree()).numerator
    return _graded_report(name, "bordered determinant", parts, model, QRSystem.D), parts


def graded_parts(expr, wt_u):
    """Split an expression into pieces of constant Sato weight."""
    out = {}
    for key, c in expr.terms.items():
        w = sum(a.weight(wt_u) for a in key)
        if hasattr(c, "ring"):
            for t, v in c.terms.items():
                cw = w + c.ring.key_weight(t)
                piece = WpExpr({key: GradedPoly(c.ring, {t: v})})
                out[cw] = out[cw] + piece if cw in out else piece
        else:
            out[w] = out[w] + WpExpr({key: c}) if w in out else WpExpr({key: c})
    return {w: e for w, e in out.items() if not e.is_zero()}


def _graded_report(name, text, parts, model, D):
    """One report from weight-homogeneous cleared numerators: each piece is
    held to its own weight requirement."""
    caps = []
    for w in sorted(parts):
        need = max(0, D * model.weights.wt_sigma + w)
        rep = series_report(name, text, parts[w], D, need, model.cap)
        if not rep.ok:
            return rep
        caps.append(rep.cleared_cap)
    return RelationReport(name, text, "verified-to-cap", min(caps) if caps else model.cap, D)


def _vec(v):
    return "(" + ",".join(str(int(x)) if mpq(x).denominator == 1 else rational_str(x)
                          for x in v) + ")"


class QRSystem:
    """Route B: the 100 basis identities compiled once (common denominator
    sigma^6); any quadruple is a bilinear combination of them."""

    D = 6

    def __init__(self, mats):
        self.mats = mats
        model = mats.model
        comp = Compiler.for_model(model)
        self.series = {}
        self.weights = {}
        for S in PAIRS:
            for T in PAIRS:
                if (T, S) in self.series:
                    self.series[(S, T)] = self.series[(T, S)]
                    self.weights[(S, T)] = self.weights[(T, S)]
                    continue
                e = mats.dictionary.translate(basis_identity(mats, S, T))
                if e.is_zero():
                    self.series[(S, T)] = None
                    self.weights[(S, T)] = 0
                    continue
                extra = self.D - e.pole_degree()
                self.series[(S, T)] = comp.compile(e, extra).numerator
                self.weights[(S, T)] = expr_weight(e, model)

    def combine(self, vectors):
        """Cleared numerators of the quadruple, grouped by Sato weight."""
        l, k, lp, kp = vectors
        a, b = wedge(l, k), wedge(lp, kp)
        parts = {}
        for (S, T), s in self.series.items():
            c = a[S] * b[T]
            if not c or s is None:
                continue
            w = self.weights[(S, T)]
            t = s.scale(c)
            parts[w] = parts[w] + t if w in parts else t
        return {w: s for w, s in parts.items() if not s.is_zero_to_cap()}

    def check(self, vectors, name=None):
        name = name or "QR l=%s k=%s l'=%s k'=%s" % tuple(_vec(v) for v in vectors)
        return _graded_report(name, "basis combination", self.combine(vectors),
                              self.mats.model, self.D)

    def basis_reports(self):
        out = []
        for (S, T), s in sorted(self.series.items()):
            if S <= T and s is not None:
                out.append(self.check(_unit_quadruple(S, T),
                                      "E[%d%d,%d%d]" % (S[0] + 1, S[1] + 1, T[0] + 1, T[1] + 1)))
        return out


def _unit(i):
    v = [0] * 5
    v[i] = 1
    return v


def _unit_quadruple(S, T):
    return (_unit(S[0]), _unit(S[1]), _unit(T[0]), _unit(T[1]))


def basis_quadruples():
    for a in range(5):
        for b in range(5):
            for c in range(5):
                for d in range(5):
                    yield (_unit(a), _unit(b), _unit(c), _unit(d))


def random_quadruples(count, seed=0, bound=9):
    rng = random.Random(seed)
    return [tuple([rng.randint(-bound, bound) for _ in range(5)] for _ in range(4))
            for _ in range(count)]


@dataclass
class QRSuite:
    basis: list
    random: list
    route_a: list
    routes_agree: bool

    @property
    def ok(self):
        return (all(r.ok for r in self.basis + self.random + self.route_a)
                and self.routes_agree)


def qr_suite(model, seed=0, count=20, dictionary=None):
    """All 625 unit quadruples and `count` random ones through route B, the
    random ones again through route A; both routes must agree."""
    mats = build_matrices(model, dictionary)
    system = QRSystem(mats)
    basis = [system.check(q) for q in basis_quadruples()]
    quads = random_quadruples(count, seed)
    rand, direct, agree = [], [], True
    for q in quads:
        rand.append(system.check(q))
        rep, parts = _route_a(mats, q)
        direct.append(rep)
        agree = agree and rand[-1].status == rep.status and _same(parts, system.combine(q))
    return QRSuite(basis, rand, direct, agree)


def _same(a, b):
    """Two graded families of cleared numerators agree through common caps."""
    for w in set(a) | set(b):
        x, y = a.get(w), b.get(w)
        if x is None or y is None:
            if not (x or y).is_zero_to_cap():
                return False
            continue
        cap = min(x.cap, y.cap)
        if not (x.truncate(cap) - y.truncate(cap)).is_zero_to_cap():
            return False
    return True


def omission_reports(model):
    """For each 2-index shift, the basis identities with that shift left out;
    each omission must refute at least one."""
    base = equivariant_dictionary(model.curve)
    out = {}
    for key in sorted(base.wp_shifts):
        mats = build_matrices(model, base.without(key))
        out["P%d%d" % key] = QRSystem(mats).basis_reports()
    return out


# ---------------------------------------------------------------------------
# Pfaffians


def pfaffians(A):
    out = {}
    for a, b, c, d in combinations(range(5), 4):
        out[(a, b, c, d)] = A[a][b] * A[c][d] - A[a][c] * A[b][d] + A[a][d] * A[b][c]
    return out


def plucker_check(mats, A=None):
    A = A or mats.A
    reps = []
    for idx, e in pfaffians(A).items():
        name = "Pf[%s]" % "".join(str(i + 1) for i in idx)
        reps.append(verify_relation(mats.dictionary.translate(e), mats.model, name))
    return reps


def perturbed_a(A, seed=0):
    """A with one entry pair replaced by a different 3-index wp."""
    rng = random.Random(seed)
    i, j = rng.choice(PAIRS)
    B = [row[:] for row in A]
    extra = wp(1, 1, 1) if i != 3 or j != 4 else wp(3, 3, 3)
    B[i][j] = A[i][j] + extra
    B[j][i] = -B[i][j]
    return B


# ---------------------------------------------------------------------------
# genus one


def genus1_expression(dictionary):
    L = [dictionary.lam("L%d" % j) for j in range(5)]
    P = wp(1, 1)

    def c(x):
        return WpExpr.const(x)

    M = [
        [c(L[0]), c(L[1].scale(2)), c(L[2]) - 2 * P],
        [c(L[1].scale(2)), c(L[2].scale(4)) + 4 * P, c(L[3].scale(2))],
        [c(L[2]) - 2 * P, c(L[3].scale(2)), c(L[4])],
    ]
    return wp(1, 1, 1) ** 2 + det(M) * mpq(1, 4)


def genus1_check(model):
    d = quartic_dictionary(model.curve)
    return verify_relation(d.translate(genus1_expression(d)), model, "genus-1 analogue")


# ---------------------------------------------------------------------------
# polar forms


def octic_polar_display(ring):
    """The genus-3 F(x, z) exactly as displayed, as a biform {(i, j): coeff}."""
    L = [ring.var("L%d" % j) for j in range(9)]
    out = {}

    def add(i, j, c):
        out[(i, j)] = out.get((i, j), ring.zero()) + c

    add(4, 4, L[8])
    for a, b in ((4, 3), (3, 4)):
        add(a, b, L[7].scale(4))
    for (a, b), w in {(4, 2): 3, (3, 3): 8, (2, 4): 3}.items():
        add(a, b, L[6].scale(w))
    for (a, b), w in {(4, 1): 1, (3, 2): 6, (2, 3): 6, (1, 4): 1}.items():
        add(a, b, L[5].scale(4 * w))
    for (a, b), w in {(4, 0): 1, (3, 1): 16, (2, 2): 36, (1, 3): 16, (0, 4): 1}.items():
        add(a, b, L[4].scale(4 * w))
    for (a, b), w in {(3, 0): 1, (2, 1): 6, (1, 2): 6, (0, 3): 1}.items():
        add(a, b, L[3].scale(4 * w))
    for (a, b), w in {(2, 0): 3, (1, 1): 8, (0, 2): 3}.items():
        add(a, b, L[2].scale(w))
    for a, b in ((1, 0), (0, 1)):
        add(a, b, L[1].scale(4))
    add(0, 0, L[0])
    return out


def diagonal(form):
    """F(x, x) as {degree: coeff}."""
    out = {}
    for (i, j), c in form.items():
        out[i + j] = out.get(i + j, 0) + c
    return {k: v for k, v in out.items() if v}


@dataclass
class PolarReport:
    name: str
    matches: bool
    mismatched_degrees: list

    def to_json(self):
        return {"name": self.name, "matches": self.matches,
                "mismatched_degrees": self.mismatched_degrees}


def polar_diagonal_check(form, ring, degree, name):
    """Compare F(x,x) with sum_j binom(degree, j) L_j x^j."""
    diag = diagonal(form)
    bad = []
    for j in range(degree + 1):
        want = ring.var("L%d" % j).scale(comb(degree, j))
        if diag.get(j, ring.zero()) != want:
            bad.append(j)
    return PolarReport(name, not bad, bad)


def octic_polar_reports():
    ring = Ring(["L%d" % j for j in range(9)], [0] * 9)
    coeffs = {j: ring.var("L%d" % j).scale(comb(8, j)) for j in range(9)}
    return [polar_diagonal_check(octic_polar_display(ring), ring, 8, "displayed"),
            polar_diagonal_check(polarization(coeffs, 4, ring), ring, 8, "polarization")]


# ---------------------------------------------------------------------------
# genus-2 Jacobian coordinates from two Puiseux points


class DivisorFunction:
    """series / (xi1^a1 xi2^a2 dhat^k) with dhat = xi2^2 - xi1^2, so that
    delta = x1 - x2 = dhat / (xi1 xi2)^2.  Nothing is ever divided by dhat,
    so the coincident-point limit causes no trouble."""

    __slots__ = ("s", "a1", "a2", "k", "ctx")

    def __init__(self, s, a1, a2, k, ctx):
        self.s, self.a1, self.a2, self.k, self.ctx = s, a1, a2, k, ctx

    def _lift(self, other):
        if isinstance(other, DivisorFunction):
            return other
        return DivisorFunction(self.ctx.series(self.ctx.ring.const(other)), 0, 0, 0, self.ctx)

    def aligned(self, a1, a2, k):
        ctx = self.ctx
        s = self.s
        if a1 > self.a1 or a2 > self.a2:
            s = s * ctx.mono(a1 - self.a1, a2 - self.a2)
        if k > self.k:
            s = s * ctx.dhat_power(k - self.k)
        return s

    def __add__(self, other):
        o = self._lift(other)
        a1, a2, k = max(self.a1, o.a1), max(self.a2, o.a2), max(self.k, o.k)
        return DivisorFunction(self.aligned(a1, a2, k) + o.aligned(a1, a2, k), a1, a2, k,
                               self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return DivisorFunction(-self.s, self.a1, self.a2, self.k, self.ctx)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, DivisorFunction):
            return DivisorFunction(self.s.scale(mpq(other)), self.a1, self.a2, self.k, self.ctx)
        return DivisorFunction(self.s * other.s, self.a1 + other.a1, self.a2 + other.a2,
                               self.k + other.k, self.ctx)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self._lift(1)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self):
        return self.s.is_zero_to_cap()

    @property
    def cap(self):
        return self.s.cap


class _DivisorContext:
    def __init__(self, curve, cap):
        lr = lam_ring(curve)
        self.lam_names = list(lr.names)
        self.ring = Ring(["xi1", "xi2"] + self.lam_names, [1, 1] + list(lr.weights))
        self.fw = tuple([1, 1] + [0] * len(self.lam_names))
        self.cap = cap
        self._dh = {0: self.exact(self.ring.one())}

    def exact(self, poly):
        return TruncatedSeries._raw(poly, float("inf"), self.fw)

    def series(self, poly):
        return TruncatedSeries(poly, self.cap, fw=self.fw)

    def mono(self, e1, e2):
        exps = [e1, e2] + [0] * len(self.lam_names)
        return self.exact(self.ring.monomial(exps))

    def dhat_power(self, k):
        if k not in self._dh:
            x1, x2 = self.ring.var("xi1"), self.ring.var("xi2")
            d = x2 * x2 - x1 * x1
            self._dh[k] = self.exact(d ** k)
        return self._dh[k]

    def lam(self, poly):
        return poly.embed(self.ring) if hasattr(poly, "ring") else self.ring.const(poly)


@dataclass
class JacobianCoords:
    blocks: dict                 # name -> list of DivisorFunction
    grades: dict                 # name -> pole grade read from the construction
    I: DivisorFunction
    context: object = field(repr=False, default=None)

    def dims(self):
        return {n: len(v) for n, v in self.blocks.items()}


def jacobian_coords(curve=None, cap=12, perturb=False):
    """The fifteen coordinates of a degree-2 divisor on
    y^2 = x^5 + lam4 x^4 + ... + lam0 (sextic with L6 = 0, L5 = 1/6),
    with symbolic lambda and both points expanded at infinity."""
    curve = curve or CurveSpec(2, 5)
    if (curve.n, curve.s) != (2, 5):
        raise DictionaryError("the genus-2 coordinates use a (2,5) curve")
    ctx = _DivisorContext(curve, cap)
    lr = lam_ring(curve)
    pt = puiseux_y(curve, cap)

    def y_of(var):
        terms = {}
        for m, c in enumerate(pt.unit):
            if m > cap or not c:
                continue
            for key, v in c.embed(ctx.ring).terms.items():
                exps = list(ctx.ring.unpack(key))
                exps[var] += m
                terms[ctx.ring.pack(exps)] = v
        s = ctx.series(GradedPoly(ctx.ring, terms))
        return DivisorFunction(s, 5 if var == 0 else 0, 5 if var == 1 else 0, 0, ctx)

    def xpow(var, e):
        one = ctx.exact(ctx.ring.one())
        return DivisorFunction(one, 2 * e if var == 0 else 0, 2 * e if var == 1 else 0, 0, ctx)

    def const(c):
        return DivisorFunction(ctx.exact(ctx.lam(c)), 0, 0, 0, ctx)

    coeffs = {j: lr.var("lam%d" % j) for j in range(5)}
    coeffs[5] = lr.one()
    F = polarization(coeffs, 3, lr)

    def biform(form, dx=0, dz=0):
        acc = const(0)
        for (i, j), c in form.items():
            if i < dx or j < dz:
                continue
            w = mpq(1)
            for t in range(dx):
                w *= i - t
            for t in range(dz):
                w *= j - t
            acc = acc + const(c.scale(w)) * xpow(0, i - dx) * xpow(1, j - dz)
        return acc

    def fprime(var):
        acc = const(0)
        for j, c in coeffs.items():
            if j:
                acc = acc + const(c.scale(j)) * xpow(var, j - 1)
        return acc

    x1, x2 = xpow(0, 1), xpow(1, 1)
    y1, y2 = y_of(0), y_of(1)
    inv_delta = DivisorFunction(ctx.mono(2, 2), 0, 0, 1, ctx)
    J = y1 * y2 - biform(F)
    I = J * inv_delta ** 3
    s, p = x1 + x2, x1 * x2
    d2 = inv_delta ** 2
    mid = 2 if perturb else 4     # perturb: a deliberately wrong middle entry
    five = [d2, 2 * s * d2, (x1 * x1 + mid * p + x2 * x2) * d2, 2 * p * s * d2, p * p * d2]
    d3 = inv_delta ** 3
    four = [(y1 - y2) * d3, (x2 * y1 - x1 * y2) * d3, (x2 * x2 * y1 - x1 * x1 * y2) * d3,
            (x2 ** 3 * y1 - x1 ** 3 * y2) * d3]
    three = [I * inv_delta, I * s * inv_delta, I * p * inv_delta]
    # y1 dI/dx1 and y2 dI/dx2 along the curve (y y' = f'/2)
    Fx, Fz = biform(F, dx=1), biform(F, dz=1)
    half = mpq(1, 2)
    y1I1 = (fprime(0) * half * y2 - y1 * Fx) * d3 - 3 * y1 * J * inv_delta ** 4
    y2I2 = (fprime(1) * half * y1 - y2 * Fz) * d3 + 3 * y2 * J * inv_delta ** 4
    two = [(y1I1 + y2I2) * inv_delta, (x2 * y1I1 + x1 * y2I2) * inv_delta]
    one = [I * I]
    blocks = {"5_2": five, "4_3": four, "3_4": three, "2_5": two, "1_6": one}
    grades = {n: max(c.k for c in v) for n, v in blocks.items()}
    return JacobianCoords(blocks, grades, I, ctx)


def _aligned_valuation(fn, ref):
    """Valuation of fn once written over the denominator of ref."""
    return fn.aligned(ref.a1, ref.a2, ref.k).valuation()


def _project_matrix(S, dim):
    """Rows: coordinates of each basis label of S in the dim-component."""
    comps = S.decompose()
    out = {}
    for lab in S.labels:
        for c, (d, co) in zip(comps, S.coordinates({lab: 1}, comps)):
            if d == dim:
                out[lab] = co
    return out


def quadric_components(coords):
    """pi_5[3_4 . 3_4 - 5_2 . 1_6] in the standard basis of the 5."""
    three = form_module(2, "3")
    S = tensor(three, three, symmetric=True)
    proj = _project_matrix(S, 5)
    q = coords.blocks["3_4"]
    ctx = coords.context
    zero = DivisorFunction(ctx.exact(ctx.ring.zero()), 0, 0, 0, ctx)
    left = [zero] * 5
    for (a, b) in S.labels:
        mult = 1 if a == b else 2
        term = q[a] * q[b] * mult
        for j, c in enumerate(proj[(a, b)]):
            if c:
                left[j] = left[j] + term * c
    five = form_module(4, "5")
    fcoords = [five.coordinates({j: 1})[0][1] for j in range(5)]
    right = [zero] * 5
    I2 = coords.blocks["1_6"][0]
    for j, c5 in enumerate(coords.blocks["5_2"]):
        for t, c in enumerate(fcoords[j]):
            if c:
                right[t] = right[t] + c5 * I2 * c
    return [(a - b, b) for a, b in zip(left, right)]


def jacobian_quadric_check(cap=12, curve=None, perturb=False):
    """The five components of pi_5[3_4.3_4 - 5_2.1_6] as series in the two
    Puiseux parameters with symbolic lambda, plus 1_6 = I^2."""
    coords = jacobian_coords(curve, cap, perturb)
    reps = []
    for j, (comp, right) in enumerate(quadric_components(coords)):
        low = _aligned_valuation(right, comp)
        if comp.cap < low:
            raise CapInsufficient("pi5[%d]: exact only through %d, terms start at %d"
                                  % (j, comp.cap, low), cap + low - comp.cap)
        reps.append(_divisor_report("pi5[%d]" % j, "pi_5[3_4.3_4 - 5_2.1_6]", comp))
    reps.append(_divisor_report("1_6", "1_6 - I^2", coords.blocks["1_6"][0] - coords.I ** 2))
    return reps


def _divisor_report(name, text, fn):
    if fn.is_zero():
        return RelationReport(name, text, "verified-to-cap", fn.cap, fn.k)
    low = tuple((monomial_text(fn.s.ring, e), rational_str(c), w)
                for e, c, w in fn.s.lowest_terms(3))
    return RelationReport(name, text, "refuted", fn.cap, fn.k, low)


def grade_check(coords):
    """dimension + pole grade = 7 for every block."""
    return {n: len(v) + coords.grades[n] for n, v in coords.blocks.items()}


# ---------------------------------------------------------------------------
# sl2 wrappers


def realized_components(module):
    """[(dim, [realized basis vectors])], highest weight first."""
    return [(c.dim, [module.realize_vector(b) for b in c.basis]) for c in module.decompose()]


def sl2_decompose(module):
    return module.decompose()


def wp_square(genus=2):
    """The symmetric square of the 2-index wp's."""
    F = index_module(genus, 2, "wp2")
    return tensor(F, F, symmetric=True)


def derivative_module(genus=2, arity=2):
    """d (x) (arity-index wp's), realized by differentiation."""
    d = index_module(genus, 1, "d")
    F = index_module(genus, arity, "wp%d" % arity)
    T = tensor(d, F)
    T.realize = apply_partials(d, F)
    return T


def casimir_check(module):
    """Casimir eigenvalue (d^2 - 1)/4 on every vector of every component."""
    for c in module.decompose():
        want = mpq(c.dim * c.dim - 1, 4)
        for b in c.basis:
            if vadd(module.casimir(b), vscale(b, want), -1):
                return False
    return True


def hirota_equivariance_check(degree, symmetrize=None):
    r = hirota_equivariance(degree, symmetrize)
    res = tuple((name, repr(a), repr(b)) for name, a, b in r.failures[:3])
    return RelationReport("hirota degree %d" % degree, "sl2 . D = D . sl2",
                          "verified-to-cap" if r.ok else "refuted", r.checked, 0, res)


def entries_nonzero(mats):
    """Every upper entry of A is a nonzero function (the 2x2 Pfaffians)."""
    out = {}
    for i, j in PAIRS:
        rep = verify_relation(mats.dictionary.translate(mats.A[i][j]), mats.model,
                              "A[%d][%d]" % (i + 1, j + 1))
        out[(i + 1, j + 1)] = not rep.ok
    return out


def component_pole_grades(model, seed=0):
    """Observed pole orders along the theta divisor of the highest-weight
    vector of each component of the symmetric square of 2-index wp's; an
    exploration aid, no closed form is asserted."""
    out = []
    for dim, vecs in realized_components(wp_square(model.genus)):
        r = pole_order_probe(vecs[0], model, seed=seed)
        out.append({"dim": dim, "expr": str(vecs[0]), "order": round(r.estimated_order, 3),
                    "accepted": r.accepted})
    return out
