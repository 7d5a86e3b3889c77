"""Verification and derivation of identities between Kleinian functions,
addition formulae, and numeric pole-order probes."""

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb

import mpmath
from gmpy2 import mpq

from .abelian import CapInsufficient, Compiler, WpExpr, compile_expr, wp
from .algebra import (INF, GradedPoly, Ring, TruncatedSeries, rational, rational_str,
                      series_compose, solve_many)
from .dictionaries import sextic_dictionary, weierstrass_form, weierstrass_wp
from .local import lam_ring, point_sum_embedding
from .sigma import monomials_of_weight


@dataclass(frozen=True)
class RelationReport:
    name: str
    relation: str
    status: str                 # "verified-to-cap" or "refuted"
    cleared_cap: int
    denominator_power: int
    residual: tuple = ()        # lowest failing terms: (monomial, coefficient, weight)

    @property
    def ok(self):
        return self.status == "verified-to-cap"

    def to_json(self):
        return {
            "name": self.name,
            "relation": self.relation,
            "status": self.status,
            "cleared_cap": self.cleared_cap,
            "denominator_power": self.denominator_power,
            "residual": [{"monomial": m, "coefficient": c, "weight": w}
                         for m, c, w in self.residual],
        }


def monomial_text(ring, exps):
    parts = []
    for n, e in zip(ring.names, exps):
        if e:
            parts.append(n if e == 1 else "%s^%d" % (n, e))
    return "*".join(parts) or "1"


def series_report(name, text, series, D, required, model_cap):
    """Turn a cleared numerator into a report."""
    if series.cap < required:
        raise CapInsufficient(
            "%s: cleared numerator is exact only through weight %d but its lowest "
            "possible weight is %d" % (name, series.cap, required),
            model_cap + (required - series.cap))
    if series.is_zero_to_cap():
        return RelationReport(name, text, "verified-to-cap", series.cap, D)
    low = tuple((monomial_text(series.ring, e), rational_str(c), w)
                for e, c, w in series.lowest_terms(3))
    return RelationReport(name, text, "refuted", series.cap, D, low)


def proportional(a, b):
    """True when a = c b for a nonzero rational c."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    def scalar(c):
        if not hasattr(c, "ring"):
            return rational(c)
        if all(k == 0 for k in c.terms):
            return c.constant()
        return None
    for key in sorted(b.terms, key=str):
        cb = scalar(b.terms[key])
        if cb:
            ca = a.terms.get(key)
            ca = scalar(ca) if ca is not None else None
            if not ca:
                return False
            return (a - (ca / cb) * b).is_zero()
    return False


def expr_weight(expr, model):
    ws = expr.weights(model.weights.wt_u)
    return max(ws) if ws else 0


def verify_relation(rel, model, name="relation"):
    form = compile_expr(rel, model)
    need = max(0, form.denominator_power * model.weights.wt_sigma + expr_weight(rel, model))
    return series_report(name, str(rel), form.numerator, form.denominator_power,
                         need, model.cap)


# ---------------------------------------------------------------------------
# genus one


def genus1_relations(model):
    t, g2, g3 = weierstrass_form(model.curve)
    P = weierstrass_wp(model.curve)
    d1 = wp(1, 1, 1)
    d2 = wp(1, 1, 1, 1)
    half = mpq(1, 2)
    return {
        "cubic": d1 * d1 - (4 * P ** 3 - P * g2 - WpExpr.const(g3)),
        "second-derivative": d2 - (6 * P * P - WpExpr.const(g2.scale(half))),
    }


# ---------------------------------------------------------------------------
# genus two, sextic normalization


def _L(d, j):
    return d.lam("L%d" % j)


def sextic_relations(d):
    """The five 4-index relations, written in the sextic normalization
    (atoms and L's of the other convention)."""
    L = [_L(d, j) for j in range(7)]
    third = mpq(1, 3)
    rels = {}
    lhs = {
        (2, 2, 2, 2): -third * wp(2, 2, 2, 2) + 2 * wp(2, 2) ** 2,
        (1, 2, 2, 2): -third * wp(1, 2, 2, 2) + 2 * wp(1, 2) * wp(2, 2),
        (1, 1, 2, 2): (-third * wp(1, 1, 2, 2) + mpq(2, 3) * wp(1, 1) * wp(2, 2)
                       + mpq(4, 3) * wp(1, 2) ** 2),
        (1, 1, 1, 2): -third * wp(1, 1, 1, 2) + 2 * wp(1, 1) * wp(1, 2),
        (1, 1, 1, 1): -third * wp(1, 1, 1, 1) + 2 * wp(1, 1) ** 2,
    }
    consts = sextic_constants(L)
    for idx, left in lhs.items():
        k = idx.count(2)
        right = (L[k] * wp(2, 2) - 2 * L[k + 1] * wp(1, 2) + L[k + 2] * wp(1, 1)
                 + WpExpr.const(consts[k]))
        rels["P" + "".join(map(str, idx))] = left - right
    return rels


def sextic_constants(L):
    h = mpq(1, 2)
    return {
        4: L[2] * L[6] - L[3] * L[5] * 4 + L[4] * L[4] * 3,
        3: (L[1] * L[6] - L[2] * L[5] * 3 + L[3] * L[4] * 2).scale(h),
        2: (L[0] * L[6] - L[2] * L[4] * 9 + L[3] * L[3] * 8).scale(mpq(1, 6)),
        1: (L[0] * L[5] - L[1] * L[4] * 3 + L[2] * L[3] * 2).scale(h),
        0: L[0] * L[4] - L[1] * L[3] * 4 + L[2] * L[2] * 3,
    }


def directional(order, direction):
    """d^order wp along the direction vector (order >= 2)."""
    g = len(direction)
    out = WpExpr()
    for idx in combinations_with_replacement(range(1, g + 1), order):
        mult = _multinomial(idx)
        c = mpq(mult)
        for i in idx:
            c *= direction[i - 1]
        if c:
            out = out + WpExpr({(WpExpr.wp(*idx).atoms()[0],): c})
    return out


def _multinomial(idx):
    from collections import Counter
    from math import factorial
    n = factorial(len(idx))
    for v in Counter(idx).values():
        n //= factorial(v)
    return n


def parametrized_relation(d, nu):
    """-1/3 d^4 wp + 2 (d^2 wp)^2 = H0 db^2 wp - 2 H1 db d wp + H2 d^2 wp + G
    with d = d1 + nu d2, db = d2."""
    nu = mpq(nu)
    L = [_L(d, j) for j in range(7)]
    consts = sextic_constants(L)
    S = [sum((L[k + m].scale(comb(4, k) * nu ** k) for k in range(5)), d.other().zero())
         for m in range(3)]
    H2 = S[2]
    H1 = S[1] + H2.scale(nu)
    H0 = S[0] + H1.scale(2 * nu) - H2.scale(nu * nu)
    G = sum((consts[k].scale(comb(4, k) * nu ** k) for k in range(5)), d.other().zero())
    dd = directional(2, (1, nu))
    dbd = wp(1, 2) + nu * wp(2, 2)
    left = mpq(-1, 3) * directional(4, (1, nu)) + 2 * dd * dd
    right = H0 * wp(2, 2) - 2 * H1 * dbd + H2 * dd + WpExpr.const(G)
    return left - right


def kdv_relation():
    """U_t - U_xxx + 12 U U_x with U = wp_22, d_t = d_1, d_x = d_2."""
    return wp(1, 2, 2) - wp(2, 2, 2, 2, 2) + 12 * wp(2, 2) * wp(2, 2, 2)


def verify_genus2_system(model, dictionary=None, nus=None, seed=0):
    d = dictionary or sextic_dictionary(model.curve)
    reports = []
    for name, rel in sextic_relations(d).items():
        reports.append(verify_relation(d.translate(rel), model, name))
    km = model.specialize({4: 0})
    kd = sextic_dictionary(model.curve, specialize={4: 0})
    reports.append(verify_relation(kd.translate(kdv_relation()), km, "KdV"))
    if nus is None:
        rng = random.Random(seed)
        nus = [mpq(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(5)]
    for nu in nus:
        reports.append(verify_relation(d.translate(parametrized_relation(d, nu)), model,
                                       "family nu=%s" % rational_str(nu)))
    return reports


# ---------------------------------------------------------------------------
# derivation by linear ansatz


class DeriveFailure(ValueError):
    pass


@dataclass
class AnsatzTemplate:
    target: WpExpr
    candidates: list            # (name, WpExpr) with unknown coefficient each
    weight: int


@dataclass
class DeriveResult:
    status: str                 # unique | family | inconsistent
    coefficients: dict
    relation: WpExpr = None
    nullspace: list = field(default_factory=list)
    rows: int = 0
    cap: int = 0


def _homogeneous_weight(expr, wt_u):
    ws = expr.weights(wt_u)
    if len(ws) != 1:
        raise DeriveFailure("expression is not weight-homogeneous: %s" % sorted(ws))
    return ws.pop()


def _parity(expr):
    ps = {sum(len(a.indices) for a in k) % 2 for k in expr.terms}
    if len(ps) > 1:
        raise DeriveFailure("expression has mixed parity")
    return ps.pop() if ps else 0


def build_template(model, target, pool, max_degree=2):
    """Candidates: products of up to max_degree pool elements times lambda
    monomials, matching the target's weight and parity."""
    wt = model.weights
    lr = lam_ring(model.curve)
    w0 = _homogeneous_weight(target, wt.wt_u)
    p0 = _parity(target)
    lam_w = [-w for w in wt.wt_lambda]
    pool = [(n, e, _homogeneous_weight(e, wt.wt_u), _parity(e)) for n, e in pool]
    cands = []
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(range(len(pool)), deg):
            w = sum(pool[i][2] for i in combo)
            par = sum(pool[i][3] for i in combo) % 2
            need = w - w0        # lambda monomial weight (as a positive level)
            if par != p0 or need < 0:
                continue
            prod = WpExpr.const(1)
            for i in combo:
                prod = prod * pool[i][1]
            base = "*".join(pool[i][0] for i in combo) or "1"
            for exps in monomials_of_weight(lam_w, need):
                lm = lr.monomial(exps)
                if not any(exps):
                    name = base
                elif base == "1":
                    name = monomial_text(lr, exps)
                else:
                    name = "%s*%s" % (monomial_text(lr, exps), base)
                cands.append((name, prod * WpExpr.const(lm)))
    return AnsatzTemplate(target, cands, w0)


def derive_relation(t, model):
    if not t.candidates:
        raise DeriveFailure("empty candidate list")
    comp = Compiler.for_model(model)
    exprs = [t.target] + [e for _, e in t.candidates]
    D = max(e.pole_degree() for e in exprs)
    series = [comp.compile(e, D - e.pole_degree()).numerator for e in exprs]
    cap = min(s.cap for s in series)
    need = D * model.weights.wt_sigma + t.weight
    if cap < need:
        raise CapInsufficient("ansatz needs cap >= %d, have %d" % (need, cap),
                              model.cap + need - cap)
    polys = [s.truncate(cap).poly for s in series]
    keys = sorted(set().union(*[p.terms for p in polys]))
    rows, rhs = [], []
    for k in keys:
        rows.append({j: polys[j + 1].terms[k] for j in range(len(exprs) - 1)
                     if k in polys[j + 1].terms})
        rhs.append(-polys[0].terms.get(k, 0))
    sol = solve_many(rows, len(t.candidates), [rhs])[0]
    names = [n for n, _ in t.candidates]
    if sol.status == "inconsistent":
        return DeriveResult("inconsistent", {}, None, [], len(rows), cap)
    coeffs = dict(zip(names, sol.particular))
    rel = t.target
    for (n, e), c in zip(t.candidates, sol.particular):
        if c:
            rel = rel + c * e
    null = [dict(zip(names, v)) for v in sol.nullspace]
    return DeriveResult(sol.status, coeffs, rel, null, len(rows), cap)


def pool_gamma2(genus, extra=()):
    """Named 2-index wp's (and extras) for ansatz pools."""
    out = [("P%d%d" % (i, j), wp(i, j)) for i in range(1, genus + 1)
           for j in range(i, genus + 1)]
    return out + list(extra)


# ---------------------------------------------------------------------------
# addition formulae


def two_point_ring(model):
    g = model.genus
    base = model.ring
    us = ["u%d" % (i + 1) for i in range(g)]
    vs = ["v%d" % (i + 1) for i in range(g)]
    wts = list(model.weights.wt_u)
    lam_names = base.names[g:]
    ring = Ring(us + vs + list(lam_names), wts + wts + list(base.weights[g:]))
    fw = tuple(wts + wts + [0] * len(lam_names))
    return ring, fw


def _to_two_point(series, ring, fw, which):
    """Re-express a one-point series in u (which='u') or v (which='v')."""
    g = sum(1 for n in series.ring.names if n.startswith("u"))
    names = {n: (n if which == "u" else "v" + n[1:]) for n in series.ring.names[:g]}
    t = {}
    for k, c in series.poly.terms.items():
        exps = series.ring.unpack(k)
        target = [0] * len(ring.names)
        for n, e in zip(series.ring.names, exps):
            if e:
                target[ring.index[names.get(n, n)]] = e
        t[ring.pack(target)] = c
    return TruncatedSeries(GradedPoly(ring, t), series.cap, fw=fw)


def _shifted_sigma(model, ring, fw, sign):
    sig = model.series()
    assign = {}
    for i in range(model.genus):
        u = TruncatedSeries(ring.var("u%d" % (i + 1)), INF, fw=fw)
        v = TruncatedSeries(ring.var("v%d" % (i + 1)), INF, fw=fw)
        assign["u%d" % (i + 1)] = u + v if sign > 0 else u - v
    return series_compose(sig, assign, ring, fw)


@dataclass
class AdditionResult:
    report: RelationReport
    table: dict                 # (A name, B name) -> coefficient text
    diagonal_zero: bool


def addition_check(model, solve_cap=None):
    """sigma(u+v) sigma(u-v) / (sigma(u)^2 sigma(v)^2) as a bilinear form on
    Gamma(2) x Gamma(2).  Genus 1 verifies the Weierstrass form directly; genus
    2 solves the table at solve_cap and verifies it at the model cap."""
    g = model.genus
    if g not in (1, 2):
        raise ValueError("addition_check supports genus 1 and 2")
    ring, fw = two_point_ring(model)
    comp = Compiler.for_model(model)
    lhs = _shifted_sigma(model, ring, fw, 1) * _shifted_sigma(model, ring, fw, -1)
    wt = model.weights
    basis = [("1", WpExpr.const(1))] + pool_gamma2(g)
    cleared = {n: comp.compile(e, 2 - e.pole_degree()).numerator for n, e in basis}
    U = {n: _to_two_point(s, ring, fw, "u") for n, s in cleared.items()}
    V = {n: _to_two_point(s, ring, fw, "v") for n, s in cleared.items()}
    if g == 1:
        # -LHS = wp(u) - wp(v)
        resid = lhs + U["P11"] * V["1"] - U["1"] * V["P11"]
        need = 2 * wt.wt_sigma
        rep = series_report("addition", "sigma(u+v)sigma(u-v)/(sigma(u)^2 sigma(v)^2) = wp(v) - wp(u)",
                            resid, 4, need, model.cap)
        table = {("1", "P11"): "1/1", ("P11", "1"): "-1/1"}
        diag = _diagonal_vanishes(U["P11"] * V["1"] - U["1"] * V["P11"], ring, fw, g)
        return AdditionResult(rep, table, diag)
    lr = lam_ring(model.curve)
    lam_w = [-w for w in wt.wt_lambda]
    target_w = -2 * wt.wt_sigma
    cands = []
    for a, ea in basis:
        for b, eb in basis:
            need = expr_weight(ea, model) + expr_weight(eb, model) - target_w
            if need < 0:
                continue
            for exps in monomials_of_weight(lam_w, need):
                cands.append((a, b, exps))
    cols = []
    for a, b, exps in cands:
        lm = TruncatedSeries(lr.monomial(exps).embed(ring), INF, fw=fw)
        cols.append(U[a] * V[b] * lm)
    solve_cap = solve_cap or model.cap - 2
    polys = [c.truncate(solve_cap).poly for c in cols]
    lp = lhs.truncate(solve_cap).poly
    keys = sorted(set(lp.terms).union(*[p.terms for p in polys]))
    rows = [{j: p.terms[k] for j, p in enumerate(polys) if k in p.terms} for k in keys]
    rhs = [lp.terms.get(k, 0) for k in keys]
    sol = solve_many(rows, len(cols), [rhs])[0]
    if sol.status == "inconsistent":
        rep = RelationReport("addition", "no bilinear Gamma(2) form", "refuted", solve_cap, 4,
                             (("system", "inconsistent", solve_cap),))
        return AdditionResult(rep, {}, False)
    rhs_series = None
    table = {}
    for (a, b, exps), c, col in zip(cands, sol.particular, cols):
        if c:
            term = col.scale(c)
            rhs_series = term if rhs_series is None else rhs_series + term
            key = (a, b)
            mono = monomial_text(lr, exps)
            txt = rational_str(c) + ("" if mono == "1" else "*" + mono)
            table[key] = txt if key not in table else table[key] + " + " + txt
    resid = lhs - rhs_series
    rep = series_report("addition", "sigma(u+v)sigma(u-v)/(sigma(u)^2 sigma(v)^2) = sum c A(u) B(v)",
                        resid, 4, 2 * wt.wt_sigma, model.cap)
    diag = _diagonal_vanishes(rhs_series, ring, fw, g)
    return AdditionResult(rep, table, diag)


def _diagonal_vanishes(series, ring, fw, g):
    """The right side at v = u (the left side carries sigma(0) = 0)."""
    assign = {"v%d" % (i + 1): TruncatedSeries(ring.var("u%d" % (i + 1)), INF, fw=fw)
              for i in range(g)}
    for i in range(g):
        assign["u%d" % (i + 1)] = TruncatedSeries(ring.var("u%d" % (i + 1)), INF, fw=fw)
    return series_compose(series, assign, ring, fw).is_zero_to_cap()


# ---------------------------------------------------------------------------
# numeric pole-order probe


@dataclass
class PoleProbeResult:
    estimated_order: float
    fitted_slope: float
    residual: float
    eps: list
    samples: list = field(default_factory=list)   # per trial: [(eps, log|value|)]
    orders: list = field(default_factory=list)
    xi_scale: str = ""
    accepted: bool = False

    def to_json(self):
        return {
            "estimated_order": round(self.estimated_order, 6),
            "xi_scale": self.xi_scale,
            "accepted": self.accepted,
            "fitted_slope": round(self.fitted_slope, 6),
            "residual": round(self.residual, 6),
            "eps": [mpmath.nstr(e, 3) for e in self.eps],
            "orders": [round(o, 6) for o in self.orders],
            "samples": [[[mpmath.nstr(e, 3), mpmath.nstr(v, 10)] for e, v in t]
                        for t in self.samples],
        }


class _NumericSeries:
    def __init__(self, poly, dps):
        names = poly.ring.names
        self.names = names
        self.terms = [(poly.ring.unpack(k), mpmath.mpf(c.numerator) / c.denominator)
                      for k, c in poly.terms.items()]

    def __call__(self, values):
        vals = [values[n] for n in self.names]
        total = mpmath.mpc(0)
        cache = {}
        for exps, c in self.terms:
            v = c
            for i, e in enumerate(exps):
                if e:
                    p = cache.get((i, e))
                    if p is None:
                        p = cache[(i, e)] = vals[i] ** e
                    v = v * p
            total += v
        return total


def _fit(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    icpt = my - slope * mx
    res = mpmath.sqrt(sum((y - icpt - slope * x) ** 2 for x, y in zip(xs, ys)) / n)
    return slope, res


def default_ladder():
    return [mpmath.mpf(10) ** (-mpmath.mpf(k) / 2) for k in range(6, 17)]


SCALES = ("0.05", "0.02", "0.01", "0.005", "0.002", "0.001", "0.0005")
MIN_DEPTH = 3


def pole_order_probe(expr, model, trials=3, seed=0, eps=None, dps=80, xi_scale=None):
    """Approach a generic point of the theta divisor along a random direction
    and fit log|e| against log(eps).

    The base point is a sum of g-1 curve points at parameter ~ xi_scale.  Too
    large and the truncated expansions no longer put it on the divisor; too
    small and the gradient of sigma nearly vanishes, pushing the asymptotic
    regime below the ladder.  Without an explicit scale each candidate in
    SCALES is tried until the base point is on the divisor to well below the
    smallest step and both halves of the ladder give the same slope.
    Directions and steps are taken in coordinates u_i / xi_scale^wt_i, in
    which the base point has unit size."""
    mpmath.mp.dps = dps
    eps = eps or default_ladder()
    g = model.genus
    form = compile_expr(expr, model)
    depth = form.numerator.cap - form.numerator.valuation()
    if depth < MIN_DEPTH:
        raise CapInsufficient(
            "cleared numerator is known through only %d weight levels above its "
            "lowest term; the probe needs %d" % (max(depth, 0) + 1, MIN_DEPTH + 1),
            model.cap + MIN_DEPTH - depth)
    ctx = {
        "N": _NumericSeries(form.numerator.poly, dps),
        "S": _NumericSeries(model.sigma, dps),
        "grads": [_NumericSeries(model.sigma.diff("u%d" % (i + 1)), dps) for i in range(g)],
        "D": form.denominator_power,
    }
    if g > 1:
        emb = point_sum_embedding(model.curve, g - 1, model.cap)
        ctx["emb"] = [_NumericSeries(s.poly, dps) for s in emb.u_multi]
        ctx["xi"] = [n for n in emb.ring.names if n.startswith("xi")]
    scales = [xi_scale] if xi_scale is not None else list(SCALES)
    best = None
    for sc in scales:
        res = _probe_at(ctx, model, trials, seed, eps, mpmath.mpf(sc))
        res.xi_scale = str(sc)
        if res.accepted:
            return res
        if best is None or res.residual < best.residual:
            best = res
    return best


def _probe_at(ctx, model, trials, seed, eps, scale):
    g = model.genus
    wt = model.weights.wt_u
    rng = random.Random(seed)
    N, S, D = ctx["N"], ctx["S"], ctx["D"]

    def rc():
        return mpmath.mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))

    orders, slopes, resids, samples = [], [], [], []
    accepted = True
    lams = {n: mpmath.mpf(rng.randint(-9, 9)) / rng.randint(1, 9)
            for n in model.ring.names[g:]}
    for _ in range(trials):
        while True:
            vals = dict(lams)
            if g > 1:
                for j, name in enumerate(ctx["xi"]):
                    vals[name] = scale * (1 + rc() / 2) * (j + 1)
                u0 = [f(vals) for f in ctx["emb"]]
            else:
                u0 = [mpmath.mpc(0)]
            # work in v_i = u_i / scale^wt_i, where the point has unit size
            units = [scale ** wt[i] for i in range(g)]
            v = [rc() for i in range(g)]
            w = [a * b for a, b in zip(v, units)]
            pt = dict(lams)
            pt.update({"u%d" % (i + 1): u0[i] for i in range(g)})
            grad = [f(pt) * c for f, c in zip(ctx["grads"], units)]
            pair = abs(sum(a * b for a, b in zip(grad, v)))
            norm = mpmath.sqrt(sum(abs(a) ** 2 for a in grad)) * mpmath.sqrt(sum(abs(b) ** 2 for b in v))
            if norm and pair > mpmath.mpf("0.3") * norm:
                break
        if abs(S(pt)) > mpmath.mpf("1e-3") * pair * min(eps):
            accepted = False
        xs, ys = [], []
        for e in eps:
            pt = dict(lams)
            pt.update({"u%d" % (i + 1): u0[i] + e * w[i] for i in range(g)})
            val = N(pt) / S(pt) ** D
            xs.append(mpmath.log(e))
            ys.append(mpmath.log(abs(val)))
        slope, res = _fit(xs, ys)
        h = len(xs) // 2
        s1, _ = _fit(xs[:h + 1], ys[:h + 1])
        s2, _ = _fit(xs[h:], ys[h:])
        if abs(s1 - s2) > mpmath.mpf("0.02") or res > mpmath.mpf("0.01"):
            accepted = False
        slopes.append(slope)
        resids.append(res)
        orders.append(float(-slope))
        samples.append(list(zip(eps, ys)))
    order = sum(orders) / len(orders)
    out = PoleProbeResult(order, float(sum(slopes) / len(slopes)), float(max(resids)),
                          list(eps), samples, orders)
    out.accepted = accepted
    return out
