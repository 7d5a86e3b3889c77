"""The sigma-expansion solver.

sigma(u) = SW(u) + sum_L C_L(u, lambda), where C_L collects the terms whose
lambda-monomial has weight L.  Weight homogeneity makes every constraint
(vanishing on the strata, and for hyperelliptic curves the Jacobi-inversion
and pairwise Klein formulae) split by level, and the level-L part of each
constraint is a polynomial in the local parameters xi.  So a level is solved
by evaluating the constraint at exact rational points xi_k, with the level-L
unknowns entering linearly through the level-0 data.
"""

import random
from dataclasses import dataclass, field
from hashlib import sha256
from itertools import combinations
from math import ceil, comb
import json

from gmpy2 import mpq

from .algebra import (BITS, GradedPoly, Ring, TruncatedSeries, fdeg_of,
                      series_compose, solve_many)
from .curves import CurveSpec, weight_table
from .local import abel_series, lam_fw, lam_ring, puiseux_y, strata_embedding
from .schur import normalize_unit, schur_weierstrass_oracle

DEFAULT_CAPS = {(2, 3): 12, (2, 5): 20, (2, 7): 16, (3, 4): 14}


class SolverError(RuntimeError):
    pass


class OracleMismatch(SolverError):
    pass


class Underdetermined(SolverError):
    def __init__(self, message, unpinned):
        super().__init__(message)
        self.unpinned = unpinned


def monomials_of_weight(weights, target):
    """Exponent tuples e with sum e_i * weights[i] == target (weights > 0)."""
    out = []
    cur = []

    def rec(i, rem):
        if i == len(weights):
            if rem == 0:
                out.append(tuple(cur))
            return
        w = weights[i]
        for e in range(rem // w, -1, -1):
            cur.append(e)
            rec(i + 1, rem - e * w)
            cur.pop()

    if target >= 0:
        rec(0, target)
    return out


def sigma_ring(curve):
    wt = weight_table(curve)
    g = curve.genus
    return Ring(["u%d" % (i + 1) for i in range(g)] + curve.lambda_names,
                list(wt.wt_u) + list(wt.wt_lambda))


def u_fw(curve):
    wt = weight_table(curve)
    return tuple(wt.wt_u) + (0,) * curve.s


@dataclass
class LevelAnsatz:
    level: int
    u_monos: list
    lam_monos: list

    @property
    def size(self):
        return len(self.u_monos) * len(self.lam_monos)


@dataclass
class SigmaAnsatz:
    curve: CurveSpec
    cap: int
    wt_sigma: int
    levels: list

    def candidate_counts(self):
        return {lv.level: lv.size for lv in self.levels}

    def unknown_names(self, level):
        lv = next(x for x in self.levels if x.level == level)
        return ["C%d[%s|%s]" % (level, ",".join(map(str, a)), ",".join(map(str, b)))
                for b in lv.lam_monos for a in lv.u_monos]


def sigma_ansatz(curve, cap):
    if curve.cls != "cyclic":
        raise ValueError("sigma ansatz needs a cyclic curve")
    wt = weight_table(curve)
    W = wt.wt_sigma
    lfw = lam_fw(curve)
    levels = []
    for L in range(0, cap - W + 1):
        lams = monomials_of_weight(lfw, L)
        if not lams:
            continue
        us = [a for a in monomials_of_weight(wt.wt_u, W + L) if sum(a) % 2 == W % 2]
        levels.append(LevelAnsatz(L, us, lams))
    return SigmaAnsatz(curve, cap, W, levels)


# ---------------------------------------------------------------------------
# point evaluation


class _Evaluator:
    """Evaluates sigma and its partials at u = sum_k u(xi_k) for exact
    rational xi_k, as polynomials in lambda (plus level-L unknown markers z_j)
    truncated at lambda-weight L."""

    def __init__(self, curve, abel, puis, sigma_known, level, unknowns, derivs):
        self.curve = curve
        self.abel = abel
        self.puis = puis
        self.L = level
        self.g = curve.genus
        self.s = curve.s
        lw = weight_table(curve).wt_lambda
        M = len(unknowns)
        self.M = M
        self.E = Ring(curve.lambda_names + ["z%d" % j for j in range(M)],
                      list(lw) + [-level] * M)
        self.fw = lam_fw(curve) + (level,) * M
        self.unknowns = unknowns
        self.derivs = derivs
        umask = (1 << (BITS * self.g)) - 1
        self.groups = {}
        for I in derivs:
            p = sigma_known
            for i in I:
                p = p.diff("u%d" % (i + 1))
            grp = {}
            for k, c in p.terms.items():
                uk, lk = k & umask, k >> (BITS * self.g)
                if fdeg_of(self.E, self.fw, lk) > level:
                    continue
                d = grp.setdefault(uk, {})
                d[lk] = d.get(lk, 0) + c
            self.groups[I] = [(uk, GradedPoly(self.E, d)) for uk, d in sorted(grp.items())]

    def mul(self, a, b):
        return a.mul_trunc(b, self.fw, self.L)

    def u_values(self, xis):
        E, L = self.E, self.L
        vals = []
        for i, w in enumerate(self.abel.weights):
            acc = {}
            for m in range(w, min(w + L, self.abel.cap) + 1):
                c = self.abel.coeffs[i][m]
                if not c:
                    continue
                xm = sum(x ** m for x in xis)
                for k, v in c.terms.items():
                    acc[k] = acc.get(k, 0) + v * xm
            vals.append(GradedPoly(E, acc))
        return vals

    def y_value(self, xi):
        """Y(xi) = xi^(-s) * unit(xi), truncated at the level."""
        acc = {}
        for m in range(0, min(self.L, self.puis.cap) + 1):
            c = self.puis.unit[m]
            if not c:
                continue
            f = xi ** (m - self.puis.curve.s)
            for k, v in c.terms.items():
                acc[k] = acc.get(k, 0) + v * f
        return GradedPoly(self.E, acc)

    def sigma_values(self, xis):
        U = self.u_values(xis)
        U0 = [u.constant() for u in U]
        g = self.g
        memo = {0: self.E.one()}

        def mono(key):
            m = memo.get(key)
            if m is not None:
                return m
            i = g - 1
            while not (key >> (BITS * i)) & 0xFFF:
                i -= 1
            m = self.mul(mono(key - (1 << (BITS * i))), U[i])
            memo[key] = m
            return m

        out = {}
        zbase = BITS * self.s
        for I in self.derivs:
            acc = self.E.zero()
            for uk, coeff in self.groups[I]:
                acc = acc + self.mul(mono(uk), coeff)
            if self.M:
                zt = {}
                for j, alpha in enumerate(self.unknowns):
                    v = _monomial_derivative_value(alpha, I, U0)
                    if v:
                        zt[1 << (zbase + BITS * j)] = v
                acc = acc + GradedPoly(self.E, zt)
            out[I] = acc
        return out

    def lam_value(self, j):
        """Curve coefficient c_j as an element of E (c_s = 1)."""
        if j == self.s:
            return self.E.one()
        if j > self.s or j < 0:
            return self.E.zero()
        if self.fw[j] > self.L:
            return self.E.zero()
        return self.E.var("lam%d" % j)


def _monomial_derivative_value(alpha, I, point):
    """d^I u^alpha evaluated at numeric point."""
    e = list(alpha)
    c = mpq(1)
    for i in I:
        if not e[i]:
            return 0
        c *= e[i]
        e[i] -= 1
    for x, k in zip(point, e):
        if k:
            c *= x ** k
    return c


def klein_polar(ev, x, z):
    """F(x,z) = sum_k x^k z^k (2 c_{2k} + c_{2k+1} (x+z)) for y^2 = f(x)."""
    E = ev.E
    acc = E.zero()
    g = ev.g
    for k in range(g + 1):
        xz = (x * z) ** k
        acc = acc + ev.lam_value(2 * k).scale(2 * xz) + ev.lam_value(2 * k + 1).scale(xz * (x + z))
    return acc


def elementary(xs, r):
    tot = mpq(0)
    for c in combinations(xs, r):
        p = mpq(1)
        for v in c:
            p *= v
        tot += p
    return tot


def vanishing_constraints(ev, xis):
    return [ev.sigma_values(xis)[()]]


def hyperelliptic_constraints(ev, xis):
    """Jacobi inversion and pairwise Klein constraints at u = sum u(xi_k),
    k = 1..g, all cleared of sigma denominators."""
    g = ev.g
    vals = ev.sigma_values(xis)
    sig = vals[()]
    mul = ev.mul
    sig2 = mul(sig, sig)
    Mij = {}
    for i in range(g):
        for j in range(i, g):
            Mij[(i, j)] = mul(vals[(i,)], vals[(j,)]) - mul(sig, vals[(i, j)])
    xs = [mpq(1) / (x * x) for x in xis]
    out = []
    # wp_{g,i} = (-1)^(g-i) e_{g-i+1}(x), 1-based i
    for i in range(1, g + 1):
        r = (-1) ** (g - i) * elementary(xs, g - i + 1)
        out.append(Mij[(i - 1, g - 1)] - sig2.scale(r))
    if g >= 2:
        Ys = [ev.y_value(x) for x in xis]
        for a, b in combinations(range(g), 2):
            xa, xb = xs[a], xs[b]
            d2 = (xa - xb) ** 2
            lhs = ev.E.zero()
            for i in range(g):
                for j in range(g):
                    key = (min(i, j), max(i, j))
                    lhs = lhs + Mij[key].scale(xa ** i * xb ** j * d2)
            rhs = klein_polar(ev, xa, xb) - mul(Ys[a], Ys[b]).scale(2)
            out.append(lhs - mul(rhs, sig2))
    return out


def _all_derivs(g):
    d = [()] + [(i,) for i in range(g)]
    d += [(i, j) for i in range(g) for j in range(i, g)]
    return d


def _random_point(rng, k):
    """k nonzero rationals with pairwise distinct squares."""
    while True:
        pts = []
        for _ in range(k):
            p = rng.randint(1, 9) * rng.choice((-1, 1))
            q = rng.randint(1, 9)
            pts.append(mpq(p, q))
        if len({abs(x) for x in pts}) == k:
            return pts


# ---------------------------------------------------------------------------
# the model


@dataclass
class SigmaModel:
    curve: CurveSpec
    cap: int
    sigma: GradedPoly
    sw_part: GradedPoly
    solver_log: list = field(default_factory=list)
    gauge: str = ""

    @property
    def genus(self):
        return self.curve.genus

    @property
    def weights(self):
        return weight_table(self.curve)

    @property
    def ring(self):
        return self.sigma.ring

    @property
    def fw(self):
        return u_fw(self.curve)

    @property
    def u_names(self):
        return ["u%d" % (i + 1) for i in range(self.genus)]

    def series(self):
        return TruncatedSeries(self.sigma, self.cap, fw=self.fw)

    def level_part(self, L):
        lf = lam_fw(self.curve)
        g = self.genus
        fw = (0,) * g + lf
        return self.sigma.select(lambda e: sum(a * b for a, b in zip(e, fw)) == L)

    def model_id(self):
        return sha256(json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()[:16]

    def to_json(self):
        d = self.sigma.to_json()
        d["metadata"] = {
            "n": self.curve.n, "s": self.curve.s, "cap": self.cap,
            "wt_sigma": self.weights.wt_sigma,
            "gauge": self.gauge,
            "solver_log": self.solver_log,
            "sw_part": self.sw_part.to_json()["terms"],
        }
        return d

    @classmethod
    def from_json(cls, data):
        meta = data["metadata"]
        curve = CurveSpec(meta["n"], meta["s"])
        sigma = GradedPoly.from_json(data)
        ring = sigma.ring
        sw = GradedPoly.from_exps(ring, {tuple(t["exps"]): t["coeff"] for t in meta["sw_part"]})
        return cls(curve, meta["cap"], sigma, sw, meta.get("solver_log", []), meta.get("gauge", ""))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, sort_keys=True, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def truncated(self, cap):
        """The same model viewed at a smaller cap."""
        fw = self.fw
        return SigmaModel(self.curve, cap, self.sigma.truncate(fw, cap), self.sw_part,
                          self.solver_log, self.gauge)

    def specialize(self, values):
        """Substitute rational values for some lambdas (ring unchanged)."""
        assign = {"lam%d" % j: v for j, v in values.items()}
        return SigmaModel(self.curve, self.cap, self.sigma.subs(assign), self.sw_part,
                          self.solver_log, self.gauge)


def schur_weierstrass(n, s):
    """Level-0 solution of the vanishing constraints as a polynomial in the
    u's, checked against the Jacobi-Trudi oracle."""
    curve = CurveSpec(n, s)
    ansatz = sigma_ansatz(curve, weight_table(curve).wt_sigma)
    sw = _sw_in_u_ring(_solve_level_zero(curve, ansatz, seed=0), n, s)
    oracle, _ = schur_weierstrass_oracle(n, s)
    if sw != oracle:
        raise OracleMismatch("vanishing solution %s differs from Jacobi-Trudi %s"
                             % (sw.pretty(), oracle.pretty()))
    return sw


def sw_matches_oracle(model):
    """The stored lambda-free part against an independent Jacobi-Trudi
    evaluation (exact equality)."""
    n, s = model.curve.n, model.curve.s
    oracle, _ = schur_weierstrass_oracle(n, s)
    return _sw_in_u_ring(model.sw_part, n, s) == oracle


def _sw_in_u_ring(sw, n, s):
    from .schur import u_ring
    ring = u_ring(n, s)
    g = len(ring.names)
    return GradedPoly.from_exps(ring, {e[:g]: c for e, c in sw.items()})


def _solve_level_zero(curve, ansatz, seed):
    lv = ansatz.levels[0]
    M = len(lv.u_monos)
    g = curve.genus
    ring = sigma_ring(curve)
    if g >= 2:
        abel = abel_series(curve, max(weight_table(curve).wt_u))
        puis = puiseux_y(curve, 1)
        ev = _Evaluator(curve, abel, puis, ring.zero(), 0, lv.u_monos, [()])
        rng = random.Random(seed * 7919 + 1)
        rows = []
        for _ in range(M + 4):
            val = vanishing_constraints(ev, _random_point(rng, g - 1))[0]
            rows.append(_split_row(val, ev, 0)[0])
        sol = solve_many(rows, M, [[0] * len(rows)])[0]
        if len(sol.nullspace) != 1:
            raise SolverError("level 0 kernel has dimension %d, expected 1" % len(sol.nullspace))
        vec = sol.nullspace[0]
    else:
        vec = [mpq(1)] * M
    sw = GradedPoly.from_exps(ring, {a + (0,) * curve.s: c for a, c in zip(lv.u_monos, vec)})
    return normalize_unit(sw)


def _split_row(val, ev, L):
    """Separate a constraint value into unknown coefficients (row) and the
    known part keyed by lambda monomial.  Lower levels must already vanish."""
    row, known = {}, {}
    zbase = BITS * ev.s
    lmask = (1 << zbase) - 1
    for k, c in val.terms.items():
        zk = k >> zbase
        if zk:
            if k & lmask:
                raise SolverError("unknown paired with a lambda monomial above the level")
            j = (zk.bit_length() - 1) // BITS
            row[j] = row.get(j, 0) + c
        else:
            lev = fdeg_of(ev.E, ev.fw, k)
            if lev < L:
                raise SolverError("level %d constraint fails at a fresh point; "
                                  "lower level was under-sampled" % lev)
            known[k] = c
    return row, known


def sigma_expand(curve, cap=None, seed=0, workers=None, check_oracle=True):
    if curve.cls != "cyclic":
        raise ValueError("sigma_expand supports cyclic curves only")
    numeric = curve.numeric_lambdas()
    if numeric:
        symbolic = CurveSpec(curve.n, curve.s)
        return sigma_expand(symbolic, cap, seed, workers, check_oracle).specialize(numeric)
    if cap is None:
        cap = curve.truncation_weight or DEFAULT_CAPS.get((curve.n, curve.s))
        if cap is None:
            raise ValueError("no default cap for (%d,%d); pass one" % (curve.n, curve.s))
    wt = weight_table(curve)
    W = wt.wt_sigma
    if cap < W:
        raise ValueError("cap %d is below wt_sigma = %d" % (cap, W))
    g = curve.genus
    ansatz = sigma_ansatz(curve, cap)
    ring = sigma_ring(curve)
    sw = _solve_level_zero(curve, ansatz, seed)
    log = [{"level": 0, "u_candidates": len(ansatz.levels[0].u_monos),
            "lambda_monomials": 1, "rows": None, "rank": len(ansatz.levels[0].u_monos) - 1,
            "gauge_free": 0, "xi_degree": W}]
    if check_oracle:
        oracle, _ = schur_weierstrass_oracle(curve.n, curve.s)
        if _sw_in_u_ring(sw, curve.n, curve.s) != oracle:
            raise OracleMismatch("level-0 solution %s differs from Jacobi-Trudi %s"
                                 % (sw.pretty(), oracle.pretty()))
    sigma = sw
    hyper = curve.n == 2
    gauge = ("jacobi-inversion+klein" if hyper else "free-unknowns-zero")
    maxlev = cap - W
    abel = abel_series(curve, max(cap, max(wt.wt_u)))
    puis = puiseux_y(curve, max(maxlev, 1))
    derivs = _all_derivs(g) if hyper else [()]
    for lv in ansatz.levels[1:]:
        L = lv.level
        M = len(lv.u_monos)
        ev = _Evaluator(curve, abel, puis, sigma, L, lv.u_monos, derivs)
        rng = random.Random((seed + 1) * 1000003 + L)
        rows, knowns = [], []
        if g >= 2:
            for _ in range(M + 4 if hyper else M + 8):
                for val in vanishing_constraints(ev, _random_point(rng, g - 1)):
                    r, kn = _split_row(val, ev, L)
                    rows.append(r)
                    knowns.append(kn)
        if hyper:
            per = g + comb(g, 2)
            for _ in range(ceil((M + 4) / per)):
                for val in hyperelliptic_constraints(ev, _random_point(rng, g)):
                    r, kn = _split_row(val, ev, L)
                    rows.append(r)
                    knowns.append(kn)
        lam_keys = [lam_ring(curve).pack(b) for b in lv.lam_monos]
        allowed = set(lam_keys)
        for kn in knowns:
            extra = set(kn) - allowed
            if extra:
                raise SolverError("known part carries an unexpected lambda monomial")
        rhs_cols = [[-kn.get(b, 0) for kn in knowns] for b in lam_keys]
        sols = solve_many(rows, M, rhs_cols)
        rank = sols[0].rank if sols else 0
        level_terms = {}
        for b, sol in zip(lv.lam_monos, sols):
            if sol.status == "inconsistent":
                raise SolverError("inconsistent system at level %d (lambda %s)" % (L, b))
            if sol.status == "family" and hyper:
                free = [j for j in range(M) if j not in sol.pivots]
                raise Underdetermined(
                    "level %d underdetermined; unpinned u-monomials %s"
                    % (L, [lv.u_monos[j] for j in free]),
                    [lv.u_monos[j] for j in free])
            for a, c in zip(lv.u_monos, sol.particular):
                if c:
                    level_terms[a + b] = c
        sigma = sigma + GradedPoly.from_exps(ring, level_terms)
        log.append({"level": L, "u_candidates": M, "lambda_monomials": len(lv.lam_monos),
                    "rows": len(rows), "rank": rank, "gauge_free": M - rank,
                    "xi_degree": W + L, "nonzero": len(level_terms)})
    return SigmaModel(curve, cap, sigma, sw, log, gauge)


# ---------------------------------------------------------------------------
# held-out checks


def heldout_check(model, seed=12345, points=6):
    """Re-evaluate every defining constraint at fresh rational points using
    the full expansion.  Returns a list of (constraint, lambda-term) failures."""
    curve = model.curve
    g = curve.genus
    wt = weight_table(curve)
    L = model.cap - wt.wt_sigma
    abel = abel_series(curve, max(model.cap, max(wt.wt_u)))
    puis = puiseux_y(curve, max(L, 1))
    hyper = curve.n == 2
    derivs = _all_derivs(g) if hyper else [()]
    ev = _Evaluator(curve, abel, puis, model.sigma, L, [], derivs)
    rng = random.Random(seed)
    failures = []
    for _ in range(points):
        if g >= 2:
            for val in vanishing_constraints(ev, _random_point(rng, g - 1)):
                if val:
                    failures.append(("vanishing", val.sorted_items()[0]))
        if hyper:
            for val in hyperelliptic_constraints(ev, _random_point(rng, g)):
                if val:
                    failures.append(("klein", val.sorted_items()[0]))
    return failures


def symbolic_strata_check(model, cap=None):
    """sigma composed with the symbolic (g-1)-point embedding; returns the
    residual TruncatedSeries (zero through its cap when the model is right)."""
    curve = model.curve
    cap = cap or model.cap
    emb = strata_embedding(curve, curve.genus - 1, cap)
    assign = {"u%d" % (i + 1): s for i, s in enumerate(emb.u_multi)}
    return series_compose(model.series().truncate(cap), assign)


def order_one_witness(model, seed=99):
    """d sigma / d u_g on the strata at a rational point (nonzero expected)."""
    curve = model.curve
    g = curve.genus
    wt = weight_table(curve)
    abel = abel_series(curve, max(wt.wt_u))
    ev = _Evaluator(curve, abel, puiseux_y(curve, 1), model.level_part(0), 0, [],
                    [(g - 1,)])
    rng = random.Random(seed)
    return ev.sigma_values(_random_point(rng, g - 1))[(g - 1,)]
