"""Kleinian wp-calculus: expressions over wp / Q / sigma-derivative atoms,
compilation to sigma-cleared numerators, named combinations and Gamma(m)
bases."""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from gmpy2 import mpq

from .algebra import (INF, GradedPoly, TruncatedSeries, matrix_rank,
                      series_compose, solve_many)
from .local import lam_ring, strata_embedding

KINDS = ("wp", "q", "sigma")


class ArityError(ValueError):
    pass


class CapInsufficient(ValueError):
    """The model is not deep enough for the requested check."""

    def __init__(self, message, suggested_cap):
        super().__init__(message)
        self.suggested_cap = suggested_cap


@dataclass(frozen=True, order=True)
class WpAtom:
    kind: str
    indices: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown atom kind %r" % self.kind)
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))
        if self.kind == "wp" and len(self.indices) < 2:
            raise ArityError("wp atoms need at least two indices")
        if self.kind == "q" and len(self.indices) % 2:
            raise ArityError("Q functions are defined for even arity only")
        if any(i < 1 for i in self.indices):
            raise ValueError("indices are 1-based")

    @property
    def pole_order(self):
        return {"wp": len(self.indices), "q": 2, "sigma": 0}[self.kind]

    def weight(self, wt_u):
        return -sum(wt_u[i - 1] for i in self.indices)

    def __str__(self):
        name = {"wp": "P", "q": "Q", "sigma": "S"}[self.kind]
        return name + "".join(str(i) for i in self.indices)


def _is_poly(c):
    return isinstance(c, GradedPoly)


def cmul(a, b):
    if _is_poly(a):
        return a * b
    if _is_poly(b):
        return b.scale(a)
    return mpq(a) * mpq(b)


def cadd(a, b):
    if _is_poly(a) or _is_poly(b):
        if not _is_poly(a):
            a, b = b, a
        return a + b
    return mpq(a) + mpq(b)


def cnonzero(c):
    return bool(c)


class WpExpr:
    """Polynomial in atoms: dict sorted-atom-tuple -> coefficient (a Rational
    or a polynomial in the curve parameters)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            if cnonzero(c):
                self.terms[tuple(sorted(k))] = c

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def atom(cls, kind, *indices):
        return cls({(WpAtom(kind, tuple(indices)),): mpq(1)})

    @classmethod
    def wp(cls, *indices):
        return cls.atom("wp", *indices)

    @classmethod
    def q(cls, *indices):
        return cls.atom("q", *indices)

    @classmethod
    def sigma(cls, *indices):
        return cls.atom("sigma", *indices)

    def _lift(self, other):
        if isinstance(other, WpExpr):
            return other
        return WpExpr.const(other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = cadd(t[k], c) if k in t else c
        return WpExpr(t)

    __radd__ = __add__

    def __neg__(self):
        return WpExpr({k: cmul(-1, c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        t = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                c = cmul(c1, c2)
                t[k] = cadd(t[k], c) if k in t else c
        return WpExpr(t)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = WpExpr.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, WpExpr):
            other = WpExpr.const(other)
        a = {k: c for k, c in self.terms.items()}
        b = {k: c for k, c in other.terms.items()}
        if a.keys() != b.keys():
            return False
        return all(_ceq(a[k], b[k]) for k in a)

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def atoms(self):
        return sorted({a for k in self.terms for a in k})

    def max_index(self):
        return max((i for a in self.atoms() for i in a.indices), default=0)

    def pole_degree(self):
        """D: the sigma power clearing every term."""
        return max((sum(a.pole_order for a in k) for k in self.terms), default=0)

    def diff(self, i):
        """Partial derivative in u_i (coefficients are constants)."""
        out = WpExpr()
        for k, c in self.terms.items():
            for pos, a in enumerate(k):
                if a.kind == "q":
                    raise ValueError("derivatives of Q atoms are not atoms")
                na = WpAtom(a.kind, a.indices + (i,))
                nk = k[:pos] + (na,) + k[pos + 1:]
                out = out + WpExpr({nk: c})
        return out

    def substitute(self, mapping):
        """Replace atoms by expressions (atoms not in mapping stay)."""
        out = WpExpr()
        for k, c in self.terms.items():
            t = WpExpr.const(c)
            for a in k:
                t = t * (mapping[a] if a in mapping else WpExpr({(a,): mpq(1)}))
            out = out + t
        return out

    def map_coefficients(self, fn):
        return WpExpr({k: fn(c) for k, c in self.terms.items()})

    def weights(self, wt_u):
        ws = set()
        for k, c in self.terms.items():
            w = sum(a.weight(wt_u) for a in k)
            if _is_poly(c):
                for cw in c.term_weights():
                    ws.add(w + cw)
            else:
                ws.add(w)
        return ws

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda k: (len(k), k)):
            c = self.terms[k]
            mono = "*".join(str(a) for a in k)
            cs = c.pretty() if _is_poly(c) else str(c)
            if _is_poly(c) and len(c) > 1:
                cs = "(%s)" % cs
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (cs, mono))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _ceq(a, b):
    if _is_poly(a) or _is_poly(b):
        if not _is_poly(a):
            a, b = b, a
        return (a - b).is_zero()
    return mpq(a) == mpq(b)


def wp(*idx):
    return WpExpr.wp(*idx)


# ---------------------------------------------------------------------------
# named combinations


def named_combination(name, indices=None):
    if name == "Xi":
        if indices:
            raise ArityError("Xi takes no indices")
        return wp(1, 1) * wp(2, 2) - wp(1, 2) ** 2
    if name == "Delta":
        if indices:
            raise ArityError("Delta takes no indices")
        return (wp(1, 1) * wp(3, 3) - wp(1, 2) * wp(2, 3) - wp(1, 3) ** 2
                + wp(1, 3) * wp(2, 2))
    if name == "B":
        if indices is None or len(indices) != 5:
            raise ArityError("B needs five indices ijklm")
        i, j, k, l, m = indices
        third = mpq(1, 3)
        return (wp(i, j) * wp(k, l, m)
                + (wp(j, k) * wp(i, l, m) + wp(j, l) * wp(i, k, m) + wp(j, m) * wp(i, k, l)
                   - 2 * wp(k, l) * wp(i, j, m) - 2 * wp(k, m) * wp(i, j, l)
                   - 2 * wp(l, m) * wp(i, j, k)) * third)
    raise ValueError("unknown combination %r" % name)


# ---------------------------------------------------------------------------
# compilation


@dataclass
class SigmaRationalForm:
    """numerator / sigma^denominator_power."""
    numerator: TruncatedSeries
    denominator_power: int

    @property
    def cap(self):
        return self.numerator.cap


class Compiler:
    """Per-model cache of sigma partials, log-derivative numerators and
    sigma powers."""

    _instances = {}

    def __init__(self, model):
        self.model = model
        self.sig = model.series()
        self.lam = lam_ring(model.curve)
        self.partials = {(): self.sig}
        self.logder = {}
        self.powers = {0: TruncatedSeries(self.sig.ring.one(), INF, fw=self.sig.fw), 1: self.sig}
        self.products = {}

    @classmethod
    def for_model(cls, model):
        key = id(model)
        c = cls._instances.get(key)
        if c is None or c.model is not model:
            c = cls._instances[key] = Compiler(model)
        return c

    def partial(self, idx):
        idx = tuple(sorted(idx))
        p = self.partials.get(idx)
        if p is None:
            p = self.partial(idx[:-1]).diff("u%d" % idx[-1])
            self.partials[idx] = p
        return p

    def log_numerator(self, idx):
        """N_I with d_I log sigma = N_I / sigma^|I|."""
        idx = tuple(sorted(idx))
        n = self.logder.get(idx)
        if n is not None:
            return n
        if len(idx) == 1:
            n = self.partial(idx)
        else:
            # pick the last index as the one differentiated most recently
            j = idx[-1]
            rest = idx[:-1]
            prev = self.log_numerator(rest)
            n = self.sig * prev.diff("u%d" % j) - (self.partial((j,)) * prev).scale(len(rest))
        self.logder[idx] = n
        return n

    def sigma_power(self, k):
        p = self.powers.get(k)
        if p is None:
            p = self.sigma_power(k - 1) * self.sig
            self.powers[k] = p
        return p

    def atom_numerator(self, atom):
        if atom.kind == "wp":
            return -self.log_numerator(atom.indices)
        if atom.kind == "sigma":
            return self.partial(atom.indices)
        return self.q_numerator(atom.indices)

    def q_numerator(self, idx):
        """Q_I sigma^2 = -1/2 sum over sub-multisets S of (-1)^|I-S| sigma_S sigma_{I-S}."""
        n = len(idx)
        acc = None
        for mask in range(1 << n):
            S = tuple(idx[b] for b in range(n) if mask >> b & 1)
            T = tuple(idx[b] for b in range(n) if not mask >> b & 1)
            term = self.partial(S) * self.partial(T)
            if len(T) % 2:
                term = -term
            acc = term if acc is None else acc + term
        return acc.scale(mpq(-1, 2))

    def monomial(self, atoms, spower):
        key = (atoms, spower)
        p = self.products.get(key)
        if p is None:
            if atoms:
                p = self.monomial(atoms[:-1], spower) * self.atom_numerator(atoms[-1])
            else:
                p = self.sigma_power(spower)
            self.products[key] = p
        return p

    def coefficient(self, c):
        ring = self.sig.ring
        if _is_poly(c):
            return c.embed(ring)
        return ring.const(c)

    def compile(self, expr, extra_clear=0):
        g = self.model.genus
        if expr.max_index() > g:
            raise ValueError("index beyond genus %d" % g)
        if extra_clear < 0:
            raise ValueError("extra_clear must be >= 0")
        D = expr.pole_degree() + extra_clear
        acc = None
        for k, c in sorted(expr.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            spower = D - sum(a.pole_order for a in k)
            term = self.monomial(k, spower) * self.coefficient(c)
            acc = term if acc is None else acc + term
        if acc is None:
            acc = TruncatedSeries(self.sig.ring.zero(), INF, fw=self.sig.fw)
        if acc.cap < 0:
            raise CapInsufficient("cap too low to represent this derivative order (need at least %d)"
                                  % (self.model.cap - acc.cap),
                                  self.model.cap - acc.cap)
        return SigmaRationalForm(acc, D)


def compile_expr(expr, model, extra_clear=0):
    return Compiler.for_model(model).compile(expr, extra_clear)


def q_function(indices, model):
    indices = tuple(indices)
    if len(indices) % 2:
        raise ArityError("Q functions are defined for even arity only")
    return compile_expr(WpExpr.q(*indices), model)


# ---------------------------------------------------------------------------
# Gamma(m) bases


def _multisets(g, m):
    return [tuple(c) for c in combinations_with_replacement(range(1, g + 1), m)]


def gamma_elements(genus, m):
    """Named basis elements of Gamma(m), listed row by row."""
    one = WpExpr.const(1)
    if m < 1:
        raise ValueError("m >= 1")
    if genus == 1:
        return [("1", one)] + [("P" + "1" * k, wp(*([1] * k))) for k in range(2, m + 1)]
    if genus == 2:
        out = [("1", one)]
        xi = named_combination("Xi")
        for k in range(2, m + 1):
            for idx in _multisets(2, k):
                out.append(("P" + "".join(map(str, idx)), wp(*idx)))
            if k >= 3:
                for idx in _multisets(2, k - 3):
                    e = xi
                    for i in idx:
                        e = e.diff(i)
                    out.append(("d%sXi" % "".join(map(str, idx)) if idx else "Xi", e))
        return out
    if genus == 3:
        if m > 2:
            raise NotImplementedError("genus-3 bases are available for m <= 2 only")
        out = [("1", one)]
        if m == 2:
            out += [("P" + "".join(map(str, idx)), wp(*idx)) for idx in _multisets(3, 2)]
            out.append(("Delta", named_combination("Delta")))
        return out
    raise NotImplementedError("Gamma(m) bases for genus %d" % genus)


class RankDeficient(ValueError):
    def __init__(self, message, relation):
        super().__init__(message)
        self.relation = relation


@dataclass
class GammaBasis:
    m: int
    names: list
    elements: list
    certificate: dict = field(default_factory=dict)


def coefficient_matrix(series_list):
    """Rows: monomials (below the common cap), columns: series."""
    cap = min(s.cap for s in series_list)
    keys = set()
    polys = [s.truncate(cap).poly for s in series_list]
    for p in polys:
        keys.update(p.terms)
    keys = sorted(keys)
    rows = []
    for k in keys:
        rows.append({j: p.terms[k] for j, p in enumerate(polys) if k in p.terms})
    return rows, cap


def gamma_basis(model, m):
    g = model.genus
    named = gamma_elements(g, m)
    D = max(e.pole_degree() for _, e in named)
    comp = Compiler.for_model(model)
    cols = [comp.compile(e, D - e.pole_degree()).numerator for _, e in named]
    rows, cap = coefficient_matrix(cols)
    rank = matrix_rank(rows, len(cols))
    cert = {"rank": rank, "size": len(cols), "expected": m ** g,
            "rows": len(rows), "cleared_power": D, "cap": cap}
    if rank < len(cols):
        sol = solve_many(rows, len(cols), [[0] * len(rows)])[0]
        rel = dict(zip([n for n, _ in named], sol.nullspace[0]))
        raise RankDeficient("Gamma(%d) elements are dependent" % m, rel)
    return GammaBasis(m, [n for n, _ in named], [e for _, e in named], cert)


# ---------------------------------------------------------------------------
# exact pole-order bound on the theta divisor


def divisor_vanishing_order(numerator, model, limit=4):
    """Largest k <= limit such that every partial derivative of order < k of
    the numerator vanishes on the (g-1)-strata through the cap."""
    g = model.genus
    if g == 1:
        return min(numerator.valuation(), limit)
    emb = strata_embedding(model.curve, g - 1, numerator.cap)
    assign = {"u%d" % (i + 1): s for i, s in enumerate(emb.u_multi)}
    level = [numerator]
    for k in range(limit):
        for series in level:
            r = series_compose(series, assign)
            if not r.is_zero_to_cap():
                return k
        level = [s.diff("u%d" % (i + 1)) for s in level for i in range(g)]
    return limit


def pole_order_bound(expr, model):
    form = compile_expr(expr, model)
    k = divisor_vanishing_order(form.numerator, model, limit=form.denominator_power)
    return form.denominator_power - k
