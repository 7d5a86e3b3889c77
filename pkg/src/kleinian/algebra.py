"""Exact graded algebra: rationals, sparse weighted polynomials, truncated
series and a fraction-free linear solver.

Monomials are stored as packed integers: exponent of symbol i lives in bits
[BITS*i, BITS*(i+1)).  Adding two keys multiplies the monomials, which keeps
the inner multiplication loop down to one integer add and one dict update.
"""

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

import gmpy2
from gmpy2 import mpq, mpz

Rational = mpq

BITS = 12
MASK = (1 << BITS) - 1
INF = 10 ** 9


def rational(x):
    """Coerce int, str ("p/q"), Fraction or mpq to an exact Rational."""
    if isinstance(x, str):
        x = x.strip()
        if "/" in x:
            p, q = x.split("/")
            return mpq(int(p), int(q))
        return mpq(int(x))
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def rational_str(q):
    q = mpq(q)
    return "%d/%d" % (q.numerator, q.denominator)


_SCALARS = (int, str, Fraction, type(mpq(0)), type(mpz(0)))


class RingMismatch(ValueError):
    pass


class Ring:
    """An ordered list of symbols with Sato weights.

    Rings are interned, so two rings with the same names and weights are the
    same object and identity comparison is enough in hot paths.
    """

    _interned = {}

    def __new__(cls, names, weights):
        names = tuple(names)
        weights = tuple(int(w) for w in weights)
        key = (names, weights)
        ring = cls._interned.get(key)
        if ring is not None:
            return ring
        if len(names) != len(weights):
            raise ValueError("one weight per symbol")
        if len(set(names)) != len(names):
            raise ValueError("duplicate symbol names")
        ring = object.__new__(cls)
        ring.names = names
        ring.weights = weights
        ring.index = {n: i for i, n in enumerate(names)}
        ring._fdeg = {}
        cls._interned[key] = ring
        return ring

    def __reduce__(self):
        return (Ring, (self.names, self.weights))

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return "Ring(%s)" % ", ".join(
            "%s:%d" % nw for nw in zip(self.names, self.weights))

    def weight(self, name):
        return self.weights[self.index[name]]

    def pack(self, exps):
        if len(exps) != len(self.names):
            raise ValueError("exponent vector has wrong length")
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MASK:
                raise OverflowError("exponent %d out of range" % e)
            key |= e << (BITS * i)
        return key

    def unpack(self, key):
        return tuple((key >> (BITS * i)) & MASK for i in range(len(self.names)))

    def key_weight(self, key):
        w = 0
        i = 0
        while key:
            e = key & MASK
            if e:
                w += e * self.weights[i]
            key >>= BITS
            i += 1
        return w

    def fdeg_table(self, fw):
        """Memo dict key -> filtration degree for the weight vector fw."""
        table = self._fdeg.get(fw)
        if table is None:
            table = self._fdeg[fw] = {}
        return table

    def var(self, name):
        return GradedPoly(self, {1 << (BITS * self.index[name]): mpq(1)})

    def vars(self):
        return [self.var(n) for n in self.names]

    def const(self, c):
        c = rational(c)
        return GradedPoly(self, {0: c} if c else {})

    def zero(self):
        return GradedPoly(self, {})

    def one(self):
        return GradedPoly(self, {0: mpq(1)})

    def monomial(self, exps, coeff=1):
        return GradedPoly(self, {self.pack(exps): rational(coeff)})

    def extend(self, names, weights):
        return Ring(self.names + tuple(names), self.weights + tuple(weights))


def fdeg_of(ring, fw, key):
    table = ring.fdeg_table(fw)
    d = table.get(key)
    if d is None:
        d = 0
        k = key
        i = 0
        while k:
            e = k & MASK
            if e:
                d += e * fw[i]
            k >>= BITS
            i += 1
        table[key] = d
    return d


class GradedPoly:
    """Sparse polynomial over Q in the symbols of a Ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, ring, terms):
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    @classmethod
    def from_exps(cls, ring, mapping):
        terms = {}
        for exps, c in mapping.items():
            k = ring.pack(exps)
            terms[k] = terms.get(k, 0) + rational(c)
        return cls(ring, terms)

    # -- inspection ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        for k, c in self.terms.items():
            yield self.ring.unpack(k), c

    def coefficient(self, exps):
        return self.terms.get(self.ring.pack(exps), mpq(0))

    def constant(self):
        return self.terms.get(0, mpq(0))

    def term_weights(self):
        kw = self.ring.key_weight
        return {kw(k) for k in self.terms}

    def is_homogeneous(self):
        return len(self.term_weights()) <= 1

    def weight(self):
        ws = self.term_weights()
        if len(ws) != 1:
            raise ValueError("polynomial is not homogeneous (weights %s)" % sorted(ws))
        return ws.pop()

    def degree_in(self, name):
        i = self.ring.index[name]
        return max(((k >> (BITS * i)) & MASK for k in self.terms), default=0)

    def symbols(self):
        """Names of symbols that actually occur."""
        seen = 0
        for k in self.terms:
            seen |= k
        out = []
        for i, n in enumerate(self.ring.names):
            if (seen >> (BITS * i)) & MASK:
                out.append(n)
        return out

    def sort_key(self, key):
        exps = self.ring.unpack(key)
        return (self.ring.key_weight(key), sum(exps), tuple(-e for e in exps))

    def sorted_items(self):
        """Terms in graded-lex order: weight, then degree, then lex on the symbol order."""
        keys = sorted(self.terms, key=self.sort_key)
        return [(self.ring.unpack(k), self.terms[k]) for k in keys]

    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.ring is other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq()):
            return self.terms == ({0: mpq(other)} if other else {})
        return NotImplemented

    __hash__ = None

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if isinstance(other, GradedPoly):
            if other.ring is not self.ring:
                raise RingMismatch("%r vs %r" % (self.ring, other.ring))
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            v = t.get(k)
            if v is None:
                t[k] = c
            else:
                v = v + c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return GradedPoly._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly._raw(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c):
        c = rational(c)
        if not c:
            return GradedPoly._raw(self.ring, {})
        return GradedPoly._raw(self.ring, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GradedPoly):
            if not isinstance(other, _SCALARS):
                return NotImplemented
            return self.scale(other)
        other = self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        bl = list(b.items())
        for ka, ca in a.items():
            for kb, cb in bl:
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return GradedPoly(self.ring, out)

    def __rmul__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        return self.scale(other)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_trunc(self, other, fw, cap):
        """Product keeping only monomials whose fw-degree is at most cap."""
        other = self._check(other)
        ring = self.ring
        if cap >= INF:
            return self * other
        table = ring.fdeg_table(fw)

        def fd(k):
            d = table.get(k)
            if d is None:
                d = fdeg_of(ring, fw, k)
            return d

        bl = sorted(((fd(k), k, c) for k, c in other.terms.items()),
                    key=lambda t: t[0])
        if not bl:
            return GradedPoly._raw(ring, {})
        bdeg = [t[0] for t in bl]
        out = {}
        get = out.get
        for ka, ca in self.terms.items():
            lim = cap - fd(ka)
            if lim < bdeg[0]:
                continue
            j = bisect_right(bdeg, lim)
            for idx in range(j):
                _, kb, cb = bl[idx]
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return GradedPoly(ring, out)

    def truncate(self, fw, cap):
        ring = self.ring
        return GradedPoly._raw(ring, {k: c for k, c in self.terms.items()
                                      if fdeg_of(ring, fw, k) <= cap})

    def fdegs(self, fw):
        return [fdeg_of(self.ring, fw, k) for k in self.terms]

    def diff(self, name, times=1):
        i = self.ring.index.get(name)
        if i is None:
            raise KeyError("unknown symbol %r" % name)
        shift = BITS * i
        p = self
        for _ in range(times):
            t = {}
            step = 1 << shift
            for k, c in p.terms.items():
                e = (k >> shift) & MASK
                if e:
                    t[k - step] = c * e
            p = GradedPoly._raw(self.ring, t)
        return p

    def select(self, pred):
        """Sub-polynomial of terms whose exponent tuple satisfies pred."""
        un = self.ring.unpack
        return GradedPoly._raw(self.ring, {k: c for k, c in self.terms.items()
                                           if pred(un(k))})

    def embed(self, ring):
        """Re-express in a ring containing all symbols that occur."""
        if ring is self.ring:
            return self
        idx = [ring.index.get(n) for n in self.ring.names]
        t = {}
        for k, c in self.terms.items():
            nk = 0
            i = 0
            kk = k
            while kk:
                e = kk & MASK
                if e:
                    j = idx[i]
                    if j is None:
                        raise RingMismatch("symbol %s missing in target ring"
                                           % self.ring.names[i])
                    nk += e << (BITS * j)
                kk >>= BITS
                i += 1
            t[nk] = c
        return GradedPoly._raw(ring, t)

    def subs(self, assignment, target=None):
        """Substitute polynomials (in `target`) for symbols.  Unassigned
        symbols are carried over by name."""
        target = target or self.ring
        images = []
        for n in self.ring.names:
            if n in assignment:
                v = assignment[n]
                if not isinstance(v, GradedPoly):
                    v = target.const(v)
                elif v.ring is not target:
                    raise RingMismatch("substituted value lives in another ring")
                images.append(v)
            else:
                images.append(target.var(n))
        return _compose_sum(self, images, target.one(), target.zero(),
                            lambda a, b: a * b)

    def evaluate(self, values, one=1):
        """Evaluate with numbers (any type supporting + and *) for every
        symbol that occurs."""
        names = self.ring.names
        total = 0 * one
        powcache = {}
        for k, c in self.terms.items():
            v = one * c
            i = 0
            kk = k
            while kk:
                e = kk & MASK
                if e:
                    pk = (i, e)
                    p = powcache.get(pk)
                    if p is None:
                        p = powcache[pk] = values[names[i]] ** e
                    v = v * p
                kk >>= BITS
                i += 1
            total = total + v
        return total

    # -- serialization ------------------------------------------------------

    def to_json(self):
        return {
            "vars": list(self.ring.names),
            "weights": list(self.ring.weights),
            "terms": [{"coeff": rational_str(c), "exps": list(e)}
                      for e, c in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, data):
        ring = Ring(data["vars"], data["weights"])
        return cls.from_exps(ring, {tuple(t["exps"]): t["coeff"] for t in data["terms"]})

    def __repr__(self):
        return "GradedPoly(%s)" % self.pretty()

    def pretty(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_items():
            mono = "*".join(n if e == 1 else "%s^%d" % (n, e)
                            for n, e in zip(self.ring.names, exps) if e)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append("%s*%s" % (cs, mono))
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Truncated series


class CapError(ValueError):
    """A requested operation needs more series terms than are known."""


class TruncatedSeries:
    """A polynomial known exactly for all monomials with fw-degree <= cap.

    fw assigns a non-negative filtration weight to every symbol; symbols with
    fw 0 (typically the curve parameters) are not counted toward the cap.
    """

    __slots__ = ("poly", "cap", "fw")

    def __init__(self, poly, cap, cap_symbols=None, fw=None):
        ring = poly.ring
        if fw is None:
            cap_symbols = set(cap_symbols or ())
            fw = tuple(abs(w) if n in cap_symbols else 0
                       for n, w in zip(ring.names, ring.weights))
        fw = tuple(fw)
        self.fw = fw
        self.cap = cap
        self.poly = poly if cap >= INF else poly.truncate(fw, cap)

    @classmethod
    def _raw(cls, poly, cap, fw):
        s = object.__new__(cls)
        s.poly, s.cap, s.fw = poly, cap, fw
        return s

    @property
    def ring(self):
        return self.poly.ring

    @property
    def cap_symbols(self):
        return [n for n, f in zip(self.ring.names, self.fw) if f]

    def valuation(self):
        if not self.poly.terms:
            return INF
        return min(self.poly.fdegs(self.fw))

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            if other.ring is not self.ring or other.fw != self.fw:
                raise RingMismatch("series over different rings or cap symbols")
            return other
        if isinstance(other, GradedPoly):
            return TruncatedSeries._raw(other, INF, self.fw)
        return TruncatedSeries._raw(self.ring.const(other), INF, self.fw)

    def __add__(self, other):
        other = self._coerce(other)
        cap = min(self.cap, other.cap)
        return TruncatedSeries(self.poly + other.poly, cap, fw=self.fw)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(-self.poly, self.cap, self.fw)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        return TruncatedSeries._raw(self.poly.scale(c), self.cap, self.fw)

    def product_cap(self, other):
        va, vb = self.valuation(), other.valuation()
        if va >= INF or vb >= INF:
            return min(self.cap, other.cap) if min(self.cap, other.cap) < INF else INF
        return min(self.cap + vb, other.cap + va)

    def __mul__(self, other):
        if not isinstance(other, (TruncatedSeries, GradedPoly)):
            return self.scale(other)
        other = self._coerce(other)
        cap = self.product_cap(other)
        return TruncatedSeries._raw(self.poly.mul_trunc(other.poly, self.fw, cap),
                                    cap, self.fw)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = TruncatedSeries._raw(self.ring.one(), INF, self.fw)
        for _ in range(n):
            result = result * self
        return result

    def truncate(self, cap):
        cap = min(cap, self.cap)
        return TruncatedSeries(self.poly, cap, fw=self.fw)

    def diff(self, name, times=1):
        i = self.ring.index[name]
        drop = self.fw[i] * times
        cap = self.cap - drop if self.cap < INF else INF
        return TruncatedSeries._raw(self.poly.diff(name, times), cap, self.fw)

    def is_zero_to_cap(self):
        return not self.poly.terms

    def lowest_terms(self, limit=1):
        """Nonzero terms of least fw-degree (refutation witnesses)."""
        if not self.poly.terms:
            return []
        ring, fw = self.ring, self.fw
        keys = sorted(self.poly.terms,
                      key=lambda k: (fdeg_of(ring, fw, k), self.poly.sort_key(k)))
        return [(ring.unpack(k), self.poly.terms[k], fdeg_of(ring, fw, k))
                for k in keys[:limit]]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.fw == other.fw and self.cap == other.cap
                and self.poly == other.poly)

    __hash__ = None

    def __repr__(self):
        return "TruncatedSeries(cap=%s, %s)" % (self.cap, self.poly.pretty())

    def to_json(self):
        d = self.poly.to_json()
        d["cap"] = self.cap if self.cap < INF else None
        d["cap_symbols"] = self.cap_symbols
        return d


def series_compose(s, assignment, target_ring=None, target_fw=None):
    """Substitute series for the cap symbols of `s`.

    assignment maps symbol names of s.ring to TruncatedSeries (all over one
    target ring); unassigned symbols are carried over by name and must not be
    cap symbols.  The result cap is the largest weight at which every
    coefficient is provably exact.
    """
    if not assignment:
        return s
    sample = next(iter(assignment.values()))
    target = target_ring or sample.ring
    tfw = target_fw or sample.fw
    ring = s.ring
    images, vals, caps, ratios = [], [], [], []
    for i, n in enumerate(ring.names):
        if n in assignment:
            a = assignment[n]
            if not isinstance(a, TruncatedSeries):
                a = TruncatedSeries._raw(a, INF, tfw)
            if a.ring is not target or a.fw != tfw:
                raise RingMismatch("assignment values must share one ring")
            v = a.valuation()
            if v <= 0 and a.poly.terms:
                raise ValueError("substituted series for %s has non-positive "
                                 "leading cap-weight" % n)
            images.append(a)
            vals.append(v)
            caps.append(a.cap)
            if s.fw[i]:
                ratios.append(v / s.fw[i])
        else:
            if s.fw[i]:
                raise ValueError("cap symbol %s left unassigned" % n)
            images.append(TruncatedSeries._raw(target.var(n), INF, tfw))
            vals.append(0)
            caps.append(INF)

    # monomials beyond s.cap contribute at target degree > rho*(cap+1) - 1
    cap = INF
    if s.cap < INF and ratios:
        cap = ceil(min(ratios) * (s.cap + 1)) - 1
    for k in s.poly.terms:
        exps = ring.unpack(k)
        tot = sum(e * v for e, v in zip(exps, vals))
        for e, c, v in zip(exps, caps, vals):
            if e and c < INF:
                cap = min(cap, c + tot - v)
    imgs = [im.poly for im in images]
    one = target.one()
    zero = target.zero()

    def mul(a, b):
        return a.mul_trunc(b, tfw, cap)

    out = _compose_sum(s.poly, imgs, one, zero, mul)
    return TruncatedSeries(out, cap, fw=tfw)


def _compose_sum(p, images, one, zero, mul):
    ring = p.ring
    n = len(ring.names)
    memo = {0: one}

    def mono(key):
        m = memo.get(key)
        if m is not None:
            return m
        i = n - 1
        while not (key >> (BITS * i)) & MASK:
            i -= 1
        m = mul(mono(key - (1 << (BITS * i))), images[i])
        memo[key] = m
        return m

    acc = {}
    get = acc.get
    for k in sorted(p.terms):
        c = p.terms[k]
        for kk, v in mono(k).terms.items():
            acc[kk] = get(kk, 0) + c * v
    return GradedPoly(one.ring, acc)


# ---------------------------------------------------------------------------
# Exact linear algebra


@dataclass
class LinearSystem:
    unknowns: list
    rows: list  # each row: dict column -> Rational
    rhs: list

    def __post_init__(self):
        if len(self.rows) != len(self.rhs):
            raise ValueError("one rhs entry per row")
        n = len(self.unknowns)
        for r in self.rows:
            if any(c < 0 or c >= n for c in r):
                raise ValueError("row references a column outside the unknowns")

    @classmethod
    def dense(cls, matrix, rhs, unknowns=None):
        ncols = len(matrix[0]) if matrix else len(unknowns or [])
        unknowns = unknowns or ["x%d" % i for i in range(ncols)]
        rows = [{j: rational(v) for j, v in enumerate(r) if v} for r in matrix]
        return cls(list(unknowns), rows, [rational(b) for b in rhs])


@dataclass
class Solution:
    status: str  # "unique", "family" or "inconsistent"
    rank: int
    particular: list = None
    nullspace: list = field(default_factory=list)
    pivots: list = field(default_factory=list)

    def as_dict(self, unknowns):
        if self.particular is None:
            return None
        return dict(zip(unknowns, self.particular))


def _integer_rows(rows, ncols, rhs_cols):
    """Scale every row (with its rhs entries) to coprime integers."""
    out = []
    for r, extra in zip(rows, rhs_cols):
        dense = [mpq(0)] * ncols
        for j, v in r.items():
            dense[j] = mpq(v)
        dense.extend(mpq(e) for e in extra)
        den = mpz(1)
        for v in dense:
            if v:
                den = gmpy2.lcm(den, v.denominator)
        out.append([mpz(v * den) for v in dense])
    return out


def bareiss_echelon(M, ncols):
    """In-place fraction-free row echelon form on integer rows.  Only the
    first ncols columns are searched for pivots; later columns ride along.
    Returns the pivot columns."""
    m = len(M)
    width = len(M[0]) if M else 0
    prev = mpz(1)
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= m:
            break
        p = r
        while p < m and not M[p][c]:
            p += 1
        if p == m:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
        Mr = M[r]
        a = Mr[c]
        for i in range(r + 1, m):
            Mi = M[i]
            b = Mi[c]
            if b:
                M[i] = [0] * (c + 1) + [(a * Mi[j] - b * Mr[j]) // prev
                                        for j in range(c + 1, width)]
            else:
                M[i] = [0] * (c + 1) + [(a * Mi[j]) // prev
                                        for j in range(c + 1, width)]
        prev = a
        pivots.append(c)
        r += 1
    return pivots


def solve_many(rows, ncols, rhs_columns):
    """Solve A x = b for several right-hand sides sharing one elimination.

    rows: sparse dict rows of A; rhs_columns: list of rhs vectors (one per
    system).  Returns one Solution per rhs; the nullspace is shared.
    """
    nr = len(rhs_columns)
    per_row = [[col[i] for col in rhs_columns] for i in range(len(rows))]
    M = _integer_rows(rows, ncols, per_row)
    pivots = bareiss_echelon(M, ncols)
    rank = len(pivots)
    free = [j for j in range(ncols) if j not in set(pivots)]

    def back(rhs_index, free_values):
        x = [mpq(0)] * ncols
        for j, v in free_values.items():
            x[j] = mpq(v)
        for r in range(rank - 1, -1, -1):
            c = pivots[r]
            row = M[r]
            s = mpq(row[ncols + rhs_index]) if rhs_index is not None else mpq(0)
            for j in range(c + 1, ncols):
                if row[j] and x[j]:
                    s -= row[j] * x[j]
            x[c] = s / row[c]
        return x

    null = []
    for f in free:
        null.append(back(None, {f: 1}))
    out = []
    for t in range(nr):
        bad = any(M[r][ncols + t] for r in range(rank, len(M)))
        if bad:
            out.append(Solution("inconsistent", rank, None, null, pivots))
            continue
        x = back(t, {})
        out.append(Solution("unique" if not free else "family", rank, x, null, pivots))
    return out


def solve_exact(system):
    """Fraction-free Gaussian elimination for a LinearSystem."""
    n = len(system.unknowns)
    if not system.rows:
        null = [[mpq(1) if i == j else mpq(0) for i in range(n)] for j in range(n)]
        return Solution("unique" if n == 0 else "family", 0, [mpq(0)] * n, null, [])
    return solve_many(system.rows, n, [system.rhs])[0]


def matrix_rank(rows, ncols):
    if not rows:
        return 0
    M = _integer_rows(rows, ncols, [[] for _ in rows])
    return len(bareiss_echelon(M, ncols))
