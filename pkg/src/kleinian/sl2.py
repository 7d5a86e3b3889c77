"""Exact sl2 modules on labelled bases and their Clebsch-Gordan splitting.

A module is a finite basis of hashable labels with raising (e) and lowering
(f) operators given label-wise; vectors are dicts label -> rational.  The
decomposition finds highest-weight vectors as the kernel of e in each weight
space and generates each component by repeated lowering.
"""

from dataclasses import dataclass, field

from gmpy2 import mpq

from .abelian import WpAtom, WpExpr
from .algebra import solve_many


class ClosureError(ValueError):
    """The operators do not preserve the span of the basis."""


def vadd(a, b, c=1):
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + c * v
        if w:
            out[k] = mpq(w)
        else:
            out.pop(k, None)
    return out


def vscale(a, c):
    return {k: mpq(v * c) for k, v in a.items() if v * c} if c else {}


@dataclass
class Component:
    dim: int
    highest: dict
    basis: list           # basis[j] = f^j(highest) / j!


@dataclass
class Sl2Module:
    """Finite-dimensional sl2 module on labels."""
    name: str
    labels: list
    raise_: object        # label -> dict
    lower: object         # label -> dict
    grade: int = None
    realize: object = None   # label -> concrete object (WpExpr, ...)
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        self._index = {l: i for i, l in enumerate(self.labels)}

    @property
    def dim(self):
        return len(self.labels)

    def _apply(self, op, v):
        out = {}
        for l, c in v.items():
            img = op(l)
            for k in img:
                if k not in self._index:
                    raise ClosureError("%s: %r leaves the span" % (self.name, k))
            out = vadd(out, img, c)
        return out

    def e(self, v):
        return self._apply(self.raise_, v)

    def f(self, v):
        return self._apply(self.lower, v)

    def h(self, v):
        return vadd(self.e(self.f(v)), self.f(self.e(v)), -1)

    def casimir(self, v):
        ef = self.e(self.f(v))
        fe = self.f(self.e(v))
        hv = self.h(v)
        return vadd(vscale(vadd(ef, fe), mpq(1, 2)), vscale(self.h(hv), mpq(1, 4)))

    def weight(self, label):
        hv = self.h({label: 1})
        w = hv.get(label, 0)
        if vadd(hv, {label: w}, -1):
            raise ClosureError("%s: basis label %r is not a weight vector" % (self.name, label))
        return int(w)

    def weights(self):
        return {l: self.weight(l) for l in self.labels}

    def check_relations(self):
        """[h,e] = 2e, [h,f] = -2f on every basis label."""
        for l in self.labels:
            v = {l: 1}
            if vadd(vadd(self.h(self.e(v)), self.e(self.h(v)), -1), self.e(v), -2):
                return False
            if vadd(vadd(self.h(self.f(v)), self.f(self.h(v)), -1), self.f(v), 2):
                return False
        return True

    def decompose(self):
        """Irreducible components, highest weight first."""
        wts = self.weights()
        comps = []
        for w in sorted(set(wts.values()), reverse=True):
            if w < 0:
                break
            space = [l for l in self.labels if wts[l] == w]
            for hv in _kernel_of(self, space):
                basis = [hv]
                v = hv
                for j in range(1, w + 1):
                    v = vscale(self.f(v), mpq(1, j))
                    basis.append(v)
                if self.f(v):
                    raise ClosureError("%s: lowering does not terminate at weight %d" % (self.name, -w))
                comps.append(Component(w + 1, hv, basis))
        if sum(c.dim for c in comps) != self.dim:
            raise ClosureError("%s: components span %d of %d dimensions"
                               % (self.name, sum(c.dim for c in comps), self.dim))
        return comps

    def coordinates(self, v, comps=None):
        """Split v into per-component coordinates [(dim, [coeff_j])]."""
        comps = comps or self.decompose()
        cols = [b for c in comps for b in c.basis]
        rows = [{j: col[l] for j, col in enumerate(cols) if l in col} for l in self.labels]
        rhs = [mpq(v.get(l, 0)) for l in self.labels]
        sol = solve_many(rows, len(cols), [rhs])[0]
        if sol.status != "unique":
            raise ClosureError("%s: component vectors are not a basis" % self.name)
        out, pos = [], 0
        for c in comps:
            out.append((c.dim, sol.particular[pos:pos + c.dim]))
            pos += c.dim
        return out

    def project(self, v, dim, comps=None):
        """pi_dim(v) as a vector in this module."""
        comps = comps or self.decompose()
        out = {}
        for c, (d, co) in zip(comps, self.coordinates(v, comps)):
            if d == dim:
                for b, x in zip(c.basis, co):
                    out = vadd(out, b, x)
        return out

    def realize_vector(self, v):
        acc = None
        for l, c in v.items():
            t = self.realize(l) * c
            acc = t if acc is None else acc + t
        return acc if acc is not None else WpExpr()


def _kernel_of(mod, space):
    """Basis of ker e restricted to span(space)."""
    if not space:
        return []
    imgs = [mod.e({l: 1}) for l in space]
    keys = sorted({k for im in imgs for k in im}, key=lambda k: mod._index[k])
    rows = [{j: im[k] for j, im in enumerate(imgs) if k in im} for k in keys]
    if not rows:
        return [{l: mpq(1)} for l in space]
    sol = solve_many(rows, len(space), [[0] * len(rows)])[0]
    out = []
    for vec in sol.nullspace:
        v = {l: c for l, c in zip(space, vec) if c}
        out.append(v)
    return out


def cg_dimensions(a, b, symmetric=False):
    """Clebsch-Gordan dimensions of a (x) b, or of the symmetric square."""
    if symmetric:
        if a != b:
            raise ValueError("symmetric square needs equal factors")
        return [2 * a - 1 - 4 * k for k in range((a + 1) // 2)]
    return list(range(a + b - 1, abs(a - b), -2))


# ---------------------------------------------------------------------------
# products


def tensor(A, B, symmetric=False):
    """A (x) B on label pairs; with symmetric=True the symmetric square on
    unordered pairs, where (a,b) stands for a.b (the product of the two)."""
    if symmetric and A is not B:
        raise ValueError("symmetric square needs the same module twice")

    def key(a, b):
        if not symmetric:
            return (a, b)
        return (a, b) if A._index[a] <= A._index[b] else (b, a)

    def act(opA, opB):
        def op(pair):
            a, b = pair
            out = {}
            for x, c in opA(a).items():
                out = vadd(out, {key(x, b): c})
            for y, c in opB(b).items():
                out = vadd(out, {key(a, y): c})
            return out
        return op

    if symmetric:
        labels = [(a, b) for i, a in enumerate(A.labels) for b in A.labels[i:]]
    else:
        labels = [(a, b) for a in A.labels for b in B.labels]
    def product(pair):
        return A.realize(pair[0]) * B.realize(pair[1])

    real = product if A.realize and B.realize else None
    sym = "(.)" if symmetric else "(x)"
    return Sl2Module("%s%s%s" % (A.name, sym, B.name), labels,
                     act(A.raise_, B.raise_), act(A.lower, B.lower), realize=real)


# ---------------------------------------------------------------------------
# modules of wp functions: index i has h-weight g+1-2i


def _shift_lower(g, i):
    return (i + 1, i) if i < g else None          # (new index, coefficient)


def _shift_raise(g, i):
    return (i - 1, g - i + 1) if i > 1 else None


def index_module(genus, arity, name=None):
    """Span of m-index wp's (sorted index tuples) with the index-shift action.
    f sends index i to i+1 with factor i, e sends i to i-1 with factor g-i+1,
    summed over index slots, so the indices carry the g-dimensional module."""
    from itertools import combinations_with_replacement
    labels = [tuple(c) for c in combinations_with_replacement(range(1, genus + 1), arity)]

    def op(shift):
        def act(idx):
            out = {}
            for s, i in enumerate(idx):
                r = shift(genus, i)
                if r is None:
                    continue
                new = tuple(sorted(idx[:s] + (r[0],) + idx[s + 1:]))
                out = vadd(out, {new: r[1]})
            return out
        return act

    def real(idx):
        if len(idx) == 1:
            raise ValueError("single-index labels have no wp realization")
        return WpExpr.wp(*idx)

    return Sl2Module(name or "wp%d" % arity, labels, op(_shift_raise), op(_shift_lower),
                     realize=real if arity >= 2 else None)


def wp_atom_action(genus, lowering=True):
    """The index-shift action extended to any WpExpr as a derivation."""
    shift = _shift_lower if lowering else _shift_raise

    def act_atom(atom):
        out = WpExpr()
        for s, i in enumerate(atom.indices):
            r = shift(genus, i)
            if r is None:
                continue
            idx = atom.indices[:s] + (r[0],) + atom.indices[s + 1:]
            out = out + WpExpr({(WpAtom(atom.kind, tuple(sorted(idx))),): mpq(r[1])})
        return out

    def act(expr):
        out = WpExpr()
        for key, c in expr.terms.items():
            for n, a in enumerate(key):
                rest = WpExpr({key[:n] + key[n + 1:]: c})
                out = out + rest * act_atom(a)
        return out

    return act


def apply_partials(dmod, fmod):
    """Realize d (x) F by (d_i, label) -> d_i applied to the realized label."""
    def real(pair):
        (i,), idx = pair
        return fmod.realize(idx).diff(i)
    return real


# ---------------------------------------------------------------------------
# binary forms: label j stands for X^(n-j) Y^j


def form_module(degree, name=None):
    """Binary forms of the given degree; e = X d/dY, f = Y d/dX."""
    labels = list(range(degree + 1))

    def raise_(j):
        return {j - 1: mpq(j)} if j > 0 else {}

    def lower(j):
        return {j + 1: mpq(degree - j)} if j < degree else {}

    return Sl2Module(name or "F%d" % degree, labels, raise_, lower)


def standard_basis(mod):
    """The single component's basis f^j(v)/j! when mod is irreducible."""
    comps = mod.decompose()
    if len(comps) != 1:
        raise ClosureError("%s is not irreducible" % mod.name)
    return comps[0].basis


# ---------------------------------------------------------------------------
# Hirota map on polynomial modules


class PolyModule:
    """Polynomials in x of degree <= k as the (k+1)-dimensional module:
    e = d/dx, h = 2x d/dx - k, f = -x^2 d/dx + k x."""

    def __init__(self, k):
        self.k = k

    def e(self, p):
        return {j - 1: mpq(j) * c for j, c in p.items() if j}

    def h(self, p):
        return {j: (2 * j - self.k) * c for j, c in p.items() if 2 * j != self.k}

    def f(self, p):
        out = {}
        for j, c in p.items():
            out = vadd(out, {j + 1: (self.k - j) * c})
        return out


def poly_mul(p, q):
    out = {}
    for i, a in p.items():
        for j, b in q.items():
            out = vadd(out, {i + j: a * b})
    return out


def poly_d(p):
    return {j - 1: mpq(j) * c for j, c in p.items() if j}


def hirota(p, q):
    """D(p, q) = p'q - pq'."""
    return vadd(poly_mul(poly_d(p), q), poly_mul(p, poly_d(q)), -1)


@dataclass
class EquivarianceResult:
    degree: int
    checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def hirota_equivariance(degree, symmetrize=None):
    """Check X . (m o D)(p (x) q) = (m o D)(X.p (x) q + p (x) X.q) for
    X in {e, h, f} and all basis pairs of V_k with k = degree - 1
    (dimension `degree`).  The target carries weight 2k - 2.

    `symmetrize` replaces multiplication (for negative controls)."""
    k = degree - 1
    V = PolyModule(k)
    W = PolyModule(2 * k - 2) if k >= 1 else None
    mult = symmetrize or poly_mul

    def path(p, q):
        return vadd(mult(poly_d(p), q), mult(p, poly_d(q)), -1)

    failures, checked = [], 0
    basis = [{j: mpq(1)} for j in range(k + 1)]
    for a in basis:
        for b in basis:
            img = path(a, b)
            for name in ("e", "h", "f"):
                checked += 1
                act = getattr(V, name)
                right = vadd(path(act(a), b), path(a, act(b)))
                if W is None:
                    left = {}
                else:
                    left = getattr(W, name)(img)
                if vadd(left, right, -1):
                    failures.append((name, dict(a), dict(b)))
    return EquivarianceResult(degree, checked, failures)


def factorial_basis(mod, v, length):
    """[f^j(v)/j! for j < length]."""
    out, cur = [], v
    for j in range(length):
        out.append(cur)
        cur = vscale(mod.f(cur), mpq(1, j + 1))
    return out


__all__ = [
    "ClosureError", "Component", "Sl2Module", "cg_dimensions", "tensor", "index_module",
    "wp_atom_action", "apply_partials", "form_module", "standard_basis", "PolyModule",
    "hirota", "hirota_equivariance", "factorial_basis", "EquivarianceResult",
]
