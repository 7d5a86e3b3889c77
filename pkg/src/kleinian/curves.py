"""(n,s)-curves: genus, Weierstrass gaps, Sato weights, pole orders and
Riemann-Roch dimension tables."""

import re
from dataclasses import dataclass
from math import gcd

from .algebra import rational, rational_str


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class GapSequence:
    n: int
    s: int
    gaps: tuple

    @property
    def genus(self):
        return len(self.gaps)

    def is_gap(self, k):
        return k in self.gaps

    def nongaps(self, upto):
        return [k for k in range(upto + 1) if k not in self.gaps]


def _check_pair(n, s):
    if n < 2 or s <= n:
        raise CurveError("need 2 <= n < s, got (%d,%d)" % (n, s))
    if gcd(n, s) != 1:
        raise CurveError("(%d,%d) is not a coprime pair" % (n, s))


def genus_of(n, s):
    return (n - 1) * (s - 1) // 2


def gap_sequence(n, s):
    _check_pair(n, s)
    g = genus_of(n, s)
    # every integer >= 2g is representable
    reach = [False] * (2 * g + 1)
    reach[0] = True
    for k in range(1, 2 * g + 1):
        reach[k] = (k >= n and reach[k - n]) or (k >= s and reach[k - s])
    gaps = tuple(k for k in range(1, 2 * g + 1) if not reach[k])
    assert len(gaps) == g
    return GapSequence(n, s, gaps)


def sigma_weight(n, s):
    return (n * n - 1) * (s * s - 1) // 24


@dataclass(frozen=True)
class WeightTable:
    n: int
    s: int
    wt_x: int
    wt_y: int
    wt_lambda: tuple
    wt_u: tuple
    wt_sigma: int

    def as_dict(self):
        return {"n": self.n, "s": self.s, "wt_x": self.wt_x, "wt_y": self.wt_y,
                "wt_lambda": list(self.wt_lambda), "wt_u": list(self.wt_u),
                "wt_sigma": self.wt_sigma}


@dataclass(frozen=True)
class CurveSpec:
    """y^n = x^s + lam_{s-1} x^{s-1} + ... + lam_0 (cyclic class).

    coefficients maps j -> "sym" or a Rational; missing entries are symbolic.
    """
    n: int
    s: int
    cls: str = "cyclic"
    coefficients: tuple = ()
    truncation_weight: int = None

    def __post_init__(self):
        _check_pair(self.n, self.s)
        if self.cls not in ("cyclic", "general"):
            raise CurveError("unknown curve class %r" % self.cls)
        for j, _ in self.coefficients:
            if not 0 <= j < self.s:
                raise CurveError("lambda.%d out of range for s=%d" % (j, self.s))

    @property
    def genus(self):
        return genus_of(self.n, self.s)

    @property
    def lambda_names(self):
        return ["lam%d" % j for j in range(self.s)]

    def coefficient(self, j):
        for jj, v in self.coefficients:
            if jj == j:
                return v
        return "sym"

    def is_symbolic(self):
        return all(self.coefficient(j) == "sym" for j in range(self.s))

    def numeric_lambdas(self):
        return {j: v for j, v in self.coefficients if v != "sym"}

    def weights(self):
        return weight_table(self)

    def to_text(self):
        lines = ["n = %d" % self.n, "s = %d" % self.s, "class = %s" % self.cls]
        for j in range(self.s):
            v = self.coefficient(j)
            lines.append('lambda.%d = "%s"' % (j, v if v == "sym" else rational_str(v)))
        if self.truncation_weight is not None:
            lines.append("truncation_weight = %d" % self.truncation_weight)
        return "\n".join(lines) + "\n"


def weight_table(c):
    n, s = c.n, c.s
    gaps = gap_sequence(n, s).gaps
    return WeightTable(
        n=n, s=s, wt_x=-n, wt_y=-s,
        wt_lambda=tuple(-n * (s - j) for j in range(s)),
        wt_u=tuple(sorted(gaps, reverse=True)),
        wt_sigma=sigma_weight(n, s),
    )


def monomial_order(n, s, count):
    """First `count` monomials x^i y^j (j < n) by pole order i*n + j*s."""
    out = []
    order = 0
    while len(out) < count:
        for j in range(n):
            rest = order - j * s
            if rest >= 0 and rest % n == 0:
                out.append((rest // n, j))
        order += 1
    return out


def monomial_label(i, j):
    parts = []
    if i:
        parts.append("x" if i == 1 else "x^%d" % i)
    if j:
        parts.append("y" if j == 1 else "y^%d" % j)
    return "".join(parts) or "1"


def differential_basis(c):
    """Numerators h_i (as exponent pairs) with u_i of weight wt_u[i]."""
    g = c.genus
    basis = monomial_order(c.n, c.s, g)
    for i, j in basis:
        if c.n * i + c.s * j > 2 * g - 2:
            raise CurveError("monomial x^%d y^%d does not give a holomorphic differential"
                             % (i, j))
    return basis


def rr_dimension_table(n, s, max_multiple):
    """Rows (k, dim H0(kP), dim H1(kP), new monomials at pole order k)."""
    gaps = set(gap_sequence(n, s).gaps)
    g = genus_of(n, s)
    rows = []
    h0 = 0
    for k in range(max_multiple + 1):
        if k not in gaps:
            h0 += 1
        h1 = h0 - 1 + g - k
        # all x^i y^j (any j) with this pole order; more than one means a relation
        monos = [(i, j) for j in range(k // s + 1) for i in range(k // n + 1)
                 if i * n + j * s == k]
        rows.append({"k": k, "h0": h0, "h1": h1,
                     "monomials": [monomial_label(i, j) for i, j in sorted(monos, key=lambda t: t[1])]})
    return rows


def first_relation(n, s):
    """Smallest k with two distinct monomials of pole order k (a curve relation)."""
    k = 0
    while True:
        hits = [(i, j) for j in range(k // s + 1) for i in range(k // n + 1)
                if i * n + j * s == k]
        if len(hits) > 1:
            return k
        k += 1


# ---------------------------------------------------------------------------
# curve files

_LINE = re.compile(r'^\s*([A-Za-z_][A-Za-z0-9_.]*)\s*=\s*(.*?)\s*$')


def parse_curve_text(text, source="<curve>"):
    """Parse the key = value curve grammar.  Comments start with '#'."""
    values = {}
    lams = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise CurveError("%s:%d:%d: expected 'key = value'" % (source, lineno, col))
        key, val = m.group(1), m.group(2)
        col = raw.index(val) + 1 if val else len(raw)
        if val.startswith('"') and val.endswith('"') and len(val) >= 2:
            val = val[1:-1]
        try:
            if key in ("n", "s", "truncation_weight"):
                values[key] = int(val)
            elif key == "class":
                values[key] = val
            elif key.startswith("lambda."):
                j = int(key.split(".", 1)[1])
                lams[j] = "sym" if val == "sym" else rational(val)
            else:
                raise CurveError("unknown key %r" % key)
        except CurveError as e:
            raise CurveError("%s:%d:1: %s" % (source, lineno, e)) from None
        except (ValueError, ZeroDivisionError):
            raise CurveError("%s:%d:%d: bad value %r for %s"
                             % (source, lineno, col, val, key)) from None
    for req in ("n", "s"):
        if req not in values:
            raise CurveError("%s: missing required key %r" % (source, req))
    try:
        return CurveSpec(values["n"], values["s"], values.get("class", "cyclic"),
                         tuple(sorted(lams.items())), values.get("truncation_weight"))
    except CurveError as e:
        raise CurveError("%s: %s" % (source, e)) from None


def load_curve(path):
    with open(path) as fh:
        return parse_curve_text(fh.read(), str(path))
