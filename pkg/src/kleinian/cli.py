"""Command-line entry point: `kleinian <subcommand> ...`.

Every subcommand prints one JSON document (sorted keys) to stdout or to
--out.  Exit status: 0 all checks passed, 1 a check was refuted or failed,
2 bad input, 3 the cap is too small (a larger cap is suggested).
"""

import argparse
import hashlib
import json
import logging
import math
import random
import re
import sys
import time

from gmpy2 import mpq

from . import __version__
from . import equivariant as eq
from .abelian import ArityError, RankDeficient, WpExpr, gamma_basis, named_combination, wp
from .algebra import rational, rational_str
from .curves import (CurveError, CurveSpec, gap_sequence, genus_of, load_curve,
                     rr_dimension_table, sigma_weight)
from .dictionaries import DictionaryError
from .parallel import default_workers
from .relations import (CapInsufficient, DeriveFailure, addition_check, build_template,
                        derive_relation, genus1_relations, pole_order_probe, pool_gamma2,
                        verify_genus2_system, verify_relation)
from .schur import weierstrass_partition
from .sigma import (SigmaModel, heldout_check, sigma_expand, sw_matches_oracle,
                    symbolic_strata_check)
from .sl2 import cg_dimensions, form_module, tensor

log = logging.getLogger("kleinian")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# expressions on the command line:  P2222 - 6*P22^2 + 1/2*Xi, B12233, Delta, (..)

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(P\d+|B\d+|Xi|Delta)|(.))")


def parse_expr(text):
    tokens = []
    for m in _TOKEN.finditer(text):
        num, name, op = m.groups()
        if num:
            tokens.append(("num", num))
        elif name:
            tokens.append(("name", name))
        elif op and not op.isspace():
            if op not in "+-*^()":
                raise InputError("unexpected %r at column %d" % (op, m.start(3) + 1))
            tokens.append(("op", op))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(kind=None, val=None):
        nonlocal pos
        t = peek()
        if t[0] is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise InputError("malformed expression %r" % text)
        pos += 1
        return t

    def atom():
        kind, v = peek()
        if kind == "num":
            take()
            try:
                return WpExpr.const(rational(v))
            except ZeroDivisionError:
                raise InputError("zero denominator in %r" % v) from None
        if kind == "name":
            take()
            if v.startswith("P"):
                return wp(*map(int, v[1:]))
            if v.startswith("B"):
                return named_combination("B", tuple(map(int, v[1:])))
            return named_combination(v)
        if v == "(":
            take()
            e = expr()
            take("op", ")")
            return e
        if v == "-":
            take()
            return -factor()
        raise InputError("malformed expression %r" % text)

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            return base ** int(take("num")[1])
        return base

    def term():
        e = factor()
        while peek() == ("op", "*"):
            take()
            e = e * factor()
        return e

    def expr():
        e = term()
        while peek()[1] in ("+", "-") and peek()[0] == "op":
            sign = take()[1]
            t = term()
            e = e + t if sign == "+" else e - t
        return e

    if not tokens:
        raise InputError("empty expression")
    out = expr()
    if pos != len(tokens):
        raise InputError("trailing input in %r" % text)
    return out


# ---------------------------------------------------------------------------
# helpers


def _curve(args):
    if getattr(args, "curve", None):
        return load_curve(args.curve)
    if args.n is None or args.s is None:
        raise InputError("give --curve FILE or both --n and --s")
    return CurveSpec(args.n, args.s)


def _model(args):
    if not getattr(args, "model", None):
        return sigma_expand(_curve(args), args.cap, seed=args.seed, workers=args.workers)
    m = SigmaModel.load(args.model)
    if args.cap is not None and args.cap < m.cap:
        m = m.truncated(args.cap)
    return m


def _reports(reps):
    return [r.to_json() for r in reps]


def _all_ok(reps):
    return all(r.ok for r in reps)


def dumps(payload):
    return json.dumps(payload, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands: each returns (ok, result)


def cmd_gaps(args):
    c = _curve(args)
    gs = gap_sequence(c.n, c.s)
    return True, {"n": c.n, "s": c.s, "genus": gs.genus, "gaps": list(gs.gaps)}


def cmd_weights(args):
    return True, _curve(args).weights().as_dict()


def cmd_rr_table(args):
    c = _curve(args)
    k = args.max if args.max is not None else 4 * c.genus
    return True, {"n": c.n, "s": c.s, "rows": rr_dimension_table(c.n, c.s, k)}


def cmd_sigma_expand(args):
    m = _model(args)
    if args.out_model:
        m.save(args.out_model)
    fails = heldout_check(m, seed=args.seed + 12345)
    return not fails, {
        "n": m.curve.n, "s": m.curve.s, "cap": m.cap, "model_id": m.model_id(),
        "terms": len(m.sigma), "gauge": m.gauge, "oracle": sw_matches_oracle(m),
        "heldout_failures": [[k, str(v)] for k, v in fails[:5]],
        "sw_part": m.sw_part.pretty(), "saved": args.out_model or None,
    }


def cmd_basis(args):
    m = _model(args)
    out, ok = [], True
    for k in range(1, args.m + 1):
        try:
            b = gamma_basis(m, k)
            out.append({"m": k, "names": b.names, "certificate": b.certificate,
                        "ok": b.certificate["rank"] == b.certificate["expected"]})
            ok = ok and out[-1]["ok"]
        except RankDeficient as e:
            ok = False
            out.append({"m": k, "ok": False, "dependency": {n: rational_str(c) for n, c
                                                            in e.relation.items() if c}})
    return ok, {"model_id": m.model_id(), "bases": out}


def cmd_verify(args):
    m = _model(args)
    suite = args.suite
    if suite == "genus1":
        reps = [verify_relation(r, m, n) for n, r in sorted(genus1_relations(m).items())]
        add = addition_check(m)
        reps.append(add.report)
    elif suite == "genus2":
        nus = None if args.family else []
        if args.family:
            rng = random.Random(args.seed)
            nus = [mpq(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(args.family)]
        reps = verify_genus2_system(m, nus=nus)
    elif suite == "addition":
        add = addition_check(m)
        return add.report.ok and add.diagonal_zero, {
            "report": add.report.to_json(), "table": add.table,
            "diagonal_zero": add.diagonal_zero}
    elif suite == "strata":
        r = symbolic_strata_check(m)
        fails = heldout_check(m, seed=args.seed + 12345)
        ok = r.is_zero_to_cap() and not fails
        return ok, {"model_id": m.model_id(), "strata_zero": r.is_zero_to_cap(),
                    "strata_cap": r.cap, "heldout_failures": len(fails)}
    else:
        rel = parse_expr(args.expr)
        reps = [verify_relation(rel, m, args.expr)]
    return _all_ok(reps), {"model_id": m.model_id(), "reports": _reports(reps)}


def cmd_derive(args):
    m = _model(args)
    target = parse_expr(args.target)
    pool = pool_gamma2(m.genus)
    if args.pool:
        pool = [(p.strip(), parse_expr(p.strip())) for p in args.pool.split(",")]
    t = build_template(m, target, pool, args.max_degree)
    r = derive_relation(t, m)
    return r.status == "unique", {
        "status": r.status, "candidates": len(t.candidates), "rows": r.rows, "cap": r.cap,
        "relation": str(r.relation) if r.relation is not None else None,
        "coefficients": {n: rational_str(c) for n, c in sorted(r.coefficients.items()) if c},
        "nullspace_dim": len(r.nullspace),
    }


def _probe_json(r):
    d = r.to_json()
    lo, hi = min(r.eps), max(r.eps)
    d["decades"] = round(float(math.log10(hi / lo)), 6)
    return d


def cmd_probe(args):
    m = _model(args)
    r = pole_order_probe(parse_expr(args.expr), m, trials=args.trials, seed=args.seed)
    d = _probe_json(r)
    ok = r.accepted
    if args.expect is not None:
        ok = ok and abs(r.estimated_order - args.expect) <= args.tol and r.residual < 0.02
    return ok, {"expr": args.expr, "probe": d}


def cmd_equivariant(args):
    suite = args.suite
    if suite in ("quadric",):
        reps = eq.jacobian_quadric_check(args.cap or 12)
        ctrl = eq.jacobian_quadric_check(args.cap or 12, perturb=True)
        ok = _all_ok(reps) and not _all_ok(ctrl)
        return ok, {"reports": _reports(reps), "control_refuted": not _all_ok(ctrl),
                    "grades": eq.grade_check(eq.jacobian_coords(cap=6))}
    if suite == "decompose":
        return _sl2_section()
    if suite == "polar":
        reps = eq.octic_polar_reports()
        return reps[1].matches, {"reports": [r.to_json() for r in reps]}
    if suite == "hirota":
        reps = [eq.hirota_equivariance_check(d) for d in range(1, 5)]
        return _all_ok(reps), {"reports": _reports(reps)}
    m = _model(args)
    if suite == "genus1":
        r = eq.genus1_check(m)
        return r.ok, {"reports": _reports([r])}
    mats = eq.build_matrices(m)
    if suite == "qr":
        res = eq.qr_suite(m, seed=args.seed, count=args.count)
        return res.ok, {
            "basis_quadruples": len(res.basis),
            "basis_verified": sum(r.ok for r in res.basis),
            "random": _reports(res.random), "route_a": _reports(res.route_a),
            "routes_agree": res.routes_agree,
            "dictionary_cross_check": eq.dictionary_cross_check(m.curve),
        }
    if suite == "plucker":
        reps = eq.plucker_check(mats)
        ctrl = eq.plucker_check(mats, eq.perturbed_a(mats.A, args.seed))
        nz = eq.entries_nonzero(mats)
        ok = _all_ok(reps) and not _all_ok(ctrl) and all(nz.values())
        return ok, {"reports": _reports(reps), "control_refuted": not _all_ok(ctrl),
                    "entries_nonzero": all(nz.values())}
    if suite == "omission":
        om = eq.omission_reports(m)
        res = {k: sum(not r.ok for r in v) for k, v in om.items()}
        return all(res.values()), {"refutations": res}
    raise InputError("unknown suite %r" % suite)


# ---------------------------------------------------------------------------
# the aggregated acceptance run


def _sl2_section():
    S = eq.wp_square(2)
    comps = eq.realized_components(S)
    want5 = [wp(1, 1) ** 2, 4 * wp(1, 1) * wp(1, 2),
             4 * wp(1, 2) ** 2 + 2 * wp(1, 1) * wp(2, 2),
             4 * wp(1, 2) * wp(2, 2), wp(2, 2) ** 2]
    xi = named_combination("Xi")
    dims = [d for d, _ in comps]
    five = next(v for d, v in comps if d == 5)
    one = next(v for d, v in comps if d == 1)
    five_ok = all((a - b).is_zero() for a, b in zip(five, want5))
    one_ok = (one[0] + xi).is_zero() or (one[0] - xi).is_zero()
    T = eq.derivative_module(2, 2)
    dcomps = eq.realized_components(T)
    two_zero = all(v.is_zero() for d, vs in dcomps if d == 2 for v in vs)
    counts = {}
    for n in range(2, 7):
        got = sorted((c.dim for c in tensor(form_module(1), form_module(n - 1)).decompose()),
                     reverse=True)
        counts[n] = got == sorted([n + 1, n - 1], reverse=True) == cg_dimensions(2, n)
    hir = [eq.hirota_equivariance_check(d) for d in range(1, 5)]
    ok = (dims == [5, 1] and five_ok and one_ok and two_zero and all(counts.values())
          and _all_ok(hir) and eq.casimir_check(S))
    return ok, {
        "square_dims": dims, "five_basis": [str(v) for v in five], "five_matches": five_ok,
        "invariant": str(one[0]), "invariant_is_xi": one_ok,
        "derivative_dims": [d for d, _ in dcomps], "two_part_zero": two_zero,
        "d_tensor_counts": {str(k): v for k, v in counts.items()},
        "hirota": _reports(hir), "casimir": eq.casimir_check(S),
    }


RR_EXPECTED = {
    (2, 5): (10, [1, 1, 2, 2, 3, 4, 5, 6, 7, 8, 9]),
    (2, 7): (12, [1, 1, 2, 2, 3, 3, 4, 5, 6, 7, 8, 9, 10]),
}

PROBES = [
    ("Delta", (2, 7), 2), ("Xi", (2, 5), 3), ("P11", (2, 5), 2), ("B11222", (2, 5), 3),
    ("B12333", (2, 7), 3),
]


def _c1(models, seed):
    out = {}
    for (n, s), (k, want) in RR_EXPECTED.items():
        got = [r["h0"] for r in rr_dimension_table(n, s, k)]
        out["%d,%d" % (n, s)] = {"h0": got, "ok": got == want}
    return all(v["ok"] for v in out.values()), out


def _c2(models, seed):
    bad = []
    count = 0
    for n in range(2, 30):
        for s in range(n + 1, 60):
            if math.gcd(n, s) != 1 or genus_of(n, s) > 10:
                continue
            count += 1
            g = gap_sequence(n, s)
            if len(g.gaps) != (n - 1) * (s - 1) // 2:
                bad.append([n, s, "gaps"])
            if sum(weierstrass_partition(n, s)) != (n * n - 1) * (s * s - 1) // 24:
                bad.append([n, s, "weight"])
    spot = {"2,5": sigma_weight(2, 5), "2,7": sigma_weight(2, 7), "4,5": sigma_weight(4, 5)}
    ok = not bad and spot == {"2,5": 3, "2,7": 6, "4,5": 15}
    return ok, {"pairs": count, "failures": bad, "spot": spot}


def _c3(models, seed):
    res = {"%d,%d" % k: sw_matches_oracle(models[k]) for k in [(2, 3), (2, 5), (2, 7), (3, 4)]}
    return all(res.values()), res


def _c4(models, seed):
    m = models[(2, 3)]
    reps = [verify_relation(r, m, n) for n, r in sorted(genus1_relations(m).items())]
    add = addition_check(m)
    reps.append(add.report)
    return _all_ok(reps), {"reports": _reports(reps)}


def _c5(models, seed):
    rng = random.Random(seed)
    nus = [mpq(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(5)]
    reps = verify_genus2_system(models[(2, 5)], nus=nus)
    return _all_ok(reps), {"reports": _reports(reps)}


def _c6(models, seed):
    m = models[(2, 5)]
    out = []
    for k in range(1, 5):
        b = gamma_basis(m, k)
        out.append({"m": k, "dim": len(b.names), "rank": b.certificate["rank"],
                    "names": b.names})
    ok = [o["dim"] for o in out] == [1, 4, 9, 16] and all(o["rank"] == o["dim"] for o in out)
    return ok, {"bases": out}


def _c7(models, seed):
    m = models[(2, 7)]
    res = eq.qr_suite(m, seed=seed, count=20)
    mats = eq.build_matrices(m)
    pf = eq.plucker_check(mats)
    om = {k: sum(not r.ok for r in v) for k, v in eq.omission_reports(m).items()}
    ok = res.ok and _all_ok(pf) and all(om.values())
    return ok, {
        "basis_quadruples": len(res.basis), "basis_verified": sum(r.ok for r in res.basis),
        "random_verified": sum(r.ok for r in res.random),
        "route_a_verified": sum(r.ok for r in res.route_a), "routes_agree": res.routes_agree,
        "pfaffians": _reports(pf), "omission_refutations": om,
    }


def _c8(models, seed):
    out, ok = [], True
    for name, key, want in PROBES:
        r = pole_order_probe(parse_expr(name), models[key], seed=seed)
        d = _probe_json(r)
        good = (abs(r.estimated_order - want) <= 0.1 and r.residual < 0.02
                and d["decades"] >= 5)
        ok = ok and good
        out.append({"expr": name, "curve": "%d,%d" % key, "expected": want, "ok": good,
                    "estimated_order": d["estimated_order"], "residual": d["residual"],
                    "decades": d["decades"], "xi_scale": d["xi_scale"]})
    return ok, {"probes": out}


def _c9(models, seed):
    return _sl2_section()


def _c10(models, seed):
    reps = eq.jacobian_quadric_check(12)
    ctrl = eq.jacobian_quadric_check(12, perturb=True)
    grades = eq.grade_check(eq.jacobian_coords(cap=6))
    ok = _all_ok(reps) and not _all_ok(ctrl) and set(grades.values()) == {7}
    return ok, {"reports": _reports(reps), "control_refuted": not _all_ok(ctrl),
                "dimension_plus_grade": grades}


def _c45(models, seed):
    m = models[(4, 5)]
    r = symbolic_strata_check(m)
    fails = heldout_check(m, seed=seed + 12345)
    ok = r.is_zero_to_cap() and not fails and m.cap >= m.weights.wt_sigma + 8
    return ok, {"cap": m.cap, "terms": len(m.sigma), "strata_zero": r.is_zero_to_cap(),
                "heldout_failures": len(fails), "oracle": sw_matches_oracle(m)}


CRITERIA = [
    (1, "riemann-roch tables", _c1, ()),
    (2, "gap and weight formulas", _c2, ()),
    (3, "schur-weierstrass oracle", _c3, ((2, 3), (2, 5), (2, 7), (3, 4))),
    (4, "genus-1 suite", _c4, ((2, 3),)),
    (5, "genus-2 suite", _c5, ((2, 5),)),
    (6, "genus-2 bases", _c6, ((2, 5),)),
    (7, "genus-3 equivariant suite", _c7, ((2, 7),)),
    (8, "pole probes", _c8, ((2, 5), (2, 7))),
    (9, "sl2 structure", _c9, ()),
    (10, "jacobian quadric", _c10, ()),
    (12, "(4,5) expansion", _c45, ((4, 5),)),
]

SUITES = {
    "all": [c[0] for c in CRITERIA],
    "fast": [1, 2, 3, 4, 9],
}

REPORT_CAPS = {(4, 5): 23}


def run_report(suite="all", seed=0, workers=None, only=None):
    wanted = set(only or SUITES[suite])
    models = {}
    sections = []
    for cid, name, fn, needs in CRITERIA:
        if cid not in wanted:
            continue
        for key in needs:
            if key not in models:
                t = time.time()
                models[key] = sigma_expand(CurveSpec(*key), REPORT_CAPS.get(key),
                                           seed=0, workers=workers)
                log.info("solved (%d,%d) in %.1fs", key[0], key[1], time.time() - t)
        t = time.time()
        try:
            ok, detail = fn(models, seed)
        except CapInsufficient as e:
            ok, detail = False, {"error": str(e), "suggested_cap": e.suggested_cap}
        log.info("criterion %d (%s): %s in %.1fs", cid, name, "pass" if ok else "FAIL",
                 time.time() - t)
        sections.append({"criterion": cid, "name": name, "ok": ok, "detail": detail})
    body = {"seed": seed, "suite": suite, "criteria": sections,
            "models": {"%d,%d" % k: m.model_id() for k, m in sorted(models.items())}}
    body["digest"] = hashlib.sha256(dumps(body).encode()).hexdigest()
    return all(s["ok"] for s in sections), body


def cmd_report(args):
    only = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    return run_report(args.suite, args.seed, args.workers, only)


# ---------------------------------------------------------------------------


def _common(p, model=True):
    p.add_argument("--curve", help="curve file (key = value grammar)")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    if model:
        p.add_argument("--model", help="saved sigma model (JSON)")
        p.add_argument("--cap", type=int)


def _global(p, default):
    p.add_argument("--seed", type=int, default=default)
    p.add_argument("--workers", type=int, default=default,
                   help="worker processes (default: $KLEINIAN_WORKERS or 1)")
    p.add_argument("--out", default=default,
                   help="write the JSON result here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true", default=default)


def build_parser():
    ap = argparse.ArgumentParser(prog="kleinian", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    _global(ap, argparse.SUPPRESS)
    ap.set_defaults(seed=0, workers=None, out=None, verbose=False)
    shared = argparse.ArgumentParser(add_help=False)
    _global(shared, argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gaps", parents=[shared])
    _common(p, model=False)
    p.set_defaults(fn=cmd_gaps)
    p = sub.add_parser("weights", parents=[shared])
    _common(p, model=False)
    p.set_defaults(fn=cmd_weights)
    p = sub.add_parser("rr-table", parents=[shared])
    _common(p, model=False)
    p.add_argument("--max", type=int, help="largest multiple kP (default 4g)")
    p.set_defaults(fn=cmd_rr_table)

    p = sub.add_parser("sigma-expand", parents=[shared])
    _common(p)
    p.add_argument("--save", dest="out_model", help="save the model JSON here")
    p.set_defaults(fn=cmd_sigma_expand)

    p = sub.add_parser("basis", parents=[shared])
    _common(p)
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("verify", parents=[shared])
    _common(p)
    p.add_argument("--suite", choices=["genus1", "genus2", "addition", "strata", "expr"],
                   default="genus2")
    p.add_argument("--expr", help="with --suite expr: an expression claimed to vanish")
    p.add_argument("--family", type=int, default=0, help="genus2: add K random nu checks")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("derive", parents=[shared])
    _common(p)
    p.add_argument("--target", required=True)
    p.add_argument("--pool", help="comma separated expressions (default: 2-index wp's)")
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(fn=cmd_derive)

    p = sub.add_parser("probe", parents=[shared])
    _common(p)
    p.add_argument("--expr", required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--expect", type=float)
    p.add_argument("--tol", type=float, default=0.1)
    p.set_defaults(fn=cmd_probe)

    p = sub.add_parser("equivariant", parents=[shared])
    _common(p)
    p.add_argument("--suite", default="qr",
                   choices=["qr", "plucker", "omission", "genus1", "quadric", "decompose",
                            "polar", "hirota"])
    p.add_argument("--count", type=int, default=20, help="random quadruples")
    p.set_defaults(fn=cmd_equivariant)

    p = sub.add_parser("report", parents=[shared])
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--criteria", help="comma separated criterion numbers")
    p.set_defaults(fn=cmd_report)
    return ap


_DEFAULT_CURVES = {"verify": {"genus1": (2, 3), "genus2": (2, 5), "addition": (2, 5)},
                   "equivariant": {"genus1": (2, 3)}}


def _fill_default_curve(args):
    if not hasattr(args, "n") or getattr(args, "curve", None) or getattr(args, "model", None):
        return
    if args.n is not None or args.s is not None:
        return
    table = _DEFAULT_CURVES.get(args.command, {})
    key = table.get(getattr(args, "suite", None))
    if key is None and args.command == "equivariant":
        key = (2, 7)
    if key:
        args.n, args.s = key


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    if args.workers is None:
        args.workers = default_workers()
    _fill_default_curve(args)
    try:
        ok, result = args.fn(args)
        status = EXIT_OK if ok else EXIT_FAIL
        payload = {"command": args.command, "ok": ok, "result": result,
                   "version": __version__}
    except CapInsufficient as e:
        status = EXIT_CAP
        payload = {"command": args.command, "ok": False, "version": __version__,
                   "error": {"kind": "cap-insufficient", "message": str(e),
                             "suggested_cap": e.suggested_cap}}
    except (CurveError, InputError, ArityError, DictionaryError, DeriveFailure,
            FileNotFoundError, ValueError) as e:
        status = EXIT_INPUT
        payload = {"command": args.command, "ok": False, "version": __version__,
                   "error": {"kind": type(e).__name__, "message": str(e)}}
    text = dumps(payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
