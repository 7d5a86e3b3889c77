"""One test per acceptance criterion.  Each records a PASS/FAIL line (shown in
the pytest summary) before asserting, with tolerances and time limits pinned."""
import math
import time

import pytest

from kleinian.cli import main, run_report
from kleinian.curves import gap_sequence, sigma_weight

PROBE_TOL = 0.1
PROBE_RESIDUAL = 0.02
PROBE_DECADES = 5


def timed(cid, **kw):
    t = time.time()
    ok, body = run_report(only=[cid], seed=kw.pop("seed", 7), **kw)
    (section,) = body["criteria"]
    assert section["criterion"] == cid
    return ok, section["detail"], time.time() - t


def test_rr_tables(acceptance):
    ok, d, dt = timed(1)
    good = (ok and dt < 1
            and d["2,5"]["h0"] == [1, 1, 2, 2, 3, 4, 5, 6, 7, 8, 9]
            and d["2,7"]["h0"][12] == 10)
    acceptance(1, good, "genus-2 h0 %s; genus-3 h0(12P) = %d; %.2fs"
               % (d["2,5"]["h0"], d["2,7"]["h0"][12], dt))
    assert good


def _semigroup_gaps(n, s):
    reach = {a * n + b * s for a in range(s) for b in range(n)}
    return [k for k in range(1, n * s) if k not in reach]


def test_gap_and_weight_formulas(acceptance):
    ok, d, dt = timed(2)
    bad = []
    for n in range(2, 22):
        for s in range(n + 1, 22):
            if math.gcd(n, s) != 1 or (n - 1) * (s - 1) // 2 > 10:
                continue
            gaps = gap_sequence(n, s).gaps
            if list(gaps) != _semigroup_gaps(n, s) or len(gaps) != (n - 1) * (s - 1) // 2:
                bad.append((n, s))
            if sigma_weight(n, s) * 24 != (n * n - 1) * (s * s - 1):
                bad.append((n, s))
    good = ok and not bad and d["spot"] == {"2,5": 3, "2,7": 6, "4,5": 15} and dt < 1
    acceptance(2, good, "%d pairs with g <= 10, spot weights %s; %.2fs"
               % (d["pairs"], d["spot"], dt))
    assert good


def test_schur_weierstrass_oracle(acceptance):
    ok, d, dt = timed(3)
    good = ok and all(d.values()) and len(d) == 4 and dt < 30
    acceptance(3, good, "exact agreement on %s; %.1fs" % (sorted(d), dt))
    assert good


def _verified(reports):
    return all(r["status"] == "verified-to-cap" and not r["residual"] for r in reports)


def test_genus_one_suite(acceptance):
    ok, d, dt = timed(4)
    reps = d["reports"]
    good = ok and len(reps) == 3 and _verified(reps) and dt < 30
    acceptance(4, good, "%s verified-to-cap at cap 12; %.1fs"
               % (", ".join(r["name"] for r in reps), dt))
    assert good


def test_genus_two_suite(acceptance):
    ok, d, dt = timed(5)
    reps = d["reports"]
    names = [r["name"] for r in reps]
    family = [n for n in names if n.startswith("family")]
    good = (ok and _verified(reps) and "KdV" in names and len(family) == 5
            and len(reps) == 11 and dt < 300)
    acceptance(5, good, "5 PDEs + KdV + %d nu values verified at cap 20; %.1fs"
               % (len(family), dt))
    assert good


def test_genus_two_bases(acceptance):
    ok, d, dt = timed(6)
    dims = [b["dim"] for b in d["bases"]]
    ranks = [b["rank"] for b in d["bases"]]
    good = ok and dims == [1, 4, 9, 16] and ranks == dims and dt < 120
    acceptance(6, good, "Gamma(1..4) dims %s, full rank; %.1fs" % (dims, dt))
    assert good


def test_genus_three_equivariant(acceptance):
    ok, d, dt = timed(7)
    good = (ok and d["basis_quadruples"] == 625 and d["basis_verified"] == 625
            and d["random_verified"] == 20 and d["route_a_verified"] == 20
            and d["routes_agree"] and _verified(d["pfaffians"]) and len(d["pfaffians"]) == 5
            and all(v > 0 for v in d["omission_refutations"].values())
            and len(d["omission_refutations"]) == 6 and dt < 600)
    acceptance(7, good, "625 basis + 20 random quadruples (two routes), 5 Pfaffians, "
               "omission refutations %s; %.1fs" % (d["omission_refutations"], dt))
    assert good


def test_pole_probes(acceptance):
    ok, d, dt = timed(8)
    rows = d["probes"]
    good = ok and dt < 120 and all(
        abs(r["estimated_order"] - r["expected"]) <= PROBE_TOL
        and r["residual"] < PROBE_RESIDUAL and r["decades"] >= PROBE_DECADES for r in rows)
    acceptance(8, good, "; ".join("%s(%s) %.3f" % (r["expr"], r["curve"], r["estimated_order"])
                                  for r in rows) + "; %.1fs" % dt)
    assert good


def test_sl2_structure(acceptance):
    ok, d, dt = timed(9)
    good = (ok and d["square_dims"] == [5, 1] and d["five_matches"] and d["invariant_is_xi"]
            and d["two_part_zero"] and _verified(d["hirota"]) and len(d["hirota"]) == 4
            and dt < 60)
    acceptance(9, good, "3.3 = 5 + 1 with Xi invariant, 2-part zero, Hirota degrees 1..4; "
               "%.1fs" % dt)
    assert good


def test_jacobian_quadric(acceptance):
    ok, d, dt = timed(10)
    good = (ok and len(d["reports"]) == 6 and _verified(d["reports"]) and d["control_refuted"]
            and dt < 300)
    acceptance(10, good, "five components and 1_6 vanish, perturbed control refuted; %.1fs" % dt)
    assert good


def test_report_is_deterministic(acceptance, tmp_path):
    outs = []
    for workers in ("1", "2", "2"):
        path = tmp_path / ("w%s-%d.json" % (workers, len(outs)))
        status = main(["report", "--criteria", "1,3,5,8", "--seed", "3",
                       "--workers", workers, "--out", str(path)])
        assert status == 0
        outs.append(path.read_bytes())
    good = outs[0] == outs[1] == outs[2]
    acceptance(11, good, "report bytes identical across reruns and worker counts 1, 2")
    assert good


@pytest.mark.slow
def test_four_five_expansion(acceptance):
    ok, d, dt = timed(12)
    good = (ok and d["cap"] >= 15 + 8 and d["strata_zero"] and d["heldout_failures"] == 0
            and d["oracle"])
    acceptance(12, good, "(4,5) through cap %d (%d terms), strata vanish, held-out clean; %.1fs"
               % (d["cap"], d["terms"], dt))
    assert good
