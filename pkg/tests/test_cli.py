import json

import jsonschema
import pytest

from kleinian.abelian import WpExpr, wp
from kleinian.cli import main, parse_expr
from kleinian.schemas import load_schema


def run(argv, tmp_path, name="out.json"):
    path = tmp_path / name
    status = main(argv + ["--out", str(path)])
    payload = json.loads(path.read_text())
    jsonschema.validate(payload, load_schema("envelope"))
    return status, payload


@pytest.fixture(scope="module")
def saved25(m25, tmp_path_factory):
    path = tmp_path_factory.mktemp("models") / "m25.json"
    m25.save(str(path))
    return str(path)


def test_gaps(tmp_path):
    status, out = run(["gaps", "--n", "3", "--s", "4"], tmp_path)
    assert status == 0 and out["result"]["gaps"] == [1, 2, 5]


def test_global_flags_before_or_after_subcommand(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["--out", str(a), "weights", "--n", "2", "--s", "5"]) == 0
    assert main(["weights", "--n", "2", "--s", "5", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_parse_expr():
    e = parse_expr("P2222 - 6*P22^2 - 4*(P12 + 1/2*P11*0)")
    assert (e - (wp(2, 2, 2, 2) - 6 * wp(2, 2) ** 2 - 4 * wp(1, 2))).is_zero()
    assert isinstance(parse_expr("Xi + Delta"), WpExpr)
    for bad in ["P", "P11 +", "Q11", "(P11", "1/0"]:
        with pytest.raises(ValueError):
            parse_expr(bad)


def test_malformed_curve_file_exits_2(tmp_path):
    f = tmp_path / "bad.curve"
    f.write_text("n = 2\ns = five\n")
    status, out = run(["gaps", "--curve", str(f)], tmp_path)
    assert status == 2 and "2:5" in out["error"]["message"]


def test_missing_curve_exits_2(tmp_path):
    status, out = run(["gaps"], tmp_path)
    assert status == 2 and not out["ok"]


def test_cap_shortfall_exits_3(tmp_path):
    status, out = run(["probe", "--expr", "B12123", "--n", "2", "--s", "7", "--cap", "12"],
                      tmp_path)
    assert status == 3 and out["error"]["suggested_cap"] > 12


def test_cap_below_sigma_weight_exits_2(tmp_path):
    status, out = run(["verify", "--suite", "expr", "--expr", "P2222",
                       "--n", "2", "--s", "5", "--cap", "1"], tmp_path)
    assert status == 2


def test_verify_genus2_reports(tmp_path, saved25):
    status, out = run(["verify", "--suite", "genus2", "--model", saved25], tmp_path)
    reps = out["result"]["reports"]
    assert status == 0 and len(reps) == 6
    for r in reps:
        jsonschema.validate(r, load_schema("relation_report"))


def test_verify_refutes_wrong_relation(tmp_path, saved25):
    status, out = run(["verify", "--suite", "expr", "--model", saved25,
                       "--expr", "P2222 - 5*P22^2"], tmp_path)
    assert status == 1 and out["result"]["reports"][0]["residual"]


def test_derive(tmp_path, saved25):
    status, out = run(["derive", "--model", saved25, "--target", "P2222"], tmp_path)
    assert status == 0
    assert out["result"]["coefficients"] == {"P12": "-4/1", "P22*P22": "-6/1", "lam3": "-2/1",
                                             "lam4*P22": "-4/1"}


def test_probe(tmp_path, saved25):
    status, out = run(["probe", "--model", saved25, "--expr", "Xi", "--expect", "3"], tmp_path)
    assert status == 0
    jsonschema.validate(out["result"]["probe"], load_schema("probe"))


def test_report_schema_and_determinism(tmp_path):
    a = run(["report", "--criteria", "1,3", "--seed", "4", "--workers", "1"], tmp_path, "a")
    b = run(["report", "--criteria", "1,3", "--seed", "4", "--workers", "2"], tmp_path, "b")
    assert a[0] == 0 and a == b
    jsonschema.validate(a[1]["result"], load_schema("report"))
