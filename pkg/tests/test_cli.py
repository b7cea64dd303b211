import csv
import io as _io
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from gitkit.cli import main
from gitkit.io import load_schema

M_CANON = 1 / math.sqrt(5)

UNSTABLE = {"group": {"preset": "torus", "weights": [[1], [2]]}, "hbar": 1.0, "vector": [[1, 0], [1, 0]]}
BALANCED = {"group": {"preset": "torus", "weights": [[1, 0], [-1, 0], [0, 1]]}, "vector": [1, 1, 0]}
BALANCED_CIRCLE = {"group": {"preset": "torus", "weights": [[1], [-1]]}, "vector": [1, 1]}
TWO_ELEMENTS = {
    "group": {"preset": "full_unitary", "n": 2},
    "elements": [[[2, 0], [0, 0.5]], [[1, [0, 1]], [0, 1]]],
}


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def _validate(text, schema):
    docs = [json.loads(line) for line in text.strip().split("\n")]
    for doc in docs:
        jsonschema.validate(doc, load_schema(schema))
    return docs


@pytest.fixture
def files(tmp_path):
    from gitkit.io import instance_to_dict
    from gitkit.lie_core import spin_representation
    from gitkit.projective import ProjectivePoint

    quartic = instance_to_dict(spin_representation(4), ProjectivePoint([0, 0, 1, 1, 1]))
    return {
        "unstable": _write(tmp_path, "unstable.json", UNSTABLE),
        "balanced": _write(tmp_path, "balanced.json", BALANCED),
        "circle": _write(tmp_path, "circle.json", BALANCED_CIRCLE),
        "quartic": _write(tmp_path, "quartic.json", quartic),
        "elements": _write(tmp_path, "elements.json", TWO_ELEMENTS),
        "malformed": _write(tmp_path, "malformed.json", "{\"group\": "),
    }


def test_classify_unstable(files, capsys):
    code, out, _ = _run(capsys, "classify", files["unstable"])
    (doc,) = _validate(out, "verdict")
    assert code == 0
    assert doc["class"] == "unstable"
    assert doc["m"] == pytest.approx(M_CANON, abs=1e-5)
    assert doc["instance"] == files["unstable"]


def test_classify_balanced_batch_keeps_order(files, capsys):
    code, out, _ = _run(capsys, "classify", files["balanced"], files["circle"], files["unstable"])
    docs = _validate(out, "verdict")
    assert code == 0
    assert [d["class"] for d in docs] == ["polystable", "stable", "unstable"]
    assert [d["instance"] for d in docs] == [files["balanced"], files["circle"], files["unstable"]]


def test_classify_csv(files, capsys):
    code, out, _ = _run(capsys, "--format", "csv", "classify", files["unstable"], files["circle"])
    rows = list(csv.DictReader(_io.StringIO(out)))
    assert code == 0
    assert [r["class"] for r in rows] == ["unstable", "stable"]
    assert float(rows[0]["m"]) == pytest.approx(M_CANON, abs=1e-5)


def test_classify_undetermined_exit_code(files, capsys):
    code, out, _ = _run(capsys, "classify", files["quartic"])
    (doc,) = _validate(out, "verdict")
    assert code == 3
    assert doc["class"] == "semistable_polystability_undetermined"


def test_malformed_json_exits_2(files, capsys):
    code, out, err = _run(capsys, "classify", files["malformed"])
    assert code == 2 and out == ""
    assert err.startswith("error:") and len(err.strip().split("\n")) == 1


def test_validation_errors_exit_2(files, capsys):
    assert _run(capsys, "flow", files["unstable"], "--t-max", "0.0")[0] == 2
    assert _run(capsys, "--hbar", "-1", "classify", files["unstable"])[0] == 2
    assert _run(capsys, "weight", files["unstable"], "--xi", "1,2")[0] == 2
    assert _run(capsys, "--format", "csv", "polytope", files["unstable"])[0] == 2
    assert _run(capsys, "polytope", files["quartic"])[0] == 2


def test_domain_failure_exits_4(files, capsys):
    code, _, err = _run(capsys, "kempf", files["circle"])
    assert code == 4 and "NotUnstable" in err


def test_flow_summary(files, capsys):
    code, out, _ = _run(capsys, "flow", files["unstable"])
    (doc,) = _validate(out, "flow_summary")
    assert code == 0
    assert doc["unstable"] and doc["converged"]
    assert doc["abs(|xi_inf|-m)<=1e-4"] is True
    assert doc["m"] == pytest.approx(M_CANON, abs=1e-12)
    assert doc["weight"] == pytest.approx(-0.2, abs=1e-4)


def test_flow_csv_dump_every(files, capsys, tmp_path):
    _, full, _ = _run(capsys, "--format", "csv", "flow", files["unstable"])
    _, tenth, _ = _run(capsys, "--format", "csv", "flow", files["unstable"], "--dump-every", "10")
    rows = full.strip().split("\n")
    sub = tenth.strip().split("\n")
    assert sub[0] == rows[0]
    assert sub[1:] == rows[1::10]
    side = tmp_path / "traj.csv"
    _run(capsys, "flow", files["unstable"], "--dump-every", "10", "--csv", side)
    assert side.read_text() == tenth


def test_weight_and_polytope(files, capsys):
    # the basis element pairs with the weights as (-1, -2) / sqrt 5
    code, out, _ = _run(capsys, "weight", files["unstable"], "--xi", "1")
    (doc,) = _validate(out, "weight")
    assert code == 0 and doc["weight"] == pytest.approx(-M_CANON, abs=1e-12)
    code, out, _ = _run(capsys, "weight", files["unstable"], "--xi", "-1", "--mode", "simulated")
    assert json.loads(out)["weight"] == pytest.approx(2 * M_CANON, abs=1e-6)
    code, out, _ = _run(capsys, "polytope", files["balanced"])
    (doc,) = _validate(out, "polytope")
    assert doc["contains_zero"] == "relative_interior" and doc["m"] == 0.0


def test_kempf(files, capsys):
    code, out, _ = _run(capsys, "kempf", files["unstable"], "--starts", "3")
    (doc,) = _validate(out, "kempf")
    assert code == 0
    assert abs(doc["profile"][-1] + M_CANON) <= 1e-3
    assert doc["uniqueness"]["passed"]


def test_constants(capsys):
    code, out, _ = _run(capsys, "constants", "--alpha", "2")
    assert code == 0
    assert json.loads(out) == [0, 0.5, 0, -0.5]
    jsonschema.validate(json.loads(out), load_schema("constants"))
    code, out, _ = _run(capsys, "--format", "csv", "constants", "--beta", "4")
    assert len(out.strip().split("\n")) == 8
    assert _run(capsys, "constants", "--alpha", "3")[0] == 2


@pytest.mark.parametrize("op", ["distance", "midpoint", "circumcenter"])
def test_geom(op, files, capsys):
    code, out, _ = _run(capsys, "geom", op, files["elements"])
    (doc,) = _validate(out, "geom")
    assert code == 0 and doc["op"] == op
    if op == "distance":
        assert doc["distance"] > 0
    if op == "circumcenter":
        assert doc["certificate_worst_decrease"] <= 1e-8


def test_output_flag(files, capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = _run(capsys, "-o", target, "classify", files["unstable"])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["class"] == "unstable"


def test_verify_smoke_run_is_deterministic(capsys):
    code1, out1, _ = _run(capsys, "--seed", "7", "verify", "--samples", "10")
    code2, out2, _ = _run(capsys, "--seed", "7", "verify", "--samples", "10")
    assert out1 == out2
    (doc,) = _validate(out1, "verify")
    assert code1 == 0 and doc["passed"]


def test_verify_unknown_check(capsys):
    assert _run(capsys, "verify", "--only", "nope")[0] == 2


def test_console_script_entry_point(files):
    res = subprocess.run(
        [sys.executable, "-m", "gitkit.cli", "classify", files["circle"]], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["class"] == "stable"
