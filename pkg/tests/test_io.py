import json
import math

import jsonschema
import numpy as np
import pytest

from gitkit.errors import NotSkewHermitian, ParseError, ValidationError
from gitkit.flow import integrate_flow
from gitkit.io import (
    dumps,
    elements_from_dict,
    encode_vector,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_json,
    load_schema,
    parse_vector,
    trajectory_csv,
)
from gitkit.lie_core import torus

SCHEMAS = ["instance", "elements", "verdict", "flow_summary", "polytope", "weight", "constants", "geom", "kempf", "verify"]

CANON = {"group": {"preset": "torus", "weights": [[1], [2]]}, "hbar": 1.0, "vector": [[1, 0], [1, 0]]}


def test_vector_entries():
    assert np.allclose(parse_vector([1, [0, 2], 3.5]), [1, 2j, 3.5])
    for bad in ([], "x", [[1, 2, 3]], [True]):
        with pytest.raises(ParseError):
            parse_vector(bad)
    with pytest.raises(ValidationError):
        parse_vector([[math.inf, 0]])


def test_instance_round_trip(tmp_path):
    inst = instance_from_dict(CANON)
    assert inst.group.d == 1 and inst.hbar == 1.0
    assert np.allclose(inst.point.v, [1 / math.sqrt(2)] * 2)
    doc = instance_to_dict(inst.group, inst.point)
    jsonschema.validate(doc, load_schema("instance"))
    path = tmp_path / "x.json"
    path.write_text(json.dumps(doc))
    again = load_instance(path, hbar=2.0)
    assert again.hbar == 2.0
    assert np.allclose(again.point.v, inst.point.v)
    assert np.allclose(again.group.basis, inst.group.basis)


@pytest.mark.parametrize(
    "patch, err",
    [
        ({"vector": [[1, 0]]}, ValidationError),
        ({"vector": [[0, 0], [0, 0]]}, ValidationError),
        ({"hbar": -1}, ValidationError),
        ({"hbar": True}, ValidationError),
        ({"group": {"preset": "torus"}}, ParseError),
        ({"group": []}, ParseError),
        ({"group": {"preset": "custom", "basis": [[[1, 0], [0, 0]]]}}, NotSkewHermitian),
    ],
)
def test_instance_rejects(patch, err):
    with pytest.raises(err):
        instance_from_dict({**CANON, **patch})
    with pytest.raises(ParseError):
        instance_from_dict({"vector": CANON["vector"]})


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError, match="invalid JSON"):
        load_json(bad)
    with pytest.raises(ParseError, match="cannot read"):
        load_json(tmp_path / "missing.json")


def test_elements():
    group, elems = elements_from_dict({"group": {"preset": "full_unitary", "n": 2}, "elements": [[[0, 1], [1, 0]]]})
    assert len(elems) == 1 and group.n == 2
    with pytest.raises(ValidationError):
        elements_from_dict({"group": {"preset": "full_unitary", "n": 3}, "elements": [[[0, 1], [1, 0]]]})
    with pytest.raises(ParseError):
        elements_from_dict({"group": {"preset": "full_unitary", "n": 2}, "elements": []})


def test_dumps_is_deterministic_and_finite():
    text = dumps({"b": 0.1, "a": [math.inf, -math.nan, 1e-300]})
    assert text == '{"a": [null, null, 1e-300], "b": 0.1}'
    assert json.loads(text)["b"] == 0.1


def test_encode_vector_round_trip(rng):
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert np.array_equal(parse_vector(encode_vector(v)), v)


def test_trajectory_csv():
    inst = instance_from_dict(CANON)
    traj = integrate_flow(inst.point, inst.group)
    rows = trajectory_csv(traj, every=10).strip().split("\n")
    assert rows[0] == "t,re_v0,im_v0,re_v1,im_v1,mu_norm,grad_norm,xi0"
    assert len(rows) - 1 == math.ceil(len(traj.times) / 10)
    assert float(rows[1].split(",")[0]) == 0.0
    with pytest.raises(ValidationError):
        trajectory_csv(traj, every=0)


@pytest.mark.parametrize("name", SCHEMAS)
def test_shipped_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(load_schema(name))


def test_unknown_schema():
    with pytest.raises(ValidationError):
        load_schema("nope")


def test_group_json_round_trip():
    group = torus([[1, 0], [0, 1], [-1, -1]])
    again = instance_from_dict({"group": group.to_json(), "vector": [1, 1, 1]}).group
    assert np.allclose(again.basis, group.basis)
