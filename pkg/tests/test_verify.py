import jsonschema
import numpy as np
import pytest

from gitkit import projective, verify
from gitkit.errors import Singular, ValidationError
from gitkit.io import dumps, load_schema
from gitkit.verify import CHECKS, Check, canonical_unstable, run_suite

FAST = ["polar_roundtrip", "appendix_constants", "weight_quantization", "hull_image", "cat0_geometry"]


def test_check_names_are_unique():
    names = [c.name for c in CHECKS]
    assert len(names) == len(set(names))
    assert {c.area for c in CHECKS} == {
        "lie_core", "toral", "projective", "flow", "stability", "torus_geometry", "symmetric_space",
    }


def test_fast_checks_pass_and_match_schema():
    report = run_suite(samples=20, seed=3, only=FAST)
    assert report["passed"]
    assert [c["name"] for c in report["checks"]] == FAST
    jsonschema.validate(report, load_schema("verify"))


def test_reports_are_deterministic():
    a = dumps(run_suite(samples=8, seed=11, only=FAST))
    b = dumps(run_suite(samples=8, seed=11, only=FAST))
    assert a == b
    c = dumps(run_suite(samples=8, seed=12, only=FAST))
    assert c != a


def test_timing_is_opt_in():
    report = run_suite(samples=5, only=["polar_roundtrip"], timing=True)
    assert report["checks"][0]["seconds"] >= 0
    assert "seconds" not in run_suite(samples=5, only=["polar_roundtrip"])["checks"][0]


def test_unknown_check_rejected():
    with pytest.raises(ValidationError):
        run_suite(only=["no_such_check"])


def test_exceptions_become_failures(monkeypatch):
    def boom(samples, seed):
        raise Singular("synthetic")

    patched = [Check(c.name, boom, c.area) if c.name == "polar_roundtrip" else c for c in CHECKS]
    monkeypatch.setattr(verify, "CHECKS", patched)
    report = run_suite(samples=5, only=["polar_roundtrip"])
    assert not report["passed"]
    assert "Singular" in report["checks"][0]["details"]["error"]


def test_flipped_moment_map_fails_moment_weight_check(monkeypatch):
    assert run_suite(samples=40, seed=0, only=["moment_weight"])["passed"]
    original = projective.moment_map
    monkeypatch.setattr(projective, "moment_map", lambda x, g: -original(x, g))
    report = run_suite(samples=40, seed=0, only=["moment_weight"])
    assert not report["passed"]
    assert report["checks"][0]["violations"] > 0


def test_instance_generators_are_seeded():
    g1, x1 = verify.torus_instance(np.random.default_rng(4))
    g2, x2 = verify.torus_instance(np.random.default_rng(4))
    assert np.array_equal(g1.basis, g2.basis) and np.array_equal(x1.v, x2.v)
    group, x, m = verify.unstable_torus_instance(np.random.default_rng(5))
    assert m > 1e-3
    group, x = canonical_unstable()
    assert group.n == 2 and np.allclose(np.abs(x.v), 2**-0.5)
