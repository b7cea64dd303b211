import math

import numpy as np
import pytest
import scipy.optimize as sopt
from hypothesis import given, settings
from hypothesis import strategies as st

from gitkit.errors import EmptySupport, UnsupportedPreset
from gitkit.lie_core import AlgebraVector, full_unitary, random_complex, torus
from gitkit.projective import ProjectivePoint, act, moment_map, mu_weight, random_point
from gitkit.torus_geometry import (
    exact_weight,
    extract_weights,
    hull_distance_check,
    lattice_certificate,
    min_norm_point,
    moment_polytope,
    nearest_point,
    torus_classify,
    torus_f0,
)
from gitkit.verify import canonical_unstable, torus_instance

NEAREST_TOL = 1e-7
HULL_TOL = 1e-9
WEIGHT_TOL = 1e-12

seed_st = st.integers(0, 2**32 - 1)


def _qp_oracle(points):
    """Nearest hull point by SLSQP over the simplex of coefficients."""
    k = len(points)
    res = sopt.minimize(
        lambda c: float(np.sum((c @ points) ** 2)),
        np.full(k, 1.0 / k),
        jac=lambda c: 2 * points @ (c @ points),
        bounds=[(0, 1)] * k,
        constraints=[{"type": "eq", "fun": lambda c: c.sum() - 1.0}],
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 500},
    )
    return res.x @ points


def test_canonical_polytope():
    group, x = canonical_unstable()
    poly = moment_polytope(extract_weights(group, x))
    assert poly.contains_zero == "outside"
    assert poly.exact
    assert poly.m == pytest.approx(1 / math.sqrt(5), abs=1e-14)
    assert np.allclose(sorted(np.abs(poly.vertices[:, 0])), [1 / math.sqrt(5), 2 / math.sqrt(5)])
    assert nearest_point(poly)[1] == poly.m
    doc = poly.to_json()
    assert set(doc) == {"vertices", "contains_zero", "nearest", "m"}


def test_weights_follow_the_torus_basis():
    ws = extract_weights(torus([[1], [-1]]), ProjectivePoint(np.array([1.0, 0.0])))
    assert np.allclose(ws.lambdas[:, 0], [-1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert list(ws.support) == [True, False]
    with pytest.raises(UnsupportedPreset):
        extract_weights(full_unitary(2), ProjectivePoint(np.ones(2)))


def test_polytope_locations():
    group = torus([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1]])
    cases = {
        (1, 1, 1, 1, 0): "relative_interior",
        (1, 1, 0, 0, 0): "relative_interior",
        (1, 1, 1, 0, 0): "boundary",
        (1, 0, 1, 0, 1): "outside",
    }
    for v, where in cases.items():
        poly = moment_polytope(extract_weights(group, ProjectivePoint(np.array(v, dtype=float))))
        assert poly.contains_zero == where, v
    poly = moment_polytope(extract_weights(group, ProjectivePoint(np.ones(5))))
    assert poly.affine_rank == 2
    assert len(poly.vertices) == 5
    inner = moment_polytope(extract_weights(group, ProjectivePoint(np.array([1.0, 1, 1, 1, 0]))))
    assert len(inner.vertices) == 4


def test_empty_support_raises():
    group = torus([[1], [-1]])
    ws = extract_weights(group, ProjectivePoint(np.array([1.0, 0.0])), tol_support=2.0)
    with pytest.raises(EmptySupport):
        moment_polytope(ws)


def test_min_norm_point_examples():
    x, c, gap = min_norm_point(np.array([[1.0, 1.0], [1.0, -1.0]]))
    assert np.allclose(x, [1.0, 0.0]) and np.allclose(c, [0.5, 0.5]) and gap <= 1e-12
    x, _, _ = min_norm_point(np.array([[2.0, 0.0], [3.0, 1.0]]))
    assert np.allclose(x, [2.0, 0.0])


@given(seed=seed_st, k=st.integers(1, 8), d=st.integers(1, 4))
def test_min_norm_point_matches_qp(seed, k, d):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((k, d)) + rng.uniform(-2, 2, d)
    x, coeffs, gap = min_norm_point(pts)
    assert np.all(coeffs >= -1e-14) and abs(coeffs.sum() - 1) <= 1e-12
    assert np.allclose(coeffs @ pts, x, atol=1e-12)
    assert np.linalg.norm(x - _qp_oracle(pts)) <= NEAREST_TOL
    # first-order optimality: every point lies on the far side of x
    assert np.min(pts @ x) - x @ x >= -1e-10


@given(seed=seed_st)
def test_hull_location_matches_linprog(seed):
    rng = np.random.default_rng(seed)
    group, x = torus_instance(rng, 7, 3)
    poly = moment_polytope(extract_weights(group, x))
    pts = poly.points
    res = sopt.linprog(
        np.zeros(len(pts)), A_eq=np.vstack([pts.T, np.ones(len(pts))]), b_eq=np.append(np.zeros(pts.shape[1]), 1.0),
        bounds=[(0, None)] * len(pts), method="highs",
    )
    assert (poly.contains_zero != "outside") == (res.status == 0)
    if poly.contains_zero == "outside":
        assert poly.m > 0
        probes = rng.dirichlet(np.ones(len(pts)), size=50) @ pts
        assert min(hull_distance_check(poly, p) for p in probes) >= -HULL_TOL
    else:
        assert np.allclose(poly.zero_weights @ pts, 0, atol=1e-12)


@given(seed=seed_st)
def test_exact_weight_matches_projective_weight(seed):
    rng = np.random.default_rng(seed)
    group, x = torus_instance(rng, 6, 3)
    ws = extract_weights(group, x)
    xi = rng.standard_normal(group.d)
    assert abs(exact_weight(ws, xi) - mu_weight(x, AlgebraVector(group, xi)).weight) <= WEIGHT_TOL
    assert torus_f0(ws, xi) == pytest.approx(-exact_weight(ws, -xi), abs=WEIGHT_TOL)


@settings(max_examples=25)
@given(seed=seed_st)
def test_f0_maximum_is_m(seed):
    rng = np.random.default_rng(seed)
    group, x = torus_instance(rng, 6, 2, boundary_prob=0.6)
    ws = extract_weights(group, x)
    poly = moment_polytope(ws)
    if poly.contains_zero != "outside":
        return
    best = -poly.nearest / poly.m
    assert torus_f0(ws, -best) == pytest.approx(poly.m, abs=1e-9)
    for u in rng.standard_normal((200, group.d)):
        assert torus_f0(ws, u / np.linalg.norm(u)) <= poly.m + 1e-9


@settings(max_examples=20)
@given(seed=seed_st)
def test_zero_point_has_vanishing_moment(seed):
    rng = np.random.default_rng(seed)
    group, x = torus_instance(rng, 6, 2)
    verdict = torus_classify(group, x)
    if verdict.klass == "unstable":
        assert verdict.m_estimate > 0
        assert -mu_weight(x, verdict.xi_unit).weight == pytest.approx(verdict.m_estimate, abs=1e-9)
    else:
        assert np.linalg.norm(moment_map(verdict.x_zero, group).coords) <= 1e-9


@settings(max_examples=20)
@given(seed=seed_st)
def test_moment_image_stays_in_polytope(seed):
    rng = np.random.default_rng(seed)
    group, x = torus_instance(rng, 6, 2)
    poly = moment_polytope(extract_weights(group, x))
    for _ in range(10):
        mu = moment_map(act(random_complex(group, rng, 2.0), x), group).coords
        if poly.contains_zero == "outside":
            assert hull_distance_check(poly, mu) >= -HULL_TOL


def test_lattice_certificate_is_close_to_m():
    group, x = canonical_unstable()
    xi, ratio = lattice_certificate(group, x)
    assert ratio >= 1 / math.sqrt(5) - 1e-3
    assert -mu_weight(x, xi).weight / xi.norm() == pytest.approx(ratio, abs=1e-12)
    group = torus([[1, 0], [0, 1], [-2, 1]])
    x = ProjectivePoint(np.array([1.0, 1.0, 0.0]))
    xi, ratio = lattice_certificate(group, x)
    assert ratio >= moment_polytope(extract_weights(group, x)).m - 1e-3
