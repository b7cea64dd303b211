import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gitkit.errors import ConsistencyLost, NotConverged, NotUnstable, ValidationError
from gitkit.flow import (
    FlowOptions,
    chart_phi,
    chart_velocity,
    dominant_weight,
    escape_index,
    flow_limit,
    integrate_flow,
    lojasiewicz_fit,
)
from gitkit.lie_core import full_unitary, special_unitary, spin_representation, torus
from gitkit.projective import ProjectivePoint, moment_map, mu_weight, projective_distance, random_point
from gitkit.torus_geometry import extract_weights, moment_polytope, nearest_point
from gitkit.verify import canonical_unstable, unstable_torus_instance

MONO_TOL = 1e-12
CONJ_TOL = 1e-9
KEMPF_TOL = 1e-4
PHI_REL = 1e-4

SQRT5 = math.sqrt(5.0)


def _exact_m(group, x):
    return nearest_point(moment_polytope(extract_weights(group, x)))[1]


def test_options_validation():
    with pytest.raises(ValidationError):
        FlowOptions(t_max=0)
    with pytest.raises(ValidationError):
        FlowOptions(tol_grad=-1.0)
    with pytest.raises(ValidationError):
        FlowOptions(max_steps=0)
    with pytest.raises(ValidationError):
        integrate_flow(ProjectivePoint(np.ones(3)), torus([[1], [-1]]))


def test_canonical_unstable_flow():
    group, x = canonical_unstable()
    traj = integrate_flow(x, group)
    assert traj.converged
    assert traj.mu_norms[-1] == pytest.approx(1 / SQRT5, abs=1e-10)
    xi, unit = dominant_weight(traj)
    assert xi.norm() == pytest.approx(1 / SQRT5, abs=KEMPF_TOL)
    assert mu_weight(x, xi).weight == pytest.approx(-0.2, abs=KEMPF_TOL)
    assert unit.norm() == pytest.approx(1.0)
    assert escape_index(traj) is None


def test_monotone_observables_and_energy_balance():
    group, x = canonical_unstable()
    traj = integrate_flow(x, group)
    assert np.max(np.diff(traj.mu_norms)) <= MONO_TOL
    assert np.max(np.diff(traj.phi)) <= MONO_TOL
    # Phi(t) - Phi(0) = -int |mu|^2; trapezoid rule on the recorded samples
    integral = np.trapezoid(traj.mu_norms**2, traj.times)
    assert traj.phi[-1] - traj.phi[0] == pytest.approx(-integral, rel=PHI_REL)


def test_polystable_start_does_not_move():
    group = torus([[1], [-1]])
    traj = integrate_flow(ProjectivePoint(np.array([1.0, 1.0])), group)
    assert traj.converged and len(traj.times) == 1
    assert flow_limit(traj)[1] <= 1e-15
    with pytest.raises(NotUnstable):
        dominant_weight(traj)
    assert lojasiewicz_fit(traj).flag == "constant"


def test_transitive_action_is_already_critical():
    x = ProjectivePoint(np.array([1.0, 2.0j]))
    traj = integrate_flow(x, full_unitary(2))
    assert traj.converged and len(traj.times) == 1
    assert traj.mu_norms[0] == pytest.approx(1.0)
    traj = integrate_flow(x, special_unitary(2))
    assert traj.mu_norms[0] == pytest.approx(math.sqrt(0.5))


def test_not_converged_limit():
    group, x = canonical_unstable()
    traj = integrate_flow(x, group, t_max=0.5)
    assert not traj.converged
    with pytest.raises(NotConverged):
        flow_limit(traj)


def test_boundary_semistable_decays_slowly():
    group = torus([[0], [1]])
    traj = integrate_flow(ProjectivePoint(np.array([1.0, 1.0])), group)
    assert traj.converged
    assert traj.t_end > 1e5
    assert traj.mu_norms[-1] < 1e-6
    assert traj.g_path[-1] is None or np.all(np.isfinite(traj.g_path[-1]))
    fit = lojasiewicz_fit(traj)
    assert fit.epsilon > 0 and math.isfinite(fit.residual)


@pytest.mark.parametrize("two_j", [1, 2, 3])
def test_nonabelian_conjugacy(two_j, rng):
    group = spin_representation(two_j)
    x = random_point(group.n, rng)
    traj = integrate_flow(x, group)
    assert traj.converged
    for k in sorted({0, len(traj.times) // 2, len(traj.times) - 1}):
        g = traj.g_at(k).matrix
        assert projective_distance(np.linalg.solve(g, x.v), traj.points[k].v) <= CONJ_TOL
        u = traj.u_path[k]
        assert np.linalg.norm(u.conj().T @ u - np.eye(group.n)) <= 1e-10
    assert np.all(np.diff(traj.mu_norms) <= MONO_TOL)


def test_g_outside_float_range_raises():
    group = torus([[0], [1]])
    traj = integrate_flow(ProjectivePoint(np.array([1.0, 1.0])), group)
    bad = [k for k, g in enumerate(traj.g_path) if g is None]
    if bad:
        with pytest.raises(ConsistencyLost):
            traj.g_at(bad[0])
    factors = traj.factors_at(len(traj.times) - 1)
    assert all(np.all(np.isfinite(f)) for f in factors)


def test_saddle_escape_is_certified():
    # a binary quartic with a triple root: the flow approaches the critical
    # orbit of x^3 y, and rounding pushes it off toward zero
    group = spin_representation(4)
    v = np.zeros(5, dtype=complex)
    v[:2] = [1.0, 0.3]
    x = ProjectivePoint(v)
    traj = integrate_flow(x, group)
    xi, unit = dominant_weight(traj)
    m = math.sqrt(0.1)
    assert xi.norm() == pytest.approx(m, abs=KEMPF_TOL)
    assert mu_weight(x, unit).weight == pytest.approx(-m, abs=KEMPF_TOL)


def test_chart_helpers_agree_with_trajectory(rng):
    group = special_unitary(2)
    x = random_point(2, rng)
    assert chart_phi(x, group, np.zeros(3)) == pytest.approx(0.0, abs=1e-15)
    vel = chart_velocity(x, group, np.zeros(3))
    # at the identity the chart velocity is the moment map up to sign
    assert np.allclose(np.abs(vel), np.abs(moment_map(x, group).coords), atol=1e-12)


@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1))
def test_kempf_direction_on_random_unstable_tori(seed):
    rng = np.random.default_rng(seed)
    group, x, m = unstable_torus_instance(rng, n_max=6, d_max=2)
    assert m == pytest.approx(_exact_m(group, x), abs=1e-12)
    traj = integrate_flow(x, group)
    xi, _ = dominant_weight(traj)
    assert abs(xi.norm() - m) <= KEMPF_TOL
    assert abs(mu_weight(x, xi).weight + m * m) <= KEMPF_TOL
