"""Seeded verification suite: one check per invariant of the library.

Every check has the signature ``check(samples=None, seed=0) -> AuditReport``;
``samples`` overrides the default sample count.  Failures are reported as
data: a check never raises for a violated inequality.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.optimize as sopt
from scipy.integrate import solve_ivp

from . import projective, symmetric_space as ss, toral
from .errors import GitkitError, NotUnstable, SupportAmbiguous, ValidationError
from .flow import FlowOptions, chart_phi, chart_velocity, dominant_weight, integrate_flow
from .lie_core import (
    AlgebraVector,
    CompactGroup,
    ComplexAlgebraVector,
    GroupPoint,
    adjoint,
    exp_i,
    expm_skew,
    full_unitary,
    lattice_enumerate,
    polar_decompose,
    random_algebra,
    random_complex,
    random_unit,
    random_unitary,
    spin_representation,
    torus,
)
from .projective import ProjectivePoint, act, random_point
from .stability import (
    AuditReport,
    classify,
    kempf_ness_ray_profile,
    kempf_uniqueness_audit,
    limit_point,
    moment_weight_audit,
    ness_uniqueness_audit,
    orbit_distance_G,
)
from .torus_geometry import (
    extract_weights,
    lattice_certificate,
    moment_polytope,
    torus_classify,
    torus_f0,
)

# ---------------------------------------------------------------------------
# instance generators


def preset_groups() -> dict[str, CompactGroup]:
    """The groups the suite samples from."""
    return {
        "u1_in_U2": torus([[1], [-1]]),
        "torus2_on_P2": torus([[1, 0], [0, 1], [-1, -1]]),
        "U2": full_unitary(2),
        "su2_spin1": spin_representation(2),
    }


def random_torus(rng: np.random.Generator, n_max: int = 8, d_max: int = 3, entry: int = 2) -> CompactGroup:
    """Torus with random integer weights, ``2 <= n <= n_max``, ``d <= d_max``."""
    n = int(rng.integers(2, n_max + 1))
    d = int(rng.integers(1, min(d_max, n - 1) + 1))
    while True:
        w = rng.integers(-entry, entry + 1, size=(n, d))
        if np.linalg.matrix_rank(w.astype(float)) == d:
            return torus(w.tolist())


def torus_instance(
    rng: np.random.Generator, n_max: int = 8, d_max: int = 3, boundary_prob: float = 0.3
) -> tuple[CompactGroup, ProjectivePoint]:
    """Random torus and point; with probability ``boundary_prob`` the point
    is supported on a random coordinate subset."""
    group = random_torus(rng, n_max, d_max)
    support = None
    if rng.uniform() < boundary_prob:
        size = int(rng.integers(1, group.n + 1))
        support = sorted(int(j) for j in rng.choice(group.n, size=size, replace=False))
    return group, random_point(group.n, rng, support=support)


def unstable_torus_instance(
    rng: np.random.Generator, n_max: int = 6, d_max: int = 2
) -> tuple[CompactGroup, ProjectivePoint, float]:
    """Random torus instance whose exact classification is unstable, with ``m``."""
    while True:
        group, x = torus_instance(rng, n_max, d_max, boundary_prob=0.5)
        poly = moment_polytope(extract_weights(group, x))
        if poly.contains_zero == "outside" and poly.m > 1e-3:
            return group, x, poly.m


def canonical_unstable() -> tuple[CompactGroup, ProjectivePoint]:
    """Weights ``{1, 2}`` on ``C^2`` with ``v = (1, 1)/sqrt(2)``."""
    return torus([[1], [2]]), ProjectivePoint(np.array([1.0, 1.0]) / math.sqrt(2.0))


def _report(name: str, errors, tols, details: dict | None = None) -> AuditReport:
    errors = np.atleast_1d(np.asarray(errors, dtype=float))
    tols = np.broadcast_to(np.asarray(tols, dtype=float), errors.shape)
    slack = tols - errors
    slack = np.where(np.isnan(slack), -np.inf, slack)
    worst = float(np.min(slack)) if slack.size else 0.0
    out = dict(details or {})
    if errors.size:
        out.setdefault("max_error", float(np.nanmax(errors)))
    return AuditReport(name, int(errors.size), int(np.sum(slack < 0)), worst, out)


def _quiet(fn, *args, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportAmbiguous)
        return fn(*args, **kw)


def _weight(x, zeta, **kw) -> float:
    return _quiet(projective.mu_weight, x, zeta, **kw).weight


def _tangent(x: ProjectivePoint, rng: np.random.Generator) -> np.ndarray:
    w = rng.standard_normal(x.n) + 1j * rng.standard_normal(x.n)
    w = projective.tangent_project(x, w)
    return w / np.linalg.norm(w)


def _group_cycle(names: list[str], k: int) -> str:
    return names[k % len(names)]


# ---------------------------------------------------------------------------
# Lie algebra layer


def check_polar_roundtrip(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``polar_decompose(exp(i eta) u)`` returns ``(eta, u)`` for ``|eta| <= 5``."""
    n = samples or 1000
    rng = np.random.default_rng(seed)
    groups = [full_unitary(3), *preset_groups().values()]
    errs = []
    for k in range(n):
        group = groups[k % len(groups)]
        eta = random_unit(group, rng) * (5.0 * rng.uniform())
        u = random_unitary(group, rng)
        e2, u2 = polar_decompose(exp_i(eta) @ u, group)
        errs.append(max(np.linalg.norm(e2.coords - eta.coords), np.linalg.norm(u2 - u)))
    return _report("polar_roundtrip", errs, 1e-8)


def check_adjoint_norms(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``|Re|^2 - |Im|^2`` and ``<Re, Im>`` are invariant under ``Ad(G^c)``;
    both norms are invariant under ``Ad(G)``."""
    n = samples or 500
    rng = np.random.default_rng(seed)
    groups = [full_unitary(3), *preset_groups().values()]
    errs, tols = [], []
    for k in range(n):
        group = groups[k % len(groups)]
        z = ComplexAlgebraVector(random_algebra(group, rng), random_algebra(group, rng))
        g = random_complex(group, rng, 1.0)
        c = adjoint(g, z)
        lhs = c.re.norm() ** 2 - c.im.norm() ** 2
        rhs = z.re.norm() ** 2 - z.im.norm() ** 2
        scale = max(1.0, z.norm() ** 2)
        errs += [abs(lhs - rhs) / scale, abs(c.re.inner(c.im) - z.re.inner(z.im)) / scale]
        tols += [1e-8, 1e-8]
        u = random_unitary(group, rng)
        cu = adjoint(u, z)
        errs += [abs(cu.re.norm() - z.re.norm()), abs(cu.im.norm() - z.im.norm())]
        tols += [1e-10, 1e-10]
    return _report("adjoint_norms", errs, tols)


def check_lattice_exp(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Every enumerated lattice element exponentiates to the identity."""
    n = samples or 20
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(n):
        group = random_torus(rng, 5, 2)
        r = 2.5 * max(g.norm() for g in group.lattice_generators())
        for xi in lattice_enumerate(group, r)[:50]:
            errs.append(np.linalg.norm(expm_skew(xi.matrix) - np.eye(group.n)))
    return _report("lattice_exp", errs, 1e-8)


# ---------------------------------------------------------------------------
# toral layer


def check_appendix_constants(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Defining systems of the alpha and beta constants up to ``N = 64``."""
    errs = []
    for m in range(1, 7):
        c = toral.alpha_constants(2**m)
        errs.append(toral.alpha_system_residual(c.values))
    for big_n in range(1, 65):
        c = toral.beta_constants(big_n)
        errs.append(toral.beta_system_residual(c.values))
    exact = toral.alpha_constants(2).values
    errs.append(0.0 if list(exact) == [0.0, 0.5, 0.0, -0.5] else 1.0)
    return _report("appendix_constants", errs, 1e-10)


def _parabolic_pair(group: CompactGroup, rng: np.random.Generator):
    """A compact ``xi`` with repeated eigenvalues and a random parabolic ``p``."""
    n = group.n
    distinct = int(rng.integers(1, n + 1))
    levels = np.sort(rng.standard_normal(distinct) * 2)
    lam = np.sort(np.concatenate([levels, rng.choice(levels, n - distinct)]))
    q = random_unitary(group, rng)
    xi = AlgebraVector.from_matrix(q @ np.diag(-1j * lam) @ q.conj().T, group)
    upper = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 1)
    same = np.abs(lam[:, None] - lam[None, :]) < 1e-12
    block = np.where(same, rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 0)
    p_e = 0.5 * (upper + block) + 2.0 * np.eye(n)
    return xi, GroupPoint(group, q @ p_e @ q.conj().T)


def check_mumford(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``mumford_reduce(p xi p^{-1}) = xi`` for parabolic ``p``, and the weight
    is preserved."""
    n = samples or 200
    rng = np.random.default_rng(seed)
    errs, tols = [], []
    for k in range(n):
        group = full_unitary(int(rng.integers(2, 5)))
        xi, p = _parabolic_pair(group, rng)
        zeta = adjoint(p, xi.complexify())
        red, _ = toral.mumford_reduce(zeta)
        errs.append(np.linalg.norm(red.coords - xi.coords) / max(1.0, xi.norm()))
        tols.append(1e-8)
        x = random_point(group.n, rng)
        errs.append(abs(_weight(x, zeta) - _weight(x, red)))
        tols.append(1e-6)
    return _report("mumford_reduce", errs, tols)


def check_borel(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``g = p u`` with ``p`` parabolic, in U(4)."""
    n = samples or 1000
    rng = np.random.default_rng(seed)
    group = full_unitary(4)
    errs, tols = [], []
    for _ in range(n):
        xi = random_algebra(group, rng)
        g = random_complex(group, rng, 2.0)
        p, u = toral.borel_decompose(xi, g)
        errs.append(np.linalg.norm(p.matrix @ u.matrix - g.matrix) / np.linalg.norm(g.matrix))
        tols.append(1e-9)
        member, _ = toral.parabolic_limit(xi.complexify(), p)
        errs.append(0.0 if member else 1.0)
        tols.append(0.5)
    return _report("borel_decompose", errs, tols)


# ---------------------------------------------------------------------------
# projective layer


def check_moment_identity(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Derivative of ``<mu, xi>`` along ``xhat`` equals ``omega(L xi, xhat)``."""
    n = samples or 500
    rng = np.random.default_rng(seed)
    groups = list(preset_groups().values()) + [full_unitary(3)]
    errs = []
    h = 1e-5
    for k in range(n):
        group = groups[k % len(groups)]
        x = random_point(group.n, rng, hbar=float(rng.uniform(0.5, 2.0)))
        xi = random_unit(group, rng)
        xh = _tangent(x, rng)
        val = lambda s: projective.moment_map(projective.geodesic(x, xh, s), group).inner(xi)
        fd = (val(h) - val(-h)) / (2 * h)
        exact = projective.omega(x, projective.infinitesimal_action(x, xi).rep, xh)
        errs.append(abs(fd - exact) / max(abs(exact), x.hbar))
    return _report("moment_identity", errs, 1e-5)


def check_gradient_identity(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Derivative of ``f`` along a great circle equals ``g(grad f, xhat)``."""
    n = samples or 500
    rng = np.random.default_rng(seed)
    groups = list(preset_groups().values()) + [full_unitary(3)]
    errs = []
    h = 1e-5
    for k in range(n):
        group = groups[k % len(groups)]
        x = random_point(group.n, rng, hbar=float(rng.uniform(0.5, 2.0)))
        xh = _tangent(x, rng)
        val = lambda s: projective.f_value(projective.geodesic(x, xh, s), group)
        fd = (val(h) - val(-h)) / (2 * h)
        exact = projective.metric(x, projective.grad_f(x, group).rep, xh)
        errs.append(abs(fd - exact) / max(abs(exact), x.hbar**2))
    return _report("gradient_identity", errs, 1e-5)


def check_moment_monotone(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``t -> <mu(exp(i t eta) x), eta>`` is nondecreasing."""
    n = samples or 200
    rng = np.random.default_rng(seed)
    groups = list(preset_groups().values())
    errs = []
    ts = np.linspace(-6, 6, 61)
    for k in range(n):
        group = groups[k % len(groups)]
        x = random_point(group.n, rng)
        eta = random_unit(group, rng)
        dec = toral.toral_decomposition(eta.complexify())
        vals = [projective.moment_map(projective.flow_along(x, dec, t), group).inner(eta) for t in ts]
        errs.append(max(0.0, -float(np.min(np.diff(vals)))))
    return _report("moment_monotone", errs, 1e-12)


def _critical_points(rng: np.random.Generator, count: int) -> list[tuple[CompactGroup, ProjectivePoint]]:
    """Critical points of ``|mu|^2``: rotated weight vectors and zeros of
    the moment map."""
    out = []
    spin = [spin_representation(k) for k in (2, 3, 4)]
    while len(out) < count:
        kind = len(out) % 3
        if kind == 0:
            group = spin[int(rng.integers(len(spin)))]
            e = np.zeros(group.n, complex)
            e[int(rng.integers(group.n))] = 1.0
            x = act(random_unitary(group, rng), ProjectivePoint(e, float(rng.uniform(0.5, 2))))
        elif kind == 1:
            group = random_torus(rng, 6, 2)
            e = np.zeros(group.n, complex)
            e[int(rng.integers(group.n))] = 1.0
            x = act(random_unitary(group, rng), ProjectivePoint(e))
        else:
            group, x0 = torus_instance(rng, 6, 2, boundary_prob=0.0)
            verdict = torus_classify(group, x0)
            if verdict.klass == "unstable":
                continue
            x = verdict.x_zero
        if projective.grad_norm(x, group) <= 1e-10:
            out.append((group, x))
    return out


def check_hessian(samples: int | None = None, seed: int = 0) -> AuditReport:
    """At critical points the second derivative of ``f`` along
    ``exp(i t eta) x`` equals ``|L^* L eta|^2 - |[mu, eta]|^2``."""
    n = samples or 500
    rng = np.random.default_rng(seed)
    errs = []
    h = 1e-4
    for group, x in _critical_points(rng, n):
        eta = random_unit(group, rng)
        dec = toral.toral_decomposition(eta.complexify())
        val = lambda t: projective.f_value(projective.flow_along(x, dec, t), group)
        fd = (val(h) - 2 * val(0.0) + val(-h)) / (h * h)
        exact = projective.hessian_at_critical(x, eta, group)
        errs.append(abs(fd - exact) / max(abs(exact), x.hbar**2))
    return _report("hessian_at_critical", errs, 1e-5)


def check_energy_identity(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``int |d/dt exp(i t xi) x|^2 dt = w(x, xi) + w(x, -xi)``."""
    n = samples or 100
    rng = np.random.default_rng(seed)
    groups = list(preset_groups().values())
    errs = []
    for k in range(n):
        group = groups[k % len(groups)]
        x = random_point(group.n, rng)
        xi = random_unit(group, rng)
        energy = projective.energy_along_ray(x, xi, group)
        target = _weight(x, xi) + _weight(x, -xi)
        errs.append(abs(energy - target) / max(abs(target), 1e-12))
    return _report("energy_identity", errs, 1e-4)


def check_weight_conjugation(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``w(g x, g zeta g^{-1}) = w(x, zeta)`` for ``g`` in ``G^c``."""
    n = samples or 1000
    rng = np.random.default_rng(seed)
    groups = list(preset_groups().values()) + [full_unitary(3)]
    errs = []
    for k in range(n):
        group = groups[k % len(groups)]
        x = random_point(group.n, rng)
        xi = random_unit(group, rng)
        g = random_complex(group, rng, 1.0)
        a = _weight(x, xi)
        b = _weight(act(g, x), adjoint(g, xi.complexify()), group=group)
        errs.append(abs(a - b) / max(1.0, abs(a)))
    return _report("weight_conjugation", errs, 1e-8)


def check_weight_exact_vs_simulated(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Exact weight against ``<mu(exp(i T xi) x), xi>`` at ``T = 40 / gap``."""
    n = samples or 500
    rng = np.random.default_rng(seed)
    groups = list(preset_groups().values())
    errs = []
    for k in range(n):
        group = groups[k % len(groups)]
        x = random_point(group.n, rng)
        xi = random_unit(group, rng)
        errs.append(abs(_weight(x, xi) - _weight(x, xi, mode="simulated")))
    return _report("weight_exact_vs_simulated", errs, 1e-6)


def check_weight_quantization(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``w(x, xi) / (2 pi hbar)`` is an integer for lattice ``xi``."""
    n = samples or 100
    rng = np.random.default_rng(seed)
    errs = []
    while len(errs) < n:
        group, x = torus_instance(rng, 6, 2, boundary_prob=0.3)
        x = ProjectivePoint(x.v, float(rng.uniform(0.5, 2.0)))
        lattice = lattice_enumerate(group, 2.5 * max(g.norm() for g in group.lattice_generators()))
        xi = lattice[int(rng.integers(len(lattice)))]
        q = _weight(x, xi) / (2 * math.pi * x.hbar)
        errs.append(abs(q - round(q)))
    return _report("weight_quantization", errs, 1e-8)


# ---------------------------------------------------------------------------
# Kempf-Ness function


def check_kempf_ness(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Cocycle identity, geodesic convexity, asymptotic slope and the Hessian
    formula of the Kempf-Ness function."""
    n = samples or 200
    rng = np.random.default_rng(seed)
    groups = list(preset_groups().values()) + [full_unitary(3)]
    cocycle, convex, slope, hess = [], [], [], []
    for k in range(n):
        group = groups[k % len(groups)]
        x = random_point(group.n, rng, hbar=float(rng.uniform(0.5, 2.0)))
        g = random_complex(group, rng, 1.5)
        h = random_complex(group, rng, 1.5)
        lhs = projective.kempf_ness_value(x, g.matrix @ h.matrix)
        rhs = projective.kempf_ness_value(x, g) + projective.kempf_ness_value(act(g.inv(), x), h)
        cocycle.append(abs(lhs - rhs))
        p = ss.CosetPoint(random_algebra(group, rng, 1.0))
        q = ss.CosetPoint(random_algebra(group, rng, 1.0))
        s = np.linspace(0, 1, 21)
        phi = np.array([projective.kempf_ness_value(x, ss.geodesic_point(p, q, t).rep) for t in s])
        convex.append(max(0.0, -float(np.min(phi[:-2] - 2 * phi[1:-1] + phi[2:]))))
        xi = random_unit(group, rng)
        gap = toral.toral_decomposition(xi.complexify()).gap
        t1 = 40.0 / gap if math.isfinite(gap) else 40.0
        t2 = 2 * t1
        sl = (projective.kempf_ness_ray(x, xi, t2) - projective.kempf_ness_ray(x, xi, t1)) / (t2 - t1)
        slope.append(abs(sl - _weight(x, xi)))
        eta = random_unit(group, rng)
        base = g.matrix
        step = 1e-4
        val = lambda t: projective.kempf_ness_value(x, base @ exp_i(eta * t))
        fd = (val(step) - 2 * val(0.0) + val(-step)) / step**2
        y = act(g.inv(), x)
        exact = projective.infinitesimal_action(y, eta).norm() ** 2
        hess.append(abs(fd - exact) / max(exact, 1e-3 * x.hbar))
    errs = cocycle + convex + slope + hess
    tols = [1e-9] * n + [1e-8] * n + [1e-6] * n + [1e-4] * n
    return _report(
        "kempf_ness",
        errs,
        tols,
        {
            "max_cocycle": max(cocycle),
            "max_concavity": max(convex),
            "max_slope_error": max(slope),
            "max_hessian_error": max(hess),
        },
    )


def check_ray_profile(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``Phi(exp(-i r xi_unit)) / r`` approaches ``-m`` toward the dominant direction."""
    n = samples or 10
    rng = np.random.default_rng(seed)
    errs = []
    instances = [canonical_unstable()] + [unstable_torus_instance(rng)[:2] for _ in range(n - 1)]
    for group, x in instances:
        verdict = classify(x, group)
        m = moment_polytope(extract_weights(group, x)).m
        prof = kempf_ness_ray_profile(x, group, verdict.xi_unit, [1e2, 1e3, 1e4, 1e5])
        errs.append(abs(prof[-1] + m))
    return _report("ray_profile", errs, 1e-3)


# ---------------------------------------------------------------------------
# flow


def check_flow_invariants(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Conjugacy ``x(t) = g(t)^{-1} x0``, monotone ``f`` and ``Phi``,
    ``dPhi/dt = -|mu|^2`` and the polar form of ``g(t)``."""
    n = samples or 12
    rng = np.random.default_rng(seed)
    groups = [preset_groups()["torus2_on_P2"], full_unitary(2), spin_representation(2), spin_representation(3)]
    conj, fdec, phidec, dphi, polar = [], [], [], [], []
    for k in range(n):
        group = groups[k % len(groups)]
        x0 = random_point(group.n, rng)
        traj = integrate_flow(x0, group, FlowOptions(t_max=200.0))
        conj.append(max(
            projective.projective_distance(p.v, act(np.linalg.inv(g), x0).v)
            for p, g in zip(traj.points, traj.g_path)
            if g is not None
        ))
        f = 0.5 * np.asarray(traj.mu_norms) ** 2
        fdec.append(max(0.0, float(np.max(np.diff(f)))) if len(f) > 1 else 0.0)
        phidec.append(max(0.0, float(np.max(np.diff(traj.phi)))) if len(f) > 1 else 0.0)
        worst = 0.0
        for j in range(0, len(traj.times), max(1, len(traj.times) // 20)):
            if traj.anchor_count[j] != 0:
                break
            target = -float(traj.mu_norms[j]) ** 2
            if target > -1e-4:
                # the difference quotient is roundoff dominated here
                continue
            xi = np.asarray(traj.xi_coords[j])
            vel = chart_velocity(x0, group, xi)
            h = 1e-4 / float(np.linalg.norm(vel))
            rate = (chart_phi(x0, group, xi + h * vel) - chart_phi(x0, group, xi - h * vel)) / (2 * h)
            worst = max(worst, abs(rate - target) / abs(target))
        dphi.append(worst)
        worst = 0.0
        for j in range(0, len(traj.times), max(1, len(traj.times) // 20)):
            if traj.g_path[j] is None:
                continue
            eta, _ = polar_decompose(traj.g_path[j], group)
            xi = np.asarray(traj.xi_coords[j])
            worst = max(worst, float(np.linalg.norm(eta.coords + xi)) / max(1.0, float(np.linalg.norm(xi))))
        polar.append(worst)
    errs = conj + fdec + phidec + dphi + polar
    tols = [1e-6] * n + [1e-12] * n + [1e-12] * n + [1e-5] * n + [1e-8] * n
    return _report(
        "flow_invariants",
        errs,
        tols,
        {
            "max_conjugacy": max(conj),
            "max_f_increase": max(fdec),
            "max_phi_increase": max(phidec),
            "max_dphi_error": max(dphi),
            "max_polar_error": max(polar),
        },
    )


def check_dominant_direction(samples: int | None = None, seed: int = 0) -> AuditReport:
    """On unstable torus instances ``||xi_inf| - m| <= 1e-4`` and
    ``|w(x0, xi_inf) + m^2| <= 1e-4`` with ``m`` from the exact hull."""
    n = samples or 20
    rng = np.random.default_rng(seed)
    errs = []
    instances = [canonical_unstable() + (1 / math.sqrt(5),)] + [unstable_torus_instance(rng) for _ in range(n - 1)]
    for group, x, m in instances:
        traj = integrate_flow(x, group)
        xi_inf, _ = dominant_weight(traj)
        errs.append(abs(xi_inf.norm() - m))
        errs.append(abs(_weight(x, xi_inf) + m * m))
    return _report("dominant_direction", errs, 1e-4)


def _lift_on_grid(x0: ProjectivePoint, group: CompactGroup, g0: np.ndarray, times: np.ndarray) -> list[np.ndarray]:
    """``g' = g i mu(g^{-1} x0)`` from ``g0`` by a high order explicit scheme."""
    n = group.n

    def rhs(_t, y):
        g = y.reshape(n, n)
        x = ProjectivePoint(np.linalg.solve(g, x0.v), x0.hbar)
        return (g @ (1j * projective.moment_matrix(x, group))).ravel()

    sol = solve_ivp(rhs, (times[0], times[-1]), g0.astype(complex).ravel(), method="DOP853",
                    t_eval=times, rtol=1e-12, atol=1e-13)
    return [sol.y[:, k].reshape(n, n) for k in range(len(times))]


def _rep_distance(a: np.ndarray, b: np.ndarray) -> float:
    s = np.linalg.svd(np.linalg.solve(a, b), compute_uv=False)
    return float(np.linalg.norm(np.log(s)))


def check_cat0(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Alexandrov and expansion inequalities, nonpositive curvature and the
    distance between gradient lines of one Kempf-Ness function."""
    n = samples or 1000
    rng = np.random.default_rng(seed)
    groups = [full_unitary(2), full_unitary(3), spin_representation(2), preset_groups()["torus2_on_P2"]]
    alex, expand, curv = [], [], []
    for k in range(n):
        group = groups[k % len(groups)]
        p0, p1, q = (ss.CosetPoint(random_algebra(group, rng, 1.5)) for _ in range(3))
        mid = ss.midpoint(p0, p1)
        lhs = 2 * ss.distance(mid, q) ** 2 + 0.5 * ss.distance(p0, p1) ** 2
        alex.append(max(0.0, lhs - ss.distance(p0, q) ** 2 - ss.distance(p1, q) ** 2))
        base = ss.CosetPoint(random_algebra(group, rng, 1.0))
        v0, v1 = random_algebra(group, rng, 1.0), random_algebra(group, rng, 1.0)
        t = float(rng.uniform(1.0, 3.0))
        d1 = ss.distance(ss.exp_map(base, v0), ss.exp_map(base, v1))
        dt = ss.distance(ss.exp_map(base, v0, t), ss.exp_map(base, v1, t)) / t
        expand.append(max(0.0, (v0 - v1).norm() - d1, d1 - dt))
        e1, e2 = random_algebra(group, rng), random_algebra(group, rng)
        try:
            curv.append(max(0.0, ss.sectional_curvature(e1, e2)))
        except GitkitError:
            curv.append(0.0)
    u2 = full_unitary(2)
    e1 = AlgebraVector.from_matrix(np.array([[0, 1j], [1j, 0]]), u2)
    e2 = AlgebraVector.from_matrix(np.array([[0, 1], [-1, 0]], dtype=complex), u2)
    bench = abs(ss.sectional_curvature(e1, e2) + 2.0)
    errs = alex + expand + curv + [bench]
    tols = [1e-8] * n + [1e-9] * n + [1e-12] * n + [1e-10]
    return _report(
        "cat0_geometry",
        errs,
        tols,
        {"max_alexandrov": max(alex), "max_expansion": max(expand), "max_curvature": max(curv), "u2_benchmark_error": bench},
    )


def check_gradient_lines(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``t -> d(gamma_0(t), gamma_1(t))`` is nonincreasing for two gradient
    lines of one Kempf-Ness function, and the acceleration of a gradient
    line has norm ``|L^* L mu|``."""
    n = samples or 20
    rng = np.random.default_rng(seed)
    groups = [spin_representation(2), spin_representation(3), full_unitary(2), preset_groups()["torus2_on_P2"]]
    mono, accel = [], []
    times = np.linspace(0.0, 2.0, 201)
    for k in range(n):
        group = groups[k % len(groups)]
        x0 = random_point(group.n, rng)
        g0 = np.eye(group.n, dtype=complex)
        g1 = random_complex(group, rng, 1.0).matrix
        path0 = _lift_on_grid(x0, group, g0, times)
        path1 = _lift_on_grid(x0, group, g1, times)
        dist = np.array([_rep_distance(a, b) for a, b in zip(path0, path1)])
        mono.append(max(0.0, float(np.max(np.diff(dist)))))
        etas = [projective.moment_map(ProjectivePoint(np.linalg.solve(g, x0.v), x0.hbar), group) for g in path0]
        worst = 0.0
        for j in (10, 100, 190):
            cd = ss.covariant_derivative(path0, etas, j, times[1] - times[0])
            y = ProjectivePoint(np.linalg.solve(path0[j], x0.v), x0.hbar)
            mu = projective.moment_map(y, group)
            target = projective.action_adjoint(y, group, projective.infinitesimal_action(y, mu).rep).norm()
            worst = max(worst, abs(cd.norm() - target) / max(target, 1e-6))
        accel.append(worst)
    return _report(
        "gradient_lines",
        mono + accel,
        [1e-8] * n + [1e-4] * n,
        {"max_distance_increase": max(mono), "max_acceleration_error": max(accel)},
    )


def check_second_variation(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Second difference of the distance from a geodesic to a smooth curve is
    at least ``-|nabla gamma_1'|``."""
    n = samples or 100
    rng = np.random.default_rng(seed)
    groups = [full_unitary(2), spin_representation(2)]
    errs = []
    dt = 1e-3
    times = np.arange(-2, 203) * dt
    for k in range(n):
        group = groups[k % len(groups)]
        p = ss.CosetPoint(random_algebra(group, rng, 1.0))
        vel = random_algebra(group, rng, 1.0)
        a = random_complex(group, rng, 1.0).matrix
        b, c = random_algebra(group, rng, 1.0), random_algebra(group, rng, 0.5)
        g1 = [a @ exp_i(b * t) @ exp_i(c * (t * t)) for t in times]
        etas = []
        for t in times:
            # g^{-1} g' = Ad(exp(-i t^2 c)) (i b) + 2 i t c; its imaginary part
            e = exp_i(c * (t * t))
            z = np.linalg.solve(e, 1j * b.matrix @ e) + 2j * t * c.matrix
            etas.append(AlgebraVector.from_matrix(-0.5j * (z + z.conj().T), group))
        rho = np.array([_rep_distance(ss.exp_map(p, vel, t).rep, g) for t, g in zip(times, g1)])
        worst = 0.0
        for j in range(2, len(times) - 2, 20):
            if rho[j] <= 1e-3:
                continue
            second = (rho[j + 1] - 2 * rho[j] + rho[j - 1]) / dt**2
            bound = -ss.covariant_derivative(g1, etas, j, dt).norm()
            worst = max(worst, bound - second)
        errs.append(worst)
    return _report("second_variation", errs, 1e-3)


def check_cartan(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Circumcenter of a finite orbit is fixed and conjugates the group into G."""
    n = samples or 20
    rng = np.random.default_rng(seed)
    errs, tols = [], []
    for k in range(n):
        kind = k % 3
        if kind == 2:
            group = preset_groups()["torus2_on_P2"]
            order = int(rng.integers(2, 6))
            gens = [expm_skew(lat.matrix / order) for lat in group.lattice_generators()]
        else:
            group = full_unitary(kind + 2)
            perm = np.roll(np.eye(group.n), 1, axis=0).astype(complex)
            gens = [perm, np.diag(np.exp(2j * np.pi * rng.integers(0, 4, group.n) / 4))]
        h = random_complex(group, rng, 1.5).matrix
        conj = [GroupPoint(group, h @ g @ np.linalg.inv(h)) for g in gens]
        _, _, rep = ss.cartan_fixed_point(conj)
        errs += [rep["max_displacement"], rep["max_unitarity_defect"]]
        tols += [1e-6, 1e-6]
    return _report("cartan_fixed_point", errs, tols)


# ---------------------------------------------------------------------------
# stability


def check_moment_weight(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``-w(x, xi) / |xi| <= |mu(g x)|`` over presets, with the restricted
    form on toral generators annihilating the point."""
    n = samples or 2500
    rng = np.random.default_rng(seed)
    total, viol, worst, details = 0, 0, math.inf, {}
    per_preset = max(1, n // len(preset_groups()))
    for name, group in preset_groups().items():
        points = [random_point(group.n, rng)]
        e = np.zeros(group.n, complex)
        e[0] = 1.0
        points.append(ProjectivePoint(e))
        for j, x in enumerate(points):
            rep = moment_weight_audit(x, group, max(1, per_preset // len(points)), seed + 17 * j)
            total += rep.n_checked
            viol += rep.violations
            worst = min(worst, rep.worst_slack)
            details[f"{name}[{j}]"] = rep.details
    return AuditReport("moment_weight", total, viol, worst, details)


def check_ness(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Flow limits from one ``G^c``-orbit lie in one ``G``-orbit and minimize
    the moment norm on their orbit."""
    n = samples or 6
    rng = np.random.default_rng(seed)
    groups = [preset_groups()["torus2_on_P2"], spin_representation(2), spin_representation(3)]
    total, viol, worst, details = 0, 0, math.inf, {}
    for k in range(n):
        group = groups[k % len(groups)]
        x0 = random_point(group.n, rng)
        hs = [random_complex(group, rng, 0.7) for _ in range(4)]
        rep = ness_uniqueness_audit(x0, group, hs, n_kirwan=100, seed=seed + k)
        total += rep.n_checked
        viol += rep.violations
        worst = min(worst, rep.worst_slack)
        details[str(k)] = {"orbit_distances": rep.details["orbit_distances"], "kirwan_violations": rep.details["kirwan_violations"]}
    return AuditReport("ness_uniqueness", total, viol, worst, details)


def check_zero_orbit(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Two zeros of the moment map in one ``G^c``-orbit share a ``G``-orbit."""
    n = samples or 10
    rng = np.random.default_rng(seed)
    errs = []
    while len(errs) < n:
        group, x = torus_instance(rng, 6, 2, boundary_prob=0.0)
        verdict = torus_classify(group, x)
        if verdict.klass not in ("polystable", "stable"):
            continue
        x0 = verdict.x_zero
        g = random_complex(group, rng, 1.0)
        traj = integrate_flow(act(g, x0), group, FlowOptions(tol_grad=1e-13))
        x1 = traj.points[-1]
        if projective.moment_map(x1, group).norm() > 1e-9:
            errs.append(1.0)
            continue
        errs.append(orbit_distance_G(x0, x1, group))
    return _report("zero_orbit", errs, 1e-6)


def check_classification(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Exact hull classification and the flow agree on torus instances."""
    n = samples or 100
    rng = np.random.default_rng(seed)
    errs, mismatches = [], []
    for k in range(n):
        group, x = torus_instance(rng)
        flow_v = classify(x, group)
        exact_v = torus_classify(group, x)
        same = flow_v.klass == exact_v.klass
        errs.append(abs(flow_v.m_estimate - exact_v.m_estimate) if same else 1.0)
        if not same:
            mismatches.append({"index": k, "flow": flow_v.klass, "exact": exact_v.klass})
    return _report("classification_oracle", errs, 1e-5, {"mismatches": mismatches[:10]})


def check_classification_invariance(samples: int | None = None, seed: int = 0) -> AuditReport:
    """``classify(x0)`` and ``classify(h^{-1} x0)`` agree."""
    n = samples or 20
    rng = np.random.default_rng(seed)
    errs = []
    for k in range(n):
        group, x = torus_instance(rng, 6, 2)
        h = random_complex(group, rng, 0.7)
        a = classify(x, group)
        b = classify(act(h.inv(), x), group)
        errs.append(abs(a.m_estimate - b.m_estimate) if a.klass == b.klass else 1.0)
    return _report("classification_invariance", errs, 1e-5)


def check_hilbert_mumford(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Unstable verdicts carry a negative-weight direction; on tori a lattice
    element with ratio at least ``m - 1e-3`` exists and ``exp(i t xi) v -> 0``."""
    n = samples or 20
    rng = np.random.default_rng(seed)
    errs, tols = [], []
    instances = [canonical_unstable()] + [unstable_torus_instance(rng)[:2] for _ in range(n - 1)]
    for group, x in instances:
        verdict = classify(x, group)
        w = _weight(x, verdict.xi_unit) if verdict.klass == "unstable" else 1.0
        errs.append(max(0.0, w))
        tols.append(0.0 if w < 0 else -1.0)
        lat, ratio = lattice_certificate(group, x)
        m = moment_polytope(extract_weights(group, x)).m
        errs.append(max(0.0, m - 1e-3 - ratio))
        tols.append(0.0)
        wl = _weight(x, lat)
        gap = toral.toral_decomposition(lat.complexify()).gap
        t = 50.0 / gap if math.isfinite(gap) else 50.0
        lam, q = np.linalg.eigh(1j * lat.matrix)
        norm_t = float(np.linalg.norm(np.exp(t * lam) * (q.conj().T @ x.v)))
        errs.append(max(0.0, norm_t - math.exp(t * wl / x.hbar) * (1 + 1e-9)) + (0.0 if wl < 0 else 1.0))
        tols.append(0.0)
    return _report("hilbert_mumford", errs, tols)


def check_openness(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Perturbing a stable point by ``1e-6`` keeps it stable."""
    n = samples or 100
    rng = np.random.default_rng(seed)
    while True:
        group, x = torus_instance(rng, 5, 2, boundary_prob=0.0)
        if torus_classify(group, x).klass == "stable":
            break
    errs = []
    for _ in range(n):
        w = x.v + 1e-6 * (rng.standard_normal(group.n) + 1j * rng.standard_normal(group.n))
        errs.append(0.0 if classify(ProjectivePoint(w), group).klass == "stable" else 1.0)
    return _report("openness", errs, 0.5)


def check_kempf_uniqueness(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Dominant directions from several starts in one orbit coincide."""
    n = samples or 4
    rng = np.random.default_rng(seed)
    total, viol, worst = 0, 0, math.inf
    for k in range(n):
        group, x, _ = unstable_torus_instance(rng)
        rep = kempf_uniqueness_audit(x, group, n_starts=4, seed=seed + k)
        total += rep.n_checked
        viol += rep.violations
        worst = min(worst, rep.worst_slack + 1e-3)
    return AuditReport("kempf_uniqueness", total, viol, worst, {})


# ---------------------------------------------------------------------------
# torus geometry


def check_hull_image(samples: int | None = None, seed: int = 0) -> AuditReport:
    """Sampled ``mu(g x)`` lie in the polytope and approach every vertex."""
    n = samples or 20
    rng = np.random.default_rng(seed)
    inside, vertex = [], []
    for _ in range(n):
        group, x = torus_instance(rng, 6, 2, boundary_prob=0.3)
        ws = extract_weights(group, x)
        poly = moment_polytope(ws)
        pts = ws.hbar * ws.supported
        for _ in range(10):
            y = act(random_complex(group, rng, 2.0), x)
            mu = projective.moment_map(y, group).coords
            inside.append(_hull_excess(mu, pts))
        upts = np.unique(np.round(pts, 12), axis=0)
        for vert in poly.vertices:
            vi = int(np.argmin(np.linalg.norm(upts - vert, axis=1)))
            direction = _supporting_direction(upts, vi)
            if direction is None:
                continue
            vals = upts @ direction
            gap = vals[vi] - np.max(np.delete(vals, vi)) if len(vals) > 1 else 1.0
            xi = AlgebraVector(group, direction)
            dec = toral.toral_decomposition(xi.complexify())
            y = projective.flow_along(x, dec, 40.0 / gap)
            vertex.append(float(np.linalg.norm(projective.moment_map(y, group).coords - upts[vi])))
    return _report(
        "hull_image",
        inside + vertex,
        [1e-8] * len(inside) + [1e-3] * len(vertex),
        {"max_outside": max(inside), "max_vertex_gap": max(vertex) if vertex else 0.0},
    )


def _hull_excess(p: np.ndarray, pts: np.ndarray) -> float:
    """Distance from ``p`` to the convex hull of ``pts``."""
    k = len(pts)
    res = sopt.minimize(
        lambda c: float(np.sum((c @ pts - p) ** 2)),
        np.full(k, 1.0 / k),
        jac=lambda c: 2 * pts @ (c @ pts - p),
        bounds=[(0, 1)] * k,
        constraints=[{"type": "eq", "fun": lambda c: np.sum(c) - 1.0}],
        method="SLSQP",
        options={"ftol": 1e-20, "maxiter": 500},
    )
    return float(math.sqrt(max(res.fun, 0.0)))


def _supporting_direction(pts: np.ndarray, i: int) -> np.ndarray | None:
    """Unit ``xi`` maximizing the margin by which ``pts[i]`` beats the others."""
    others = np.delete(pts, i, axis=0)
    if len(others) == 0:
        return np.eye(pts.shape[1])[0]
    d = pts.shape[1]
    diff = pts[i] - others
    res = sopt.linprog(
        np.concatenate([np.zeros(d), [-1.0]]),
        A_ub=np.hstack([-diff, np.ones((len(diff), 1))]),
        b_ub=np.zeros(len(diff)),
        bounds=[(-1, 1)] * d + [(None, 1)],
        method="highs",
    )
    if res.status != 0 or res.x[-1] <= 1e-9:
        return None
    v = res.x[:d]
    return v / np.linalg.norm(v)


def _sphere_samples(d: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """``k`` unit vectors in ``R^d``: a rotated equiangular grid on the circle,
    random otherwise."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        ang = rng.uniform(0, 2 * math.pi / k) + 2 * math.pi * np.arange(k) / k
        return np.column_stack([np.cos(ang), np.sin(ang)])
    dirs = rng.standard_normal((k, d))
    return dirs / np.linalg.norm(dirs, axis=1)[:, None]


def check_f0_maximum(samples: int | None = None, seed: int = 0) -> AuditReport:
    """The sampled maximum of ``f0`` over unit directions matches ``m`` and
    its argmax points along ``-eta* / |eta*|``."""
    n = samples or 10
    rng = np.random.default_rng(seed)
    errs, tols = [], []
    for _ in range(n):
        group, x, m = unstable_torus_instance(rng, 6, 2)
        ws = extract_weights(group, x)
        poly = moment_polytope(ws)
        best = -poly.nearest / poly.m
        dirs = _sphere_samples(group.d, 10_000, rng)
        vals = np.array([torus_f0(ws, -u) for u in dirs])
        j = int(np.argmax(vals))
        errs.append(max(0.0, vals[j] - m))
        tols.append(1e-9)
        errs.append(abs(torus_f0(ws, -best) - m))
        tols.append(1e-9)
        errs.append(abs(vals[j] - m))
        tols.append(1e-3)
        if group.d > 1:
            errs.append(math.acos(min(1.0, float(dirs[j] @ best))))
            tols.append(1e-2)
    return _report("f0_maximum", errs, tols)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[..., AuditReport]
    area: str


CHECKS: list[Check] = [
    Check("polar_roundtrip", check_polar_roundtrip, "lie_core"),
    Check("adjoint_norms", check_adjoint_norms, "lie_core"),
    Check("lattice_exp", check_lattice_exp, "lie_core"),
    Check("appendix_constants", check_appendix_constants, "toral"),
    Check("mumford_reduce", check_mumford, "toral"),
    Check("borel_decompose", check_borel, "toral"),
    Check("moment_identity", check_moment_identity, "projective"),
    Check("gradient_identity", check_gradient_identity, "projective"),
    Check("moment_monotone", check_moment_monotone, "projective"),
    Check("hessian_at_critical", check_hessian, "projective"),
    Check("energy_identity", check_energy_identity, "projective"),
    Check("weight_conjugation", check_weight_conjugation, "projective"),
    Check("weight_exact_vs_simulated", check_weight_exact_vs_simulated, "projective"),
    Check("weight_quantization", check_weight_quantization, "projective"),
    Check("kempf_ness", check_kempf_ness, "projective"),
    Check("flow_invariants", check_flow_invariants, "flow"),
    Check("dominant_direction", check_dominant_direction, "flow"),
    Check("ray_profile", check_ray_profile, "flow"),
    Check("moment_weight", check_moment_weight, "stability"),
    Check("ness_uniqueness", check_ness, "stability"),
    Check("zero_orbit", check_zero_orbit, "stability"),
    Check("classification_oracle", check_classification, "stability"),
    Check("classification_invariance", check_classification_invariance, "stability"),
    Check("hilbert_mumford", check_hilbert_mumford, "stability"),
    Check("openness", check_openness, "stability"),
    Check("kempf_uniqueness", check_kempf_uniqueness, "stability"),
    Check("hull_image", check_hull_image, "torus_geometry"),
    Check("f0_maximum", check_f0_maximum, "torus_geometry"),
    Check("cat0_geometry", check_cat0, "symmetric_space"),
    Check("gradient_lines", check_gradient_lines, "symmetric_space"),
    Check("second_variation", check_second_variation, "symmetric_space"),
    Check("cartan_fixed_point", check_cartan, "symmetric_space"),
]


def run_suite(
    samples: int | None = None,
    seed: int = 0,
    only: list[str] | None = None,
    timing: bool = False,
) -> dict:
    """Run the checks and collect their reports.

    ``samples`` caps every check's sample count.  Exceptions inside a check
    are recorded as a failure of that check.  ``timing`` adds wall-clock
    seconds, which makes the report nondeterministic.
    """
    known = {c.name for c in CHECKS}
    if only:
        unknown = sorted(set(only) - known)
        if unknown:
            raise ValidationError(f"unknown checks: {', '.join(unknown)}")
    results = []
    for check in CHECKS:
        if only and check.name not in only:
            continue
        start = time.perf_counter()
        try:
            rep = check.fn(samples, seed).to_json()
        except (GitkitError, NotUnstable, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            rep = {
                "name": check.name,
                "n_checked": 0,
                "violations": 1,
                "worst_slack": None,
                "passed": False,
                "details": {"error": f"{type(exc).__name__}: {exc}"},
            }
        rep["area"] = check.area
        if timing:
            rep["seconds"] = round(time.perf_counter() - start, 3)
        results.append(rep)
    return {
        "seed": seed,
        "samples": samples,
        "passed": all(r["passed"] for r in results),
        "checks": results,
    }


__all__ = [
    "CHECKS",
    "Check",
    "run_suite",
    "preset_groups",
    "random_torus",
    "torus_instance",
    "unstable_torus_instance",
    "canonical_unstable",
] + [c.fn.__name__ for c in CHECKS]
