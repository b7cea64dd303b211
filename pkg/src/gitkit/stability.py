"""Classification with certificates, the Mumford numerical function and audits
of the inequalities and uniqueness statements around them."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.optimize as sopt
import scipy.linalg as sla

from . import projective
from .errors import NotUnstable, SupportAmbiguous, ValidationError
from .flow import (
    TOL_CLASS,
    TOL_GRAD,
    T_MAX,
    FlowOptions,
    FlowTrajectory,
    dominant_weight,
    integrate_flow,
    transport_direction,
)
from .lie_core import (
    AlgebraVector,
    ComplexAlgebraVector,
    CompactGroup,
    GroupPoint,
    expm_skew,
    lattice_enumerate,
    random_complex,
    random_unit,
    random_unitary,
)
from .projective import ProjectivePoint, act, isotropy_rank, kempf_ness_ray, projective_distance
from .torus_geometry import exact_weight, extract_weights, moment_polytope, torus_classify
from .verdict import StabilityVerdict

TOL_RANK = 1e-6
NEAR_BOUNDARY = (1e-8, 1e-4)
CAUCHY_TOL = 1e-4
SLACK = 1e-8


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GITKIT_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items) -> list:
    items = list(items)
    workers = _threads()
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _quiet_weight(x: ProjectivePoint, xi, **kw) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportAmbiguous)
        return projective.mu_weight(x, xi, **kw).weight


@dataclass(frozen=True)
class ClassifyOptions:
    """Thresholds for ``classify``.

    ``polystability`` is ``auto`` (exact hull test for diagonal groups) or
    ``flow`` (Cauchy test on the lifted path for every group).
    """

    tol_class: float = TOL_CLASS
    tol_grad: float = TOL_GRAD
    t_max: float = T_MAX
    tol_rank: float = TOL_RANK
    cauchy_tol: float = CAUCHY_TOL
    polystability: str = "auto"

    def __post_init__(self) -> None:
        for name in ("tol_class", "tol_grad", "t_max", "tol_rank", "cauchy_tol"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and val > 0 and math.isfinite(val)):
                raise ValidationError(f"{name} must be positive and finite")
        if self.polystability not in ("auto", "flow"):
            raise ValidationError("polystability must be 'auto' or 'flow'")


@dataclass
class AuditReport:
    """Outcome of an audit: sample count, violations and the worst slack."""

    name: str
    n_checked: int
    violations: int
    worst_slack: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        def clean(v):
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, dict):
                return {k: clean(w) for k, w in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(w) for w in v]
            return v

        return {
            "name": self.name,
            "n_checked": self.n_checked,
            "violations": self.violations,
            "worst_slack": float(self.worst_slack),
            "passed": self.passed,
            "details": clean(self.details),
        }


# ---------------------------------------------------------------------------
# classification


def is_cauchy(traj: FlowTrajectory, tol: float = CAUCHY_TOL) -> bool:
    """Whether the lifted path has visibly converged in ``G^c``.

    ``|dg/dt g^{-1}|`` is of the size of ``|mu(x(t))|``; the path is accepted
    as Cauchy when ``t_end |mu_end| <= tol``, which exponential decay meets
    and ``1/t`` decay does not.
    """
    return bool(traj.converged and traj.t_end * traj.mu_norms[-1] <= tol)


def _is_transitive(group: CompactGroup) -> bool:
    return group.preset in ("full_unitary", "special_unitary") and group.n >= 2


def classify(
    x0: ProjectivePoint, group: CompactGroup, opts: ClassifyOptions | None = None, **overrides
) -> StabilityVerdict:
    """Stability class of ``x0`` from the gradient flow of ``|mu|^2``.

    Unstable when the flow limit keeps ``|mu| > tol_class`` (certified by the
    dominant direction); otherwise semistable, upgraded to polystable by the
    exact hull test (diagonal groups, ``polystability='auto'``) or by the
    Cauchy test on the lifted path, and to stable when the isotropy at the
    limit is discrete.
    """
    opts = opts or ClassifyOptions()
    if overrides:
        opts = replace(opts, **overrides)
    fopts = FlowOptions(tol_grad=opts.tol_grad, t_max=opts.t_max)
    traj = integrate_flow(x0, group, fopts)
    diags: list[str] = []
    m_end = float(traj.mu_norms[-1])
    if NEAR_BOUNDARY[0] < m_end < NEAR_BOUNDARY[1]:
        diags.append("near-boundary")
        if opts.tol_grad > 1e-13:
            traj = integrate_flow(x0, group, replace(fopts, tol_grad=1e-13))
            m_end = float(traj.mu_norms[-1])
            diags.append("refined")
    if not traj.converged:
        diags.append("t_max_reached" if traj.t_end >= opts.t_max else "step_limit_reached")
    extras = {"trajectory": traj}
    try:
        xi_inf, xi_unit = dominant_weight(traj, opts.tol_class)
    except NotUnstable:
        xi_unit = None
    if xi_unit is not None:
        k = traj.stats.get("direction_sample", len(traj.times) - 1)
        w = _quiet_weight(x0, xi_unit)
        if not w < -0.5 * float(traj.mu_norms[k]):
            diags.append("instability_not_certified")
            xi_unit = None
    if xi_unit is not None:
        if k != len(traj.times) - 1:
            diags.append("saddle_escape_certified")
        if _is_transitive(group):
            diags.append("transitive_action")
        cert = {"xi_unit": xi_unit, "weight": w}
        return StabilityVerdict("unstable", float(traj.mu_norms[k]), cert, None, diags, "flow", extras)

    x_inf = traj.points[-1]
    cauchy = is_cauchy(traj, opts.cauchy_tol)
    diags.append(f"cauchy={str(cauchy).lower()}")
    k_real, _, smin = isotropy_rank(x_inf, group, tol=opts.tol_rank)
    discrete = k_real == 0 and smin > opts.tol_rank
    if group.is_diagonal and opts.polystability == "auto":
        exact = torus_classify(group, x0)
        extras["exact"] = exact
        if exact.klass == "unstable":
            diags.append("exact_hull_disagrees")
            polystable = cauchy
        else:
            polystable = exact.klass in ("polystable", "stable")
            if polystable != cauchy:
                diags.append("cauchy_disagrees_with_hull")
    else:
        polystable = cauchy
    if polystable:
        klass = "stable" if discrete else "polystable"
    elif group.is_diagonal and opts.polystability == "auto":
        klass = "semistable"
    else:
        klass = "semistable_polystability_undetermined"
    cert = {"x_zero": x_inf}
    return StabilityVerdict(klass, m_end, cert, smin, diags, "flow", extras)


# ---------------------------------------------------------------------------
# Mumford numerical function


def mumford_function(
    x0: ProjectivePoint,
    group: CompactGroup,
    opts: ClassifyOptions | None = None,
    n_samples: int = 200,
    seed: int = 0,
    radius: float | None = None,
) -> tuple[float, AlgebraVector | None, str]:
    """``sup_xi -w(x0, xi) / |xi|`` with its maximizer.

    Diagonal groups use the hull (``exact``) when unstable and a lattice
    enumeration up to ``radius`` otherwise (``exact-lattice``); other groups
    use the flow when unstable (``flow``) and random directions otherwise
    (``sampled``).
    """
    if group.is_diagonal:
        ws = extract_weights(group, x0)
        poly = moment_polytope(ws)
        if poly.contains_zero == "outside":
            return poly.m, AlgebraVector(group, -poly.nearest / poly.m), "exact"
        if group.lattice_basis is not None:
            gens = group.lattice_generators()
            r = radius or 3.0 * max(g.norm() for g in gens)
            best, arg = -math.inf, None
            for xi in lattice_enumerate(group, r):
                val = -exact_weight(ws, xi.coords) / xi.norm()
                if val > best:
                    best, arg = val, xi
            return float(best), arg.unit() if arg is not None else None, "exact-lattice"
    verdict = classify(x0, group, opts)
    if verdict.klass == "unstable":
        return verdict.m_estimate, verdict.xi_unit, "flow"
    rng = np.random.default_rng(seed)
    best, arg = -math.inf, None
    for _ in range(n_samples):
        xi = random_unit(group, rng)
        val = -_quiet_weight(x0, xi)
        if val > best:
            best, arg = val, xi
    return float(best), arg, "sampled"


# ---------------------------------------------------------------------------
# audits


def _kernel_complex(x: ProjectivePoint, group: CompactGroup, tol: float = 1e-8) -> np.ndarray:
    """Complex coefficient vectors ``c`` with ``P_v(sum c_a e_a v) = 0``."""
    a = projective.action_matrix(x, group).T  # (n, d), complex linear in c
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    return vh[rank:].conj().T


def _kernel_real(x: ProjectivePoint, group: CompactGroup, tol: float = 1e-8) -> np.ndarray:
    """Real coefficient vectors spanning the isotropy algebra of ``x``."""
    a = projective.action_matrix(x, group).T
    a = np.vstack([a.real, a.imag])
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    return vh[rank:].T


def moment_weight_audit(
    x0: ProjectivePoint,
    group: CompactGroup,
    n_samples: int = 1000,
    seed: int = 0,
    eta_bound: float = 1.0,
    slack: float = SLACK,
) -> AuditReport:
    """Check ``-w(x, xi)/|xi| <= |mu(g x)|`` on sampled ``(xi, g)``.

    Each sample also compares the exact weight with the definitional one,
    ``<mu(exp(i T xi) x), xi>`` at large ``T``, and the restricted form
    ``<mu(x), xi>^2 / (|xi|^2 - |eta|^2) <= |mu(g x)|^2`` for ``xi + i eta``
    a toral generator annihilating ``x0``, together with ``<mu(x0), eta> = 0``.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    samples = [(random_unit(group, rng), random_complex(group, rng, eta_bound)) for _ in range(n_samples)]
    kern = _kernel_complex(x0, group)
    mu0 = projective.moment_map(x0, group)

    def one(sample):
        xi, g = sample
        w = _quiet_weight(x0, xi)
        w_sim = _quiet_weight(x0, xi, mode="simulated")
        rhs = projective.moment_map(act(g, x0), group).norm()
        return -w / xi.norm(), rhs, w, w_sim

    rows = _pmap(one, samples)
    lhs = np.array([r[0] for r in rows])
    rhs = np.array([r[1] for r in rows])
    w_exact = np.array([r[2] for r in rows])
    w_sim = np.array([r[3] for r in rows])
    slacks = rhs - lhs
    mismatch = np.abs(w_exact - w_sim) > 1e-6 * np.maximum(1.0, np.abs(w_exact))
    restricted, orth = [], []
    iso = _kernel_real(x0, group)
    if iso.shape[1] > 0:
        # toral generators annihilating x0: Ad(p) xi0 with xi0 in the isotropy
        # algebra and p = exp(c) in the complex stabilizer
        for _, g in samples[: min(len(samples), 200)]:
            xi0 = AlgebraVector(group, iso @ rng.standard_normal(iso.shape[1]))
            c = kern @ (rng.standard_normal(kern.shape[1]) + 1j * rng.standard_normal(kern.shape[1]))
            z = np.einsum("a,aij->ij", c, group.basis)
            p = sla.expm(z)
            zeta = ComplexAlgebraVector.from_matrix(p @ xi0.matrix @ np.linalg.inv(p), group)
            xi, eta = zeta.re.coords, zeta.im.coords
            den = xi @ xi - eta @ eta
            orth.append(abs(float(mu0.coords @ eta)) / max(1.0, zeta.norm()))
            if den <= 0:
                restricted.append(-np.inf)
                continue
            val = float(mu0.coords @ xi) ** 2 / den
            restricted.append(projective.moment_map(act(g, x0), group).norm() ** 2 - val)
    restricted = np.array(restricted)
    orth_bad = int(np.sum(np.array(orth) > 1e-8))
    viol = (
        int(np.sum(slacks < -slack))
        + int(np.sum(mismatch))
        + int(np.sum(restricted < -slack))
        + orth_bad
    )
    worst = float(min(np.min(slacks), np.min(restricted) if len(restricted) else np.inf))
    return AuditReport(
        "moment_weight",
        n_samples,
        viol,
        worst,
        {
            "inequality_violations": int(np.sum(slacks < -slack)),
            "weight_mismatches": int(np.sum(mismatch)),
            "restricted_checked": len(restricted),
            "restricted_violations": int(np.sum(restricted < -slack)),
            "orthogonality_violations": orth_bad,
            "max_weight_gap": float(np.max(np.abs(w_exact - w_sim))),
        },
    )


def orbit_distance_G(
    x: ProjectivePoint, y: ProjectivePoint, group: CompactGroup, n_starts: int = 20, seed: int = 0
) -> float:
    """Upper bound for ``min_{u in G} d(u x, y)`` by multi-start local descent."""
    rng = np.random.default_rng(seed)
    basis = group.basis
    best = projective_distance(x.v, y.v)

    for s in range(n_starts):
        if best <= 1e-12:
            break
        u0 = np.eye(group.n, dtype=complex) if s == 0 else random_unitary(group, rng)
        w0 = u0 @ x.v

        def loss(c, w0=w0):
            w = expm_skew(np.tensordot(c, basis, 1)) @ w0
            return 1.0 - abs(np.vdot(y.v, w)) ** 2

        res = sopt.minimize(loss, np.zeros(group.d), method="BFGS", options={"gtol": 1e-12})
        w = expm_skew(np.tensordot(res.x, basis, 1)) @ w0
        best = min(best, projective_distance(w, y.v))
    return float(best)


def limit_point(traj: FlowTrajectory, tol_class: float = TOL_CLASS) -> ProjectivePoint:
    """The flow limit; for a certified escape from an unstable critical set,
    the plateau sample instead of the end point."""
    if traj.mu_norms[-1] <= tol_class:
        try:
            dominant_weight(traj, tol_class)
        except NotUnstable:
            return traj.points[-1]
        return traj.points[traj.stats["direction_sample"]]
    return traj.points[-1]


def ness_uniqueness_audit(
    x0: ProjectivePoint,
    group: CompactGroup,
    hs: list,
    n_kirwan: int = 100,
    seed: int = 0,
    tol_orbit: float = 1e-5,
    tol_norm: float = 1e-8,
    flow_opts: FlowOptions | None = None,
) -> AuditReport:
    """Flow ``x0`` and each ``h^{-1} x0``; the limits must share one G-orbit
    and one moment norm, and each limit must minimize ``|mu|`` on its orbit
    among ``n_kirwan`` sampled ``g``."""
    rng = np.random.default_rng(seed)
    fopts = flow_opts or FlowOptions(tol_grad=1e-13)
    starts = [x0] + [act(GroupPoint(group, h.matrix if isinstance(h, GroupPoint) else h).inverse, x0) for h in hs]
    limits = [limit_point(integrate_flow(s, group, fopts)) for s in starts]
    norms = [projective.moment_map(p, group).norm() for p in limits]
    dists = [orbit_distance_G(limits[0], p, group, seed=seed) for p in limits[1:]]
    norm_gaps = [abs(nm - norms[0]) for nm in norms[1:]]
    kn = []
    for p, nm in zip(limits, norms):
        for _ in range(n_kirwan):
            g = random_complex(group, rng, 1.0)
            kn.append(projective.moment_map(act(g, p), group).norm() - nm)
    kn = np.array(kn)
    viol = sum(d > tol_orbit for d in dists) + sum(gp > tol_norm for gp in norm_gaps) + int(np.sum(kn < -SLACK))
    worst = float(np.min(kn)) if len(kn) else 0.0
    return AuditReport(
        "ness_uniqueness",
        len(starts),
        int(viol),
        worst,
        {
            "orbit_distances": dists,
            "norm_gaps": norm_gaps,
            "moment_norms": norms,
            "kirwan_checked": len(kn),
            "kirwan_violations": int(np.sum(kn < -SLACK)),
        },
    )


def kempf_ness_ray_profile(
    x0: ProjectivePoint, group: CompactGroup, xi_unit: AlgebraVector, r_list
) -> list[float]:
    """``Phi_{x0}(exp(-i r xi)) / r`` for each ``r``.

    Raises
    ------
    ValidationError
        If ``xi_unit`` is not a unit vector or some ``r`` is not positive.
    """
    if abs(xi_unit.norm() - 1.0) > 1e-9:
        raise ValidationError("xi_unit must have norm 1")
    out = []
    for r in r_list:
        if not r > 0:
            raise ValidationError("radii must be positive")
        out.append(kempf_ness_ray(x0, xi_unit, float(r)) / float(r))
    return out


def kempf_uniqueness_audit(
    x0: ProjectivePoint,
    group: CompactGroup,
    n_starts: int = 5,
    seed: int = 0,
    eta_bound: float = 0.5,
    tol: float = 1e-3,
    flow_opts: FlowOptions | None = None,
) -> AuditReport:
    """Dominant directions from ``h^{-1} x0`` pulled back to ``x0`` agree.

    Raises
    ------
    NotUnstable
        If ``x0`` is not unstable.
    """
    rng = np.random.default_rng(seed)
    fopts = flow_opts or FlowOptions()
    hs = [np.eye(group.n, dtype=complex)] + [random_complex(group, rng, eta_bound).matrix for _ in range(n_starts - 1)]
    dirs = []
    for h in hs:
        xk = act(np.linalg.inv(h), x0)
        _, unit = dominant_weight(integrate_flow(xk, group, fopts))
        back = unit if group.is_abelian else transport_direction([h], unit)
        dirs.append(back.unit())
    dists = [float(np.linalg.norm(a.coords - b.coords)) for i, a in enumerate(dirs) for b in dirs[i + 1 :]]
    worst = max(dists) if dists else 0.0
    return AuditReport(
        "kempf_uniqueness",
        len(hs),
        int(sum(d > tol for d in dists)),
        -worst,
        {"directions": [d.coords for d in dirs], "max_pairwise": worst},
    )


__all__ = [
    "ClassifyOptions",
    "AuditReport",
    "StabilityVerdict",
    "classify",
    "is_cauchy",
    "mumford_function",
    "moment_weight_audit",
    "orbit_distance_G",
    "limit_point",
    "ness_uniqueness_audit",
    "kempf_ness_ray_profile",
    "kempf_uniqueness_audit",
    "torus_classify",
]
