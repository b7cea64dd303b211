"""Negative gradient flow of ``f = |mu|^2 / 2`` and its lift to the complexified group.

The lifted path ``g(t)`` solves ``g^{-1} dg/dt = i mu(g^{-1} x0)`` and is
written ``g = exp(-i xi) u``.  Then ``x(t) = g^{-1} x0 = u^{-1} y`` with
``y = [exp(i xi) v0]``.  The flow is integrated in the coordinates
``(xi, u)``::

    dxi/dt = -F(ad(i xi)) mu(y),    F(d) = d / sinh(d)
    du/dt  = Omega u,               Omega = tanh(ad(i xi)/2) i mu(y)

both evaluated in the eigenbasis of ``i xi``.  For diagonal (torus) groups
``u`` is constant, ``dxi/dt = -mu(y)``, and the state is carried by
gauge-fixed log-weights so that large ``|xi|`` costs no precision.

``xi`` is advanced by LSODA; ``u`` by fourth order Magnus steps along the
dense output of each accepted step.  Once the eigenvalues of ``i xi`` spread
beyond ``REBASE_SPREAD`` the chart is re-anchored at the current point, so
``g(t)`` is carried as a product of well conditioned factors.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.optimize as sopt
from scipy.integrate import LSODA

from . import kernels
from .errors import (
    ConsistencyLost,
    ExtrapolationDiverged,
    InsufficientSamples,
    NotConverged,
    NotUnstable,
    StepSizeUnderflow,
    SupportAmbiguous,
    ValidationError,
)
from .lie_core import AlgebraVector, CompactGroup, GroupPoint, expm_skew, unitary_part
from .projective import ProjectivePoint, moment_map, mu_weight, projective_distance

TOL_GRAD = 1e-10
TOL_CLASS = 1e-6
T_MAX = 1e9
REBASE_SPREAD = 6.0


@dataclass(frozen=True)
class FlowOptions:
    """Integration controls.

    ``t_max`` bounds the integration time; ``tol_grad`` is the stopping
    threshold on the gradient norm; ``rtol``/``atol`` are passed to LSODA.
    """

    tol_grad: float = TOL_GRAD
    t_max: float = T_MAX
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 200_000
    magnus_angle: float = 0.05

    def __post_init__(self) -> None:
        for name in ("tol_grad", "t_max", "rtol", "atol", "magnus_angle"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and val > 0 and math.isfinite(val)):
                raise ValidationError(f"{name} must be positive and finite")
        if self.max_steps < 1:
            raise ValidationError("max_steps must be positive")


@dataclass(frozen=True)
class LojasiewiczFit:
    """Fit of ``log d(x(t), x_inf) ~ log c - epsilon log(t - T)``."""

    epsilon: float
    c: float
    T: float
    residual: float
    flag: str = "power-law"
    exp_rate: float = 0.0
    exp_residual: float = 0.0

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "c": self.c,
            "T": self.T,
            "residual": self.residual,
            "flag": self.flag,
            "exp_rate": self.exp_rate,
            "exp_residual": self.exp_residual,
        }


@dataclass(eq=False)
class FlowTrajectory:
    """Samples of the flow at every accepted integrator step.

    Attributes
    ----------
    times : ndarray
    points : list of ProjectivePoint
        ``x(t)``.
    mu_norms, grad_norms : ndarray
    xi_coords : ndarray, shape (k, d)
        ``xi(t)`` coordinates; ``g(t) = exp(-i xi(t)) u(t)``.
    u_path : list of ndarray
        ``u(t)``; the identity for diagonal groups.
    g_path : list of ndarray
        ``g(t)``, or ``None`` once its entries leave the floating point
        range; the factors below stay representable.
    phi : ndarray
        Kempf-Ness values ``Phi_{x0}(g(t))``.
    velocity : ndarray
        ``d xi / dt`` of the last chart at the last sample.
    anchors : list of ndarray
        Factors folded into the anchor at each re-anchoring.
    anchor_count, chart_factors
        Per sample, ``g(t_k)`` is the product of the first ``anchor_count[k]``
        anchors and ``chart_factors[k]``.
    """

    group: CompactGroup
    x0: ProjectivePoint
    times: np.ndarray
    points: list
    mu_norms: np.ndarray
    grad_norms: np.ndarray
    xi_coords: np.ndarray
    u_path: list
    g_path: list
    phi: np.ndarray
    velocity: np.ndarray
    converged: bool
    anchors: list = field(default_factory=list, repr=False)
    anchor_count: list = field(default_factory=list, repr=False)
    chart_factors: list = field(default_factory=list, repr=False)
    rate: LojasiewiczFit | None = None
    stats: dict = field(default_factory=dict)

    @property
    def xi_path(self) -> list[AlgebraVector]:
        return [AlgebraVector(self.group, c) for c in self.xi_coords]

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def g_at(self, k: int) -> GroupPoint:
        """``g(t_k) = exp(-i xi) u``."""
        if self.g_path[k] is None:
            raise ConsistencyLost("g(t) is outside the floating point range at this sample")
        return GroupPoint(self.group, self.g_path[k])

    def factors_at(self, k: int) -> list[np.ndarray]:
        """Well conditioned factors whose product is ``g(t_k)``."""
        return self.anchors[: self.anchor_count[k]] + [self.chart_factors[k]]


EXP_LIMIT = 700.0


def _exp_minus_i(xi: np.ndarray) -> np.ndarray | None:
    """``exp(-i xi)`` for skew-Hermitian ``xi``; ``None`` past the float range."""
    h = -1j * xi
    w, q = np.linalg.eigh(0.5 * (h + h.conj().T))
    if np.max(np.abs(w)) > EXP_LIMIT:
        return None
    return (q * np.exp(w)) @ q.conj().T


# ---------------------------------------------------------------------------
# systems


class _DiagonalSystem:
    """Flow for groups whose algebra consists of diagonal matrices."""

    abelian = True

    def __init__(self, x0: ProjectivePoint, group: CompactGroup):
        self.group, self.hbar = group, x0.hbar
        lam_all = group.diagonal_weights
        v0 = x0.v
        self.support = np.flatnonzero(np.abs(v0) > 0)
        self.lam = np.ascontiguousarray(lam_all[self.support])
        self.k, self.d = self.lam.shape
        self.log_w0 = np.log(np.abs(v0[self.support]) ** 2)
        self.phase = v0[self.support] / np.abs(v0[self.support])
        self.n = group.n

    def initial(self) -> np.ndarray:
        return np.concatenate([self.log_w0 - np.max(self.log_w0), np.zeros(self.d)])

    def rhs(self, t: float, s: np.ndarray) -> np.ndarray:
        return kernels.diag_rhs(s, self.lam, self.hbar)

    def jac(self, t: float, s: np.ndarray) -> np.ndarray:
        return kernels.diag_jac(s, self.lam, self.hbar)

    def observe(self, s: np.ndarray) -> dict:
        p, mu, gn = kernels.diag_observe(s, self.lam, self.hbar)
        y = np.zeros(self.n, complex)
        y[self.support] = self.phase * np.sqrt(p)
        xi = s[self.k :].copy()
        return {"y": y, "mu": mu, "grad": gn, "xi": xi, "velocity": -mu}

    def phi(self, xi: np.ndarray) -> float:
        e = self.log_w0 + 2.0 * (self.lam @ xi)
        top = float(np.max(e))
        return 0.5 * self.hbar * (top + math.log(float(np.sum(np.exp(e - top)))))


class _ChartSystem:
    """Flow in the chart ``xi`` for general groups."""

    def __init__(self, x0: ProjectivePoint, group: CompactGroup):
        self.group, self.hbar = group, x0.hbar
        self.v0 = x0.v
        self.basis = group.basis
        self.herm = group.hermitian_basis
        self.flat_conj = group.basis.reshape(group.d, -1).conj()
        self.d = group.d
        self.abelian = group.is_abelian

    def initial(self) -> np.ndarray:
        return np.zeros(self.d)

    def _frame(self, xi: np.ndarray):
        h = np.tensordot(xi, self.herm, 1)
        a, q = np.linalg.eigh(h)
        c = q.conj().T @ self.v0
        w = q @ (np.exp(a - a.max()) * c)
        y = w / np.linalg.norm(w)
        nu = self.hbar * np.real((self.herm @ y) @ y.conj())
        return a, q, y, nu

    def _xi_dot(self, a, q, nu) -> tuple[np.ndarray, np.ndarray]:
        inu = np.tensordot(nu, self.herm, 1)
        npm = q.conj().T @ inu @ q
        dl = a[None, :] - a[:, None]
        small = np.abs(dl) < 1e-12
        dc = np.clip(dl, -700.0, 700.0)
        phi = np.where(small, 1.0, dc / np.where(small, 1.0, np.sinh(dc)))
        adot_h = q @ (phi * npm) @ q.conj().T
        xid = np.real(self.flat_conj @ (1j * adot_h).ravel())
        return xid, npm

    def rhs(self, t: float, xi: np.ndarray) -> np.ndarray:
        a, q, _, nu = self._frame(xi)
        return self._xi_dot(a, q, nu)[0]

    def jac(self, t: float, xi: np.ndarray) -> np.ndarray:
        f0 = self.rhs(t, xi)
        out = np.empty((self.d, self.d))
        for j in range(self.d):
            h = 1e-7 * max(1.0, abs(xi[j]))
            e = xi.copy()
            e[j] += h
            out[:, j] = (self.rhs(t, e) - f0) / h
        return out

    def omega(self, xi: np.ndarray) -> np.ndarray:
        a, q, _, nu = self._frame(xi)
        inu = np.tensordot(nu, self.herm, 1)
        npm = q.conj().T @ inu @ q
        dl = a[None, :] - a[:, None]
        return q @ (np.tanh(0.5 * dl) * npm) @ q.conj().T

    def observe(self, xi: np.ndarray) -> dict:
        a, q, y, nu = self._frame(xi)
        vel, _ = self._xi_dot(a, q, nu)
        mu_mat_y = np.tensordot(nu, self.basis, 1) @ y
        r = mu_mat_y - y * np.vdot(y, mu_mat_y)
        gn = math.sqrt(2 * self.hbar) * float(np.linalg.norm(r))
        return {"y": y, "mu": nu, "grad": gn, "xi": xi.copy(), "velocity": vel}

    def phi(self, xi: np.ndarray) -> float:
        h = np.tensordot(xi, self.herm, 1)
        a, q = np.linalg.eigh(h)
        c2 = np.abs(q.conj().T @ self.v0) ** 2
        mask = c2 > 0
        e = 2 * a[mask] + np.log(c2[mask])
        top = float(np.max(e))
        return 0.5 * self.hbar * (top + math.log(float(np.sum(np.exp(e - top)))))


def _system(x0: ProjectivePoint, group: CompactGroup):
    if group.is_diagonal:
        return _DiagonalSystem(x0, group)
    return _ChartSystem(x0, group)


_GAUSS = 0.5 / math.sqrt(3.0)


def _magnus_advance(sys_, u, xi_of_t: Callable, t0: float, t1: float, omega0, omega1, angle: float):
    """Advance ``u`` from ``t0`` to ``t1`` with fourth order Magnus steps."""
    h = t1 - t0
    scale = max(np.linalg.norm(omega0, 2), np.linalg.norm(omega1, 2))
    m = max(1, int(math.ceil(h * scale / angle)))
    m = min(m, 400)
    hs = h / m
    for i in range(m):
        a = t0 + i * hs
        mid = a + 0.5 * hs
        o1 = sys_.omega(xi_of_t(mid - _GAUSS * hs))
        o2 = sys_.omega(xi_of_t(mid + _GAUSS * hs))
        mag = 0.5 * hs * (o1 + o2) + (math.sqrt(3.0) / 12.0) * hs * hs * (o2 @ o1 - o1 @ o2)
        u = expm_skew(0.5 * (mag - mag.conj().T)) @ u
    return u


def integrate_flow(
    x0: ProjectivePoint,
    group: CompactGroup,
    opts: FlowOptions | None = None,
    **overrides,
) -> FlowTrajectory:
    """Integrate the flow from ``x0`` until the gradient drops below
    ``tol_grad`` or ``t_max`` is reached.

    Raises
    ------
    StepSizeUnderflow
        If the integrator fails to advance.
    ConsistencyLost
        If the unitary part drifts from the unitary group.
    """
    opts = opts or FlowOptions()
    if overrides:
        opts = FlowOptions(**{**opts.__dict__, **overrides})
    if x0.n != group.n:
        raise ValidationError("point and group dimensions differ")
    sys_ = _system(x0, group)
    chart = isinstance(sys_, _ChartSystem)
    start = time.perf_counter()
    s = sys_.initial()
    n = group.n
    eye = np.eye(n, dtype=complex)
    u = eye
    g_anchor, phi_anchor, factors = eye, 0.0, []
    obs = sys_.observe(s)
    times, xs, mus, grads, xis, us, gs, phis = [], [], [], [], [], [], [], []
    counts, chart_fs = [], []

    def record(t, o, u_now):
        y = o["y"]
        xi_c = o["xi"]
        if chart:
            x = u_now.conj().T @ y
            g_c = _exp_minus_i(group.matrix_of(xi_c)) @ u_now
            g = None if g_anchor is None else g_anchor @ g_c
            if g is not None and not np.all(np.isfinite(g)):
                g = None
            if not factors:
                xi, u_glob = xi_c, u_now
            elif g is not None:
                xi, u_glob = _lift_coords(g, group)
            else:
                xi, u_glob = np.full(group.d, np.nan), None
        else:
            x = y
            g = g_c = _exp_minus_i(group.matrix_of(xi_c))
            xi, u_glob = xi_c, eye
        times.append(float(t))
        xs.append(ProjectivePoint(x, x0.hbar))
        mus.append(float(np.linalg.norm(o["mu"])))
        grads.append(o["grad"])
        xis.append(xi)
        us.append(u_glob)
        gs.append(g)
        phis.append(phi_anchor + sys_.phi(xi_c))
        counts.append(len(factors))
        chart_fs.append(g_c)

    record(0.0, obs, u)
    converged = obs["grad"] <= opts.tol_grad
    nsteps = 0

    def new_solver(t0, s0):
        return LSODA(sys_.rhs, t0, s0, opts.t_max, rtol=opts.rtol, atol=opts.atol, jac=sys_.jac)

    if not converged:
        solver = new_solver(0.0, s)
        omega_prev = sys_.omega(s) if chart else None
        while True:
            t_old = solver.t
            msg = solver.step()
            if solver.status == "failed":
                raise StepSizeUnderflow(f"integrator failed at t={solver.t:.6g}: {msg}")
            nsteps += 1
            s = solver.y
            if chart:
                do = solver.dense_output()
                omega_new = sys_.omega(s)
                u = _magnus_advance(sys_, u, do, t_old, solver.t, omega_prev, omega_new, opts.magnus_angle)
                omega_prev = omega_new
                if np.linalg.norm(u.conj().T @ u - eye) > 1e-6:
                    raise ConsistencyLost("unitary factor drifted")
                u = unitary_part(u)
            obs = sys_.observe(s)
            record(solver.t, obs, u)
            if obs["grad"] <= opts.tol_grad:
                converged = True
                break
            if solver.status == "finished" or nsteps >= opts.max_steps:
                break
            if chart and _spread(group, s) > REBASE_SPREAD:
                factors.append(chart_fs[-1])
                g_anchor = gs[-1]
                phi_anchor = phis[-1]
                sys_ = _ChartSystem(xs[-1], group)
                s, u = sys_.initial(), eye
                solver = new_solver(solver.t, s)
                omega_prev = sys_.omega(s)
    return FlowTrajectory(
        group=group,
        x0=x0,
        times=np.array(times),
        points=xs,
        mu_norms=np.array(mus),
        grad_norms=np.array(grads),
        xi_coords=np.array(xis),
        u_path=us,
        g_path=gs,
        phi=np.array(phis),
        velocity=np.asarray(obs["velocity"], dtype=float),
        converged=bool(converged),
        anchors=factors,
        anchor_count=counts,
        chart_factors=chart_fs,
        stats={"steps": nsteps, "rebases": len(factors), "wall_s": time.perf_counter() - start},
    )


def _spread(group: CompactGroup, xi: np.ndarray) -> float:
    w = np.linalg.eigvalsh(-1j * group.matrix_of(xi))
    return float(w[-1] - w[0])


def _lift_coords(g: np.ndarray, group: CompactGroup) -> tuple[np.ndarray, np.ndarray]:
    """``(xi, u)`` with ``g = exp(-i xi) u``, without the membership checks of
    the public polar decomposition (``g`` may be badly conditioned here)."""
    w, sv, vh = np.linalg.svd(g)
    eta_mat = -1j * (w * np.log(np.maximum(sv, 1e-300))) @ w.conj().T
    coords, _ = group.coords_of(0.5 * (eta_mat - eta_mat.conj().T))
    return -coords, w @ vh


def chart_velocity(x0: ProjectivePoint, group: CompactGroup, xi: np.ndarray) -> np.ndarray:
    """``d xi / dt`` of the chart equation at the state ``xi`` (general groups)."""
    return _ChartSystem(x0, group).rhs(0.0, np.asarray(xi, dtype=float))


def chart_phi(x0: ProjectivePoint, group: CompactGroup, xi: np.ndarray) -> float:
    return _ChartSystem(x0, group).phi(np.asarray(xi, dtype=float))


# ---------------------------------------------------------------------------
# limits


def flow_limit(traj: FlowTrajectory) -> tuple[ProjectivePoint, float]:
    """Last point and its moment norm.

    Raises
    ------
    NotConverged
        If the trajectory stopped before reaching ``tol_grad``.
    """
    if not traj.converged:
        raise NotConverged("trajectory did not reach the gradient tolerance")
    x = traj.points[-1]
    return x, float(np.linalg.norm(moment_map(x, traj.group).coords))


def transport_direction(factors: list, direction: AlgebraVector) -> AlgebraVector:
    """Compact element whose increasing eigenflag is ``g`` applied to that of
    ``direction``, with the same eigenvalues; ``g`` is the product of
    ``factors``.  Each factor is applied followed by a QR step, which keeps
    the flag accurate however badly conditioned the product is."""
    group = direction.group
    lam, w = np.linalg.eigh(1j * direction.matrix)
    for g in reversed(factors):
        q, r = np.linalg.qr(g @ w)
        w = q * (np.diag(r) / np.abs(np.diag(r)))
    mat = -1j * (w * lam) @ w.conj().T
    return AlgebraVector(group, group.coords_of(mat)[0])


def polish_direction(x0: ProjectivePoint, xi: AlgebraVector, max_iter: int = 30) -> tuple[AlgebraVector, float]:
    """Move ``xi`` along its adjoint orbit until ``x0`` has no component in
    the eigenspaces of ``i xi`` above the one nearest ``-|xi|^2 / hbar``.

    Gauss-Newton on ``k = exp(c)``: the residual is ``Q_f^* k^{-1} v0`` with
    ``Q_f`` the forbidden eigenvectors.  Returns the polished element and the
    final residual norm.
    """
    group = xi.group
    lam, q = np.linalg.eigh(1j * xi.matrix)
    scale = max(1e-300, float(np.max(np.abs(lam))))
    target = -xi.norm() ** 2 / x0.hbar
    top = lam[int(np.argmin(np.abs(lam - target)))]
    forbidden = lam > top + 1e-6 * scale
    if not np.any(forbidden):
        return xi, 0.0
    v0 = x0.v
    ev0 = group.basis @ v0
    best_q, best_r = q, float(np.linalg.norm(q[:, forbidden].conj().T @ v0))
    for _ in range(max_iter):
        if best_r <= 1e-15:
            break
        qf = best_q[:, forbidden]
        r = qf.conj().T @ v0
        jac = -(qf.conj().T @ ev0.T)
        a = np.vstack([jac.real, jac.imag])
        c = np.linalg.lstsq(a, -np.concatenate([r.real, r.imag]), rcond=None)[0]
        q_new = expm_skew(group.matrix_of(c)) @ best_q
        r_new = float(np.linalg.norm(q_new[:, forbidden].conj().T @ v0))
        if r_new >= best_r:
            break
        best_q, best_r = q_new, r_new
    mat = -1j * (best_q * lam) @ best_q.conj().T
    return AlgebraVector(group, group.coords_of(mat)[0]), best_r


def escape_index(traj: FlowTrajectory, tol_class: float = TOL_CLASS) -> int | None:
    """Sample of smallest ``|grad| / |mu|`` among those with
    ``|mu| > tol_class``, when the trajectory later falls below ``tol_class``.

    Such a plateau is the signature of a flow that approached an unstable
    critical set and was pushed off it by rounding."""
    if traj.mu_norms[-1] > tol_class:
        return None
    above = np.flatnonzero(traj.mu_norms > tol_class)
    if len(above) == 0:
        return None
    k = int(above[np.argmin(traj.grad_norms[above] / traj.mu_norms[above])])
    if traj.grad_norms[k] > 1e-3 * traj.mu_norms[k]:
        return None
    return k


def dominant_weight(
    traj: FlowTrajectory, tol_class: float = TOL_CLASS
) -> tuple[AlgebraVector, AlgebraVector]:
    """Asymptotic direction ``xi_inf = lim xi(t)/t`` of the lifted flow.

    At a sample ``x_k = g_k^{-1} x0`` near the limit the optimal direction is
    ``-mu(x_k)``.  Its eigenflag is carried back to ``x0`` by ``g_k`` and the
    result is reduced to the compact algebra, which preserves the norm; a
    Gauss-Newton polish then makes the weight exact.  The chart velocity,
    transported the same way, is an independent estimate and must agree.

    The sample is the last one, or the plateau found by ``escape_index``
    when rounding pushed the flow off an unstable critical set.  In the
    latter case the result is returned only if the exact weight of the unit
    direction is below ``-m/2``, which certifies instability on its own.

    Raises
    ------
    NotUnstable
        If the limit has vanishing moment map and no plateau is certified.
    ExtrapolationDiverged
        If the two estimates disagree.
    """
    k = len(traj.times) - 1
    escaped = traj.mu_norms[k] <= tol_class
    if escaped:
        k = escape_index(traj, tol_class)
        if k is None:
            raise NotUnstable("trajectory limit has vanishing moment map")
    m = float(traj.mu_norms[k])
    group = traj.group
    mu_k = moment_map(traj.points[k], group)
    vel = AlgebraVector(group, np.asarray(traj.velocity, dtype=float))
    if group.is_abelian:
        xi_inf = -mu_k
    else:
        factors = traj.factors_at(k)
        xi_inf = transport_direction(factors, -mu_k)
        vel = transport_direction(factors, vel)
        xi_inf, _ = polish_direction(traj.x0, xi_inf)
    traj.stats["direction_sample"] = k
    if escaped:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SupportAmbiguous)
            w = mu_weight(traj.x0, xi_inf.unit()).weight
        if not w < -0.5 * m:
            raise NotUnstable("plateau direction does not certify instability")
    else:
        dev = float(np.linalg.norm(xi_inf.coords - vel.coords))
        if traj.converged and dev > 0.1 * m:
            raise ExtrapolationDiverged(f"direction estimates disagree by {dev:.3g}")
    return xi_inf, xi_inf.unit()


def lojasiewicz_fit(traj: FlowTrajectory, min_samples: int = 50) -> LojasiewiczFit:
    """Least-squares fit of the decay of ``d(x(t), x_inf)`` over the tail.

    A trajectory that starts at a critical point yields a degenerate fit with
    flag ``constant``.  When a straight line in ``(t, log d)`` fits better
    than any power law, the flag is ``super-polynomial``.

    Raises
    ------
    InsufficientSamples
        If fewer than ``min_samples`` usable tail samples exist.
    """
    if len(traj.times) == 1:
        return LojasiewiczFit(0.0, 0.0, 0.0, 0.0, "constant")
    x_end = traj.points[-1].v
    t = traj.times
    dist = np.array([projective_distance(p.v, x_end) for p in traj.points])
    keep = (t >= t[-1] / 3.0) & (dist > 1e-13)
    keep[-1] = False
    if np.sum(keep) < min_samples:
        keep = dist > 1e-13
        keep[0] = False
        keep[-1] = False
        if np.sum(keep) < min_samples:
            raise InsufficientSamples(f"need {min_samples} tail samples, have {int(np.sum(keep))}")
    tt, ld = t[keep], np.log(dist[keep])
    t0 = float(tt[0])

    def resid(p):
        logc, eps, tau = p
        return logc - eps * np.log(tt - (t0 - np.exp(tau))) - ld

    best = None
    for tau0 in (math.log(max(t0, 1e-3)), 0.0, math.log(max(t0, 1e-3)) + 3):
        try:
            r = sopt.least_squares(resid, [float(ld[0]), 1.0, tau0], method="lm", max_nfev=2000)
        except ValueError:
            continue
        if best is None or r.cost < best.cost:
            best = r
    logc, eps, tau = best.x
    res_pow = float(np.sqrt(np.mean(best.fun**2)))
    a, b = np.polyfit(tt, ld, 1)
    res_exp = float(np.sqrt(np.mean((a * tt + b - ld) ** 2)))
    flag = "super-polynomial" if (res_exp < res_pow or eps > 20.0) else "power-law"
    with np.errstate(over="ignore"):
        c, shift = float(np.exp(logc)), float(np.exp(tau))
    return LojasiewiczFit(float(eps), c, t0 - shift, res_pow, flag, float(-a), res_exp)
