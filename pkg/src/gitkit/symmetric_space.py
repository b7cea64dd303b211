"""Geometry of the quotient ``M = G^c / G`` in the chart ``eta -> [exp(i eta)]``.

A point is stored by its canonical representative ``exp(i eta)`` (Hermitian
positive definite).  Tangent vectors at ``[g]`` are algebra elements ``eta``
standing for ``d pi(g) g i eta``; the metric is the trace form on ``eta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.optimize as sopt

from .errors import DegeneratePlane, InsufficientSamples, NotClosed, ValidationError
from .lie_core import AlgebraVector, CompactGroup, GroupPoint, polar_decompose, random_unit

TOL_DEGENERATE = 1e-12
MAX_GROUP_ORDER = 1000


def _exp_i(eta_mat: np.ndarray, s: float = 1.0) -> np.ndarray:
    """``exp(i s eta)`` for skew-Hermitian ``eta``."""
    h = 1j * eta_mat
    w, q = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (q * np.exp(s * w)) @ q.conj().T


@dataclass(frozen=True, eq=False)
class CosetPoint:
    """The coset ``[exp(i eta)]``."""

    eta: AlgebraVector

    @property
    def group(self) -> CompactGroup:
        return self.eta.group

    @cached_property
    def rep(self) -> np.ndarray:
        """Canonical representative ``exp(i eta)``."""
        return _exp_i(self.eta.matrix)

    @cached_property
    def rep_inv(self) -> np.ndarray:
        return _exp_i(self.eta.matrix, -1.0)


@dataclass(frozen=True, eq=False)
class CosetTangent:
    """Tangent vector ``d pi(g) g i eta_dot`` at ``base``."""

    base: CosetPoint
    eta_dot: AlgebraVector

    def norm(self) -> float:
        return self.eta_dot.norm()


def origin(group: CompactGroup) -> CosetPoint:
    return CosetPoint(group.zero())


def canonical_point(g: GroupPoint | np.ndarray, group: CompactGroup | None = None) -> CosetPoint:
    """``[g]`` through the polar decomposition ``g = exp(i eta) u``.

    Raises
    ------
    NotInComplexification
        If ``g`` does not certify as an element of the complexified group.
    """
    if isinstance(g, GroupPoint):
        return CosetPoint(g.polar[0])
    if group is None:
        raise ValidationError("a group is needed for a bare matrix")
    return CosetPoint(polar_decompose(np.asarray(g, dtype=complex), group)[0])


def act_on(h: GroupPoint | np.ndarray, p: CosetPoint) -> CosetPoint:
    """``h [g] = [h g]``."""
    m = h.matrix if isinstance(h, GroupPoint) else np.asarray(h, dtype=complex)
    return canonical_point(m @ p.rep, p.group)


def _relative_log(p: CosetPoint, q: CosetPoint) -> tuple[np.ndarray, np.ndarray]:
    """Singular data of ``p^{-1} q = W diag(s) V^*``: returns ``(W, log s)``."""
    w, s, _ = np.linalg.svd(p.rep_inv @ q.rep)
    return w, np.log(s)


def log_map(p: CosetPoint, q: CosetPoint) -> AlgebraVector:
    """Initial velocity at ``p`` of the unit-time geodesic to ``q``."""
    w, ls = _relative_log(p, q)
    mat = -1j * (w * ls) @ w.conj().T
    return AlgebraVector(p.group, p.group.coords_of(0.5 * (mat - mat.conj().T))[0])


def distance(p: CosetPoint, q: CosetPoint) -> float:
    """``|eta|`` where ``exp(i eta)`` is the polar part of ``p^{-1} q``."""
    _, ls = _relative_log(p, q)
    return float(math.sqrt(float(ls @ ls)))


def exp_map(p: CosetPoint, v: AlgebraVector | CosetTangent, t: float = 1.0) -> CosetPoint:
    """``[exp(i eta_p) exp(i t v)]``."""
    vec = v.eta_dot if isinstance(v, CosetTangent) else v
    return canonical_point(p.rep @ _exp_i(vec.matrix, t), p.group)


def geodesic_point(p: CosetPoint, q: CosetPoint, s: float) -> CosetPoint:
    """Point at fraction ``s`` of the geodesic from ``p`` to ``q``."""
    w, ls = _relative_log(p, q)
    step = (w * np.exp(s * ls)) @ w.conj().T
    return canonical_point(p.rep @ step, p.group)


def midpoint(p: CosetPoint, q: CosetPoint) -> CosetPoint:
    return geodesic_point(p, q, 0.5)


# ---------------------------------------------------------------------------
# connection and curvature


def covariant_derivative(g_path, eta_path, t_index: int, dt: float) -> CosetTangent:
    """``eta_dot + [Re(g^{-1} g_dot), eta]`` by central differences.

    ``g_path`` and ``eta_path`` are uniformly sampled with spacing ``dt``; the
    vector field along ``[g(t)]`` is ``d pi(g) g i eta(t)``.  The result is
    expressed in the same trivialization (through ``g(t_index)``).

    Raises
    ------
    InsufficientSamples
        If fewer than three samples exist or ``t_index`` is at an end.
    """
    k = len(g_path)
    if k < 3 or len(eta_path) != k:
        raise InsufficientSamples("need at least three aligned samples")
    if not 0 < t_index < k - 1:
        raise InsufficientSamples("central differences need interior samples")
    gs = [g.matrix if isinstance(g, GroupPoint) else np.asarray(g, dtype=complex) for g in g_path]
    group = eta_path[0].group
    g = gs[t_index]
    gdot = (gs[t_index + 1] - gs[t_index - 1]) / (2 * dt)
    z = np.linalg.solve(g, gdot)
    re = 0.5 * (z - z.conj().T)  # real part in the complexified algebra
    eta = eta_path[t_index].matrix
    etadot = (eta_path[t_index + 1].matrix - eta_path[t_index - 1].matrix) / (2 * dt)
    out = etadot + (re @ eta - eta @ re)
    vec = AlgebraVector(group, group.coords_of(out)[0])
    return CosetTangent(canonical_point(gs[t_index], group), vec)


def curvature_operator(eta1: AlgebraVector, eta2: AlgebraVector, eta3: AlgebraVector) -> tuple[AlgebraVector, float]:
    """``[[eta1, eta2], eta3]`` and the sectional curvature of ``(eta1, eta2)``.

    Raises
    ------
    DegeneratePlane
        If ``eta1`` and ``eta2`` are numerically parallel.
    """
    inner = eta1.bracket(eta2)
    value = inner.bracket(eta3)
    return value, sectional_curvature(eta1, eta2)


def sectional_curvature(eta1: AlgebraVector, eta2: AlgebraVector) -> float:
    """``-|[eta1, eta2]|^2 / (|eta1|^2 |eta2|^2 - <eta1, eta2>^2)``.

    Raises
    ------
    DegeneratePlane
        If the denominator is below ``TOL_DEGENERATE``.
    """
    den = eta1.norm() ** 2 * eta2.norm() ** 2 - eta1.inner(eta2) ** 2
    if den < TOL_DEGENERATE:
        raise DegeneratePlane("the two vectors do not span a plane")
    return -eta1.bracket(eta2).norm() ** 2 / den


# ---------------------------------------------------------------------------
# circumcenter


def _max_dist(center: CosetPoint, points: list) -> float:
    return max(distance(center, q) for q in points)


def circumcenter_certificate(
    center: CosetPoint, points: list, n_dirs: int = 32, step: float = 1e-4, seed: int = 0
) -> float:
    """Largest decrease of the maximal distance when moving ``step`` along
    ``n_dirs`` random unit directions from ``center``."""
    rng = np.random.default_rng(seed)
    base = _max_dist(center, points)
    worst = -math.inf
    for _ in range(n_dirs):
        moved = exp_map(center, random_unit(center.group, rng), step)
        worst = max(worst, base - _max_dist(moved, points))
    return float(worst)


def circumcenter(points: list, max_iter: int = 300) -> tuple[CosetPoint, float]:
    """Center and radius of the smallest ball containing ``points``.

    Riemannian subgradient steps toward the farthest point with diminishing
    step, then an epigraph polish ``min r^2`` subject to ``d_i^2 <= r^2`` in
    the chart.

    Raises
    ------
    ValidationError
        If ``points`` is empty.
    """
    if not points:
        raise ValidationError("circumcenter needs at least one point")
    group = points[0].group
    if len(points) == 1:
        return points[0], 0.0
    center = points[0]
    far = max(points, key=lambda q: distance(center, q))
    center = midpoint(center, far)
    lower = 0.5 * max(distance(a, b) for i, a in enumerate(points) for b in points[i + 1 :])
    best, best_val = center, _max_dist(center, points)
    for it in range(max_iter):
        dists = [distance(center, q) for q in points]
        j = int(np.argmax(dists))
        if dists[j] < best_val:
            best, best_val = center, dists[j]
        if dists[j] - lower <= 1e-12 * max(1.0, dists[j]):
            break
        center = geodesic_point(center, points[j], 1.0 / (it + 3))
    center = best

    def d2(c):
        p = CosetPoint(AlgebraVector(group, c[:-1]))
        return np.array([c[-1] - distance(p, q) ** 2 for q in points])

    r0 = _max_dist(center, points)
    c0 = np.concatenate([center.eta.coords, [r0**2]])
    # the true center lies within r0 of the estimate; the box keeps line
    # searches out of the range where exp(i eta) overflows
    box = [(c - r0 - 1.0, c + r0 + 1.0) for c in center.eta.coords] + [(0.0, 4.0 * r0**2 + 1.0)]
    res = sopt.minimize(
        lambda c: c[-1],
        c0,
        method="SLSQP",
        bounds=box,
        constraints=[{"type": "ineq", "fun": d2}],
        options={"ftol": 1e-16, "maxiter": 500},
    )
    polished = CosetPoint(AlgebraVector(group, res.x[:-1]))
    if _max_dist(polished, points) < _max_dist(center, points):
        center = polished
    return center, _max_dist(center, points)


# ---------------------------------------------------------------------------
# Cartan fixed point


def enumerate_group(generators: list, bound: int = MAX_GROUP_ORDER, tol: float = 1e-8) -> list[np.ndarray]:
    """All products of the generators, or ``NotClosed`` past ``bound`` elements."""
    gens = [g.matrix if isinstance(g, GroupPoint) else np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise ValidationError("need at least one generator")
    n = gens[0].shape[0]
    elems = [np.eye(n, dtype=complex)]
    frontier = [np.eye(n, dtype=complex)]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = a @ g
                scale = max(1.0, np.linalg.norm(b))
                if not any(np.linalg.norm(b - e) <= tol * scale for e in elems):
                    elems.append(b)
                    new.append(b)
                    if len(elems) > bound:
                        raise NotClosed(f"generated group exceeds {bound} elements")
        frontier = new
    return elems


def cartan_fixed_point(generators: list, group: CompactGroup | None = None, tol: float = 1e-6) -> tuple[CosetPoint, GroupPoint, dict]:
    """Fixed point of a finite subgroup ``K`` of ``G^c`` and a conjugator.

    The circumcenter ``[h]`` of the orbit ``K [1]`` is fixed by ``K``; then
    ``h^{-1} K h`` lies in ``G``.  Returns the point, ``h`` and a report with
    the worst displacement and the worst distance from ``G``.

    Raises
    ------
    NotClosed
        If the generated group exceeds the enumeration bound.
    """
    if group is None:
        if not isinstance(generators[0], GroupPoint):
            raise ValidationError("a group is needed for bare matrices")
        group = generators[0].group
    elems = enumerate_group(generators)
    orbit = [canonical_point(k, group) for k in elems]
    uniq = []
    for p in orbit:
        if not any(distance(p, q) <= 1e-10 for q in uniq):
            uniq.append(p)
    center, radius = circumcenter(uniq)
    h = center.rep
    h_inv = center.rep_inv
    displacement = max(distance(act_on(k, center), center) for k in elems)
    off = 0.0
    for k in elems:
        c = h_inv @ k @ h
        off = max(off, float(np.linalg.norm(c.conj().T @ c - np.eye(group.n))))
        if not group.contains_unitary(c, tol=max(tol, 1e-8)) and off <= tol:
            off = max(off, 2 * tol)
    report = {
        "order": len(elems),
        "radius": radius,
        "max_displacement": displacement,
        "max_unitarity_defect": off,
        "fixed": displacement <= tol,
        "conjugated_into_group": off <= tol,
    }
    return center, GroupPoint(group, h), report


__all__ = [
    "CosetPoint",
    "CosetTangent",
    "origin",
    "canonical_point",
    "act_on",
    "log_map",
    "distance",
    "exp_map",
    "geodesic_point",
    "midpoint",
    "covariant_derivative",
    "curvature_operator",
    "sectional_curvature",
    "circumcenter",
    "circumcenter_certificate",
    "enumerate_group",
    "cartan_fixed_point",
]
