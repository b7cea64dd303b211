"""Exact theory for diagonal (torus) actions.

Weights, the moment polytope of the supported weights, its nearest point to
the origin and the resulting classification.  For torus presets the hull
combinatorics (location of the origin, vertices, affine rank) are decided in
rational arithmetic on the integer weight rows, which are linearly equivalent
to the orthonormal-basis weights; distances are computed in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .errors import EmptySupport, UnsupportedPreset
from .lie_core import AlgebraVector, CompactGroup
from .projective import TOL_SUPPORT, ProjectivePoint, isotropy_rank
from .verdict import StabilityVerdict

MARGIN = 1e-10


@dataclass(frozen=True, eq=False)
class WeightSystem:
    """Weights ``lambda_j`` (rows, orthonormal-basis coordinates) and support.

    ``integer_rows`` are exact coordinates related to ``lambdas`` by an
    invertible linear map, or ``None`` when no exact form is known.
    """

    group: CompactGroup
    lambdas: np.ndarray
    support: np.ndarray
    hbar: float = 1.0
    integer_rows: np.ndarray | None = None

    @property
    def supported(self) -> np.ndarray:
        return self.lambdas[self.support]


@dataclass(frozen=True, eq=False)
class MomentPolytope:
    """``hbar conv{lambda_j : j supported}`` with the location of the origin.

    ``contains_zero`` is ``outside``, ``boundary`` or ``relative_interior``.
    ``zero_weights`` are convex coefficients over the supported coordinates
    representing the origin (``None`` when outside).
    """

    points: np.ndarray
    vertices: np.ndarray
    vertex_index: np.ndarray
    contains_zero: str
    nearest: np.ndarray
    m: float
    gap: float
    affine_rank: int
    exact: bool
    zero_weights: np.ndarray | None

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices.tolist(),
            "contains_zero": self.contains_zero,
            "nearest": self.nearest.tolist(),
            "m": float(self.m),
        }


# ---------------------------------------------------------------------------
# weights


def extract_weights(group: CompactGroup, x: ProjectivePoint, tol_support: float = TOL_SUPPORT) -> WeightSystem:
    """Read ``(lambda_j)_a`` off the diagonal of ``i e_a``; support from ``|v_j|``.

    Raises
    ------
    UnsupportedPreset
        If the group is not diagonal.
    """
    if not group.is_diagonal:
        raise UnsupportedPreset("weights are defined for diagonal groups only")
    if x.n != group.n:
        raise UnsupportedPreset("point and group dimensions differ")
    lam = group.diagonal_weights
    support = np.abs(x.v) > tol_support
    rows = group.weight_matrix if group.preset == "torus" else None
    return WeightSystem(group, lam, support, x.hbar, rows)


def torus_f0(ws: WeightSystem, xi: np.ndarray) -> float:
    """``min_j <hbar lambda_j, xi>`` over supported ``j``."""
    return float(np.min(ws.hbar * ws.supported @ np.asarray(xi, dtype=float)))


# ---------------------------------------------------------------------------
# exact linear programming


def _simplex_max(a: list, b: list, c: list) -> tuple[str, Fraction | None, list | None]:
    """Maximize ``c x`` subject to ``a x = b``, ``x >= 0`` in exact arithmetic.

    Two-phase tableau simplex with Bland's rule.
    """
    m, n = len(a), len(c)
    a = [[Fraction(v) for v in row] for row in a]
    b = [Fraction(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-v for v in a[i]]
            b[i] = -b[i]
    tab = [a[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    ncol = n + m

    def pivot(r: int, col: int) -> None:
        pv = tab[r][col]
        tab[r] = [v / pv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [vi - f * vr for vi, vr in zip(tab[i], tab[r])]
        basis[r] = col

    def run(obj: list, allowed: int) -> str:
        while True:
            enter = None
            for j in range(allowed):
                if j in basis:
                    continue
                red = obj[j] - sum(obj[basis[i]] * tab[i][j] for i in range(m))
                if red > 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            best = None
            for i in range(m):
                if tab[i][enter] > 0:
                    ratio = tab[i][-1] / tab[i][enter]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], enter)

    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    run(phase1, ncol)
    if any(basis[i] >= n and tab[i][-1] != 0 for i in range(m)):
        return "infeasible", None, None
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if tab[i][j] != 0:
                    pivot(i, j)
                    break
    obj = [Fraction(v) for v in c] + [Fraction(0)] * m
    status = run(obj, n)
    if status != "optimal":
        return status, None, None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    return "optimal", sum(ci * xi for ci, xi in zip(obj, x)), x


def _location_lp(points: list) -> tuple[int, list | None]:
    """Exact location of the origin relative to ``conv(points)``.

    Maximizes ``t`` over convex coefficients ``c`` with ``sum c_j p_j = 0``
    and ``c_j >= t``.  Returns ``(-1, None)`` when outside, ``(0, c)`` on the
    relative boundary and ``(1, c)`` in the relative interior.
    """
    s, k = len(points), len(points[0])
    nv = 2 * s + 1  # c_1..c_s, t, slack_1..slack_s
    rows, rhs = [], []
    for a in range(k):
        rows.append([points[j][a] for j in range(s)] + [0] * (s + 1))
        rhs.append(0)
    rows.append([1] * s + [0] * (s + 1))
    rhs.append(1)
    for j in range(s):
        r = [0] * nv
        r[j], r[s], r[s + 1 + j] = 1, -1, -1
        rows.append(r)
        rhs.append(0)
    obj = [0] * s + [1] + [0] * s
    status, val, x = _simplex_max(rows, rhs, obj)
    if status == "infeasible":
        return -1, None
    return (1 if val > 0 else 0), x[:s]


def _in_hull_exact(p: list, others: list) -> bool:
    s, k = len(others), len(p)
    rows = [[others[j][a] for j in range(s)] for a in range(k)] + [[1] * s]
    rhs = list(p) + [1]
    return _simplex_max(rows, rhs, [0] * s)[0] == "optimal"


def _rank_exact(rows: list) -> int:
    mat = [[Fraction(v) for v in r] for r in rows]
    rank, ncol = 0, len(mat[0]) if mat else 0
    for col in range(ncol):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / mat[rank][col]
                mat[i] = [vi - f * vr for vi, vr in zip(mat[i], mat[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# floating counterparts


def _location_float(points: np.ndarray) -> tuple[int, np.ndarray | None]:
    s, k = points.shape
    a_eq = np.zeros((k + 1, s + 1))
    a_eq[:k, :s] = points.T
    a_eq[k, :s] = 1.0
    b_eq = np.zeros(k + 1)
    b_eq[k] = 1.0
    a_ub = np.hstack([-np.eye(s), np.ones((s, 1))])  # t - c_j <= 0
    obj = np.zeros(s + 1)
    obj[s] = -1.0
    res = linprog(obj, A_ub=a_ub, b_ub=np.zeros(s), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * s + [(0, 1)], method="highs")
    if res.status == 2:
        return -1, None
    c = np.clip(res.x[:s], 0.0, None)
    c = c / c.sum()
    resid = float(np.linalg.norm(points.T @ c))
    if resid > MARGIN * max(1.0, float(np.max(np.abs(points)))):
        return -1, None
    return (1 if res.x[s] > MARGIN else 0), c


def _in_hull_float(p: np.ndarray, others: np.ndarray) -> bool:
    s = others.shape[0]
    a_eq = np.vstack([others.T, np.ones((1, s))])
    b_eq = np.concatenate([p, [1.0]])
    res = linprog(np.zeros(s), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * s, method="highs")
    return res.status == 0


# ---------------------------------------------------------------------------
# nearest point


def min_norm_point(points: np.ndarray, tol: float = 1e-12, max_iter: int = 1000) -> tuple[np.ndarray, np.ndarray, float]:
    """Point of minimum norm in ``conv(points)`` by Wolfe's active-set method.

    Returns ``(x, coefficients, gap)`` where ``gap = |x|^2 - min_j <p_j, x>``
    is the Frank-Wolfe duality gap at termination.
    """
    pts = np.asarray(points, dtype=float)
    s = pts.shape[0]
    scale = max(1.0, float(np.max(np.sum(pts**2, axis=1))))
    j0 = int(np.argmin(np.sum(pts**2, axis=1)))
    active, lam = [j0], np.array([1.0])
    x = pts[j0].copy()
    for _ in range(max_iter):
        x = lam @ pts[active]
        dots = pts @ x
        j = int(np.argmin(dots))
        if float(x @ x - dots[j]) <= tol * scale or j in active:
            break
        active.append(j)
        lam = np.append(lam, 0.0)
        while True:
            ps = pts[active]
            k = len(active)
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = ps @ ps.T
            kkt[:k, k] = kkt[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            alpha = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            if np.all(alpha > 1e-14):
                lam = alpha
                break
            mask = alpha <= 1e-14
            theta = min(1.0, float(np.min(lam[mask] / (lam[mask] - alpha[mask]))))
            lam = lam + theta * (alpha - lam)
            keep = lam > 1e-14
            keep[int(np.argmax(lam))] = True
            active = [a for a, kp in zip(active, keep) if kp]
            lam = lam[keep] / lam[keep].sum()
    x = lam @ pts[active]
    coeffs = np.zeros(s)
    coeffs[active] = lam
    gap = max(0.0, float(x @ x - np.min(pts @ x)))
    return x, coeffs, gap


# ---------------------------------------------------------------------------
# polytope


def moment_polytope(ws: WeightSystem, hbar: float | None = None) -> MomentPolytope:
    """Hull of the supported ``hbar lambda_j`` and the location of the origin.

    Raises
    ------
    EmptySupport
        If no coordinate is supported.
    """
    hbar = ws.hbar if hbar is None else hbar
    idx = np.flatnonzero(ws.support)
    if len(idx) == 0:
        raise EmptySupport("no supported weight")
    pts = hbar * ws.lambdas[idx]
    exact = ws.integer_rows is not None
    if exact:
        ex = [tuple(int(v) for v in ws.integer_rows[j]) for j in idx]
        uniq = list(dict.fromkeys(ex))
        loc, coef = _location_lp([list(p) for p in uniq])
        vert_keys = [p for p in uniq if not _in_hull_exact(list(p), [list(q) for q in uniq if q != p])]
        vert_pos = [ex.index(p) for p in vert_keys]
        base = uniq[0]
        rank = _rank_exact([[a - b for a, b in zip(p, base)] for p in uniq[1:]]) if len(uniq) > 1 else 0
        zero = None
        if coef is not None:
            zero = np.zeros(len(idx))
            for p, cv in zip(uniq, coef):
                members = [i for i, q in enumerate(ex) if q == p]
                zero[members] = float(cv) / len(members)
    else:
        keys = [tuple(np.round(p / max(1e-300, float(np.max(np.abs(pts)))), 12)) for p in pts]
        first = {}
        for i, kk in enumerate(keys):
            first.setdefault(kk, i)
        uniq_pos = list(first.values())
        upts = pts[uniq_pos]
        loc, coef = _location_float(upts)
        vert_pos = [
            uniq_pos[i]
            for i in range(len(uniq_pos))
            if len(uniq_pos) == 1 or not _in_hull_float(upts[i], np.delete(upts, i, axis=0))
        ]
        rank = int(np.linalg.matrix_rank(upts[1:] - upts[0], tol=1e-9)) if len(uniq_pos) > 1 else 0
        zero = None
        if coef is not None:
            zero = np.zeros(len(idx))
            for kk, cv in zip(first, coef):
                members = [i for i, q in enumerate(keys) if q == kk]
                zero[members] = cv / len(members)
    where = {-1: "outside", 0: "boundary", 1: "relative_interior"}[loc]
    if loc >= 0:
        nearest, m, gap = np.zeros(pts.shape[1]), 0.0, 0.0
    else:
        nearest, _, gap = min_norm_point(pts)
        m = float(np.linalg.norm(nearest))
    vpos = np.array(sorted(vert_pos), dtype=int)
    return MomentPolytope(pts, pts[vpos], idx[vpos], where, nearest, m, gap, rank, exact, zero)


def nearest_point(poly: MomentPolytope) -> tuple[np.ndarray, float]:
    return poly.nearest.copy(), poly.m


# ---------------------------------------------------------------------------
# classification


def _zero_point(x: ProjectivePoint, ws: WeightSystem, weights: np.ndarray) -> ProjectivePoint:
    """Point of the orbit closure with ``|v_j|^2`` equal to the given convex
    weights on the support; its moment map vanishes."""
    v = np.zeros(x.n, dtype=complex)
    idx = np.flatnonzero(ws.support)
    phase = x.v[idx] / np.abs(x.v[idx])
    v[idx] = phase * np.sqrt(np.clip(weights, 0.0, None))
    return ProjectivePoint(v, x.hbar)


def torus_classify(
    group: CompactGroup, x: ProjectivePoint, hbar: float | None = None, tol_support: float = TOL_SUPPORT
) -> StabilityVerdict:
    """Classification from the supported weight hull.

    Unstable iff the origin lies outside; polystable iff it lies in the
    relative interior; stable iff in addition the supported weights span
    the whole weight space affinely.

    Raises
    ------
    UnsupportedPreset
        If the group is not diagonal.
    """
    if hbar is not None and hbar != x.hbar:
        x = ProjectivePoint(x.v, hbar)
    ws = extract_weights(group, x, tol_support)
    poly = moment_polytope(ws)
    diags = ["exact_hull" if poly.exact else "floating_hull"]
    if poly.contains_zero == "outside":
        xi = AlgebraVector(group, -poly.nearest / poly.m)
        cert = {"xi_unit": xi, "nearest": poly.nearest.copy()}
        return StabilityVerdict("unstable", poly.m, cert, None, diags, "exact", {"polytope": poly})
    x0 = _zero_point(x, ws, poly.zero_weights)
    _, _, smin = isotropy_rank(x0, group)
    if poly.contains_zero == "boundary":
        klass = "semistable"
    elif poly.affine_rank == group.d:
        klass = "stable"
    else:
        klass = "polystable"
    return StabilityVerdict(klass, 0.0, {"x_zero": x0}, smin, diags, "exact", {"polytope": poly})


def lattice_certificate(
    group: CompactGroup, x: ProjectivePoint, tol: float = 1e-3, max_denominator: int = 10**4
) -> tuple[AlgebraVector, float]:
    """Lattice element whose ratio ``-w(x, xi) / |xi|`` is within ``tol`` of ``m``.

    Rational approximation of the optimal direction in lattice coordinates
    with denominators up to ``max_denominator``; returns the best element
    found and its ratio.

    Raises
    ------
    UnsupportedPreset
        If the group has no lattice data.
    """
    gens = group.lattice_generators()
    ws = extract_weights(group, x)
    poly = moment_polytope(ws)
    gm = np.array([g.coords for g in gens]).T
    if poly.m == 0.0:
        target = 0.0
        direction = np.zeros(group.d)
        direction[0] = 1.0
    else:
        target = poly.m
        direction = -poly.nearest / poly.m
    y = np.linalg.solve(gm, direction)
    y = y / np.max(np.abs(y))
    q = np.arange(1, max_denominator + 1)[:, None]
    ks = np.round(q * y[None, :])
    ks = ks[np.any(ks != 0, axis=1)]
    coords = ks @ gm.T
    norms = np.linalg.norm(coords, axis=1)
    w = ws.hbar * np.max(coords @ ws.supported.T, axis=1)
    ratio = -w / norms
    ok = np.flatnonzero(ratio >= target - tol)
    best = int(ok[0]) if len(ok) else int(np.argmax(ratio))
    return AlgebraVector(group, coords[best]), float(ratio[best])


def exact_weight(ws: WeightSystem, xi: np.ndarray) -> float:
    """``hbar max_j <lambda_j, xi>`` over supported ``j``."""
    return float(ws.hbar * np.max(ws.supported @ np.asarray(xi, dtype=float)))


def hull_distance_check(poly: MomentPolytope, probe: np.ndarray) -> float:
    """``<eta*, p - eta*>`` at ``probe``; nonnegative for every hull point."""
    return float(poly.nearest @ (np.asarray(probe) - poly.nearest))


__all__ = [
    "WeightSystem",
    "MomentPolytope",
    "extract_weights",
    "moment_polytope",
    "nearest_point",
    "min_norm_point",
    "torus_classify",
    "torus_f0",
    "lattice_certificate",
    "exact_weight",
    "hull_distance_check",
]
