"""Symplectic and Kähler structure of complex projective space.

Points are unit vectors with a fixed phase.  Tangent vectors at ``[v]`` are
represented by vectors orthogonal to ``v``.  The metric is
``g(a, b) = 2 hbar Re<a, b>``, the complex structure is multiplication by
``i`` and ``omega(a, b) = g(i a, b)``.  The moment map of a group ``G ⊂ U(n)``
has coordinates ``mu_a = hbar <v, i e_a v>``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import EmptySupport, NotCritical, Singular, SupportAmbiguous, ValidationError
from .lie_core import (
    AlgebraVector,
    CompactGroup,
    ComplexAlgebraVector,
    GroupPoint,
    expm_skew,
)
from .toral import ToralDecomposition, toral_decomposition

TOL_SUPPORT = 1e-9
TOL_CRITICAL = 1e-8
TOL_KERNEL = 1e-8


def _normalize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    nv = np.linalg.norm(v)
    if not np.isfinite(nv) or nv == 0.0:
        raise ValidationError("vector must be nonzero and finite")
    v = v / nv
    big = np.flatnonzero(np.abs(v) > 1e-12)
    ph = v[big[0]] / abs(v[big[0]])
    return v / ph


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """The line through ``v``, stored as a unit vector whose first nonzero
    coordinate is real and positive."""

    v: np.ndarray
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not self.hbar > 0:
            raise ValidationError("hbar must be positive")
        v = _normalize(self.v)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def n(self) -> int:
        return self.v.shape[0]

    def distance(self, other: "ProjectivePoint") -> float:
        return projective_distance(self.v, other.v)

    def moved(self, w: np.ndarray) -> "ProjectivePoint":
        return ProjectivePoint(w, self.hbar)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Tangent vector at ``base`` with representative orthogonal to ``base.v``."""

    base: ProjectivePoint
    rep: np.ndarray

    def __post_init__(self) -> None:
        v = self.base.v
        r = np.asarray(self.rep, dtype=complex)
        r = r - v * np.vdot(v, r)
        object.__setattr__(self, "rep", r)

    def norm(self) -> float:
        return math.sqrt(2 * self.base.hbar) * float(np.linalg.norm(self.rep))

    def metric(self, other: "TangentVector") -> float:
        return metric(self.base, self.rep, other.rep)

    def J(self) -> "TangentVector":
        return TangentVector(self.base, 1j * self.rep)


@dataclass(frozen=True, eq=False)
class WeightReport:
    """The weight ``w(x, zeta)`` and its spectral evidence."""

    zeta: ComplexAlgebraVector
    weight: float
    lambda_max: float
    support: np.ndarray
    x_plus: ProjectivePoint
    quantized: int | None = None
    eigenvalues: np.ndarray = field(default_factory=lambda: np.zeros(0))
    components: np.ndarray = field(default_factory=lambda: np.zeros(0))
    mode: str = "exact"
    ambiguous: bool = False


# ---------------------------------------------------------------------------
# basic geometry


def projective_distance(v: np.ndarray, w: np.ndarray) -> float:
    """Fubini-Study angle between the lines through ``v`` and ``w``."""
    v = v / np.linalg.norm(v)
    w = w / np.linalg.norm(w)
    c = np.vdot(v, w)
    return float(math.atan2(np.linalg.norm(w - v * c), abs(c)))


def metric(x: ProjectivePoint, a: np.ndarray, b: np.ndarray) -> float:
    return 2 * x.hbar * float(np.real(np.vdot(a, b)))


def omega(x: ProjectivePoint, a: np.ndarray, b: np.ndarray) -> float:
    return metric(x, 1j * np.asarray(a), b)


def tangent_project(x: ProjectivePoint, w: np.ndarray) -> np.ndarray:
    return w - x.v * np.vdot(x.v, w)


def act(g: GroupPoint | np.ndarray, x: ProjectivePoint) -> ProjectivePoint:
    m = g.matrix if isinstance(g, GroupPoint) else np.asarray(g)
    return ProjectivePoint(m @ x.v, x.hbar)


def geodesic(x: ProjectivePoint, rep: np.ndarray, s: float) -> ProjectivePoint:
    """Point at parameter ``s`` along the great circle with initial velocity ``rep``."""
    r = tangent_project(x, rep)
    nr = np.linalg.norm(r)
    if nr == 0.0:
        return x
    return ProjectivePoint(math.cos(s * nr) * x.v + math.sin(s * nr) * r / nr, x.hbar)


# ---------------------------------------------------------------------------
# moment map and infinitesimal action


def moment_map(x: ProjectivePoint, group: CompactGroup) -> AlgebraVector:
    """Coordinates ``hbar <v, i e_a v>``."""
    hv = group.hermitian_basis @ x.v
    return AlgebraVector(group, x.hbar * np.real(hv @ x.v.conj()))


def moment_matrix(x: ProjectivePoint, group: CompactGroup) -> np.ndarray:
    return moment_map(x, group).matrix


def f_value(x: ProjectivePoint, group: CompactGroup) -> float:
    """``f = |mu|^2 / 2``."""
    m = moment_map(x, group)
    return 0.5 * float(m.coords @ m.coords)


def _as_complex(zeta) -> ComplexAlgebraVector:
    return zeta if isinstance(zeta, ComplexAlgebraVector) else zeta.complexify()


def infinitesimal_action(x: ProjectivePoint, zeta) -> TangentVector:
    """Vector field of ``zeta = xi + i eta`` at ``x``: ``P_v(zeta v)``."""
    z = _as_complex(zeta)
    return TangentVector(x, z.matrix @ x.v)


def action_matrix(x: ProjectivePoint, group: CompactGroup) -> np.ndarray:
    """Columns ``P_v(e_a v)``: the real-linear map from the algebra to tangents."""
    cols = group.basis @ x.v
    return cols - np.outer(cols @ x.v.conj(), x.v).reshape(cols.shape)


def action_adjoint(x: ProjectivePoint, group: CompactGroup, rep: np.ndarray) -> AlgebraVector:
    """Adjoint of the infinitesimal action with respect to ``g`` and the trace form."""
    cols = action_matrix(x, group)
    return AlgebraVector(group, 2 * x.hbar * np.real(cols.conj() @ rep))


def grad_f(x: ProjectivePoint, group: CompactGroup) -> TangentVector:
    """Gradient of ``|mu|^2 / 2``: ``i P_v(mu(x) v)``."""
    return TangentVector(x, 1j * (moment_matrix(x, group) @ x.v))


# ---------------------------------------------------------------------------
# Kempf-Ness function


def kempf_ness_value(x: ProjectivePoint, g: GroupPoint | np.ndarray) -> float:
    """``hbar log |g^{-1} v|``."""
    m = g.matrix if isinstance(g, GroupPoint) else np.asarray(g, dtype=complex)
    try:
        w = np.linalg.solve(m, x.v)
    except np.linalg.LinAlgError as exc:
        raise Singular("g is singular") from exc
    if not np.all(np.isfinite(w)):
        raise Singular("g is singular")
    return x.hbar * math.log(float(np.linalg.norm(w)))


def _log_norm_exp(lam: np.ndarray, c2: np.ndarray, t: float) -> float:
    """``(1/2) log sum_j c2_j exp(2 t lam_j)`` without overflow."""
    mask = c2 > 0
    e = 2 * t * lam[mask] + np.log(c2[mask])
    top = float(np.max(e))
    return 0.5 * (top + math.log(float(np.sum(np.exp(e - top)))))


def kempf_ness_ray(x: ProjectivePoint, xi: AlgebraVector, t: float) -> float:
    """``Phi_x(exp(-i t xi)) = hbar log |exp(i t xi) v|`` evaluated stably."""
    lam, q = np.linalg.eigh(1j * xi.matrix)
    c2 = np.abs(q.conj().T @ x.v) ** 2
    return x.hbar * _log_norm_exp(lam, c2, t)


# ---------------------------------------------------------------------------
# weights


def flow_along(x: ProjectivePoint, dec: ToralDecomposition, t: float) -> ProjectivePoint:
    """``exp(i t zeta) x`` from the spectral data of ``i zeta``."""
    c = dec.inverse @ x.v
    lam = np.empty(len(c))
    for j, b in enumerate(dec.blocks):
        lam[b] = dec.eigenvalues[j]
    nz = np.abs(c) > 0
    top = float(np.max(t * lam[nz])) if np.any(nz) else 0.0
    scaled = np.zeros(len(c), dtype=complex)
    scaled[nz] = np.exp(t * lam[nz] - top) * c[nz]
    w = dec.vectors @ scaled
    return ProjectivePoint(w, x.hbar)


def mu_weight(
    x: ProjectivePoint,
    zeta,
    mode: str = "exact",
    T: float | None = None,
    tol_support: float = TOL_SUPPORT,
    group: CompactGroup | None = None,
) -> WeightReport:
    """Weight of ``x`` along a toral generator.

    Parameters
    ----------
    mode : {"exact", "simulated"}
        ``exact`` takes ``hbar`` times the largest eigenvalue of ``i zeta``
        whose eigenspace meets ``v`` above ``tol_support``.  ``simulated``
        evaluates ``<mu(exp(i T zeta) x), Re zeta>`` with ``T`` defaulting to
        ``40 / gap``.

    Warns
    -----
    SupportAmbiguous
        When an eigencomponent lies within half a decade of ``tol_support``.
    """
    z = _as_complex(zeta)
    group = group or z.group
    dec = toral_decomposition(z)
    comps = dec.components(x.v)
    support = comps > tol_support
    if not np.any(support):
        raise EmptySupport("v has no eigencomponent above the support threshold")
    band = (comps > tol_support / math.sqrt(10)) & (comps < tol_support * math.sqrt(10))
    ambiguous = bool(np.any(band))
    if ambiguous:
        warnings.warn("eigencomponent near the support threshold", SupportAmbiguous, stacklevel=2)
    top = int(np.flatnonzero(support)[-1])
    lam_max = float(dec.eigenvalues[top])
    x_plus = ProjectivePoint(dec.top_projection(x.v, top), x.hbar)
    if mode == "exact":
        weight = x.hbar * lam_max
    elif mode == "simulated":
        if T is None:
            T = 40.0 / dec.gap if math.isfinite(dec.gap) else 1.0
        y = flow_along(x, dec, T)
        weight = float(moment_map(y, group).inner(z.re))
    else:
        raise ValidationError(f"unknown weight mode {mode!r}")
    quantized = None
    if z.im.norm() == 0.0 and np.linalg.norm(expm_skew(z.re.matrix) - np.eye(group.n)) <= 1e-8:
        quantized = int(round(weight / (2 * math.pi * x.hbar)))
    return WeightReport(
        z, float(weight), lam_max, support, x_plus, quantized, dec.eigenvalues, comps, mode, ambiguous
    )


def weight_value(x: ProjectivePoint, xi, tol_support: float = TOL_SUPPORT) -> float:
    """Exact weight as a float, quietly."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SupportAmbiguous)
        return mu_weight(x, xi, tol_support=tol_support).weight


def energy_along_ray(
    x: ProjectivePoint, xi: AlgebraVector, group: CompactGroup, T: float | None = None
) -> float:
    """``int |d/dt exp(i t xi) x|^2 dt`` over the real line, by quadrature."""
    dec = toral_decomposition(xi.complexify())
    gap = dec.gap if math.isfinite(dec.gap) else 1.0
    T = T if T is not None else 40.0 / gap

    def speed2(t: float) -> float:
        y = flow_along(x, dec, t)
        r = infinitesimal_action(y, xi).rep
        return 2 * x.hbar * float(np.real(np.vdot(r, r)))

    pts = np.linspace(-T, T, 41)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        total += integrate.quad(speed2, a, b, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
    return total


# ---------------------------------------------------------------------------
# critical points


def grad_norm(x: ProjectivePoint, group: CompactGroup) -> float:
    return grad_f(x, group).norm()


def hessian_at_critical(
    x: ProjectivePoint, eta: AlgebraVector, group: CompactGroup | None = None, tol: float = TOL_CRITICAL
) -> float:
    """Second derivative of ``f`` along ``exp(i t eta) x`` at a critical point:
    ``|L^* L eta|^2 - |[mu(x), eta]|^2``.

    Raises
    ------
    NotCritical
        If the gradient of ``f`` at ``x`` exceeds ``tol``.
    """
    group = group or eta.group
    if grad_norm(x, group) > tol:
        raise NotCritical("x is not a critical point of |mu|^2")
    lx = infinitesimal_action(x, eta).rep
    lsl = action_adjoint(x, group, lx)
    mu = moment_matrix(x, group)
    br = mu @ eta.matrix - eta.matrix @ mu
    return float(lsl.coords @ lsl.coords - np.real(np.vdot(br, br)))


def isotropy_rank(
    x: ProjectivePoint, group: CompactGroup, tol: float = TOL_KERNEL
) -> tuple[int, int, float]:
    """Kernel dimensions of the real and complexified infinitesimal actions.

    Returns
    -------
    (dim ker L, real dim ker L^c, smallest singular value of L)
    """
    cols = action_matrix(x, group) * math.sqrt(2 * x.hbar)
    real = np.concatenate([cols.real, cols.imag], axis=1).T
    s = np.linalg.svd(real, compute_uv=False)
    d = group.d
    k_real = d - int(np.sum(s >= tol))
    icols = 1j * cols
    cplx = np.concatenate(
        [np.concatenate([cols.real, cols.imag], axis=1), np.concatenate([icols.real, icols.imag], axis=1)]
    ).T
    sc = np.linalg.svd(cplx, compute_uv=False)
    k_cplx = 2 * d - int(np.sum(sc >= tol))
    sigma_min = float(s[-1]) if len(s) == d else 0.0
    return k_real, k_cplx, sigma_min


def random_point(n: int, rng: np.random.Generator, hbar: float = 1.0, support: Sequence[int] | None = None) -> ProjectivePoint:
    """Gaussian random point, optionally restricted to a coordinate support."""
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if support is not None:
        mask = np.zeros(n, bool)
        mask[list(support)] = True
        v = np.where(mask, v, 0)
    return ProjectivePoint(v, hbar)
