"""Toral generators, parabolic subgroups and the alpha/beta constants.

A toral generator is a nonzero element ``zeta`` of the complexified algebra
such that ``i zeta`` is diagonalizable with real spectrum.  The parabolic
subgroup of ``zeta`` consists of the ``p`` for which
``exp(i t zeta) p exp(-i t zeta)`` converges as ``t -> +inf``; in the
eigenbasis of ``i zeta`` ordered by increasing eigenvalue these are the
block upper triangular matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NotInComplexification,
    NotInLattice,
    NotPowerOfTwo,
    NotToral,
    Singular,
    UnsupportedPreset,
    ValidationError,
    ZeroInput,
)
from .lie_core import (
    AlgebraVector,
    ComplexAlgebraVector,
    GroupPoint,
    expm_skew,
    project_complex,
    project_to_algebra,
)

TOL_MERGE = 1e-8
TOL_IMAG = 1e-8
MAX_COND = 1e8
TOL_BLOCK = 1e-8


@dataclass(frozen=True, eq=False)
class ToralDecomposition:
    """Spectral data of ``i zeta``.

    Attributes
    ----------
    eigenvalues : ndarray
        Strictly increasing distinct eigenvalues (real parts when the
        spectrum is not real).
    eigenprojectors : list of ndarray
        Spectral projectors onto the eigenspaces, in the same order.
        They are Hermitian when ``zeta`` lies in the compact algebra and
        oblique otherwise.
    semisimple, imaginary_spectrum : bool
        The two conditions defining a toral generator.
    vectors : ndarray
        Eigenvector matrix with columns grouped by eigenvalue.
    inverse : ndarray
        Inverse of ``vectors``.
    blocks : list of ndarray
        Column indices of each eigenvalue group.
    """

    eigenvalues: np.ndarray
    eigenprojectors: list
    semisimple: bool
    imaginary_spectrum: bool
    vectors: np.ndarray
    inverse: np.ndarray
    blocks: list

    @property
    def is_toral(self) -> bool:
        return self.semisimple and self.imaginary_spectrum

    @property
    def gap(self) -> float:
        """Smallest separation between distinct eigenvalues (inf if only one)."""
        lam = self.eigenvalues
        return float(np.min(np.diff(lam))) if len(lam) > 1 else math.inf

    def components(self, v: np.ndarray) -> np.ndarray:
        """Norms of the projections of ``v`` onto the eigenspaces."""
        c = self.inverse @ v
        return np.array([np.linalg.norm(self.vectors[:, b] @ c[b]) for b in self.blocks])

    def top_projection(self, v: np.ndarray, j: int) -> np.ndarray:
        c = self.inverse @ v
        b = self.blocks[j]
        return self.vectors[:, b] @ c[b]


def _cluster(values: np.ndarray, scale: float) -> list[np.ndarray]:
    order = np.argsort(values, kind="stable")
    groups: list[list[int]] = [[int(order[0])]]
    for i in order[1:]:
        if values[i] - values[groups[-1][-1]] <= TOL_MERGE * scale:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    return [np.array(g) for g in groups]


def decompose(z: np.ndarray) -> ToralDecomposition:
    """Spectral decomposition of ``i z`` for a complex matrix ``z``."""
    h = 1j * np.asarray(z, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(h, 2)))
    if np.linalg.norm(h - h.conj().T) <= 1e-12 * scale:
        w, q = np.linalg.eigh(0.5 * (h + h.conj().T))
        groups = _cluster(w, scale)
        v = q[:, np.concatenate(groups)]
        inv = v.conj().T
        semisimple, imag_ok, wr = True, True, w
    else:
        w, q = np.linalg.eig(h)
        wr = w.real
        imag_ok = bool(np.all(np.abs(w.imag) <= TOL_IMAG * scale))
        q = q / np.linalg.norm(q, axis=0)
        groups = _cluster(wr, scale)
        v = q[:, np.concatenate(groups)]
        cond = np.linalg.cond(v)
        semisimple = bool(np.isfinite(cond) and cond < MAX_COND)
        try:
            inv = np.linalg.inv(v)
        except np.linalg.LinAlgError:
            inv = np.full_like(v, np.nan)
            semisimple = False
    blocks, start = [], 0
    for g in groups:
        blocks.append(np.arange(start, start + len(g)))
        start += len(g)
    lam = np.array([float(np.mean(wr[g])) for g in groups])
    projs = [v[:, b] @ inv[b, :] for b in blocks]
    return ToralDecomposition(lam, projs, semisimple, imag_ok, v, inv, blocks)


def is_toral_generator(zeta: ComplexAlgebraVector) -> tuple[bool, ToralDecomposition]:
    """Test whether ``i zeta`` is diagonalizable with real spectrum.

    Raises
    ------
    ZeroInput
        If ``zeta`` is zero.
    """
    z = zeta.matrix
    if np.linalg.norm(z) == 0.0:
        raise ZeroInput("zeta must be nonzero")
    dec = decompose(z)
    return dec.is_toral, dec


def toral_decomposition(zeta: ComplexAlgebraVector) -> ToralDecomposition:
    """Decomposition of a toral generator; raises :class:`NotToral` otherwise."""
    ok, dec = is_toral_generator(zeta)
    if not ok:
        raise NotToral("i zeta is not diagonalizable with real spectrum")
    return dec


def _lower_block_norm(m: np.ndarray, blocks: list) -> float:
    s = 0.0
    for i, bi in enumerate(blocks):
        for bj in blocks[:i]:
            s += float(np.linalg.norm(m[np.ix_(bi, bj)]) ** 2)
    return math.sqrt(s)


def parabolic_limit(zeta: ComplexAlgebraVector, p: GroupPoint) -> tuple[bool, GroupPoint | None]:
    """Membership of ``p`` in the parabolic subgroup and the limit ``p_plus``.

    Returns
    -------
    member : bool
        True when the strictly lower blocks of ``p`` vanish in the
        increasing eigenbasis of ``i zeta``.
    p_plus : GroupPoint or None
        The block diagonal part, i.e. ``lim exp(i t zeta) p exp(-i t zeta)``.
    """
    dec = toral_decomposition(zeta)
    pm = dec.inverse @ p.matrix @ dec.vectors
    if _lower_block_norm(pm, dec.blocks) > TOL_BLOCK * max(1.0, np.linalg.norm(pm)):
        return False, None
    diag = np.zeros_like(pm)
    for b in dec.blocks:
        diag[np.ix_(b, b)] = pm[np.ix_(b, b)]
    return True, GroupPoint(p.group, dec.vectors @ diag @ dec.inverse)


def _flag_reduce(zeta: ComplexAlgebraVector):
    group = zeta.group
    dec = toral_decomposition(zeta)
    n = group.n
    if zeta.im.norm() <= 1e-14 * max(1.0, zeta.re.norm()):
        return zeta.re, None, dec
    q, r = np.linalg.qr(dec.vectors)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    lam = np.empty(n)
    for j, b in enumerate(dec.blocks):
        lam[b] = dec.eigenvalues[j]
    xi_mat = -1j * (q * lam) @ q.conj().T
    xi, res = project_to_algebra(xi_mat, group)
    if res > 1e-6 * max(1.0, np.linalg.norm(xi_mat)):
        raise NotInComplexification("flag reduction leaves the algebra")
    return xi, q, dec


def reduce_to_compact(zeta: ComplexAlgebraVector) -> AlgebraVector:
    """The compact element with the same eigenvalues whose increasing
    eigenflag equals that of ``zeta``."""
    return _flag_reduce(zeta)[0]


def mumford_reduce(zeta: ComplexAlgebraVector) -> tuple[AlgebraVector, GroupPoint]:
    """The unique compact element ``xi = p zeta p^{-1}`` with ``p`` parabolic.

    Orthonormalizes the flag ``V_1 ⊂ V_1 ⊕ V_2 ⊂ ...`` of increasing
    eigenvalues and assigns ``lambda_j`` to each orthogonal step.
    """
    group = zeta.group
    n = group.n
    xi, q, dec = _flag_reduce(zeta)
    if q is None:
        return xi, GroupPoint(group, np.eye(n, dtype=complex))
    p = q @ dec.inverse
    det = np.linalg.det(p)
    p = p / det ** (1.0 / n)
    gp = GroupPoint(group, p)
    try:
        gp.polar  # certifies membership in the complexified group
    except NotInComplexification as exc:
        if group.preset == "custom":
            raise UnsupportedPreset("parabolic factor is not certified for this group") from exc
        raise
    return xi, gp


def borel_decompose(xi: AlgebraVector, g: GroupPoint) -> tuple[GroupPoint, GroupPoint]:
    """Factor ``g = p u`` with ``p`` parabolic for ``xi`` and ``u`` in the group.

    ``p`` is upper triangular with positive diagonal in the increasing
    eigenbasis of ``i xi`` and satisfies ``p p^* = g g^*``.
    """
    group = xi.group
    if xi.norm() == 0.0:
        raise ZeroInput("xi must be nonzero")
    w, q = np.linalg.eigh(1j * xi.matrix)
    gm = q.conj().T @ g.matrix @ q
    m = gm @ gm.conj().T
    m = 0.5 * (m + m.conj().T)
    try:
        low = np.linalg.cholesky(m[::-1, ::-1])
    except np.linalg.LinAlgError as exc:
        raise Singular("g g^* is not positive definite") from exc
    upper = low[::-1, ::-1]
    p = q @ upper @ q.conj().T
    u = np.linalg.solve(p, g.matrix)
    pg, ug = GroupPoint(group, p), GroupPoint(group, u)
    if group.preset == "custom":
        try:
            pg.polar
            if not group.contains_unitary(u):
                raise NotInComplexification("unitary factor not in the group")
        except NotInComplexification as exc:
            raise UnsupportedPreset("Borel factor is not certified for this group") from exc
    return pg, ug


# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True, eq=False)
class AppendixConstants:
    """The ``2N`` real constants indexed ``nu = 0..2N-1`` and the residual of
    their defining linear system."""

    kind: str
    N: int
    values: np.ndarray
    residual: float


def beta_system_residual(values: np.ndarray) -> float:
    n2 = len(values)
    big_n = n2 // 2
    nu = np.arange(n2)
    worst = 0.0
    for k in range(1, 4 * big_n, 2):
        lhs = np.sum(values * np.exp(1j * k * nu * np.pi / (2 * big_n)))
        rhs = 1j if k < 2 * big_n else -1j
        worst = max(worst, abs(lhs - rhs))
    return worst


def alpha_system_residual(values: np.ndarray) -> float:
    n2 = len(values)
    big_n = n2 // 2
    nu = np.arange(n2)
    worst = 0.0
    for k in range(n2):
        lhs = np.sum(values * np.exp(1j * k * nu * np.pi / big_n))
        if k in (0, big_n):
            rhs = 0.0
        else:
            rhs = 1j if k < big_n else -1j
        worst = max(worst, abs(lhs - rhs))
    return worst


def beta_constants(N: int) -> AppendixConstants:
    """Solve the odd-index Vandermonde system for ``beta_nu(N)``."""
    if int(N) != N or N < 1:
        raise ValidationError("N must be a positive integer")
    N = int(N)
    odd = np.arange(1, 2 * N, 2)
    a = np.exp(1j * np.outer(odd, odd) * np.pi / (2 * N))
    z = np.linalg.solve(a, np.full(N, 1j))
    if np.max(np.abs(z.imag)) > 1e-10:
        raise ValidationError("beta system produced a non-real solution")
    vals = np.zeros(2 * N)
    vals[odd] = z.real
    return AppendixConstants("beta", N, vals, beta_system_residual(vals))


def alpha_constants(N: int) -> AppendixConstants:
    """``alpha_nu(N)`` for ``N = 2^m``, by doubling from ``N = 2``."""
    if int(N) != N or N < 2 or (int(N) & (int(N) - 1)):
        raise NotPowerOfTwo("N must be a power of two with N >= 2")
    N = int(N)
    vals = np.array([0.0, 0.5, 0.0, -0.5])
    size = 2
    while size < N:
        b = beta_constants(size).values
        vals = 0.5 * (np.concatenate([vals, vals]) + np.concatenate([b, -b]))
        size *= 2
    return AppendixConstants("alpha", N, vals, alpha_system_residual(vals))


def complete_to_parabolic(xi: AlgebraVector, eta: AlgebraVector) -> ComplexAlgebraVector:
    """Element ``zeta`` of the parabolic subalgebra of ``xi`` with ``zeta - i eta``
    in the compact algebra.

    ``zeta = i eta - sum_nu alpha_nu exp(-nu xi / 2N) eta exp(nu xi / 2N)``
    with ``N`` the smallest power of two exceeding the spectral width of
    ``i xi`` divided by ``2 pi``.

    Raises
    ------
    NotInLattice
        If ``exp(xi) != 1``.
    """
    group = xi.group
    if np.linalg.norm(expm_skew(xi.matrix) - np.eye(group.n)) > 1e-8:
        raise NotInLattice("exp(xi) is not the identity")
    lam = np.linalg.eigvalsh(1j * xi.matrix)
    width = (lam[-1] - lam[0]) / (2 * np.pi)
    N = 2
    while N <= width + 1e-9:
        N *= 2
    alpha = alpha_constants(N).values
    w, q = np.linalg.eigh(1j * xi.matrix)
    e = q.conj().T @ eta.matrix @ q
    diff = w[:, None] - w[None, :]
    total = np.zeros_like(e)
    for nu in range(1, 2 * N, 2):
        s = nu / (2 * N)
        total += alpha[nu] * np.exp(1j * s * diff) * e
    z = q @ (1j * e - total) @ q.conj().T
    zeta, res = project_complex(z, group)
    if res > 1e-8 * max(1.0, np.linalg.norm(z)):
        raise NotInComplexification("completion leaves the complexified algebra")
    return zeta
