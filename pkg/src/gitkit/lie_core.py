"""Compact matrix groups G in U(n), their Lie algebras and complexifications.

Conventions
-----------
The inner product on n x n complex matrices is ``<A, B> = Re tr(A^* B)``.
A Lie algebra is stored as an orthonormal basis ``e_1..e_d`` of
skew-Hermitian matrices.  An element of the complexified algebra is a pair
``(re, im)`` realized as ``re + i im``.  Elements of the complexified group
are invertible matrices ``g = exp(i eta) u`` with ``eta`` in the algebra and
``u`` in the group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import (
    NotClosedUnderBracket,
    NotInComplexification,
    NotSkewHermitian,
    RankDeficientWeights,
    Singular,
    UnsupportedPreset,
    ValidationError,
)

TOL_SKEW = 1e-12
TOL_GRAM = 1e-10
TOL_BRACKET = 1e-10
TOL_MEMBERSHIP = 1e-6

PRESETS = ("full_unitary", "special_unitary", "torus", "custom")


# ---------------------------------------------------------------------------
# matrix helpers


def inner(a: np.ndarray, b: np.ndarray) -> float:
    """Real trace form ``Re tr(a^* b)``."""
    return float(np.real(np.vdot(a, b)))


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def expm_hermitian(h: np.ndarray) -> np.ndarray:
    """``exp(h)`` for Hermitian ``h`` via eigendecomposition."""
    w, q = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (q * np.exp(w)) @ q.conj().T


def expm_skew(a: np.ndarray) -> np.ndarray:
    """``exp(a)`` for skew-Hermitian ``a``; the result is unitary to rounding."""
    k = -0.5j * (a - a.conj().T)
    w, q = np.linalg.eigh(k)
    return (q * np.exp(1j * w)) @ q.conj().T


def unitary_part(m: np.ndarray) -> np.ndarray:
    """Closest unitary matrix (polar factor) to ``m``."""
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def _gram_schmidt(mats: Sequence[np.ndarray], tol: float = 1e-10) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for m in mats:
        r = np.array(m, dtype=complex)
        for _ in range(2):
            for q in out:
                r = r - inner(q, r) * q
        nr = math.sqrt(inner(r, r))
        if nr < tol:
            raise ValidationError("basis elements are linearly dependent")
        out.append(r / nr)
    return out


def _integer_kernel(a: np.ndarray) -> np.ndarray:
    """Basis (columns) of the integer lattice ``{z in Z^m : a z = 0}``.

    Unimodular column reduction of ``a`` stacked over the identity; the
    transform columns that end over zero columns span the kernel.
    """
    a = [[int(x) for x in row] for row in np.atleast_2d(a)]
    rows, m = len(a), len(a[0])
    t = [[int(i == j) for j in range(m)] for i in range(m)]
    cols = [[a[i][j] for i in range(rows)] + [t[i][j] for i in range(m)] for j in range(m)]
    pivot_col = 0
    for r in range(rows):
        if pivot_col >= m:
            break
        while True:
            nz = [j for j in range(pivot_col, m) if cols[j][r] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][r]))
            cols[pivot_col], cols[j0] = cols[j0], cols[pivot_col]
            done = True
            for j in range(pivot_col + 1, m):
                q = cols[j][r] // cols[pivot_col][r]
                if q:
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[pivot_col])]
                if cols[j][r] != 0:
                    done = False
            if done:
                pivot_col += 1
                break
    kern = [c[rows:] for c in cols[pivot_col:]]
    if not kern:
        return np.zeros((m, 0), dtype=np.int64)
    return np.array(kern, dtype=np.int64).T


def saturate(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Saturation of the column lattice of an integer matrix.

    Returns ``(s, y)``: the columns of ``s`` form a basis of
    ``Z^n ∩ colspace(w)`` and the columns of ``y`` a basis of the integer
    left kernel of ``w``.
    """
    n = w.shape[0]
    y = _integer_kernel(w.T)
    if y.shape[1] == 0:
        return np.eye(n, dtype=np.int64), y
    return _integer_kernel(y.T), y


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True, eq=False)
class CompactGroup:
    """A compact group ``G ⊂ U(n)`` described by an orthonormal algebra basis.

    Attributes
    ----------
    n : int
        Ambient dimension.
    basis : ndarray, shape (d, n, n)
        Orthonormal skew-Hermitian basis.
    preset : str
        One of ``full_unitary``, ``special_unitary``, ``torus``, ``custom``.
    weight_matrix : ndarray or None
        Integer ``n x k`` matrix for torus presets, as given.
    lattice_basis : ndarray or None
        Integer ``n x k`` matrix whose column ``s`` gives the lattice
        generator ``2 pi i diag(s)``.
    """

    n: int
    basis: np.ndarray
    preset: str
    weight_matrix: np.ndarray | None = None
    lattice_basis: np.ndarray | None = None
    _left_kernel: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.basis.setflags(write=False)

    @property
    def d(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def _flat_conj(self) -> np.ndarray:
        return self.basis.reshape(self.d, -1).conj()

    @cached_property
    def hermitian_basis(self) -> np.ndarray:
        """The Hermitian matrices ``i e_a``."""
        return 1j * self.basis

    @cached_property
    def is_abelian(self) -> bool:
        b = self.basis
        return all(
            np.linalg.norm(bracket(b[i], b[j])) <= TOL_BRACKET
            for i in range(self.d)
            for j in range(i + 1, self.d)
        )

    @cached_property
    def is_diagonal(self) -> bool:
        off = self.basis.copy()
        for a in range(self.d):
            off[a][np.diag_indices(self.n)] = 0
        return bool(np.all(np.abs(off) <= TOL_SKEW))

    @cached_property
    def diagonal_weights(self) -> np.ndarray:
        """Rows ``lambda_j`` with ``(lambda_j)_a = (i e_a)_jj`` for diagonal groups."""
        if not self.is_diagonal:
            raise UnsupportedPreset("weights are defined for diagonal (torus) groups only")
        return np.real(np.einsum("ajj->ja", self.hermitian_basis)).copy()

    def coords_of(self, a: np.ndarray) -> tuple[np.ndarray, float]:
        """Orthogonal projection coordinates of ``a`` and the residual norm."""
        a = np.asarray(a, dtype=complex)
        c = np.real(self._flat_conj @ a.ravel())
        res = float(np.linalg.norm(a - np.tensordot(c, self.basis, 1)))
        return c, res

    def matrix_of(self, coords: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(coords, dtype=float), self.basis, 1)

    def vector(self, coords: Iterable[float]) -> "AlgebraVector":
        return AlgebraVector(self, np.asarray(list(coords), dtype=float))

    def zero(self) -> "AlgebraVector":
        return AlgebraVector(self, np.zeros(self.d))

    def lattice_generators(self) -> list["AlgebraVector"]:
        if self.lattice_basis is None:
            raise UnsupportedPreset("lattice data exists for torus presets only")
        out = []
        for s in self.lattice_basis.T:
            m = 2j * np.pi * np.diag(s.astype(float))
            out.append(AlgebraVector(self, self.coords_of(m)[0]))
        return out

    @property
    def torus_lattice(self) -> list["AlgebraVector"]:
        return self.lattice_generators()

    def contains_unitary(self, u: np.ndarray, tol: float = 1e-8) -> bool:
        """Membership test for a unitary matrix."""
        n = self.n
        if np.linalg.norm(u.conj().T @ u - np.eye(n)) > tol:
            return False
        if self.preset == "full_unitary":
            return True
        if self.preset == "special_unitary":
            return abs(np.linalg.det(u) - 1.0) <= tol
        if self.preset == "torus":
            if np.linalg.norm(u - np.diag(np.diag(u))) > tol:
                return False
            theta = np.angle(np.diag(u)) / (2 * np.pi)
            y = self._left_kernel
            if y is None or y.shape[1] == 0:
                return True
            r = y.T @ theta
            return bool(np.all(np.abs(r - np.round(r)) <= tol))
        # custom: certify through a logarithm
        t, z = sla.schur(u, output="complex")
        lg = (z * (1j * np.angle(np.diag(t)))) @ z.conj().T
        return self.coords_of(lg)[1] <= tol * max(1.0, np.linalg.norm(lg))

    def to_json(self) -> dict:
        out: dict = {"preset": self.preset, "n": self.n}
        if self.preset == "torus":
            out["weights"] = self.weight_matrix.tolist()
        if self.preset == "custom":
            out["basis"] = [
                [[[float(z.real), float(z.imag)] for z in row] for row in m] for m in self.basis
            ]
        return out


def _check_basis(mats: np.ndarray) -> None:
    for m in mats:
        if np.linalg.norm(m + m.conj().T) > TOL_SKEW * max(1.0, np.linalg.norm(m)):
            raise NotSkewHermitian("basis element is not skew-Hermitian")


def _check_closure(basis: np.ndarray) -> None:
    d = basis.shape[0]
    flat = basis.reshape(d, -1).conj()
    for i in range(d):
        for j in range(i + 1, d):
            c = bracket(basis[i], basis[j])
            coeff = np.real(flat @ c.ravel())
            if np.linalg.norm(c - np.tensordot(coeff, basis, 1)) > TOL_BRACKET:
                raise NotClosedUnderBracket(f"[e_{i}, e_{j}] leaves the span")


def full_unitary(n: int) -> CompactGroup:
    """U(n) with the canonical orthonormal basis."""
    if n < 1:
        raise ValidationError("n must be positive")
    mats = []
    for j in range(n):
        e = np.zeros((n, n), complex)
        e[j, j] = 1j
        mats.append(e)
    mats.extend(_offdiagonal(n))
    return CompactGroup(n, np.array(mats), "full_unitary")


def special_unitary(n: int) -> CompactGroup:
    """SU(n) with generalized Gell-Mann diagonal elements."""
    if n < 2:
        raise ValidationError("special_unitary needs n >= 2")
    mats = []
    for k in range(1, n):
        diag = np.zeros(n)
        diag[:k] = 1.0
        diag[k] = -k
        mats.append(1j * np.diag(diag) / math.sqrt(k * (k + 1)))
    mats.extend(_offdiagonal(n))
    return CompactGroup(n, np.array(mats, dtype=complex), "special_unitary")


def _offdiagonal(n: int) -> list[np.ndarray]:
    out = []
    s = 1 / math.sqrt(2)
    for j in range(n):
        for k in range(j + 1, n):
            a = np.zeros((n, n), complex)
            a[j, k], a[k, j] = s, -s
            b = np.zeros((n, n), complex)
            b[j, k] = b[k, j] = 1j * s
            out.extend([a, b])
    return out


def torus(weights: Sequence[Sequence[int]]) -> CompactGroup:
    """Torus with Lie algebra spanned by ``2 pi i diag(W c)``."""
    w = np.asarray(weights)
    if w.ndim != 2 or w.size == 0:
        raise ValidationError("weight matrix must be a nonempty n x k array")
    if not np.all(np.asarray(w, dtype=float) == np.round(np.asarray(w, dtype=float))):
        raise ValidationError("torus weights must be integers")
    w = np.asarray(np.round(np.asarray(w, dtype=float)), dtype=np.int64)
    n, k = w.shape
    if np.linalg.matrix_rank(w.astype(float)) < k:
        raise RankDeficientWeights("weight matrix must have full column rank")
    q, r = np.linalg.qr(w.astype(float))
    q = q * np.sign(np.diag(r))
    basis = np.array([1j * np.diag(q[:, a]) for a in range(k)])
    s, y = saturate(w)
    return CompactGroup(n, basis, "torus", weight_matrix=w, lattice_basis=s, _left_kernel=y)


def custom(basis: Sequence[np.ndarray]) -> CompactGroup:
    """Group from a user basis; orthonormalized when it is not already."""
    mats = np.array([np.asarray(m, dtype=complex) for m in basis])
    if mats.ndim != 3 or mats.shape[0] == 0 or mats.shape[1] != mats.shape[2]:
        raise ValidationError("custom basis must be a nonempty list of square matrices")
    _check_basis(mats)
    mats = 0.5 * (mats - mats.conj().transpose(0, 2, 1))
    d = mats.shape[0]
    gram = np.array([[inner(a, b) for b in mats] for a in mats])
    if np.linalg.norm(gram - np.eye(d)) > TOL_GRAM:
        mats = np.array(_gram_schmidt(list(mats)))
    _check_closure(mats)
    return CompactGroup(mats.shape[1], mats, "custom")


def spin_representation(two_j: int) -> CompactGroup:
    """The image of su(2) in the irreducible representation on ``C^(2j+1)``,
    as a custom group."""
    if two_j < 1:
        raise ValidationError("two_j must be a positive integer")
    j = two_j / 2
    m = np.arange(j, -j - 1, -1)
    n = len(m)
    jp = np.zeros((n, n))
    for k in range(1, n):
        jp[k - 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jx = (jp + jp.T) / 2
    jy = (jp - jp.T) / 2j
    jz = np.diag(m)
    return custom([1j * a / np.linalg.norm(a) for a in (jx, jy, jz)])


def build_group(spec) -> CompactGroup:
    """Build a group from a descriptor dictionary or a raw list of basis matrices."""
    if isinstance(spec, CompactGroup):
        return spec
    if not isinstance(spec, dict):
        return custom(spec)
    preset = spec.get("preset")
    if preset not in PRESETS:
        raise ValidationError(f"unknown preset {preset!r}")
    if preset == "torus":
        g = torus(spec["weights"])
        if "n" in spec and int(spec["n"]) != g.n:
            raise ValidationError("n does not match the weight matrix")
        return g
    if preset == "custom":
        return custom(spec["basis"])
    n = int(spec.get("n", 0))
    return full_unitary(n) if preset == "full_unitary" else special_unitary(n)


# ---------------------------------------------------------------------------
# algebra and group elements


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    """Element of the Lie algebra in basis coordinates."""

    group: CompactGroup
    coords: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coords, dtype=float).reshape(self.group.d)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_matrix(cls, a: np.ndarray, group: CompactGroup) -> "AlgebraVector":
        return cls(group, group.coords_of(a)[0])

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.group.matrix_of(self.coords)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def inner(self, other: "AlgebraVector") -> float:
        return float(self.coords @ other.coords)

    def bracket(self, other: "AlgebraVector") -> "AlgebraVector":
        """``[self, other]`` projected back to the algebra."""
        return AlgebraVector(self.group, self.group.coords_of(bracket(self.matrix, other.matrix))[0])

    def unit(self) -> "AlgebraVector":
        nrm = self.norm()
        if nrm == 0:
            raise ValidationError("cannot normalize the zero vector")
        return AlgebraVector(self.group, self.coords / nrm)

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(self.group, self.coords + other.coords)

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(self.group, self.coords - other.coords)

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector(self.group, -self.coords)

    def __mul__(self, s: float) -> "AlgebraVector":
        return AlgebraVector(self.group, float(s) * self.coords)

    __rmul__ = __mul__

    def complexify(self, im: "AlgebraVector | None" = None) -> "ComplexAlgebraVector":
        return ComplexAlgebraVector(self, im if im is not None else self.group.zero())

    def __repr__(self) -> str:
        return f"AlgebraVector({np.array2string(self.coords, precision=6)})"


@dataclass(frozen=True, eq=False)
class ComplexAlgebraVector:
    """Element ``re + i im`` of the complexified Lie algebra."""

    re: AlgebraVector
    im: AlgebraVector

    @property
    def group(self) -> CompactGroup:
        return self.re.group

    @classmethod
    def from_matrix(cls, z: np.ndarray, group: CompactGroup) -> "ComplexAlgebraVector":
        """Split ``z = xi + i eta`` and project each part; see :func:`project_complex`."""
        return project_complex(z, group)[0]

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.re.matrix + 1j * self.im.matrix

    def norm(self) -> float:
        return math.hypot(self.re.norm(), self.im.norm())

    def __mul__(self, s: float) -> "ComplexAlgebraVector":
        return ComplexAlgebraVector(self.re * s, self.im * s)

    __rmul__ = __mul__

    def __neg__(self) -> "ComplexAlgebraVector":
        return ComplexAlgebraVector(-self.re, -self.im)

    def __repr__(self) -> str:
        return f"ComplexAlgebraVector(re={self.re!r}, im={self.im!r})"


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """Invertible matrix certified to lie in the complexified group."""

    group: CompactGroup
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @cached_property
    def polar(self) -> tuple[AlgebraVector, np.ndarray]:
        return polar_decompose(self.matrix, self.group)

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)

    def __matmul__(self, other: "GroupPoint") -> "GroupPoint":
        return GroupPoint(self.group, self.matrix @ other.matrix)

    def inv(self) -> "GroupPoint":
        return GroupPoint(self.group, self.inverse)


def identity(group: CompactGroup) -> GroupPoint:
    return GroupPoint(group, np.eye(group.n, dtype=complex))


# ---------------------------------------------------------------------------
# operations


def project_to_algebra(a: np.ndarray, group: CompactGroup) -> tuple[AlgebraVector, float]:
    """Orthogonal projection of a matrix onto the algebra, with the residual norm."""
    c, res = group.coords_of(a)
    return AlgebraVector(group, c), res


def project_complex(
    z: np.ndarray, group: CompactGroup
) -> tuple[ComplexAlgebraVector, float]:
    """Split ``z = xi + i eta`` with skew-Hermitian ``xi, eta`` and project both."""
    z = np.asarray(z, dtype=complex)
    xi = 0.5 * (z - z.conj().T)
    eta = -0.5j * (z + z.conj().T)
    a, ra = project_to_algebra(xi, group)
    b, rb = project_to_algebra(eta, group)
    return ComplexAlgebraVector(a, b), math.hypot(ra, rb)


def exp_element(zeta: ComplexAlgebraVector, t: float = 1.0) -> GroupPoint:
    """``exp(t zeta)`` in the complexified group."""
    z = t * zeta.matrix
    if zeta.im.norm() == 0.0:
        m = expm_skew(z)
    elif zeta.re.norm() == 0.0:
        m = expm_hermitian(z)
    else:
        m = sla.expm(z)
    return GroupPoint(zeta.group, m)


def exp_i(eta: AlgebraVector) -> np.ndarray:
    """The positive Hermitian matrix ``exp(i eta)``."""
    return expm_hermitian(1j * eta.matrix)


def polar_decompose(
    g: np.ndarray, group: CompactGroup, tol: float = TOL_MEMBERSHIP
) -> tuple[AlgebraVector, np.ndarray]:
    """Write ``g = exp(i eta) u`` with ``eta`` in the algebra and ``u`` unitary.

    The Hermitian factor ``(g g^*)^{1/2}`` is taken from the singular value
    decomposition ``g = W S V^*``: ``i eta = W log(S) W^*`` and ``u = W V^*``.

    Raises
    ------
    Singular
        If ``g`` is numerically singular.
    NotInComplexification
        If ``eta`` is not in the algebra or ``u`` is not in the group.
    """
    g = np.asarray(g, dtype=complex)
    w, s, vh = np.linalg.svd(g)
    if s[-1] <= 1e-14 * max(s[0], 1e-300) or not np.all(np.isfinite(s)):
        raise Singular("matrix is numerically singular")
    herm_log = (w * np.log(s)) @ w.conj().T
    eta_mat = -1j * herm_log
    eta_mat = 0.5 * (eta_mat - eta_mat.conj().T)
    eta, res = project_to_algebra(eta_mat, group)
    if res > tol * max(1.0, eta.norm()):
        raise NotInComplexification(f"Hermitian part leaves the algebra (residual {res:.3g})")
    u = w @ vh
    if group.preset != "full_unitary" and not group.contains_unitary(u, tol=max(tol, 1e-8)):
        raise NotInComplexification("unitary part is not in the group")
    return eta, u


def adjoint(g: GroupPoint | np.ndarray, zeta: ComplexAlgebraVector) -> ComplexAlgebraVector:
    """``g zeta g^{-1}``."""
    m = g.matrix if isinstance(g, GroupPoint) else np.asarray(g)
    gz = m @ zeta.matrix
    conj = np.linalg.solve(m.T, gz.T).T
    return project_complex(conj, zeta.group)[0]


def lattice_enumerate(group: CompactGroup, radius: float, max_count: int = 10**6) -> list[AlgebraVector]:
    """All nonzero lattice elements of norm at most ``radius``, sorted by norm."""
    if group.lattice_basis is None:
        raise UnsupportedPreset("lattice enumeration needs a torus preset")
    s = group.lattice_basis.astype(float) * 2 * np.pi
    k = s.shape[1]
    gram = s.T @ s
    bounds = np.floor(radius * np.sqrt(np.diag(np.linalg.inv(gram))) + 1e-9).astype(int)
    box = int(np.prod(2 * bounds + 1))
    if box > max_count:
        raise ValidationError("radius too large for lattice enumeration")
    axes = [np.arange(-b, b + 1) for b in bounds]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, k)
    norms = np.sqrt(np.einsum("ij,jk,ik->i", mesh, gram, mesh))
    keep = (norms <= radius * (1 + 1e-12)) & np.any(mesh != 0, axis=1)
    mesh, norms = mesh[keep], norms[keep]
    order = np.lexsort(tuple(mesh.T[::-1]) + (np.round(norms, 12),))
    out = []
    for m in mesh[order]:
        mat = 1j * np.diag(s @ m)
        out.append(AlgebraVector(group, group.coords_of(mat)[0]))
    return out


def lattice_element(group: CompactGroup, integer_coeffs: Sequence[int]) -> AlgebraVector:
    """Lattice element ``sum_c m_c 2 pi i diag(s_c)``."""
    if group.lattice_basis is None:
        raise UnsupportedPreset("lattice data exists for torus presets only")
    s = group.lattice_basis.astype(float) @ np.asarray(integer_coeffs, dtype=float)
    return AlgebraVector(group, group.coords_of(2j * np.pi * np.diag(s))[0])


# ---------------------------------------------------------------------------
# seeded samplers


def random_algebra(group: CompactGroup, rng: np.random.Generator, scale: float = 1.0) -> AlgebraVector:
    return AlgebraVector(group, scale * rng.standard_normal(group.d))


def random_unit(group: CompactGroup, rng: np.random.Generator) -> AlgebraVector:
    while True:
        c = rng.standard_normal(group.d)
        nc = np.linalg.norm(c)
        if nc > 1e-8:
            return AlgebraVector(group, c / nc)


def random_unitary(group: CompactGroup, rng: np.random.Generator) -> np.ndarray:
    """Element of G as the exponential of a broad Gaussian algebra element."""
    return expm_skew(random_algebra(group, rng, scale=math.pi).matrix)


def random_complex(
    group: CompactGroup, rng: np.random.Generator, eta_bound: float = 1.0
) -> GroupPoint:
    """``exp(i eta) u`` with ``|eta| <= eta_bound`` and ``u`` in G."""
    eta = random_unit(group, rng) * (eta_bound * rng.uniform() ** (1.0 / max(group.d, 1)))
    return GroupPoint(group, exp_i(eta) @ random_unitary(group, rng))
