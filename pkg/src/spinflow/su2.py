"""
Exact su(2)/SU(2) algebra.

R³ is identified with su(2) through the basis a, b, c below; the bracket of
two algebra elements corresponds to the cross product of their coefficient
vectors. The single-element types are thin wrappers around vectorized helpers
that work on stacks of 2x2 matrices (shape (..., 2, 2)) and stacks of
coefficient vectors (shape (..., 3)).
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from spinflow.errors import NotInAlgebra

A = np.array([[0.5j, 0.0], [0.0, -0.5j]])
B = np.array([[0.0, 0.5], [-0.5, 0.0]])
C = np.array([[0.0, 0.5j], [0.5j, 0.0]])
BASIS = np.stack([A, B, C])
IDENTITY = np.eye(2, dtype=complex)

ALGEBRA_TOL = 1e-10
SERIES_CUTOFF = 1e-6


@dataclass(frozen=True)
class SpherePoint:
    r1: float
    r2: float
    r3: float

    @classmethod
    def on_sphere(cls, r1, r2, r3):
        """Build a point projected onto S²."""
        v = np.array([r1, r2, r3], dtype=float)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError("Cannot project the origin onto the sphere")
        return cls(*(v / norm))

    @classmethod
    def from_array(cls, v):
        return cls(float(v[0]), float(v[1]), float(v[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3])

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class AlgebraElement:
    r1: float
    r2: float
    r3: float

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3])

    @property
    def matrix(self) -> np.ndarray:
        return algebra_matrices(self.coefficients)

    @classmethod
    def from_matrix(cls, m):
        return cls(*algebra_vectors(np.asarray(m)))

    def __add__(self, other):
        return AlgebraElement(*(self.coefficients + other.coefficients))

    def __neg__(self):
        return AlgebraElement(-self.r1, -self.r2, -self.r3)

    def __mul__(self, scalar):
        return AlgebraElement(*(scalar * self.coefficients))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class GroupElement:
    """2x2 complex frame matrix; `unitary` is off for complexified (SL(2,C) or GL(2,C)) elements."""
    matrix: np.ndarray
    unitary: bool = True

    @classmethod
    def identity(cls):
        return cls(IDENTITY.copy())

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    def inverse(self):
        if self.unitary:
            return GroupElement(self.matrix.conj().T, True)
        return GroupElement(np.linalg.inv(self.matrix), False)

    def __matmul__(self, other):
        return GroupElement(self.matrix @ other.matrix, self.unitary and other.unitary)

    def unitarity_defect(self) -> float:
        return float(unitarity_defect(self.matrix))

    def allclose(self, other, atol=1e-12) -> bool:
        other = other.matrix if isinstance(other, GroupElement) else other
        return bool(np.allclose(self.matrix, other, atol=atol, rtol=0))


def algebra_matrices(vectors) -> np.ndarray:
    """r1 a + r2 b + r3 c for a stack of coefficient vectors."""
    v = np.asarray(vectors, dtype=float)
    m = np.empty(v.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = 0.5j * v[..., 0]
    m[..., 1, 1] = -0.5j * v[..., 0]
    m[..., 0, 1] = 0.5 * v[..., 1] + 0.5j * v[..., 2]
    m[..., 1, 0] = -0.5 * v[..., 1] + 0.5j * v[..., 2]
    return m


def algebra_vectors(matrices, check=True) -> np.ndarray:
    """Coefficient vectors of traceless skew-Hermitian matrices."""
    m = np.asarray(matrices)
    if check:
        trace = np.abs(m[..., 0, 0] + m[..., 1, 1])
        hermitian = np.abs(m + np.conj(np.swapaxes(m, -1, -2))).max(axis=(-1, -2))
        if np.max(trace, initial=0.0) > ALGEBRA_TOL or np.max(hermitian, initial=0.0) > ALGEBRA_TOL:
            raise NotInAlgebra(
                f"Matrix is not in su(2): trace {np.max(trace):.3e}, hermitian part {np.max(hermitian):.3e}"
            )
    v = np.empty(m.shape[:-2] + (3,))
    v[..., 0] = 2.0 * m[..., 0, 0].imag
    v[..., 1] = 2.0 * m[..., 0, 1].real
    v[..., 2] = 2.0 * m[..., 0, 1].imag
    return v


def skew_part(matrices) -> np.ndarray:
    """Traceless skew-Hermitian projection."""
    m = np.asarray(matrices)
    s = 0.5 * (m - np.conj(np.swapaxes(m, -1, -2)))
    tr = 0.5 * (s[..., 0, 0] + s[..., 1, 1])
    s = s.copy()
    s[..., 0, 0] -= tr
    s[..., 1, 1] -= tr
    return s


def adjoint_vectors(frames, vectors) -> np.ndarray:
    """Coefficient vectors of g X g^{-1} for unitary g."""
    g = np.asarray(frames)
    conj = g @ algebra_matrices(vectors) @ np.conj(np.swapaxes(g, -1, -2))
    return algebra_vectors(conj, check=False)


def frame_axis(frames, axis=A) -> np.ndarray:
    """Coefficient vectors of g a g^{-1}; for unitary frames this is the curve point."""
    g = np.asarray(frames)
    return algebra_vectors(skew_part(g @ axis @ np.linalg.inv(g)), check=False)


def exp_vectors(vectors) -> np.ndarray:
    """Closed-form exponential cos(θ) I + (sin θ / θ) X with θ = |v|/2."""
    v = np.asarray(vectors, dtype=float)
    theta = 0.5 * np.linalg.norm(v, axis=-1)
    small = theta < 0.5 * SERIES_CUTOFF
    safe = np.where(small, 1.0, theta)
    t2 = theta ** 2
    cos = np.where(small, 1.0 - t2 / 2 + t2 ** 2 / 24, np.cos(theta))
    sinc = np.where(small, 1.0 - t2 / 6 + t2 ** 2 / 120, np.sin(safe) / safe)
    return cos[..., None, None] * IDENTITY + sinc[..., None, None] * algebra_matrices(v)


def exp_diagonal(phases) -> np.ndarray:
    """exp(s a) = diag(e^{is/2}, e^{-is/2}) for a stack of real s."""
    s = np.asarray(phases, dtype=float)
    m = np.zeros(s.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = np.exp(0.5j * s)
    m[..., 1, 1] = np.exp(-0.5j * s)
    return m


def unitarity_defect(frames) -> float:
    g = np.asarray(frames)
    gram = np.conj(np.swapaxes(g, -1, -2)) @ g
    return float(np.max(np.abs(gram - IDENTITY), initial=0.0))


def normalize_det(frames) -> np.ndarray:
    g = np.asarray(frames)
    root = np.sqrt(np.linalg.det(g))
    return g / root[..., None, None]


def nearest_special_unitary(frames) -> np.ndarray:
    """Polar projection onto U(2) followed by det renormalization."""
    u, _, vh = np.linalg.svd(frames)
    return normalize_det(u @ vh)


def rotation_to_group(rotation: Rotation) -> GroupElement:
    """SU(2) element whose adjoint action on coefficient vectors is the given rotation."""
    return GroupElement(exp_vectors(rotation.as_rotvec()))


def to_algebra(p: SpherePoint) -> AlgebraElement:
    return AlgebraElement(p.r1, p.r2, p.r3)


def from_algebra(X) -> SpherePoint:
    m = X.matrix if isinstance(X, AlgebraElement) else np.asarray(X)
    return SpherePoint.from_array(algebra_vectors(m))


def bracket(X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    x, y = X.matrix, Y.matrix
    return AlgebraElement.from_matrix(x @ y - y @ x)


def conjugate(g: GroupElement, X: AlgebraElement) -> AlgebraElement:
    if not g.unitary:
        raise ValueError("conjugate expects a unitary group element")
    return AlgebraElement(*adjoint_vectors(g.matrix, X.coefficients))


def exp_algebra(X: AlgebraElement) -> GroupElement:
    return GroupElement(exp_vectors(X.coefficients))
