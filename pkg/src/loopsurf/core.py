"""Minkowski linear algebra on R^{n+4}_1 and its complexification.

Scalar products, membership defects for the Minkowski orthogonal group,
the inner involution fixing the (4, n) block structure, and the induced
k + p splitting of square matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

__all__ = [
    "MinkowskiForm",
    "BlockDecomposition",
    "minkowski_matrix",
    "mink_product",
    "group_defect",
    "sigma_matrix",
    "sigma",
    "block_split",
]


def minkowski_matrix(dim: int) -> np.ndarray:
    """diag(-1, 1, ..., 1) of size dim."""
    J = np.eye(dim)
    J[0, 0] = -1.0
    return J


@dataclass(frozen=True)
class MinkowskiForm:
    """The indefinite form of signature (1, dim-1), dim = n + 4 with n >= 1."""

    dim: int

    def __post_init__(self):
        if self.dim < 5:
            raise DimensionError(f"Minkowski form needs dim >= 5, got {self.dim}")

    @property
    def n(self) -> int:
        return self.dim - 4

    @property
    def matrix(self) -> np.ndarray:
        return minkowski_matrix(self.dim)


def mink_product(u, v) -> complex:
    """Indefinite bilinear product -u0*v0 + sum_j uj*vj (no conjugation)."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionError(f"incompatible vector shapes {u.shape} vs {v.shape}")
    if u.shape[0] < 5:
        raise DimensionError(f"vectors must have length >= 5, got {u.shape[0]}")
    return complex(-u[0] * v[0] + np.dot(u[1:], v[1:]))


def group_defect(M, form: MinkowskiForm | np.ndarray) -> float:
    """Distance of M from the complex special orthogonal group of the form.

    max-norm of M^t J M - J plus |det M - 1|; zero exactly on group elements.
    """
    M = np.asarray(M)
    J = form.matrix if isinstance(form, MinkowskiForm) else np.asarray(form)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"square matrix required, got shape {M.shape}")
    if M.shape[0] != J.shape[0]:
        raise DimensionError(f"matrix size {M.shape[0]} does not match form size {J.shape[0]}")
    defect = np.max(np.abs(M.T @ J @ M - J))
    return float(defect + abs(np.linalg.det(M) - 1.0))


def sigma_matrix(dim: int) -> np.ndarray:
    """D = diag(I_4, -I_n); Ad(D) is the involution behind the (4, n) splitting."""
    if dim < 5:
        raise DimensionError(f"need dim >= 5, got {dim}")
    D = np.eye(dim)
    D[4:, 4:] *= -1.0
    return D


def sigma(M) -> np.ndarray:
    """The involution sigma(M) = D M D, fixing block-diagonal matrices."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"square matrix required, got shape {M.shape}")
    D = sigma_matrix(M.shape[0])
    return D @ M @ D


@dataclass(frozen=True)
class BlockDecomposition:
    """X = k_part + p_part with k_part block-diagonal and p_part off-diagonal."""

    k_part: np.ndarray
    p_part: np.ndarray

    @property
    def a1(self) -> np.ndarray:
        return self.k_part[:4, :4]

    @property
    def a2(self) -> np.ndarray:
        return self.k_part[4:, 4:]

    @property
    def b1(self) -> np.ndarray:
        return self.p_part[:4, 4:]

    @property
    def b2(self) -> np.ndarray:
        return self.p_part[4:, :4]


def block_split(X) -> BlockDecomposition:
    """Split X into sigma-even and sigma-odd parts, (X + sigma(X))/2 and (X - sigma(X))/2."""
    X = np.asarray(X, dtype=complex)
    sX = sigma(X)
    return BlockDecomposition(k_part=(X + sX) / 2.0, p_part=(X - sX) / 2.0)
