"""Finite Laurent series in the loop parameter with matrix coefficients.

Loops are stored as sparse maps degree -> (dim x dim) complex matrix.
Arithmetic truncates at a per-loop truncation order and records whether
anything nonzero was dropped, so invariant tests can skip truncated
products.  Twist and reality defects quantify membership in the twisted
loop group and in its two real forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import group_defect, minkowski_matrix, sigma_matrix
from .errors import DimensionError, NotInvertibleError, PoleError

__all__ = [
    "LaurentLoop",
    "WienerWeight",
    "identity_loop",
    "loop_mul",
    "loop_add",
    "loop_scale",
    "loop_inverse",
    "loop_eval",
    "conjugate_reflect",
    "form_inverse",
    "twist_defect",
    "reality_defect",
    "wiener_norm",
    "compact_basis_matrix",
    "to_compact_basis",
    "from_compact_basis",
]

DEFAULT_TRUNCATION = 24

# unit-circle sample points used by the pointwise parts of reality_defect
_CIRCLE_SAMPLES = np.exp(2j * np.pi * np.arange(8) / 8.0)


@dataclass
class LaurentLoop:
    """A finite Laurent polynomial sum_k lambda^k A_k with square matrix A_k."""

    dim: int
    coeffs: dict[int, np.ndarray] = field(default_factory=dict)
    truncation_order: int = DEFAULT_TRUNCATION
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for k, A in self.coeffs.items():
            A = np.asarray(A, dtype=complex)
            if A.shape != (self.dim, self.dim):
                raise DimensionError(
                    f"coefficient at degree {k} has shape {A.shape}, expected {(self.dim, self.dim)}")
            if np.any(A != 0):
                clean[int(k)] = A
        self.coeffs = clean

    def coeff(self, k: int) -> np.ndarray:
        A = self.coeffs.get(k)
        if A is None:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return A

    @property
    def d_min(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def d_max(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def max_norm(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(float(np.max(np.abs(A))) for A in self.coeffs.values())

    def restrict(self, lo: int, hi: int) -> "LaurentLoop":
        kept = {k: A for k, A in self.coeffs.items() if lo <= k <= hi}
        return LaurentLoop(self.dim, kept, self.truncation_order, self.truncated)


def identity_loop(dim: int, truncation_order: int = DEFAULT_TRUNCATION) -> LaurentLoop:
    return LaurentLoop(dim, {0: np.eye(dim, dtype=complex)}, truncation_order)


def loop_mul(a: LaurentLoop, b: LaurentLoop) -> LaurentLoop:
    """Cauchy product truncated to |degree| <= truncation order.

    The result's truncated flag is set when a nonzero coefficient was
    dropped, or when either factor was already truncated.
    """
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch {a.dim} vs {b.dim}")
    order = min(a.truncation_order, b.truncation_order)
    out: dict[int, np.ndarray] = {}
    dropped = False
    for i, Ai in a.coeffs.items():
        for j, Bj in b.coeffs.items():
            k = i + j
            prod = Ai @ Bj
            if abs(k) > order:
                if np.any(prod != 0):
                    dropped = True
                continue
            if k in out:
                out[k] += prod
            else:
                out[k] = prod
    return LaurentLoop(a.dim, out, order, a.truncated or b.truncated or dropped)


def loop_add(a: LaurentLoop, b: LaurentLoop, beta: complex = 1.0) -> LaurentLoop:
    """a + beta * b."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch {a.dim} vs {b.dim}")
    out = {k: A.copy() for k, A in a.coeffs.items()}
    for k, B in b.coeffs.items():
        if k in out:
            out[k] = out[k] + beta * B
        else:
            out[k] = beta * B
    return LaurentLoop(a.dim, out, min(a.truncation_order, b.truncation_order),
                       a.truncated or b.truncated)


def loop_scale(a: LaurentLoop, c: complex) -> LaurentLoop:
    return LaurentLoop(a.dim, {k: c * A for k, A in a.coeffs.items()},
                       a.truncation_order, a.truncated)


def loop_eval(a: LaurentLoop, lam: complex) -> np.ndarray:
    """Evaluate sum_k lam^k A_k; lam = 0 with negative degrees is a pole."""
    if lam == 0 and a.d_min < 0:
        raise PoleError("loop has a pole at lambda = 0")
    out = np.zeros((a.dim, a.dim), dtype=complex)
    for k, A in a.coeffs.items():
        out += (lam ** k) * A
    return out


def loop_inverse(a: LaurentLoop, order: int | None = None) -> LaurentLoop:
    """Neumann-series inverse around the degree-0 coefficient.

    Writes a = a0 (I - N) and sums the geometric series in N.  Exact
    (modulo the truncation window) when N has strictly positive or
    strictly negative degrees; otherwise geometric convergence is
    required and the truncated flag reports failure to reach 1e-10.
    """
    if order is None:
        order = a.truncation_order
    a0 = a.coeff(0)
    if np.linalg.cond(a0) > 1e12:
        raise NotInvertibleError("degree-0 coefficient is numerically singular")
    a0_inv = np.linalg.inv(a0)
    N = LaurentLoop(a.dim, {k: -(a0_inv @ A) for k, A in a.coeffs.items() if k != 0},
                    truncation_order=order)
    S = identity_loop(a.dim, order)
    for _ in range(2 * order + 2):
        S_next = loop_mul(N, S)
        S_next = loop_add(S_next, identity_loop(a.dim, order))
        if loop_add(S_next, S, beta=-1.0).max_norm() < 1e-16 * max(1.0, S.max_norm()):
            S = S_next
            break
        S = S_next
    result = loop_mul(S, LaurentLoop(a.dim, {0: a0_inv}, order))
    check = loop_add(loop_mul(a, result), identity_loop(a.dim, order), beta=-1.0)
    resid = wiener_norm(check.restrict(-order, order), WienerWeight())
    # the flag reports failure to invert within the window, not internal drops
    result.truncated = resid > 1e-10
    return result


def conjugate_reflect(a: LaurentLoop) -> LaurentLoop:
    """c(A)(lam) = conj(A(1/conj(lam))); pointwise conjugation on the unit circle."""
    return LaurentLoop(a.dim, {-k: np.conj(A) for k, A in a.coeffs.items()},
                       a.truncation_order, a.truncated)


def form_inverse(a: LaurentLoop, form: np.ndarray) -> LaurentLoop:
    """Inverse of a loop with values in the complex orthogonal group of `form`.

    Uses A(lam)^{-1} = J^{-1} A(lam)^t J coefficient-wise; only valid for
    group-valued loops.
    """
    J = np.asarray(form)
    J_inv = np.linalg.inv(J)
    return LaurentLoop(a.dim, {k: J_inv @ A.T @ J for k, A in a.coeffs.items()},
                       a.truncation_order, a.truncated)


def twist_defect(a: LaurentLoop) -> float:
    """max_k || sigma(A_k) - (-1)^k A_k ||_max; zero iff the loop is twisted."""
    if not a.coeffs:
        return 0.0
    D = sigma_matrix(a.dim)
    worst = 0.0
    for k, A in a.coeffs.items():
        worst = max(worst, float(np.max(np.abs(D @ A @ D - ((-1) ** k) * A))))
    return worst


def reality_defect(a: LaurentLoop, realform: str = "noncompact") -> float:
    """Distance from the chosen real form of the loop group.

    Both forms require conj(A_k) = A_{-k} (real values on the unit circle).
    On top of that the noncompact form checks membership in SO(1, dim-1)
    at 8 circle samples, the compact form checks plain orthogonality
    (the loop is expected in the orthogonality-adapted basis there).
    """
    if realform not in ("noncompact", "compact"):
        raise ValueError(f"unknown real form {realform!r}")
    pairing = 0.0
    for k, A in a.coeffs.items():
        pairing = max(pairing, float(np.max(np.abs(np.conj(A) - a.coeff(-k)))))
    pointwise = 0.0
    if realform == "noncompact":
        J = minkowski_matrix(a.dim)
        for lam in _CIRCLE_SAMPLES:
            pointwise = max(pointwise, group_defect(loop_eval(a, lam), J))
    else:
        I = np.eye(a.dim)
        for lam in _CIRCLE_SAMPLES:
            E = loop_eval(a, lam)
            pointwise = max(pointwise, float(np.max(np.abs(E.T @ E - I))))
    return pairing + pointwise


@dataclass(frozen=True)
class WienerWeight:
    """Geometric symmetric weight omega(k) = rho^{|k|}, rho >= 1."""

    rho: float = 1.2

    def __post_init__(self):
        if self.rho < 1.0:
            raise ValueError("weight base must be >= 1")

    def omega(self, k: int) -> float:
        return self.rho ** abs(k)


def wiener_norm(a: LaurentLoop, weight: WienerWeight | None = None) -> float:
    """sum_k omega(k) * ||A_k||, with the max row-sum matrix norm.

    The row-sum norm is submultiplicative, which makes this a Banach
    algebra norm on untruncated products.
    """
    if weight is None:
        weight = WienerWeight()
    return float(sum(weight.omega(k) * np.max(np.sum(np.abs(A), axis=1))
                     for k, A in a.coeffs.items()))


def compact_basis_matrix(dim: int) -> np.ndarray:
    """T = diag(i, 1, ..., 1); conjugation by T carries SO(1, dim-1)^C to SO(dim, C)."""
    T = np.eye(dim, dtype=complex)
    T[0, 0] = 1j
    return T


def to_compact_basis(a: LaurentLoop) -> LaurentLoop:
    """Conjugate a Minkowski-basis loop into the orthogonality-adapted basis."""
    T = compact_basis_matrix(a.dim)
    T_inv = np.linalg.inv(T)
    return LaurentLoop(a.dim, {k: T_inv @ A @ T for k, A in a.coeffs.items()},
                       a.truncation_order, a.truncated)


def from_compact_basis(a: LaurentLoop) -> LaurentLoop:
    T = compact_basis_matrix(a.dim)
    T_inv = np.linalg.inv(T)
    return LaurentLoop(a.dim, {k: T @ A @ T_inv for k, A in a.coeffs.items()},
                       a.truncation_order, a.truncated)
