"""Birkhoff and Iwasawa factorization of twisted matrix loops.

Birkhoff splitting M = M_- M_+ is a linear problem for the coefficients
of M_-^{-1}: requiring (M_-^{-1} M) to have no negative Fourier modes
gives a block-Toeplitz system.  Singularity of that system is exactly
the complement of the big cell.

Iwasawa splitting M = F V (F in the chosen real form, V positive) is
reduced to a Birkhoff-type problem: with c the reflection
c(A)(lam) = conj(A(1/conj(lam))), realness of F = M V^{-1} is
equivalent to

    W := M^{-1} c(M) = V^{-1} c(V).

W is computed exactly via the group inverse M^{-1} = J M^t J.  Splitting
W = P N into (positive) * (negative, normalized to I at infinity) and
solving the constant equation conj(s) = P(0) s with s = P(0)^{-1/2}
yields F = M P s.  The principal square root exists precisely when P(0)
has no spectrum on the closed negative real axis; that failure, a
singular Toeplitz system, or a time-orientation flip of the resulting
frame are the three faces of the Iwasawa cell boundary.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .core import minkowski_matrix
from .errors import BirkhoffCellError, IwasawaCellError
from .loops import (LaurentLoop, WienerWeight, conjugate_reflect, form_inverse,
                    identity_loop, loop_add, loop_eval, loop_mul, reality_defect,
                    twist_defect, wiener_norm)

__all__ = ["birkhoff_split", "iwasawa_split", "realform_matrix"]


def realform_matrix(dim: int, realform: str) -> np.ndarray:
    """Quadratic form fixing the complex group: Minkowski or Euclidean."""
    if realform == "noncompact":
        return minkowski_matrix(dim)
    if realform == "compact":
        return np.eye(dim)
    raise ValueError(f"unknown real form {realform!r}")


def _toeplitz_window(M: LaurentLoop, order: int | None) -> int:
    if order is not None:
        return max(1, order)
    span = max(1, M.d_max - M.d_min)
    return min(M.truncation_order, max(8, 2 * span))


def _solve_minus_factor(M: LaurentLoop, K: int) -> LaurentLoop | None:
    """L in Lambda_-* with (L M)_{<0} = 0, L_0 = I; None if the system is singular.

    Left multiplication: unknown block row L_{-(r+1)} meets equation degree
    -(c+1) through the Toeplitz block M_{r - c}.
    """
    m = M.dim
    C = np.zeros((K * m, K * m), dtype=complex)
    B = np.zeros((m, K * m), dtype=complex)
    for r in range(K):
        for c in range(K):
            blk = M.coeffs.get(r - c)
            if blk is not None:
                C[r * m:(r + 1) * m, c * m:(c + 1) * m] = blk
        blk = M.coeffs.get(-(r + 1))
        if blk is not None:
            B[:, r * m:(r + 1) * m] = -blk
    try:
        X = np.linalg.solve(C.T, B.T).T
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(X)):
        return None
    coeffs = {0: np.eye(m, dtype=complex)}
    for r in range(K):
        coeffs[-(r + 1)] = X[:, r * m:(r + 1) * m]
    return LaurentLoop(m, coeffs, truncation_order=max(M.truncation_order, 2 * K))


def _solve_minus_cofactor(W: LaurentLoop, K: int) -> LaurentLoop | None:
    """N~ in Lambda_-* with (W N~)_{<0} = 0, N~_0 = I (right multiplication).

    Equation degree -(r+1) meets unknown block N~_{-(c+1)} through the
    Toeplitz block W_{c - r}; columns of N~ solve independently.
    """
    m = W.dim
    A = np.zeros((K * m, K * m), dtype=complex)
    B = np.zeros((K * m, m), dtype=complex)
    for r in range(K):
        for c in range(K):
            blk = W.coeffs.get(c - r)
            if blk is not None:
                A[r * m:(r + 1) * m, c * m:(c + 1) * m] = blk
        blk = W.coeffs.get(-(r + 1))
        if blk is not None:
            B[r * m:(r + 1) * m, :] = -blk
    try:
        X = np.linalg.solve(A, B)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(X)):
        return None
    coeffs = {0: np.eye(m, dtype=complex)}
    for c in range(K):
        coeffs[-(c + 1)] = X[c * m:(c + 1) * m, :]
    return LaurentLoop(m, coeffs, truncation_order=max(W.truncation_order, 2 * K))


def _strict_sign_inverse(a: LaurentLoop) -> LaurentLoop:
    """Inverse of a loop whose non-constant part has strictly one-signed degrees.

    The Neumann series terminates within the truncation window, so this
    is exact modulo truncation.
    """
    a0 = a.coeff(0)
    a0_inv = np.linalg.inv(a0)
    order = a.truncation_order
    N = LaurentLoop(a.dim, {k: -(a0_inv @ A) for k, A in a.coeffs.items() if k != 0},
                    truncation_order=order)
    S = identity_loop(a.dim, order)
    term = identity_loop(a.dim, order)
    for _ in range(order + 1):
        term = loop_mul(N, term)
        if not term.coeffs:
            break
        S = loop_add(S, term)
    return loop_mul(S, LaurentLoop(a.dim, {0: a0_inv}, order))


def birkhoff_split(M: LaurentLoop, tol: float = 1e-10,
                   order: int | None = None,
                   max_passes: int = 3) -> tuple[LaurentLoop, LaurentLoop]:
    """Split M = minus * plus, minus in Lambda_-* (identity at infinity).

    The finite-section Toeplitz solve is iterated: each pass removes the
    remaining negative modes of the working loop, which quenches the
    conditioning error of a single solve.  Raises BirkhoffCellError when
    the system is singular or the residual stays far above tol, both of
    which signal the complement of the big cell.
    """
    K = _toeplitz_window(M, order)
    for attempt_K in (K, M.truncation_order) if K < M.truncation_order else (K,):
        work = M
        minus_factors = []
        failed = False
        for _ in range(max_passes):
            L = _solve_minus_factor(work, attempt_K)
            if L is None:
                failed = True
                break
            minus_factors.append(L)
            work = loop_mul(L, work)
            resid = wiener_norm(work.restrict(work.d_min, -1), WienerWeight())
            if resid <= tol:
                break
        if failed:
            continue
        if resid <= max(tol, 1e-8):
            plus = work.restrict(0, work.d_max)
            minus = identity_loop(M.dim, M.truncation_order)
            for L in minus_factors:
                minus = loop_mul(minus, _strict_sign_inverse(L))
            return minus, plus
    raise BirkhoffCellError(
        "loop appears to lie off the big Birkhoff cell (singular or non-convergent section)")


def _principal_inverse_sqrt_block(P0: np.ndarray, lo: int, hi: int,
                                  axis_tol: float = 1e-8) -> np.ndarray:
    blk = P0[lo:hi, lo:hi]
    eig = np.linalg.eigvals(blk)
    # spectrum touching the closed negative real axis defeats the principal root
    bad = (eig.real < 0) & (np.abs(eig.imag) <= axis_tol * np.abs(eig))
    if np.any(bad) or np.any(np.abs(eig) < 1e-12):
        raise IwasawaCellError(
            "positive factor's constant term has spectrum on the negative axis "
            "(Iwasawa cell boundary)")
    root = scipy.linalg.sqrtm(blk)
    return np.linalg.inv(root)


_GATE_SAMPLES = np.exp(2j * np.pi * np.arange(8) / 8.0)


def _reality_gate(F: LaurentLoop, J: np.ndarray) -> float:
    """Internal convergence measure: coefficient pairing plus the quadratic
    form defect, without the determinant (whose fp floor scales badly with
    the coefficient size)."""
    pairing = 0.0
    for k, A in F.coeffs.items():
        pairing = max(pairing, float(np.max(np.abs(np.conj(A) - F.coeff(-k)))))
    pointwise = 0.0
    for lam in _GATE_SAMPLES:
        E = loop_eval(F, lam)
        pointwise = max(pointwise, float(np.max(np.abs(E.T @ J @ E - J))))
    return pairing + pointwise


def _prune(a: LaurentLoop, rel: float = 5e-14) -> LaurentLoop:
    """Drop coefficients at the numerical noise floor.

    Keeps weighted norms of factor products from being dominated by
    amplified junk at high degrees.
    """
    scale = a.max_norm()
    if scale == 0:
        return a
    kept = {k: A for k, A in a.coeffs.items() if np.max(np.abs(A)) > rel * scale}
    return LaurentLoop(a.dim, kept, a.truncation_order, a.truncated)


def _solve_reality_cofactors(M: LaurentLoop, K: int
                             ) -> tuple[LaurentLoop, LaurentLoop] | None:
    """Solve c(M) N~ = M P for N~ in Lambda_-* and P positive, jointly.

    This is the reality factorization M^{-1} c(M) = P N with N = N~^{-1},
    but posed at the coefficient scale of M itself; forming M^{-1} c(M)
    squares the coefficient size and with it the floating-point floor.
    The least-squares system couples the columns independently.
    """
    m = M.dim
    cM = conjugate_reflect(M)
    a, b = M.d_min, M.d_max
    lo = min(-b - K, a) - 1
    hi = max(-a, b + K) + 1
    nrows = (hi - lo + 1) * m
    ncols = (2 * K + 1) * m
    A = np.zeros((nrows, ncols), dtype=complex)
    B = np.zeros((nrows, m), dtype=complex)
    for ell in range(lo, hi + 1):
        r0 = (ell - lo) * m
        for r in range(1, K + 1):          # N~_{-r} columns
            blk = cM.coeffs.get(ell + r)
            if blk is not None:
                c0 = (r - 1) * m
                A[r0:r0 + m, c0:c0 + m] = blk
        for q in range(0, K + 1):          # -P_q columns
            blk = M.coeffs.get(ell - q)
            if blk is not None:
                c0 = (K + q) * m
                A[r0:r0 + m, c0:c0 + m] = -blk
        blk = cM.coeffs.get(ell)
        if blk is not None:
            B[r0:r0 + m, :] = -blk
    try:
        X, _, rank, _ = np.linalg.lstsq(A, B, rcond=None)
    except np.linalg.LinAlgError:
        return None
    if rank < ncols or not np.all(np.isfinite(X)):
        return None
    resid = float(np.max(np.abs(A @ X - B))) / max(1.0, M.max_norm())
    ntil = {0: np.eye(m, dtype=complex)}
    for r in range(1, K + 1):
        ntil[-r] = X[(r - 1) * m: r * m, :]
    pco = {}
    for q in range(0, K + 1):
        pco[q] = X[(K + q) * m: (K + q + 1) * m, :]
    order = max(M.truncation_order, 2 * K)
    return (LaurentLoop(m, ntil, order), LaurentLoop(m, pco, order), resid)


def _iwasawa_pass(M: LaurentLoop, J: np.ndarray, order: int | None
                  ) -> tuple[LaurentLoop, LaurentLoop]:
    """One reality-factorization sweep, M = frame * positive."""
    K = _toeplitz_window(M, order)
    ladder = sorted({K, 2 * K, M.truncation_order})
    solved = None
    for attempt_K in ladder:
        attempt = _solve_reality_cofactors(M, attempt_K)
        if attempt is None:
            continue
        if solved is None or attempt[2] < solved[2]:
            solved = attempt
        if solved[2] <= 1e-13:
            break
    if solved is None:
        raise IwasawaCellError("Toeplitz section singular (Iwasawa cell boundary)")
    _, P, _ = solved
    P0 = P.coeff(0)
    s = np.zeros((M.dim, M.dim), dtype=complex)
    s[:4, :4] = _principal_inverse_sqrt_block(P0, 0, 4)
    s[4:, 4:] = _principal_inverse_sqrt_block(P0, 4, M.dim)
    s_loop = LaurentLoop(M.dim, {0: s}, P.truncation_order)
    # V^{-1} = P s has moderate coefficients; (M P) s would square the scale
    frame = loop_mul(M, loop_mul(P, s_loop))
    # P = V^{-1} conj(V(0)) is group-valued, so its inverse is J P^t J;
    # a Neumann inverse would be poisoned by the conditioning of P(0)
    positive = loop_mul(LaurentLoop(M.dim, {0: np.linalg.inv(s)}, P.truncation_order),
                        form_inverse(P, J))
    return frame, positive


def _newton_reality_correction(frame: LaurentLoop, J: np.ndarray
                               ) -> tuple[LaurentLoop, LaurentLoop]:
    """One Newton step on the reality residual of an almost-real frame.

    Linearizing c(F V^{-1}) = F V^{-1} around V = I gives
    c(delta) - delta = F^{-1} (c(F) - F); the positive-degree part of
    delta is read off directly.  The group inverse of F is off by the
    residual itself, which only perturbs at second order.
    """
    X = loop_add(conjugate_reflect(frame), frame, beta=-1.0)
    Y = loop_mul(form_inverse(frame, J), X)
    delta = {}
    Y0 = Y.coeff(0)
    delta[0] = -0.25 * (Y0 - np.conj(Y0))   # anti-real part of Y0, halved
    for k, A in Y.coeffs.items():
        if k > 0:
            delta[k] = -A
    V2 = loop_add(identity_loop(frame.dim, frame.truncation_order),
                  LaurentLoop(frame.dim, delta, frame.truncation_order))
    # non-constant part of V2 is strictly positive, so this inverse is exact
    new_frame = loop_mul(frame, _strict_sign_inverse(V2))
    return new_frame, V2


def iwasawa_split(M: LaurentLoop, realform: str = "noncompact",
                  tol: float = 1e-10, order: int | None = None,
                  max_passes: int = 5) -> tuple[LaurentLoop, LaurentLoop]:
    """Split M = frame * positive with frame in the chosen real form.

    The input must be a twisted loop with values in the complex
    orthogonal group of the form (Minkowski for "noncompact", Euclidean
    for "compact"; compact-form inputs are expected in the
    orthogonality-adapted basis).  The positive factor is normalized by
    conj(V(0)) = V(0)^{-1}, which meets the real subgroup only in the
    identity and varies smoothly with M.

    The finite Toeplitz section and its conditioning leave a small
    residual, which Newton corrections on the reality defect remove
    quadratically; failure to contract signals the cell boundary.
    """
    J = realform_matrix(M.dim, realform)
    tw = twist_defect(M)
    if tw > max(100 * tol, 1e-6) and tw > 1e-6 * max(1.0, M.max_norm()):
        raise ValueError(f"input loop is not twisted (twist defect {tw:.3e})")

    weight = WienerWeight()
    # fp floor of the quadratic-form defect grows with the coefficient size
    scale = max(1.0, M.max_norm()) ** 2
    frame, positive = _iwasawa_pass(M, J, order)
    defect = _reality_gate(frame, J)
    best = (defect, frame, positive)
    previous = defect
    for _ in range(max_passes):
        if defect <= tol:
            break
        frame, step = _newton_reality_correction(frame, J)
        positive = loop_mul(step, positive)
        defect = _reality_gate(frame, J)
        if defect < best[0]:
            best = (defect, frame, positive)
        if defect > 0.5 * previous:
            break   # stalled at the fp floor or not contracting
        previous = defect
    defect, frame, positive = best
    frame = _prune(frame)
    positive = _prune(positive)
    if defect > max(tol, 1e-8) * scale:
        raise IwasawaCellError(
            f"reality defect {defect:.3e} did not reach tolerance "
            "(cell boundary or insufficient truncation order)")
    if realform == "noncompact":
        # frames in the non-identity cell are real but time-reversing
        if loop_eval(frame, 1.0)[0, 0].real <= 0:
            raise IwasawaCellError("factorization lands in the time-reversing cell")
    recompose = loop_add(M, loop_mul(frame, positive), beta=-1.0)
    if wiener_norm(recompose, weight) > max(1e4 * tol, 1e-6) * (
            1.0 + wiener_norm(M, weight)):
        raise IwasawaCellError(
            "recomposition residual blew up (cell boundary or truncation overflow)")
    return frame, positive
