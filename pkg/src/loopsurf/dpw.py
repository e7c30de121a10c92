"""The loop-group pipeline from a normalized potential to a surface.

Integration of the potential is exact in a polynomial-matrix
representation; the loop is then evaluated pointwise in z, Iwasawa-split
against the chosen real form, and projected to the sphere.

The projection needs care.  Writing V for the positive factor, the
lambda^{-1} block of the real frame's Maurer-Cartan form is
V(0) eta_{-1} V(0)^{-1}, so the isotropic 2-plane spanned by the columns
of V(0)|_4 B1(z) is the frame-side image of the potential's column
space.  For a frame adapted in the sense of the structure theory that
plane is span{e0 - e1, e2 + i e3}, whose unique real null line is
exactly the surface lift direction phi_1 - phi_2.  The pipeline frame is
generally a K-gauge away from the adapted one, so the lift is extracted
gauge-invariantly as [F w] where w is the real null direction of the
transported plane.  When B1 has rank 1 (the minimal-surface families)
that plane is underdetermined and exactly two null lines remain: the
surface and its dual.  Both get a canonical orientation label and the
branch is selectable.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import minkowski_matrix
from .errors import ChartError, IwasawaCellError, LoopsurfError
from .factorize import birkhoff_split, iwasawa_split
from .loops import (LaurentLoop, form_inverse, loop_eval, loop_mul,
                    to_compact_basis)
from .potentials import PotentialSpec

__all__ = [
    "MeromorphicFrame",
    "ExtendedFrameGrid",
    "SurfaceGrid",
    "integrate_potential",
    "build_surface",
    "recover_normalized_potential",
    "extraction_directions",
]

I13 = minkowski_matrix(4)


def _polymat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Convolution product of polynomial matrices, stacks (da+1,m,m) x (db+1,m,m)."""
    da, db = A.shape[0], B.shape[0]
    out = np.zeros((da + db - 1, A.shape[1], B.shape[2]), dtype=complex)
    for i in range(da):
        for j in range(db):
            out[i + j] += A[i] @ B[j]
    return out


def _polymat_antiderivative(A: np.ndarray, base_point: complex) -> np.ndarray:
    """Coefficient-wise antiderivative vanishing at the base point."""
    d1, m, _ = A.shape
    out = np.zeros((d1 + 1, m, m), dtype=complex)
    out[1:] = A / np.arange(1, d1 + 1)[:, None, None]
    out[0] = -_polymat_eval(out, base_point)
    return out


def _polymat_eval(A: np.ndarray, z: complex) -> np.ndarray:
    out = np.zeros(A.shape[1:], dtype=complex)
    for d in range(A.shape[0] - 1, -1, -1):
        out = out * z + A[d]
    return out


@dataclass
class MeromorphicFrame:
    """F_-(z, lambda) = I + sum_{k>=1} lambda^{-k} F_k(z), F_k polynomial in z.

    coeffs[k] holds the z-coefficient stack of F_k for k >= 1; the k = 0
    coefficient is the identity by normalization F_-(z0, .) = I, and every
    stored polynomial vanishes at the base point.
    """

    dim: int
    coeffs: dict[int, np.ndarray]
    base_point: complex
    terminated: bool
    cap: int

    @property
    def k_max(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def eval(self, z: complex, truncation_order: int | None = None) -> LaurentLoop:
        order = truncation_order if truncation_order is not None else max(24, 2 * self.k_max)
        out = {0: np.eye(self.dim, dtype=complex)}
        for k, stack in self.coeffs.items():
            M = _polymat_eval(stack, z)
            if np.any(M != 0):
                out[-k] = M
        return LaurentLoop(self.dim, out, truncation_order=order)


def integrate_potential(P: PotentialSpec, cap: int = 16) -> MeromorphicFrame:
    """Solve dF_- = F_- * lambda^{-1} eta_{-1} dz, F_-(z0) = I, exactly.

    Degree by degree this is d/dz F_k = F_{k-1} eta_{-1} with the unique
    polynomial antiderivative vanishing at z0.  The recursion stops early
    (terminated = True) when a coefficient vanishes identically, which
    makes all later ones vanish as well.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    eta_coeffs_b1 = P.b1_poly_coeffs()
    m = P.dim
    eta = np.zeros((eta_coeffs_b1.shape[0], m, m), dtype=complex)
    eta[:, :4, 4:] = eta_coeffs_b1
    eta[:, 4:, :4] = -np.transpose(eta_coeffs_b1, (0, 2, 1)) @ I13

    coeffs: dict[int, np.ndarray] = {}
    prev = np.eye(m, dtype=complex)[None, :, :]
    terminated = False
    scale = max(1.0, float(np.max(np.abs(eta))))
    for k in range(1, cap + 1):
        Fk = _polymat_antiderivative(_polymat_mul(prev, eta), P.base_point)
        mx = float(np.max(np.abs(Fk)))
        if mx < 1e-13 * scale ** k:
            terminated = True
            break
        coeffs[k] = Fk
        prev = Fk
    return MeromorphicFrame(dim=m, coeffs=coeffs, base_point=P.base_point,
                            terminated=terminated, cap=cap)


# ---------------------------------------------------------------------------
# surface extraction


def _real_vectors_in_span(U: np.ndarray) -> np.ndarray | None:
    """A real unit vector in the complex column span of U (4 x 2), or None."""
    Mreal = np.hstack([np.imag(U), np.real(U)])
    _, sv, Vh = np.linalg.svd(Mreal)
    if sv[-1] > 1e-7 * max(sv[0], 1e-300):
        return None
    a = Vh[-1][:2] + 1j * Vh[-1][2:]
    x = np.real(U @ a)
    nrm = np.linalg.norm(x)
    if nrm < 1e-12:
        return None
    return x / nrm


def _rank1_null_pair(c: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """The two real null directions Minkowski-orthogonal to Re c and Im c.

    Labeled canonically: p is the future-pointing unit timelike direction
    of the orthocomplement plane, q the spacelike one oriented so that
    (p, q, Re c, Im c) is positively oriented; the pair is (p + q, p - q).
    """
    x, y = np.real(c), np.imag(c)
    A = np.vstack([x @ I13, y @ I13])
    _, sv, Vh = np.linalg.svd(A)
    base = Vh[2:]
    G = base @ I13 @ base.T
    ev, Q = np.linalg.eigh(G)
    if not (ev[0] < -1e-12 and ev[1] > 1e-12):
        return None
    p = base.T @ Q[:, 0] / np.sqrt(-ev[0])
    q = base.T @ Q[:, 1] / np.sqrt(ev[1])
    if p[0] < 0:
        p = -p
    if np.linalg.det(np.column_stack([p, q, x, y])) < 0:
        q = -q
    return p + q, p - q


def extraction_directions(B_frame: np.ndarray, rank_tol: float = 1e-8):
    """Candidate real null lift directions for a frame-side B1 block.

    Returns (directions, rank): one direction when the isotropic column
    plane has rank 2, the canonically ordered pair for rank 1, and an
    empty list at rank 0 (umbilic-degenerate sample).
    """
    U, sv, _ = np.linalg.svd(B_frame)
    if sv[0] < 1e-300:
        return [], 0
    rank = int(np.sum(sv > rank_tol * sv[0]))
    if rank >= 2:
        w = _real_vectors_in_span(U[:, :2])
        if w is None:
            return [], 2
        if w[0] < 0:
            w = -w
        return [w], 2
    if rank == 1:
        pair = _rank1_null_pair(U[:, 0])
        if pair is None:
            return [], 1
        return list(pair), 1
    return [], 0


@dataclass
class ExtendedFrameGrid:
    """Sampled real frames F(z, lambda) plus optional positive factors."""

    z_samples: np.ndarray
    lambda_samples: np.ndarray
    frames: np.ndarray                       # (npts, nlam, dim, dim) real
    realform: str
    positive_factors: dict[int, LaurentLoop] | None = None
    frame_loops: list[LaurentLoop | None] = field(default_factory=list)
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.frames.shape[-1]

    def ok(self, i: int) -> bool:
        return i not in self.failures


@dataclass
class SurfaceGrid:
    """Sampled surface points y in S^{n+2} and their light-cone lifts."""

    z_samples: np.ndarray
    lambda_samples: np.ndarray
    points: np.ndarray                       # (npts, nlam, n+3)
    lifts: np.ndarray                        # (npts, nlam, n+4), 0-th coord 1
    failures: dict[int, str] = field(default_factory=dict)
    grid_shape: tuple | None = None          # original sample layout, if rectangular
    grid_spacing: float | None = None

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[-1]

    def ok(self, i: int) -> bool:
        return i not in self.failures


def build_surface(P: PotentialSpec, z_samples, lambda_samples,
                  realform: str = "noncompact", tol: float = 1e-10,
                  cap: int = 16, branch: str = "auto",
                  keep_positive: bool = False,
                  grid_shape: tuple | None = None,
                  grid_spacing: float | None = None
                  ) -> tuple[ExtendedFrameGrid, SurfaceGrid | None]:
    """Run the full pipeline on a list of z samples and unit-circle lambdas.

    For the noncompact form returns (frames, surface); the compact form
    produces frames only (in the orthogonality-adapted basis).  Per-point
    factorization failures are recorded in the failure maps instead of
    aborting the sweep.  branch selects the rank-1 lift branch: "auto"
    prefers the canonical minus branch and falls back to the other one if
    the minus branch degenerates to a constant map.
    """
    z_flat = np.asarray(z_samples, dtype=complex).ravel()
    lams = np.asarray(lambda_samples, dtype=complex).ravel()
    if np.any(np.abs(np.abs(lams) - 1.0) > 1e-12):
        raise ValueError("lambda samples must lie on the unit circle")
    if branch not in ("auto", "plus", "minus"):
        raise ValueError(f"unknown branch {branch!r}")

    frame_mero = integrate_potential(P, cap=cap)
    b1_red, _ = P.b1_reduced_coeffs()
    m = P.dim
    npts, nlam = len(z_flat), len(lams)

    frames = np.zeros((npts, nlam, m, m))
    lifts = np.zeros((npts, nlam, m))
    failures_f: dict[int, str] = {}
    failures_s: dict[int, str] = {}
    positives: dict[int, LaurentLoop] = {}
    frame_loops: list[LaurentLoop | None] = [None] * npts
    cands_all: list[list[np.ndarray]] = [[] for _ in range(npts)]

    for i, z in enumerate(z_flat):
        M = frame_mero.eval(z)
        if realform == "compact":
            M = to_compact_basis(M)
        try:
            F, V = iwasawa_split(M, realform=realform, tol=tol)
        except (IwasawaCellError, LoopsurfError) as exc:
            failures_f[i] = f"{type(exc).__name__}: {exc}"
            continue
        frame_loops[i] = F
        if keep_positive:
            positives[i] = V
        for j, lam in enumerate(lams):
            E = loop_eval(F, lam)
            if np.max(np.abs(np.imag(E))) > 1e-7:
                failures_f.setdefault(i, "frame has non-real entries on the circle")
            frames[i, j] = np.real(E)
        if realform == "noncompact":
            V0_4 = V.coeff(0)[:4, :4]
            B_frame = V0_4 @ _polymat_eval(b1_red, z)
            cands, _rank = extraction_directions(B_frame)
            cands_all[i] = cands

    if realform == "compact":
        grid = ExtendedFrameGrid(z_flat, lams, frames, realform,
                                 positives if keep_positive else None,
                                 frame_loops, failures_f)
        return grid, None

    # branch resolution: probe whether the canonical minus branch moves
    use_minus = branch in ("auto", "minus")
    if branch == "auto":
        probe = [_lift_point(frame_loops[i], lams[0], cands_all[i], True)
                 for i in range(npts) if frame_loops[i] is not None and cands_all[i]]
        probe = [p for p in probe if p is not None]
        if len(probe) >= 2:
            spread = max(float(np.max(np.abs(p - probe[0]))) for p in probe)
            if spread < 1e-9:
                use_minus = False

    for i in range(npts):
        if i in failures_f:
            failures_s[i] = failures_f[i]
            continue
        cands = cands_all[i]
        if not cands:
            failures_s[i] = "degenerate lift direction (umbilic-degenerate sample)"
            continue
        for j, lam in enumerate(lams):
            Y = _lift_vector(frame_loops[i], lam, cands, use_minus)
            if abs(Y[0]) <= 1e-10:
                failures_s[i] = "chart error: lift has vanishing 0-th coordinate"
                break
            lifts[i, j] = Y / Y[0]

    points = lifts[:, :, 1:].copy()
    grid = ExtendedFrameGrid(z_flat, lams, frames, realform,
                             positives if keep_positive else None,
                             frame_loops, failures_f)
    surf = SurfaceGrid(z_flat, lams, points, lifts, failures_s,
                       grid_shape=grid_shape, grid_spacing=grid_spacing)
    return grid, surf


def _lift_vector(F: LaurentLoop, lam: complex, cands, use_minus: bool) -> np.ndarray:
    if len(cands) == 1:
        w = cands[0]
    else:
        w = cands[1] if use_minus else cands[0]
    wfull = np.zeros(F.dim)
    wfull[:4] = w
    E = loop_eval(F, lam)
    return np.real(E @ wfull)


def _lift_point(F: LaurentLoop, lam, cands, use_minus) -> np.ndarray | None:
    if F is None or not cands:
        return None
    Y = _lift_vector(F, lam, cands, use_minus)
    if abs(Y[0]) <= 1e-10:
        return None
    return Y[1:] / Y[0]


def recover_normalized_potential(frame_fn, z_points, h: float, dim: int,
                                 tol: float = 1e-10) -> list[np.ndarray]:
    """Sampled lambda^{-1} coefficient of F_-^{-1} dF_-/dz from frame samples.

    frame_fn maps z to the frame loop (Minkowski basis).  Each sample
    Birkhoff-splits the loops at z and z +/- h, central-differences the
    minus factors, and reads off the lambda^{-1} coefficient; on a
    normalized-potential frame this reproduces eta_{-1}(z) to O(h^2).
    """
    J = minkowski_matrix(dim)
    out = []
    for z in z_points:
        minus_0, _ = birkhoff_split(frame_fn(z), tol=tol)
        minus_p, _ = birkhoff_split(frame_fn(z + h), tol=tol)
        minus_m, _ = birkhoff_split(frame_fn(z - h), tol=tol)
        dminus = LaurentLoop(dim, {
            k: (minus_p.coeff(k) - minus_m.coeff(k)) / (2 * h)
            for k in set(minus_p.coeffs) | set(minus_m.coeffs)})
        alpha = loop_mul(form_inverse(minus_0, J), dminus)
        out.append(alpha.coeff(-1))
    return out
