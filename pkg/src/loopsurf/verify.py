"""Geometric verification of sampled surfaces and frames.

Canonical light-cone lifts and their structure data are recovered from
surface samples by central differences only, so closed-form oracles and
pipeline output are treated identically.  Quadratures use compensated
summation and report Richardson error estimates.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import minkowski_matrix
from .errors import PairingError, StencilError
from .dpw import ExtendedFrameGrid, SurfaceGrid, recover_normalized_potential
from .loops import LaurentLoop, from_compact_basis
from .oracles import duality_frame_compact, duality_frame_noncompact
from .potentials import PotentialSpec, RationalFunction, builtin_potential

__all__ = [
    "LiftData",
    "cartesian_grid",
    "symmetric_mu_grid",
    "sample_surface_grid",
    "canonical_lift",
    "lift_data_at_point",
    "sphere_and_conformality_defect",
    "willmore_energy_and_area",
    "sphere_energy_area",
    "QuadratureResult",
    "conformal_gauss_defect",
    "rp2_pointwise_symmetry",
    "frame_invariant_defect",
    "maurer_cartan_p_defect",
    "fit_global_motion",
    "compare_surfaces",
    "duality_potential_match",
    "CheckResult",
    "VerificationReport",
]


# ---------------------------------------------------------------------------
# grids


def cartesian_grid(center: complex, radius: float, nu: int, nv: int | None = None
                   ) -> tuple[np.ndarray, float]:
    """Square sample grid around center; returns (grid, spacing)."""
    if nv is None:
        nv = nu
    us = np.linspace(-radius, radius, nu)
    vs = np.linspace(-radius, radius, nv)
    return center + us[:, None] + 1j * vs[None, :], float(us[1] - us[0])


def symmetric_mu_grid(radii, ntheta: int) -> np.ndarray:
    """Polar grid closed under z -> -1/conj(z).

    Radii are augmented by their reciprocals and the angle count must be
    even so that theta + pi stays on the grid.
    """
    if ntheta % 2 != 0:
        raise ValueError("ntheta must be even for mu-closure")
    rs = sorted(set([round(float(r), 12) for r in radii] +
                    [round(1.0 / float(r), 12) for r in radii]))
    ts = np.arange(ntheta) * (2 * np.pi / ntheta)
    return np.array([r * np.exp(1j * t) for r in rs for t in ts])


def sample_surface_grid(surface_fn, z_grid: np.ndarray, lambdas,
                        grid_spacing: float | None = None) -> SurfaceGrid:
    """Wrap a closed-form surface into a SurfaceGrid (unit lifts included)."""
    z_flat = np.asarray(z_grid, dtype=complex).ravel()
    lams = np.asarray(lambdas, dtype=complex).ravel()
    first = np.asarray(surface_fn(z_flat[0], lams[0]), dtype=float)
    d = first.shape[-1]
    points = np.zeros((len(z_flat), len(lams), d))
    for j, lam in enumerate(lams):
        points[:, j, :] = np.asarray(surface_fn(z_flat, lam), dtype=float)
    lifts = np.concatenate([np.ones(points.shape[:-1] + (1,)), points], axis=-1)
    shape = z_grid.shape if np.asarray(z_grid).ndim == 2 else None
    return SurfaceGrid(z_flat, lams, points, lifts,
                       grid_shape=shape, grid_spacing=grid_spacing)


# ---------------------------------------------------------------------------
# canonical lifts


@dataclass
class LiftData:
    """Light-cone lift data on a rectangular grid, one slot per (z, lambda).

    Arrays are shaped (nu, nv, nlam, ...); valid marks the points where the
    two-ring stencil fit inside the grid and the conformal factor was
    non-degenerate.
    """

    Y: np.ndarray
    Y_z: np.ndarray
    Y_zz: np.ndarray
    N: np.ndarray
    kappa_sq: np.ndarray
    schwarzian: np.ndarray
    valid: np.ndarray


def _mink(u, v, J):
    return np.sum(u * (v @ J.T), axis=-1)


def canonical_lift(S: SurfaceGrid, h: float | None = None) -> LiftData:
    """Lift a conformally immersed rectangular SurfaceGrid to the light cone.

    Y = e^{-w} (1, y) with e^{2w} = |y_u|^2; N is fixed by 2 Y_{z zbar}
    modulo Y and the normalizations <N, Y> = -1, <N, N> = 0.  kappa_sq is
    the squared norm of the conformal Hopf differential, schwarzian the
    companion coefficient in Y_zz = -(s/2) Y + kappa.
    """
    if S.grid_shape is None:
        raise StencilError("canonical_lift needs a rectangular grid (grid_shape set)")
    nu, nv = S.grid_shape
    if nu < 5 or nv < 5:
        raise StencilError("grid too small for the two-ring stencil (need >= 5x5)")
    if h is None:
        h = S.grid_spacing
    if h is None:
        raise StencilError("grid spacing unknown; pass h explicitly")
    nlam = S.points.shape[1]
    d = S.points.shape[2] + 1
    J = minkowski_matrix(d)
    y = S.points.reshape(nu, nv, nlam, d - 1)
    ok = np.ones((nu, nv), dtype=bool)
    for i in S.failures:
        ok[np.unravel_index(i, (nu, nv))] = False

    Yf = np.full((nu, nv, nlam, d), np.nan)
    e2w = np.full((nu, nv, nlam), np.nan)
    degenerate = np.zeros((nu, nv), dtype=bool)
    yu = (y[2:, 1:-1] - y[:-2, 1:-1]) / (2 * h)
    e2w[1:-1, 1:-1] = np.sum(yu * yu, axis=-1)
    with np.errstate(invalid="ignore"):
        degenerate[1:-1, 1:-1] = np.nanmin(e2w[1:-1, 1:-1], axis=-1) < 1e-16
    emb = np.concatenate([np.ones(y.shape[:-1] + (1,)), y], axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        Yf = emb / np.sqrt(e2w)[..., None]
    Yf[~np.isfinite(Yf)] = np.nan

    shape = (nu, nv, nlam)
    Y = np.full(shape + (d,), np.nan)
    Yz = np.full(shape + (d,), np.nan, dtype=complex)
    Yzz = np.full(shape + (d,), np.nan, dtype=complex)
    Nv = np.full(shape + (d,), np.nan)
    ksq = np.full(shape, np.nan)
    schw = np.full(shape, np.nan, dtype=complex)
    valid = np.zeros(shape, dtype=bool)

    with np.errstate(invalid="ignore", divide="ignore"):
        core = (slice(2, -2), slice(2, -2))
        Yc = Yf[core]
        Yu = (Yf[3:-1, 2:-2] - Yf[1:-3, 2:-2]) / (2 * h)
        Yv = (Yf[2:-2, 3:-1] - Yf[2:-2, 1:-3]) / (2 * h)
        Yuu = (Yf[3:-1, 2:-2] - 2 * Yc + Yf[1:-3, 2:-2]) / h**2
        Yvv = (Yf[2:-2, 3:-1] - 2 * Yc + Yf[2:-2, 1:-3]) / h**2
        Yuv = (Yf[3:-1, 3:-1] - Yf[3:-1, 1:-3] - Yf[1:-3, 3:-1]
               + Yf[1:-3, 1:-3]) / (4 * h**2)
        Yz_c = 0.5 * (Yu - 1j * Yv)
        Yzz_c = 0.25 * (Yuu - Yvv) - 0.5j * Yuv
        Yzzb_c = 0.25 * (Yuu + Yvv)

        Ntil = 2 * Yzzb_c
        nn = _mink(Ntil, Ntil, J)
        ny = _mink(Ntil, Yc, J)
        cc = -nn / (2 * ny)
        N_c = np.real(Ntil + cc[..., None] * Yc)
        s_c = 2 * _mink(Yzz_c, N_c.astype(complex), J)
        K = Yzz_c + 0.5 * s_c[..., None] * Yc
        ksq_c = np.real(_mink(K, np.conj(K), J))

    Y[core] = np.real(Yc)
    Yz[core] = Yz_c
    Yzz[core] = Yzz_c
    Nv[core] = N_c
    ksq[core] = ksq_c
    schw[core] = s_c
    ok2 = ok.copy()
    # second derivatives of the lift need the lift (hence the conformal
    # factor) finite on the 1-ring of each core point
    good = ok & ~degenerate & np.all(np.isfinite(e2w), axis=-1)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            ok2[2:-2, 2:-2] &= good[2 + di:nu - 2 + di, 2 + dj:nv - 2 + dj]
    valid[2:-2, 2:-2, :] = ok2[2:-2, 2:-2, None]
    valid &= np.isfinite(ksq)
    return LiftData(Y=Y, Y_z=Yz, Y_zz=Yzz, N=Nv, kappa_sq=ksq,
                    schwarzian=schw, valid=valid)


def lift_data_at_point(surface_fn, z: complex, lam: complex, h: float = 1e-4) -> dict:
    """Canonical-lift data at a single point from a local 3x3 stencil.

    surface_fn(z, lam) must return the ambient unit vector; usable with
    closed-form oracles and with any interpolation-free sampler.
    """
    d = len(np.atleast_1d(surface_fn(z, lam))) + 1
    J = minkowski_matrix(d)
    Ys = np.zeros((3, 3, d))
    for a in (-1, 0, 1):
        for b in (-1, 0, 1):
            zz = z + complex(a, b) * h
            y0 = np.asarray(surface_fn(zz, lam), dtype=float)
            yu = (np.asarray(surface_fn(zz + h, lam)) - np.asarray(surface_fn(zz - h, lam))) / (2 * h)
            e2w = float(np.sum(yu * yu))
            Ys[a + 1, b + 1] = np.concatenate([[1.0], y0]) / math.sqrt(e2w)
    Y = Ys[1, 1]
    Yu = (Ys[2, 1] - Ys[0, 1]) / (2 * h)
    Yv = (Ys[1, 2] - Ys[1, 0]) / (2 * h)
    Yuu = (Ys[2, 1] - 2 * Y + Ys[0, 1]) / h**2
    Yvv = (Ys[1, 2] - 2 * Y + Ys[1, 0]) / h**2
    Yuv = (Ys[2, 2] - Ys[2, 0] - Ys[0, 2] + Ys[0, 0]) / (4 * h**2)
    Yz = 0.5 * (Yu - 1j * Yv)
    Yzz = 0.25 * (Yuu - Yvv) - 0.5j * Yuv
    Yzzb = 0.25 * (Yuu + Yvv)
    mink = lambda u, v: complex(np.sum(u * (J @ v)))
    Ntil = 2 * Yzzb
    N = Ntil - (mink(Ntil, Ntil) / (2 * mink(Ntil, Y))) * Y
    s = 2 * mink(Yzz, N)
    K = Yzz + (s / 2) * Y
    yu_c = (np.asarray(surface_fn(z + h, lam)) - np.asarray(surface_fn(z - h, lam))) / (2 * h)
    return {
        "Y": Y, "Y_z": Yz, "Y_zz": Yzz, "N": np.real(N),
        "kappa_sq": float(np.real(mink(K, np.conj(K)))),
        "schwarzian": s,
        "conformal_factor": float(np.sum(yu_c * yu_c)),
    }


# ---------------------------------------------------------------------------
# defect measurements


def sphere_and_conformality_defect(S: SurfaceGrid, h: float | None = None,
                                   full_field: bool = False):
    """(max | |y|^2 - 1 |, max conformality defect over interior points).

    The conformality defect at a point is (|<y_u, y_v>| + ||y_u|^2 -
    |y_v|^2|) / |y_u|^2.  Degenerate points (|y_u|^2 ~ 0) are excluded;
    if everything degenerates the defect is NaN.  With full_field the
    per-point interior defect array (NaN at degenerate points, max over
    the lambda axis) is returned instead of the scalar.
    """
    if S.grid_shape is None:
        raise StencilError("needs a rectangular grid")
    nu, nv = S.grid_shape
    if nu < 3 or nv < 3:
        raise StencilError("grid too small for central differences")
    if h is None:
        h = S.grid_spacing
    y = S.points.reshape(nu, nv, *S.points.shape[1:])
    sphere = float(np.nanmax(np.abs(np.sum(y * y, axis=-1) - 1.0)))
    yu = (y[2:, 1:-1] - y[:-2, 1:-1]) / (2 * h)
    yv = (y[1:-1, 2:] - y[1:-1, :-2]) / (2 * h)
    dot = np.abs(np.sum(yu * yv, axis=-1))
    n2u = np.sum(yu * yu, axis=-1)
    n2v = np.sum(yv * yv, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        defect = np.where(n2u > 1e-16, (dot + np.abs(n2u - n2v)) / n2u, np.nan)
    if full_field:
        return sphere, np.nanmax(defect, axis=-1) if defect.ndim == 3 else defect
    if not np.any(np.isfinite(defect)):
        return sphere, float("nan")
    return sphere, float(np.nanmax(defect))


@dataclass
class QuadratureResult:
    energy: float
    area: float
    energy_error: float
    area_error: float
    excluded: int = 0


def _trapezoid_weights(nu: int, nv: int) -> np.ndarray:
    wu = np.ones(nu)
    wu[0] = wu[-1] = 0.5
    wv = np.ones(nv)
    wv[0] = wv[-1] = 0.5
    return np.outer(wu, wv)


def willmore_energy_and_area(S: SurfaceGrid, L: LiftData,
                             domain: list[tuple[float, float, float, float]] | None = None,
                             lam_index: int = 0) -> QuadratureResult:
    """Composite trapezoidal quadrature of 4 <kappa, conj kappa> and e^{2w}.

    domain is a list of (u0, u1, v0, v1) rectangles restricting the grid;
    None integrates over the whole grid.  Invalid lift points are excluded
    (counted); the Richardson estimate compares with the stride-2 subgrid.
    """
    nu, nv = S.grid_shape
    h = S.grid_spacing
    y = S.points.reshape(nu, nv, *S.points.shape[1:])
    us = np.real(S.z_samples.reshape(nu, nv)[:, 0])
    vs = np.imag(S.z_samples.reshape(nu, nv)[0, :])
    yu = np.full((nu, nv) + y.shape[2:], np.nan)
    yu[1:-1, 1:-1] = (y[2:, 1:-1] - y[:-2, 1:-1]) / (2 * h)
    e2w = np.sum(yu * yu, axis=-1)[:, :, lam_index]
    ksq = L.kappa_sq[:, :, lam_index]
    valid = L.valid[:, :, lam_index] & np.isfinite(e2w)

    if domain is not None:
        inside = np.zeros((nu, nv), dtype=bool)
        for (u0, u1, v0, v1) in domain:
            inside |= (us[:, None] >= u0) & (us[:, None] <= u1) & \
                      (vs[None, :] >= v0) & (vs[None, :] <= v1)
    else:
        inside = np.ones((nu, nv), dtype=bool)

    W = _trapezoid_weights(nu, nv) * inside
    excluded = int(np.sum(inside & ~valid))
    Wv = W * valid

    def integrate(field, weights):
        terms = (weights * np.where(np.isfinite(field), field, 0.0)).ravel() * h * h
        return math.fsum(terms.tolist())

    area = integrate(e2w, Wv)
    energy = 4.0 * integrate(ksq, Wv)
    # stride-2 Richardson estimate (second-order rule)
    if nu >= 5 and nv >= 5 and (nu % 2 == 1) and (nv % 2 == 1):
        Wc = _trapezoid_weights((nu + 1) // 2, (nv + 1) // 2)
        sel = (slice(None, None, 2), slice(None, None, 2))
        Wc = Wc * inside[sel] * valid[sel]
        area_c = math.fsum((Wc * np.where(np.isfinite(e2w[sel]), e2w[sel], 0.0)).ravel()
                           .tolist()) * (2 * h) ** 2
        energy_c = 4.0 * math.fsum((Wc * np.where(np.isfinite(ksq[sel]), ksq[sel], 0.0))
                                   .ravel().tolist()) * (2 * h) ** 2
        area_err = abs(area - area_c) / 3.0
        energy_err = abs(energy - energy_c) / 3.0
    else:
        area_err = energy_err = float("nan")
    return QuadratureResult(energy, area, energy_err, area_err, excluded)


def _polar_chart_sums(surface_fn, lam, nr: int, ntheta: int, h_fd: float,
                      want_energy: bool):
    rs = np.linspace(0.0, 1.0, nr + 1)
    ts = np.linspace(0.0, 2 * np.pi, ntheta, endpoint=False)
    area_terms = []
    energy_terms = []
    wr = np.ones(nr + 1)
    wr[0] = wr[-1] = 0.5
    dr = 1.0 / nr
    dt = 2 * np.pi / ntheta
    for i, r in enumerate(rs):
        if r == 0.0:
            continue  # zero radial weight; avoids evaluating across the far pole
        for t in ts:
            z = r * np.exp(1j * t)
            if want_energy:
                data = lift_data_at_point(surface_fn, z, lam, h_fd)
                e2w = data["conformal_factor"]
                energy_terms.append(wr[i] * 4.0 * data["kappa_sq"] * r * dr * dt)
            else:
                yu = (np.asarray(surface_fn(z + h_fd, lam)) -
                      np.asarray(surface_fn(z - h_fd, lam))) / (2 * h_fd)
                yv = (np.asarray(surface_fn(z + 1j * h_fd, lam)) -
                      np.asarray(surface_fn(z - 1j * h_fd, lam))) / (2 * h_fd)
                e2w = 0.5 * (np.sum(yu * yu) + np.sum(yv * yv))
            area_terms.append(wr[i] * e2w * r * dr * dt)
    return math.fsum(area_terms), (math.fsum(energy_terms) if want_energy else 0.0)


def sphere_energy_area(surface_fn, lam=1.0, nr: int = 120, ntheta: int = 128,
                       h_fd: float = 1e-5, want_energy: bool = False
                       ) -> QuadratureResult:
    """Sphere-wide quadrature in the two-chart atlas z and 1/z.

    Integrates over |z| <= 1 in each chart (the partition circle |z| = 1)
    using polar trapezoid rules; the Richardson estimate halves nr and
    ntheta.  Energy integration is markedly slower (a 3x3 lift stencil
    per node), so it is opt-in.
    """
    def flipped(w, lam_):
        return surface_fn(1.0 / w, lam_)

    def run(nr_, nt_):
        a1, e1 = _polar_chart_sums(surface_fn, lam, nr_, nt_,
                                   h_fd, want_energy)
        a2, e2 = _polar_chart_sums(flipped, lam, nr_, nt_, h_fd, want_energy)
        return a1 + a2, e1 + e2

    area, energy = run(nr, ntheta)
    area_c, energy_c = run(nr // 2, ntheta // 2)
    return QuadratureResult(energy=energy, area=area,
                            energy_error=abs(energy - energy_c) / 3.0,
                            area_error=abs(area - area_c) / 3.0)


def conformal_gauss_defect(S: SurfaceGrid, L: LiftData, E: ExtendedFrameGrid,
                           lam_index: int | None = None) -> float:
    """Max principal-angle sine between the lift 4-plane and the frame span.

    The lift plane is span{Y, Re Y_z, Im Y_z, N}; the frame plane is the
    span of the first four columns at lambda = 1 (or the given index).
    Angles are measured in the Euclideanized metric.  Rank-deficient
    samples are excluded.
    """
    if lam_index is None:
        lam_index = int(np.argmin(np.abs(E.lambda_samples - 1.0)))
        if abs(E.lambda_samples[lam_index] - 1.0) > 1e-9:
            raise ValueError("frame grid has no lambda = 1 sample")
    nu, nv = S.grid_shape
    frames = E.frames.reshape(nu, nv, *E.frames.shape[1:])
    worst = 0.0
    for i in range(nu):
        for j in range(nv):
            if not L.valid[i, j, lam_index]:
                continue
            A = np.column_stack([
                L.Y[i, j, lam_index],
                np.real(L.Y_z[i, j, lam_index]),
                np.imag(L.Y_z[i, j, lam_index]),
                L.N[i, j, lam_index]])
            if not np.all(np.isfinite(A)):
                continue
            sv_rank = np.linalg.svd(A, compute_uv=False)
            if sv_rank[-1] < 1e-10 * sv_rank[0]:
                continue
            B = frames[i, j, lam_index][:, :4]
            qa, _ = np.linalg.qr(A)
            qb, _ = np.linalg.qr(B)
            cosines = np.linalg.svd(qa.T @ qb, compute_uv=False)
            sine = math.sqrt(max(0.0, 1.0 - min(1.0, float(cosines.min())) ** 2))
            worst = max(worst, sine)
    return worst


def rp2_pointwise_symmetry(S: SurfaceGrid, tol: float = 1e-9) -> float:
    """max |y(-1/conj(z)) - y(z)| over paired samples of a mu-closed grid."""
    zs = S.z_samples.ravel()
    index = {}
    for i, z in enumerate(zs):
        index[(round(z.real, 9), round(z.imag, 9))] = i
    worst = 0.0
    for i, z in enumerate(zs):
        if not S.ok(i):
            continue
        if abs(z) < 1e-12:
            raise PairingError("grid contains the origin, whose mu-image is unbounded")
        mu = -1.0 / np.conj(z)
        j = index.get((round(mu.real, 9), round(mu.imag, 9)))
        if j is None:
            raise PairingError(f"sample {z} has no mu-partner in the grid")
        if not S.ok(j):
            continue
        worst = max(worst, float(np.max(np.abs(S.points[i] - S.points[j]))))
    return worst


def frame_invariant_defect(E: ExtendedFrameGrid) -> float:
    """Max group defect of the stored frames w.r.t. the applicable form."""
    from .core import group_defect
    from .factorize import realform_matrix
    J = realform_matrix(E.dim, E.realform)
    worst = 0.0
    flat = E.frames.reshape(-1, E.dim, E.dim)
    ok = np.ones(len(flat), dtype=bool)
    nlam = E.frames.shape[1]
    for i in E.failures:
        ok[i * nlam:(i + 1) * nlam] = False
    for keep, F in zip(ok, flat):
        if keep:
            worst = max(worst, group_defect(F, J))
    return worst


def maurer_cartan_p_defect(frame_fn, z: complex, h: float = 1e-5) -> float:
    """How far the frame's Maurer-Cartan p-part spills out of degrees +-1.

    frame_fn maps z to a real-form frame loop; both coordinate derivatives
    are taken by central differences.
    """
    from .core import block_split
    from .loops import form_inverse, loop_mul
    F0 = frame_fn(z)
    J = minkowski_matrix(F0.dim)
    worst = 0.0
    for dz in (h, 1j * h):
        Fp, Fm = frame_fn(z + dz), frame_fn(z - dz)
        dF = LaurentLoop(F0.dim, {
            k: (Fp.coeff(k) - Fm.coeff(k)) / (2 * abs(dz))
            for k in set(Fp.coeffs) | set(Fm.coeffs)})
        alpha = loop_mul(form_inverse(F0, J), dF)
        for k, A in alpha.coeffs.items():
            if k in (-1, 1):
                continue
            worst = max(worst, float(np.max(np.abs(block_split(A).p_part))))
    return worst


# ---------------------------------------------------------------------------
# alignment and oracle comparison


def fit_global_motion(src_lifts: np.ndarray, dst_lifts: np.ndarray,
                      max_points: int = 400) -> tuple[np.ndarray, float, float]:
    """Conformal motion T with [T src_i] = [dst_i] projectively.

    Lifts are rows with 0-th coordinate 1.  Projecting out each
    destination ray gives a homogeneous linear system for T; its
    one-dimensional nullspace (when the surfaces really are congruent) is
    extracted by SVD and rescaled into the group via the determinant.
    Returns (T, group defect of T, post-fit max pointwise error).
    """
    from .core import group_defect
    src = np.asarray(src_lifts, dtype=float)
    dst = np.asarray(dst_lifts, dtype=float)
    d = src.shape[1]
    stride = max(1, len(src) // max_points)
    e0 = np.eye(d)[0]
    rows = [np.kron(np.eye(d) - np.outer(t, e0), s)
            for s, t in zip(src[::stride], dst[::stride])]
    A = np.vstack(rows)
    _, _, Vh = np.linalg.svd(A, full_matrices=True)
    T = Vh[-1].reshape(d, d)
    det = np.linalg.det(T)
    if det != 0:
        T = T / abs(det) ** (1.0 / d)
        if (T @ src[0])[0] < 0:
            T = -T
    defect = group_defect(T, minkowski_matrix(d))
    worst = 0.0
    for s, t in zip(src, dst):
        Ts = T @ s
        if abs(Ts[0]) < 1e-12:
            worst = float("inf")
            continue
        worst = max(worst, float(np.max(np.abs(Ts[1:] / Ts[0] - t[1:]))))
    return T, float(defect), worst


@dataclass
class ComparisonResult:
    path: str
    error: float
    direct_error: float
    motion_defect: float = float("nan")

    @property
    def aligned(self) -> bool:
        return self.path != "direct"


def compare_surfaces(S: SurfaceGrid, oracle_points: np.ndarray,
                     tol: float = 1e-6) -> ComparisonResult:
    """Pointwise comparison with fallbacks, reporting which path passed.

    Tries the raw comparison, then the antipodal image (the dual branch of
    rank-1 potentials), then a fitted global conformal motion, then the
    motion composed with the antipode.
    """
    ok = np.array([S.ok(i) for i in range(len(S.z_samples.ravel()))])
    pts = S.points[ok]
    orc = oracle_points[ok]
    direct = float(np.max(np.abs(pts - orc)))
    if direct <= tol:
        return ComparisonResult("direct", direct, direct)
    anti = float(np.max(np.abs(-pts - orc)))
    if anti <= tol:
        return ComparisonResult("antipodal", anti, direct)
    nlam = pts.shape[1]
    src = S.lifts[ok].reshape(-1, S.lifts.shape[-1])
    for flip, name in ((1.0, "aligned"), (-1.0, "aligned-antipodal")):
        dst = np.concatenate([np.ones(orc.reshape(-1, orc.shape[-1]).shape[0])[:, None],
                              flip * orc.reshape(-1, orc.shape[-1])], axis=1)
        T, defect, err = fit_global_motion(src, dst)
        if err <= tol and defect <= 1e-6:
            return ComparisonResult(name, err, direct, defect)
    return ComparisonResult("failed", min(direct, anti), direct)


def duality_potential_match(z_points, h: float = 1e-3,
                            f2: RationalFunction | None = None,
                            f4: RationalFunction | None = None) -> dict:
    """Check that both closed-form dual frames recover one potential.

    The compact frame is conjugated from the orthogonality-adapted basis
    into the Minkowski basis before Birkhoff splitting.  Returns max
    deviations between the two recoveries and against the constructed
    potential.
    """
    kwargs = {}
    if f2 is not None:
        kwargs["f2"] = f2
    if f4 is not None:
        kwargs["f4"] = f4
    P = builtin_potential("duality-example", **kwargs)

    nc = recover_normalized_potential(
        lambda z: duality_frame_noncompact(z, **kwargs), z_points, h, 6)
    cp = recover_normalized_potential(
        lambda z: from_compact_basis(duality_frame_compact(z, **kwargs)),
        z_points, h, 6)
    cross = max(float(np.max(np.abs(a - b))) for a, b in zip(nc, cp))
    vs_pot = 0.0
    for z, a in zip(z_points, nc):
        vs_pot = max(vs_pot, float(np.max(np.abs(a - P.eta_eval(z)))))
    for z, b in zip(z_points, cp):
        vs_pot = max(vs_pot, float(np.max(np.abs(b - P.eta_eval(z)))))
    return {"cross": cross, "vs_potential": vs_pot}


# ---------------------------------------------------------------------------
# report


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name: str, value: float, tolerance: float,
            larger_ok: bool = False) -> bool:
        ok = (value >= tolerance) if larger_ok else (value <= tolerance)
        if math.isnan(value):
            ok = False
        self.checks.append(CheckResult(name, float(value), float(tolerance), bool(ok)))
        return ok

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{c.name:<44s} {c.value: .6e}  tol {c.tolerance:.1e}  {status}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "checks": [{"name": c.name, "value": c.value,
                        "tolerance": c.tolerance, "passed": c.passed}
                       for c in self.checks],
            "passed": self.passed,
        }, indent=2)
