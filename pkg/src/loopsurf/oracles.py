"""Closed-form reference surfaces and frames used by the verification suite.

Everything here is an independent transcription of explicit formulas, so
the pipeline can be checked against values it had no hand in computing.
All surface oracles accept numpy arrays for z.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .loops import LaurentLoop
from .potentials import RationalFunction

__all__ = [
    "s6_sphere",
    "rp2_surface",
    "minimal_r4",
    "inverse_stereographic",
    "duality_frame_noncompact",
    "duality_frame_compact",
    "oracle_eval",
]


def s6_sphere(z, lam) -> np.ndarray:
    """Totally isotropic Willmore sphere in S^6; lam on the unit circle.

    Associated family of the s6-isotropic-example potential; components
    stacked along the last axis (length 7).
    """
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    r2 = (z * zb).real
    den = 1 + r2 + 5 * r2**2 / 4 + 4 * r2**3 / 9 + r2**4 / 36
    li = 1.0 / lam
    comps = [
        1 - r2 - 3 * r2**2 / 4 + 4 * r2**3 / 9 - r2**4 / 36,
        -1j * (z - zb) * (1 + r2**3 / 9),
        (z + zb) * (1 + r2**3 / 9),
        -1j * (li * z**2 - lam * zb**2) * (1 - r2**2 / 12),
        (li * z**2 + lam * zb**2) * (1 - r2**2 / 12),
        -1j * (r2 / 2) * (li * z - lam * zb) * (1 + 4 * r2 / 3),
        (r2 / 2) * (li * z + lam * zb) * (1 + 4 * r2 / 3),
    ]
    return np.real(np.stack(comps, axis=-1)) / den[..., None]


def rp2_surface(m: int, z, lam) -> np.ndarray:
    """Minimal RP^2 family in S^4 parametrized by the double cover plane.

    m = 1 is the Veronese embedding (area 6 pi, double cover 12 pi),
    m = 2 the next member (area 10 pi, double cover 20 pi).  Both are
    invariant under z -> -1/conj(z).  Components along the last axis
    (length 5).
    """
    z = np.asarray(z, dtype=complex)
    zb = np.conj(z)
    r2 = (z * zb).real
    li = 1.0 / lam
    if m == 1:
        den = (1 + r2) ** 2
        s3 = np.sqrt(3.0)
        comps = [
            -(r2**2 - 4 * r2 + 1),
            s3 * (z + zb) * (1 - r2),
            -1j * s3 * (z - zb) * (1 - r2),
            s3 * (li * z**2 + lam * zb**2),
            1j * s3 * (li * z**2 - lam * zb**2),
        ]
    elif m == 2:
        den = (3 * r2**2 - 4 * r2 + 3) * (1 + r2) ** 2
        s15 = np.sqrt(15.0)
        comps = [
            -(3 * r2**4 - 8 * r2**3 + 8 * r2**2 - 8 * r2 + 3),
            s15 * (z + zb) * (1 - r2) * (1 + r2**2),
            -1j * s15 * (z - zb) * (1 - r2) * (1 + r2**2),
            s15 * (li * z**4 + lam * zb**4),
            1j * s15 * (li * z**4 - lam * zb**4),
        ]
    else:
        raise ValueError(f"rp2-surface oracle is available for m in {{1, 2}}, got {m}")
    return np.real(np.stack(comps, axis=-1)) / den[..., None]


_F2_DEFAULT = RationalFunction.monomial(1.0, 2)
_F4_DEFAULT = RationalFunction.monomial(1.0, 1)


def minimal_r4(z, lam, f2: RationalFunction = _F2_DEFAULT,
               f4: RationalFunction = _F4_DEFAULT) -> np.ndarray:
    """Minimal surface in R^4 whose conformal Gauss map has the
    duality-example potential; components along the last axis (length 4)."""
    z = np.asarray(z, dtype=complex)
    f2v, f4v = f2(z), f4(z)
    f2p, f4p = f2.derivative()(z), f4.derivative()(z)
    f2b, f4b = np.conj(f2v), np.conj(f4v)
    rp = f2p / f4p
    rpb = np.conj(rp)
    li = 1.0 / lam
    comps = [
        -1j * rp + 1j * rpb,
        -rp - rpb,
        -1j * (li * f2v - lam * f2b) + 1j * li * rp * f4v - 1j * lam * rpb * f4b,
        (li * f2v + lam * f2b) - li * rp * f4v - lam * rpb * f4b,
    ]
    return np.real(np.stack(comps, axis=-1))


def inverse_stereographic(x: np.ndarray) -> np.ndarray:
    """R^k -> S^k from the north pole: x -> (2x, |x|^2 - 1)/(|x|^2 + 1)."""
    x = np.asarray(x, dtype=float)
    n2 = np.sum(x * x, axis=-1, keepdims=True)
    return np.concatenate([2 * x, n2 - 1], axis=-1) / (n2 + 1)


def _duality_values(z, f2: RationalFunction, f4: RationalFunction):
    f2v, f4v = complex(f2(z)), complex(f4(z))
    return f2v, f4v, np.conj(f2v), np.conj(f4v)


def duality_frame_noncompact(z, f2: RationalFunction = _F2_DEFAULT,
                             f4: RationalFunction = _F4_DEFAULT) -> LaurentLoop:
    """Closed-form extended frame in SO+(1,5) for the duality example.

    Laurent polynomial of degree [-1, 1] in lambda; Minkowski basis.
    """
    f2v, f4v, f2b, f4b = _duality_values(z, f2, f4)
    d3 = 1 + abs(f4v) ** 2
    s3 = np.sqrt(d3)
    Fm = np.zeros((6, 6), dtype=complex)
    F0 = np.zeros((6, 6), dtype=complex)
    Fp = np.zeros((6, 6), dtype=complex)
    a2 = abs(f2v) ** 2 / 2
    cross_i = -1j * (f2b * f4v - f2v * f4b) / (2 * s3)
    cross_r = (f2b * f4v + f2v * f4b) / (2 * s3)
    F0[0, :4] = [1 + a2, a2, cross_i, cross_r]
    F0[1, :4] = [-a2, 1 - a2, -cross_i, -cross_r]
    Fm[0, 4:] = [-1j * f2v / (2 * s3), f2v / (2 * s3)]
    Fp[0, 4:] = [1j * f2b / (2 * s3), f2b / (2 * s3)]
    Fm[1, 4:] = [1j * f2v / (2 * s3), -f2v / (2 * s3)]
    Fp[1, 4:] = [-1j * f2b / (2 * s3), -f2b / (2 * s3)]
    F0[2, 2] = 1 / s3
    Fm[2, 4:] = [f4v / (2 * s3), 1j * f4v / (2 * s3)]
    Fp[2, 4:] = [f4b / (2 * s3), -1j * f4b / (2 * s3)]
    F0[3, 3] = 1 / s3
    Fm[3, 4:] = [1j * f4v / (2 * s3), -f4v / (2 * s3)]
    Fp[3, 4:] = [-1j * f4b / (2 * s3), -f4b / (2 * s3)]
    Fm[4, :2] = [-1j * f2v / 2, -1j * f2v / 2]
    Fp[4, :2] = [1j * f2b / 2, 1j * f2b / 2]
    Fm[4, 2:4] = [-f4v / (2 * s3), -1j * f4v / (2 * s3)]
    Fp[4, 2:4] = [-f4b / (2 * s3), 1j * f4b / (2 * s3)]
    F0[4, 4] = 1 / s3
    Fm[5, :2] = [f2v / 2, f2v / 2]
    Fp[5, :2] = [f2b / 2, f2b / 2]
    Fm[5, 2:4] = [-1j * f4v / (2 * s3), f4v / (2 * s3)]
    Fp[5, 2:4] = [1j * f4b / (2 * s3), f4b / (2 * s3)]
    F0[5, 5] = 1 / s3
    return LaurentLoop(6, {-1: Fm, 0: F0, 1: Fp})


def duality_frame_compact(z, f2: RationalFunction = _F2_DEFAULT,
                          f4: RationalFunction = _F4_DEFAULT) -> LaurentLoop:
    """Closed-form compact-dual frame in SO(6) (orthogonality-adapted basis).

    Shares the normalized potential of the noncompact frame once both are
    viewed in a common basis.
    """
    f2v, f4v, f2b, f4b = _duality_values(z, f2, f4)
    d1 = 1 + abs(f2v) ** 2 + abs(f4v) ** 2
    d2 = 1 + abs(f2v) ** 2
    s1, s2 = np.sqrt(d1), np.sqrt(d2)
    s12 = s1 * s2
    Fm = np.zeros((6, 6), dtype=complex)
    F0 = np.zeros((6, 6), dtype=complex)
    Fp = np.zeros((6, 6), dtype=complex)
    cross_r = (f2b * f4v + f2v * f4b) / (2 * s12)
    cross_i = 1j * (f2b * f4v - f2v * f4b) / (2 * s12)
    F0[0, 0] = 1 / s2
    F0[0, 2:4] = [cross_r, cross_i]
    Fm[0, 4:] = [-f2v / (2 * s1), -1j * f2v / (2 * s1)]
    Fp[0, 4:] = [-f2b / (2 * s1), 1j * f2b / (2 * s1)]
    F0[1, 1] = 1 / s2
    F0[1, 2:4] = [cross_i, -cross_r]
    Fm[1, 4:] = [1j * f2v / (2 * s1), -f2v / (2 * s1)]
    Fp[1, 4:] = [-1j * f2b / (2 * s1), -f2b / (2 * s1)]
    F0[2, 2] = s2 / s1
    Fm[2, 4:] = [f4v / (2 * s1), 1j * f4v / (2 * s1)]
    Fp[2, 4:] = [f4b / (2 * s1), -1j * f4b / (2 * s1)]
    F0[3, 3] = s2 / s1
    Fm[3, 4:] = [1j * f4v / (2 * s1), -f4v / (2 * s1)]
    Fp[3, 4:] = [-1j * f4b / (2 * s1), -f4b / (2 * s1)]
    Fm[4, :2] = [f2v / (2 * s2), -1j * f2v / (2 * s2)]
    Fp[4, :2] = [f2b / (2 * s2), 1j * f2b / (2 * s2)]
    Fm[4, 2:4] = [-f4v / (2 * s12), -1j * f4v / (2 * s12)]
    Fp[4, 2:4] = [-f4b / (2 * s12), 1j * f4b / (2 * s12)]
    F0[4, 4] = 1 / s1
    Fm[5, :2] = [1j * f2v / (2 * s2), f2v / (2 * s2)]
    Fp[5, :2] = [-1j * f2b / (2 * s2), f2b / (2 * s2)]
    Fm[5, 2:4] = [-1j * f4v / (2 * s12), f4v / (2 * s12)]
    Fp[5, 2:4] = [1j * f4b / (2 * s12), f4b / (2 * s12)]
    F0[5, 5] = 1 / s1
    return LaurentLoop(6, {-1: Fm, 0: F0, 1: Fp})


def oracle_eval(name: str, z, lam, m: int | None = None,
                f2: RationalFunction = _F2_DEFAULT,
                f4: RationalFunction = _F4_DEFAULT):
    """Dispatch by oracle name; surface oracles return vectors, frame
    oracles return the frame loop evaluated at lam (or the loop if lam is None)."""
    if name == "s6-sphere":
        return s6_sphere(z, lam)
    if name == "rp2-surface":
        if m is None:
            raise ValueError("rp2-surface needs the family index m")
        return rp2_surface(m, z, lam)
    if name == "minimal-r4":
        return minimal_r4(z, lam, f2, f4)
    if name == "duality-frame-noncompact":
        loop = duality_frame_noncompact(z, f2, f4)
    elif name == "duality-frame-compact":
        loop = duality_frame_compact(z, f2, f4)
    else:
        raise ValueError(f"unknown oracle {name!r}")
    if lam is None:
        return loop
    from .loops import loop_eval
    return loop_eval(loop, lam)
