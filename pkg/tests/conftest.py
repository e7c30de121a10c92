"""Shared builders for exact twisted loop-group elements.

Random real twisted loops are products of constant block rotations/boosts
and exponentials exp(t(lam) N) of real parabolic nilpotents (N^3 = 0)
with odd real Laurent coefficients, so every sample is an exact group
element of bounded lambda-degree.  Positive twisted loops use complex
nilpotents with polynomial coefficients.
"""
import numpy as np
import pytest
import scipy.linalg

from loopsurf import LaurentLoop, identity_loop, loop_mul, minkowski_matrix


def so_nilpotent(l, m, J):
    """N = (l m^t - m l^t) J; N^3 = 0 when <l,l> = 0, <l,m> = 0, <m,m> != 0."""
    return (np.outer(l, m) - np.outer(m, l)) @ J


def exp_nilpotent_loop(N, tcoeffs, dim, order=24):
    """exp(t(lam) N) for N^3 = 0 and a finite Laurent polynomial t."""
    t2 = {}
    for i, a in tcoeffs.items():
        for j, b in tcoeffs.items():
            t2[i + j] = t2.get(i + j, 0) + a * b
    N2 = N @ N
    coeffs = {0: np.eye(dim, dtype=complex)}
    for k, a in tcoeffs.items():
        coeffs[k] = coeffs.get(k, 0) + a * N
    for k, a in t2.items():
        coeffs[k] = coeffs.get(k, np.zeros((dim, dim), dtype=complex)) + 0.5 * a * N2
    return LaurentLoop(dim, coeffs, truncation_order=order)


def random_K_element(rng, dim, scale=0.5):
    """Constant loop in SO+(1,3) x SO(n): rotations, a boost, a normal rotation."""
    n = dim - 4
    A = scale * rng.standard_normal((3, 3))
    k4 = np.eye(4)
    k4[1:, 1:] = scipy.linalg.expm(A - A.T)
    b = scale * rng.standard_normal(3)
    boost = np.zeros((4, 4))
    boost[0, 1:] = b
    boost[1:, 0] = b
    k4 = k4 @ scipy.linalg.expm(boost)
    B = scale * rng.standard_normal((n, n))
    kn = scipy.linalg.expm(B - B.T)
    K = np.zeros((dim, dim))
    K[:4, :4] = k4
    K[4:, 4:] = kn
    return LaurentLoop(dim, {0: K.astype(complex)})


def random_real_twisted_loop(rng, dim, scale=0.35):
    """Exact real twisted loop of lambda-degree 2."""
    J = minkowski_matrix(dim)
    d = rng.standard_normal(3)
    d /= np.linalg.norm(d)
    l = np.zeros(dim)
    l[0] = 1.0
    l[1:4] = d                       # real lightlike, first block
    v = rng.standard_normal(dim - 4)
    v /= np.linalg.norm(v)
    m = np.zeros(dim)
    m[4:] = v                        # real spacelike, normal block
    N = so_nilpotent(l, m, J)
    N = N / max(1.0, np.max(np.abs(N)))
    a = scale * (rng.standard_normal() + 1j * rng.standard_normal())
    E = exp_nilpotent_loop(N, {1: a, -1: np.conj(a)}, dim)   # odd, real on S^1
    return loop_mul(loop_mul(random_K_element(rng, dim), E),
                    random_K_element(rng, dim))


def square_zero_p_nilpotent(rng, dim):
    """Complex p-type N with N^2 = 0: rank-one u v^t with isotropic u, v."""
    J = minkowski_matrix(dim)
    d = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    u = np.zeros(dim, dtype=complex)
    u[0] = np.sqrt(np.sum(d * d) + 0j)
    u[1:4] = d                                    # <u, u> = 0
    w = np.zeros(dim, dtype=complex)
    w[4] = 1.0
    w[5] = 1j                                     # w^t w = 0
    if dim > 6:
        extra = rng.standard_normal() + 1j * rng.standard_normal()
        w[5] = extra
        w[6] = 1j * np.sqrt(1.0 + extra * extra)  # keep w isotropic
    N = so_nilpotent(u, w, J)
    return N / max(1.0, np.max(np.abs(N)))


def random_positive_twisted_loop(rng, dim, scale=0.35, max_degree=1):
    """Exact positive twisted loop of lambda-degree <= max(1, max_degree)."""
    J = minkowski_matrix(dim)
    Np = square_zero_p_nilpotent(rng, dim)
    tco = {1: scale * (rng.standard_normal() + 1j * rng.standard_normal())}
    if max_degree >= 3:
        tco[3] = 0.5 * scale * (rng.standard_normal() + 1j * rng.standard_normal())
    E1 = exp_nilpotent_loop(Np, tco, dim)
    # constant complex k-type nilpotent inside the first block
    l2 = np.zeros(dim, dtype=complex)
    l2[0] = 1.0
    l2[1] = 1.0
    m2 = np.zeros(dim, dtype=complex)
    m2[2] = 1.0
    Nk = so_nilpotent(l2, m2, J)
    Nk = Nk / max(1.0, np.max(np.abs(Nk)))
    E2 = exp_nilpotent_loop(Nk, {0: scale * (rng.standard_normal()
                                             + 1j * rng.standard_normal())}, dim)
    return loop_mul(E1, E2)


def random_deep_positive_twisted_loop(rng, dim, scale=0.35):
    """Positive twisted loop with lambda-degree up to 10 (stress inputs)."""
    J = minkowski_matrix(dim)
    n = dim - 4
    d = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    u = np.zeros(dim, dtype=complex)
    u[0] = np.sqrt(np.sum(d * d) + 0j)
    u[1:4] = d
    w = np.zeros(dim, dtype=complex)
    w[4:] = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    Np = so_nilpotent(u, w, J)   # N^3 = 0
    tco = {1: scale * (rng.standard_normal() + 1j * rng.standard_normal()),
           3: 0.5 * scale * (rng.standard_normal() + 1j * rng.standard_normal())}
    E1 = exp_nilpotent_loop(Np, tco, dim)
    l2 = np.zeros(dim, dtype=complex)
    l2[0] = 1.0
    l2[1] = 1.0
    m2 = np.zeros(dim, dtype=complex)
    m2[2] = 1.0
    Nk = so_nilpotent(l2, m2, J)
    E2 = exp_nilpotent_loop(Nk, {0: scale * (rng.standard_normal()
                                             + 1j * rng.standard_normal()),
                                 2: 0.5 * scale * (rng.standard_normal()
                                                   + 1j * rng.standard_normal())}, dim)
    return loop_mul(E1, E2)


def random_minus_unipotent_loop(rng, dim, scale=0.35):
    """Exact loop in Lambda_-* (identity at infinity), degree >= -2."""
    J = minkowski_matrix(dim)
    d = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    u = np.zeros(dim, dtype=complex)
    u[0] = np.sqrt(np.sum(d * d) + 0j)
    u[1:4] = d
    w = np.zeros(dim, dtype=complex)
    w[4:] = rng.standard_normal(dim - 4) + 1j * rng.standard_normal(dim - 4)
    Np = so_nilpotent(u, w, J)
    Np = Np / max(1.0, np.max(np.abs(Np)))
    a = scale * (rng.standard_normal() + 1j * rng.standard_normal())
    return exp_nilpotent_loop(Np, {-1: a}, dim)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
