"""Normalized potentials lambda^{-1} * eta_{-1} dz and their families.

A potential is determined by the 4 x n matrix B1 of rational functions
with B1^t I_{1,3} B1 = 0.  This module provides the rational-function
arithmetic, the generic container, the three space-form families, the
built-in example potentials, and the validity predicates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import minkowski_matrix
from .errors import PoleDenseError, PoleError, UnsupportedAntiderivativeError

__all__ = [
    "RationalFunction",
    "PotentialSpec",
    "isotropy_defect",
    "make_spaceform_potential",
    "builtin_potential",
    "rp2_symmetry_defect",
    "lightlike_pattern_defect",
    "b1_rank",
]

I13 = minkowski_matrix(4)


def _trim(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex).ravel()
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


def _polymul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _trim(np.convolve(a, b))


def _polyadd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=complex)
    out[: len(a)] += a
    out[: len(b)] += b
    return _trim(out)


def _polyeval(c: np.ndarray, z):
    out = np.zeros_like(np.asarray(z, dtype=complex))
    for coef in c[::-1]:
        out = out * z + coef
    return out


@dataclass(frozen=True)
class RationalFunction:
    """p(z)/q(z) with ascending coefficient arrays; q is monic and nonzero."""

    num: np.ndarray
    den: np.ndarray = field(default_factory=lambda: np.ones(1, dtype=complex))

    def __post_init__(self):
        num = _trim(self.num)
        den = _trim(self.den)
        if len(den) == 1 and den[0] == 0:
            raise ZeroDivisionError("zero denominator polynomial")
        lead = den[-1]
        object.__setattr__(self, "num", num / lead)
        object.__setattr__(self, "den", den / lead)

    # -- constructors ------------------------------------------------------
    @staticmethod
    def const(c) -> "RationalFunction":
        return RationalFunction(np.array([c], dtype=complex))

    @staticmethod
    def monomial(c, degree: int) -> "RationalFunction":
        num = np.zeros(degree + 1, dtype=complex)
        num[degree] = c
        return RationalFunction(num)

    @staticmethod
    def zero() -> "RationalFunction":
        return RationalFunction(np.zeros(1, dtype=complex))

    # -- queries -----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return len(self.num) == 1 and self.num[0] == 0

    @property
    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    @property
    def num_degree(self) -> int:
        return len(self.num) - 1

    def __call__(self, z):
        den = _polyeval(self.den, z)
        return _polyeval(self.num, z) / den

    def is_pole_near(self, z, tol: float = 1e-9) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.den))))
        return bool(abs(_polyeval(self.den, z)) < tol * scale)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            _polyadd(_polymul(self.num, other.den), _polymul(other.num, self.den)),
            _polymul(self.den, other.den))

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return RationalFunction(_polymul(self.num, other.num),
                                    _polymul(self.den, other.den))
        return RationalFunction(self.num * other, self.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(_polymul(self.num, other.den),
                                _polymul(self.den, other.num))

    def derivative(self) -> "RationalFunction":
        dn = _trim(self.num[1:] * np.arange(1, len(self.num)))
        if self.is_polynomial:
            return RationalFunction(dn, self.den)
        dd = _trim(self.den[1:] * np.arange(1, len(self.den)))
        num = _polyadd(_polymul(dn, self.den), -_polymul(self.num, dd))
        return RationalFunction(num, _polymul(self.den, self.den))

    def antiderivative(self, base_point: complex = 0.0) -> "RationalFunction":
        """Polynomial antiderivative vanishing at base_point.

        Only available for constant denominators; general rational inputs
        would need logarithms.
        """
        if not self.is_polynomial:
            raise UnsupportedAntiderivativeError(
                "antiderivative requires a polynomial (constant denominator)")
        prim = np.zeros(len(self.num) + 1, dtype=complex)
        prim[1:] = self.num / np.arange(1, len(self.num) + 1)
        prim[0] = -_polyeval(prim, base_point)
        return RationalFunction(prim)


@dataclass
class PotentialSpec:
    """Normalized potential data: codimension n, the 4 x n matrix B1, base point."""

    n: int
    b1: list[list[RationalFunction]]
    base_point: complex = 0.0
    label: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"codimension must be >= 2, got {self.n}")
        if len(self.b1) != 4 or any(len(row) != self.n for row in self.b1):
            raise ValueError("b1 must be a 4 x n matrix of rational functions")
        for row in self.b1:
            for entry in row:
                if entry.is_pole_near(self.base_point):
                    raise PoleError("base point is a pole of a potential entry")

    @property
    def dim(self) -> int:
        return self.n + 4

    def b1_eval(self, z) -> np.ndarray:
        out = np.empty((4, self.n), dtype=complex)
        for i in range(4):
            for j in range(self.n):
                out[i, j] = self.b1[i][j](z)
        return out

    def eta_eval(self, z) -> np.ndarray:
        """eta_{-1}(z) = [[0, B1], [-B1^t I_{1,3}, 0]]."""
        B = self.b1_eval(z)
        M = np.zeros((self.dim, self.dim), dtype=complex)
        M[:4, 4:] = B
        M[4:, :4] = -B.T @ I13
        return M

    def is_polynomial(self) -> bool:
        return all(e.is_polynomial for row in self.b1 for e in row)

    def b1_poly_coeffs(self) -> np.ndarray:
        """Stack of z-degree coefficient matrices, shape (deg+1, 4, n)."""
        if not self.is_polynomial():
            raise UnsupportedAntiderivativeError("potential entries are not all polynomial")
        deg = max(e.num_degree for row in self.b1 for e in row)
        out = np.zeros((deg + 1, 4, self.n), dtype=complex)
        for i in range(4):
            for j in range(self.n):
                c = self.b1[i][j].num
                out[: len(c), i, j] = c
        return out

    def b1_reduced_coeffs(self) -> tuple[np.ndarray, int]:
        """Coefficients divided by the common z^d factor, plus the exponent d.

        The reduced matrix has the same column space away from the base
        point and extends it continuously through isolated zeros.
        """
        co = self.b1_poly_coeffs()
        norms = np.array([np.max(np.abs(c)) for c in co])
        scale = norms.max()
        if scale == 0:
            return co, 0
        d0 = int(np.argmax(norms > 1e-14 * scale))
        return co[d0:], d0

    def max_degree(self) -> int:
        return max(e.num_degree for row in self.b1 for e in row)


def _sample_points(rng: np.random.Generator, count: int):
    # uniform on the unit disk
    r = np.sqrt(rng.uniform(0.0, 1.0, size=count))
    t = rng.uniform(0.0, 2 * np.pi, size=count)
    return r * np.exp(1j * t)


def _sample_avoiding_poles(entries, count: int, seed: int = 20240901):
    """Pseudo-random unit-disk samples avoiding poles of the given entries."""
    rng = np.random.default_rng(seed)
    out = []
    consecutive_failures = 0
    while len(out) < count:
        (z,) = _sample_points(rng, 1)
        if any(e.is_pole_near(z) for e in entries):
            consecutive_failures += 1
            if consecutive_failures >= 16:
                raise PoleDenseError("could not sample away from poles (16 consecutive hits)")
            continue
        consecutive_failures = 0
        out.append(z)
    return out


def isotropy_defect(P: PotentialSpec) -> float:
    """max-norm of B1(z)^t I_{1,3} B1(z) over sampled points.

    The sample count exceeds twice the maximal numerator degree involved,
    so a vanishing defect certifies the polynomial identity.
    """
    entries = [e for row in P.b1 for e in row]
    deg = max(e.num_degree for e in entries)
    count = max(16, 2 * (2 * deg) + 1)
    worst = 0.0
    for z in _sample_avoiding_poles(entries, count):
        B = P.b1_eval(z)
        worst = max(worst, float(np.max(np.abs(B.T @ I13 @ B))))
    return worst


_R = RationalFunction


def make_spaceform_potential(kind: str, data, n: int | None = None,
                             base_point: complex = 0.0) -> PotentialSpec:
    """Canonical potentials of minimal surfaces in the three space forms.

    kind "lightlike-R": data is a list of n triples (f_j0, f_j1, f_j3);
    column j is f_j0 * (f_j1, -f_j1, f_j3, i f_j3)^t.
    kind "timelike-S": data is (g0, [g_1..g_n]); column j is
    g_j * (0, 2 g0, 1 - g0^2, i (1 + g0^2))^t.
    kind "spacelike-H": data is (h0, [h_1..h_n]); column j is
    h_j * (2 i h0, 0, 1 - h0^2, i (1 + h0^2))^t.
    """
    i_ = _R.const(1j)
    one = _R.const(1.0)
    if kind == "lightlike-R":
        cols = []
        for triple in data:
            if len(triple) != 3:
                raise ValueError("lightlike-R data entries must be triples (f_j0, f_j1, f_j3)")
            f0, f1, f3 = triple
            cols.append([f0 * f1, -(f0 * f1), f0 * f3, i_ * f0 * f3])
        label = "minimal-in-euclidean"
    elif kind in ("timelike-S", "spacelike-H"):
        if len(data) != 2:
            raise ValueError(f"{kind} data must be (shared function, coefficient list)")
        f0, fj = data
        f0sq = f0 * f0
        if kind == "timelike-S":
            pattern = [_R.zero(), 2.0 * f0, one - f0sq, i_ * (one + f0sq)]
            label = "minimal-in-sphere"
        else:
            pattern = [2.0 * i_ * f0, _R.zero(), one - f0sq, i_ * (one + f0sq)]
            label = "minimal-in-hyperbolic"
        cols = [[g * p for p in pattern] for g in fj]
    else:
        raise ValueError(f"unknown space-form kind {kind!r}")
    ncols = len(cols)
    if n is not None and n != ncols:
        raise ValueError(f"data provides {ncols} columns but n = {n} was requested")
    b1 = [[cols[j][i] for j in range(ncols)] for i in range(4)]
    return PotentialSpec(n=ncols, b1=b1, base_point=base_point, label=label)


def _s6_b1() -> list[list[RationalFunction]]:
    z = _R.monomial(1.0, 1)

    def entry(c0, c1):
        return _R.const(0.5 * c0) + _R.monomial(0.5 * c1, 1) if c1 else _R.const(0.5 * c0)

    # 1/2 * [[2iz, -2z, -i, 1], [-2iz, 2z, -i, 1], [-2, -2i, -z, -iz], [2i, -2, -iz, z]]
    rows = [
        [0.5 * (2j) * z, 0.5 * (-2) * z, _R.const(-0.5j), _R.const(0.5)],
        [0.5 * (-2j) * z, 0.5 * 2 * z, _R.const(-0.5j), _R.const(0.5)],
        [_R.const(-1.0), _R.const(-1j), 0.5 * (-1) * z, 0.5 * (-1j) * z],
        [_R.const(1j), _R.const(-1.0), 0.5 * (-1j) * z, 0.5 * z],
    ]
    return rows


def _rp2_functions(m: int):
    s = np.sqrt(4.0 * m * m - 1.0)
    f1 = _R.monomial(-2.0 * m, 2 * m + 1)
    f2 = _R.monomial(1j * s, 2 * m)
    f3 = _R.monomial(1j * s, 2 * m)
    f4 = _R.monomial(-2.0 * m, 2 * m - 1)
    return f1, f2, f3, f4


def _isotropic_pair_b1(f1p, f2p, f3p, f4p) -> list[list[RationalFunction]]:
    """4 x 2 matrix 1/2 [[i(f3'-f2'), -(f3'-f2')], [i(f3'+f2'), -(f3'+f2')],
    [f4'-f1', i(f4'-f1')], [i(f4'+f1'), -(f4'+f1')]] built from the derivatives."""
    i_ = _R.const(1j)
    a = f3p - f2p
    b = f3p + f2p
    c = f4p - f1p
    d = f4p + f1p
    rows = [
        [0.5 * (i_ * a), 0.5 * (-a)],
        [0.5 * (i_ * b), 0.5 * (-b)],
        [0.5 * c, 0.5 * (i_ * c)],
        [0.5 * (i_ * d), 0.5 * (-d)],
    ]
    return rows


def builtin_potential(name: str, m: int | None = None,
                      f2: RationalFunction | None = None,
                      f4: RationalFunction | None = None) -> PotentialSpec:
    """The bundled example potentials.

    "s6-isotropic-example": the totally isotropic (non S-Willmore) sphere
    in S^6, n = 4.  "rp2-family": the minimal RP^2 family in S^4 indexed
    by m >= 1 (m = 1 is the Veronese surface), n = 2.  "duality-example":
    the minimal-surface potential built from meromorphic f2, f4 vanishing
    at the base point (defaults f2 = z^2, f4 = z), n = 2.
    """
    if name == "s6-isotropic-example":
        return PotentialSpec(n=4, b1=_s6_b1(), base_point=0.0, label=name)
    if name == "rp2-family":
        if m is None or m < 1:
            raise ValueError("rp2-family requires an integer m >= 1")
        f1, f2_, f3, f4_ = _rp2_functions(m)
        rows = _isotropic_pair_b1(f1.derivative(), f2_.derivative(),
                                  f3.derivative(), f4_.derivative())
        return PotentialSpec(n=2, b1=rows, base_point=0.0, label=f"{name}(m={m})")
    if name == "duality-example":
        if f2 is None:
            f2 = _R.monomial(1.0, 2)
        if f4 is None:
            f4 = _R.monomial(1.0, 1)
        if abs(f2(0.0)) > 1e-14 or abs(f4(0.0)) > 1e-14:
            raise ValueError("duality-example requires f2 and f4 to vanish at the base point")
        i_ = _R.const(1j)
        f2p = f2.derivative()
        f4p = f4.derivative()
        rows = [
            [0.5 * (-(i_ * f2p)), 0.5 * f2p],
            [0.5 * (i_ * f2p), 0.5 * (-f2p)],
            [0.5 * f4p, 0.5 * (i_ * f4p)],
            [0.5 * (i_ * f4p), 0.5 * (-f4p)],
        ]
        return PotentialSpec(n=2, b1=rows, base_point=0.0, label=name)
    raise ValueError(f"unknown builtin potential {name!r}")


def rp2_symmetry_defect(f1: RationalFunction, f2: RationalFunction,
                        f3: RationalFunction, f4: RationalFunction,
                        samples: int = 24) -> float:
    """Residual of the antipodal symmetry system under mu(z) = -1/conj(z).

    The four residuals have the shape f_a(z) + (f1 f4 + f2 f3)(z) *
    conj(f_b(mu(z))) with (a, b) running over (1,4), (2,2), (3,3), (4,1).
    """
    q = f1 * f4 + f2 * f3
    fs = [f1, f2, f3, f4]
    pairs = [(0, 3), (1, 1), (2, 2), (3, 0)]
    rng = np.random.default_rng(7151)
    worst = 0.0
    produced = 0
    failures = 0
    while produced < samples:
        r = rng.uniform(0.5, 1.5)
        t = rng.uniform(0.0, 2 * np.pi)
        z = r * np.exp(1j * t)
        mu = -1.0 / np.conj(z)
        if any(f.is_pole_near(z) or f.is_pole_near(mu) for f in fs):
            failures += 1
            if failures >= 16:
                raise PoleDenseError("symmetry sampling kept hitting poles")
            continue
        failures = 0
        produced += 1
        qv = q(z)
        for a, b in pairs:
            resid = fs[a](z) + qv * np.conj(fs[b](mu))
            worst = max(worst, abs(resid))
    return worst


def lightlike_pattern_defect(P: PotentialSpec, samples: int = 16) -> float:
    """Deviation from the minimal-in-euclidean pattern row2 = -row1, row4 = i row3."""
    entries = [e for row in P.b1 for e in row]
    worst = 0.0
    for z in _sample_avoiding_poles(entries, samples, seed=991):
        B = P.b1_eval(z)
        worst = max(worst,
                    float(np.max(np.abs(B[1] + B[0]))),
                    float(np.max(np.abs(B[3] - 1j * B[2]))))
    return worst


def b1_rank(P: PotentialSpec, samples: int = 8, tol: float = 1e-9) -> int:
    """Maximal numerical rank of B1 over sampled points (always <= 2 for
    valid potentials, since the column space is isotropic)."""
    entries = [e for row in P.b1 for e in row]
    rank = 0
    for z in _sample_avoiding_poles(entries, samples, seed=4242):
        sv = np.linalg.svd(P.b1_eval(z), compute_uv=False)
        if sv[0] > 0:
            rank = max(rank, int(np.sum(sv > tol * sv[0])))
    return rank
