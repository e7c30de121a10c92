import numpy as np
import pytest

from loopsurf import (LaurentLoop, builtin_potential, loop_from_text, loop_to_text,
                      make_spaceform_potential, potential_from_text,
                      potential_to_text)
from loopsurf.potentials import RationalFunction as R


def potentials_to_roundtrip():
    return [
        builtin_potential("s6-isotropic-example"),
        builtin_potential("rp2-family", m=2),
        builtin_potential("duality-example"),
        make_spaceform_potential("timelike-S",
                                 (R.monomial(0.25, 1), [R.const(1.0), R.zero()])),
    ]


@pytest.mark.parametrize("P", potentials_to_roundtrip(),
                         ids=lambda p: p.label or "spaceform")
def test_potential_roundtrip_bit_exact(P):
    text = potential_to_text(P)
    Q = potential_from_text(text)
    assert Q.n == P.n
    assert Q.base_point == P.base_point
    assert Q.label == P.label
    for i in range(4):
        for j in range(P.n):
            assert np.array_equal(Q.b1[i][j].num, P.b1[i][j].num)
            assert np.array_equal(Q.b1[i][j].den, P.b1[i][j].den)
    # print-parse-print is byte-identical
    assert potential_to_text(Q) == text


def test_potential_roundtrip_awkward_floats():
    # irrational coefficients survive the shortest-roundtrip float repr
    b1 = [[R.zero(), R.zero()] for _ in range(4)]
    b1[0][0] = R(np.array([np.pi, 1.0 / 3.0, np.sqrt(2) * 1j]),
                 np.array([3.0000000000000004, 1.0]))
    b1[1][0] = R(np.array([-np.pi]), np.array([3.0000000000000004, 1.0]))
    from loopsurf import PotentialSpec
    P = PotentialSpec(n=2, b1=b1, base_point=0.1 + 0.2j, label="awkward")
    Q = potential_from_text(potential_to_text(P))
    for i in range(4):
        for j in range(2):
            assert np.array_equal(Q.b1[i][j].num, P.b1[i][j].num)
            assert np.array_equal(Q.b1[i][j].den, P.b1[i][j].den)


def test_loop_roundtrip_bit_exact(rng):
    a = LaurentLoop(6, {k: rng.standard_normal((6, 6))
                        + 1j * rng.standard_normal((6, 6))
                        for k in (-2, 0, 3)}, truncation_order=17)
    text = loop_to_text(a)
    b = loop_from_text(text)
    assert b.dim == a.dim
    assert b.truncation_order == 17
    assert sorted(b.coeffs) == sorted(a.coeffs)
    for k in a.coeffs:
        assert np.array_equal(b.coeff(k), a.coeff(k))
    assert loop_to_text(b) == text
