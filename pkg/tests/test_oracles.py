import numpy as np
import pytest

from loopsurf import (builtin_potential, loop_eval, mink_product, minkowski_matrix,
                      reality_defect, twist_defect)
from loopsurf.oracles import (duality_frame_compact, duality_frame_noncompact,
                              inverse_stereographic, minimal_r4, oracle_eval,
                              rp2_surface, s6_sphere)
from loopsurf.potentials import RationalFunction as R
from loopsurf.verify import maurer_cartan_p_defect
from loopsurf.loops import from_compact_basis


class TestSurfaceOracles:
    def test_s6_base_point(self):
        assert np.allclose(s6_sphere(0.0, 1.0), [1, 0, 0, 0, 0, 0, 0])

    def test_s6_spot_value(self):
        y = s6_sphere(1.0, 1.0)
        expected = np.array([-6, 0, 40, 0, 33, 0, 42]) / 67.0
        assert np.max(np.abs(y - expected)) < 1e-15
        # unit-norm identity: 36 + 1600 + 1089 + 1764 = 67^2
        assert 36 + 1600 + 1089 + 1764 == 67 ** 2

    def test_rp2_m2_spot_values(self):
        y = rp2_surface(2, 1.0, 1.0)
        expected = np.array([0.25, 0, 0, np.sqrt(15) / 4, 0])
        assert np.max(np.abs(y - expected)) < 1e-15
        assert np.allclose(rp2_surface(2, 0.0, 1.0), [-1, 0, 0, 0, 0])

    @pytest.mark.parametrize("m", [1, 2])
    def test_unit_norm_random(self, m, rng):
        zs = rng.standard_normal(100) + 1j * rng.standard_normal(100)
        for lam in (1.0, np.exp(0.71j)):
            y = rp2_surface(m, zs, lam)
            assert np.max(np.abs(np.sum(y * y, axis=-1) - 1)) < 1e-12

    def test_s6_unit_norm_random(self, rng):
        zs = 1.5 * (rng.standard_normal(100) + 1j * rng.standard_normal(100))
        for lam in (1.0, 1j, np.exp(2.1j)):
            y = s6_sphere(zs, lam)
            assert np.max(np.abs(np.sum(y * y, axis=-1) - 1)) < 1e-12

    @pytest.mark.parametrize("m", [1, 2])
    def test_rp2_antipodal_symmetry(self, m, rng):
        zs = 0.3 + rng.uniform(0.2, 1.4, 20) * np.exp(1j * rng.uniform(0, 6.28, 20))
        mu = -1.0 / np.conj(zs)
        for lam in (1.0, 1j):
            assert np.max(np.abs(rp2_surface(m, zs, lam) - rp2_surface(m, mu, lam))) < 1e-12

    def test_minimal_r4_base(self):
        x = minimal_r4(0.5 + 0.2j, 1.0)
        assert x.shape == (4,)
        assert np.all(np.isfinite(x))

    def test_inverse_stereographic_unit(self, rng):
        x = rng.standard_normal((10, 4))
        y = inverse_stereographic(x)
        assert np.max(np.abs(np.sum(y * y, axis=-1) - 1)) < 1e-14


class TestFrameOracles:
    @pytest.mark.parametrize("z", [0.4 + 0.2j, 1.0, -0.7 + 0.9j])
    def test_noncompact_reality_and_twist(self, z):
        F = duality_frame_noncompact(z)
        assert reality_defect(F, "noncompact") < 1e-10
        assert twist_defect(F) < 1e-14

    @pytest.mark.parametrize("z", [0.4 + 0.2j, 1.0, -0.7 + 0.9j])
    def test_compact_reality_and_twist(self, z):
        F = duality_frame_compact(z)
        assert reality_defect(F, "compact") < 1e-10
        assert twist_defect(F) < 1e-14

    def test_compact_spot_entries(self):
        # at z = 1: (1,1) entry 1/sqrt(d2) = 1/sqrt(2), (3,3) entry sqrt(d2/d1)
        E = loop_eval(duality_frame_compact(1.0), 1.0)
        assert E[0, 0] == pytest.approx(1 / np.sqrt(2))
        assert E[2, 2] == pytest.approx(np.sqrt(2.0 / 3.0))

    def test_frames_equal_identity_at_base(self):
        for fn in (duality_frame_noncompact, duality_frame_compact):
            E = loop_eval(fn(0.0), 0.7 + 0.71j)
            assert np.max(np.abs(E - np.eye(6))) < 1e-14

    def test_generic_parameters_still_frames(self):
        f2 = R.monomial(1.0, 3)
        f4 = R.monomial(1.0, 2)
        F = duality_frame_noncompact(0.5 + 0.3j, f2, f4)
        assert reality_defect(F, "noncompact") < 1e-10
        Fc = duality_frame_compact(0.5 + 0.3j, f2, f4)
        assert reality_defect(Fc, "compact") < 1e-10

    def test_frame_columns_minkowski_orthonormal(self):
        J = minkowski_matrix(6)
        E = loop_eval(duality_frame_noncompact(0.8 - 0.3j), np.exp(0.4j))
        G = E.T @ J @ E
        assert np.max(np.abs(G - J)) < 1e-12

    @pytest.mark.parametrize("make,conj", [(duality_frame_noncompact, False),
                                           (duality_frame_compact, True)])
    def test_maurer_cartan_p_part_concentrated(self, make, conj):
        def frame_fn(z):
            F = make(z)
            return from_compact_basis(F) if conj else F
        assert maurer_cartan_p_defect(frame_fn, 0.45 + 0.3j) < 1e-5

    def test_minimal_surface_relates_to_frames(self):
        # the minimal surface and the frames share (f2, f4); smoke cross-check
        # of the lambda-family structure: |x_lam| is lambda-independent
        z = 0.6 + 0.4j
        norms = [np.linalg.norm(minimal_r4(z, lam)) for lam in (1.0, 1j, -1.0)]
        assert np.max(np.abs(np.array(norms) - norms[0])) < 1e-12


def test_oracle_eval_dispatch():
    assert oracle_eval("s6-sphere", 0.0, 1.0).shape == (7,)
    assert oracle_eval("rp2-surface", 0.0, 1.0, m=1).shape == (5,)
    assert oracle_eval("minimal-r4", 0.1, 1.0).shape == (4,)
    E = oracle_eval("duality-frame-compact", 0.3, 1.0)
    assert E.shape == (6, 6)
    loop = oracle_eval("duality-frame-noncompact", 0.3, None)
    assert loop.d_min == -1 and loop.d_max == 1
    with pytest.raises(ValueError):
        oracle_eval("no-such-oracle", 0.0, 1.0)
