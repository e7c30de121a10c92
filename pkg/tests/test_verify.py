import numpy as np
import pytest

from loopsurf import (PairingError, StencilError, builtin_potential, build_surface,
                      mink_product, rp2_surface, s6_sphere)
from loopsurf.oracles import inverse_stereographic, minimal_r4
from loopsurf.verify import (VerificationReport, canonical_lift, cartesian_grid,
                             compare_surfaces, conformal_gauss_defect,
                             duality_potential_match, fit_global_motion,
                             frame_invariant_defect, lift_data_at_point,
                             rp2_pointwise_symmetry, sample_surface_grid,
                             sphere_and_conformality_defect, sphere_energy_area,
                             symmetric_mu_grid, willmore_energy_and_area)


def round_sphere(z, lam):
    """Totally umbilical test surface: 2-sphere inside S^4."""
    z = np.asarray(z, dtype=complex)
    r2 = (z * np.conj(z)).real
    x = np.stack([(z + np.conj(z)).real, (-1j * (z - np.conj(z))).real, 1 - r2],
                 axis=-1) / (1 + r2)[..., None]
    pad = np.zeros(x.shape[:-1] + (2,))
    return np.concatenate([x, pad], axis=-1)


def constant_surface(z, lam):
    z = np.asarray(z)
    out = np.zeros(z.shape + (5,))
    out[..., 0] = 1.0
    return out


class TestSphereConformality:
    def test_constant_surface_degenerate(self):
        Z, h = cartesian_grid(0.0, 0.4, 9)
        S = sample_surface_grid(constant_surface, Z, [1.0], grid_spacing=h)
        sphere, conf = sphere_and_conformality_defect(S)
        assert sphere == 0
        assert np.isnan(conf)

    def test_s6_oracle_defects(self):
        Z, h = cartesian_grid(0.0, 0.5, 21)
        S = sample_surface_grid(s6_sphere, Z, [1.0], grid_spacing=h)
        sphere, conf = sphere_and_conformality_defect(S)
        assert sphere < 1e-12
        assert conf < 1e-2   # O(h^2) at h = 0.05

    def test_rp2_oracle_defects(self):
        Z, h = cartesian_grid(0.0, 0.5, 21)
        S = sample_surface_grid(lambda z, lam: rp2_surface(2, z, lam), Z, [1.0],
                                grid_spacing=h)
        sphere, conf = sphere_and_conformality_defect(S)
        assert sphere < 1e-12
        assert conf < 2e-2

    def test_second_order_convergence(self):
        # halving h cuts the defect by about 4
        vals = {}
        for nn in (21, 41):
            Z, h = cartesian_grid(0.0, 0.5, nn)
            S = sample_surface_grid(s6_sphere, Z, [1.0], grid_spacing=h)
            vals[nn] = sphere_and_conformality_defect(S)[1]
        ratio = vals[21] / vals[41]
        assert 3.5 <= ratio <= 4.5

    def test_small_grid_rejected(self):
        Z, h = cartesian_grid(0.0, 0.1, 2)
        S = sample_surface_grid(s6_sphere, Z, [1.0], grid_spacing=h)
        with pytest.raises(StencilError):
            sphere_and_conformality_defect(S)


class TestCanonicalLift:
    def test_round_sphere_umbilical(self):
        Z, h = cartesian_grid(0.2 + 0.1j, 0.05, 11)
        S = sample_surface_grid(round_sphere, Z, [1.0], grid_spacing=h)
        L = canonical_lift(S)
        assert np.any(L.valid)
        assert np.nanmax(np.abs(L.kappa_sq[L.valid])) < 1e-6

    def test_s6_lift_invariants(self):
        Z, h = cartesian_grid(1.0, 0.015, 7)
        S = sample_surface_grid(s6_sphere, Z, [1.0], grid_spacing=h)
        L = canonical_lift(S)
        for i in range(2, 5):
            for j in range(2, 5):
                assert L.valid[i, j, 0]
                Y, N = L.Y[i, j, 0], L.N[i, j, 0]
                assert abs(mink_product(Y, Y)) < 1e-8
                assert abs(mink_product(N, Y) + 1.0) < 1e-4
                assert abs(mink_product(N, N)) < 1e-4
                assert L.kappa_sq[i, j, 0] >= -1e-8

    def test_kappa_matches_point_evaluation(self):
        data = lift_data_at_point(s6_sphere, 0.7 + 0.4j, 1.0, 1e-4)
        assert abs(mink_product(data["Y"], data["Y"])) < 1e-8
        assert abs(mink_product(data["N"], data["Y"]) + 1) < 1e-5
        assert data["kappa_sq"] == pytest.approx(0.413421, abs=1e-4)

    def test_minimal_r4_lifted_not_umbilical(self):
        surf = lambda z, lam: inverse_stereographic(minimal_r4(z, lam))
        data = lift_data_at_point(surf, 0.6 + 0.2j, 1.0, 1e-4)
        assert data["kappa_sq"] > 1e-4


class TestQuadrature:
    def test_constant_surface_zero(self):
        # a constant map has no valid lift points and integrates to (0, 0)
        Z, h = cartesian_grid(0.0, 0.4, 9)
        S = sample_surface_grid(constant_surface, Z, [1.0], grid_spacing=h)
        L = canonical_lift(S)
        q = willmore_energy_and_area(S, L)
        assert q.energy == 0 and q.area == 0

    def test_round_sphere_small_energy(self):
        Z, h = cartesian_grid(0.0, 0.4, 17)
        S = sample_surface_grid(round_sphere, Z, [1.0], grid_spacing=h)
        L = canonical_lift(S)
        # umbilical surface: the Willmore integrand is discretization noise
        q = willmore_energy_and_area(S, L)
        assert abs(q.energy) < 1e-3 * q.area
        assert q.area > 0

    def test_rectangle_domain_restriction(self):
        Z, h = cartesian_grid(0.0, 0.4, 17)
        S = sample_surface_grid(round_sphere, Z, [1.0], grid_spacing=h)
        L = canonical_lift(S)
        full = willmore_energy_and_area(S, L)
        half = willmore_energy_and_area(S, L, domain=[(-0.4, 0.0, -0.4, 0.4)])
        assert 0 < half.area < full.area

    def test_veronese_area(self):
        q = sphere_energy_area(lambda z, lam: rp2_surface(1, z, lam),
                               nr=80, ntheta=96)
        assert abs(q.area - 12 * np.pi) / (12 * np.pi) < 0.01
        assert q.area_error < 0.05 * q.area

    def test_rp2_m2_area(self):
        q = sphere_energy_area(lambda z, lam: rp2_surface(2, z, lam),
                               nr=96, ntheta=96)
        assert abs(q.area - 20 * np.pi) / (20 * np.pi) < 0.01

    def test_s6_energy_regression(self):
        # quadrature value recorded as a regression number (measures 12 pi)
        q = sphere_energy_area(s6_sphere, nr=48, ntheta=48, h_fd=1e-4,
                               want_energy=True)
        assert q.energy == pytest.approx(12 * np.pi, rel=2e-3)


class TestConformalGauss:
    def _pipeline(self):
        P = builtin_potential("s6-isotropic-example")
        Z, h = cartesian_grid(0.45 + 0.2j, 0.12, 9)
        E, S = build_surface(P, Z, np.array([1.0]), grid_shape=Z.shape,
                             grid_spacing=h)
        L = canonical_lift(S)
        return E, S, L

    def test_self_consistency(self):
        E, S, L = self._pipeline()
        assert conformal_gauss_defect(S, L, E) < 1e-3

    def test_shuffled_columns_detected(self):
        E, S, L = self._pipeline()
        E.frames = E.frames.copy()
        E.frames[..., :, [2, 4]] = E.frames[..., :, [4, 2]]
        assert conformal_gauss_defect(S, L, E) > 0.1

    def test_frame_invariants(self):
        E, S, L = self._pipeline()
        assert frame_invariant_defect(E) < 1e-8


class TestSymmetry:
    def test_rp2_oracle_symmetric(self):
        Z = symmetric_mu_grid([0.7, 1.0], 8)
        S = sample_surface_grid(lambda z, lam: rp2_surface(2, z, lam), Z, [1.0])
        assert rp2_pointwise_symmetry(S) < 1e-12

    def test_s6_not_symmetric(self):
        Z = symmetric_mu_grid([0.7], 8)
        S = sample_surface_grid(s6_sphere, Z, [1.0])
        assert rp2_pointwise_symmetry(S) > 0.1

    def test_constant_surface_symmetric(self):
        Z = symmetric_mu_grid([0.7], 8)
        S = sample_surface_grid(constant_surface, Z, [1.0])
        assert rp2_pointwise_symmetry(S) == 0

    def test_unpaired_grid_rejected(self):
        Z = np.array([0.7, 0.9])
        S = sample_surface_grid(lambda z, lam: rp2_surface(2, z, lam), Z, [1.0])
        with pytest.raises(PairingError):
            rp2_pointwise_symmetry(S)


class TestAlignment:
    def test_recovers_synthetic_motion(self, rng):
        # rotate oracle lifts by a known conformal motion and fit it back
        from loopsurf.verify import fit_global_motion
        from conftest import random_K_element
        T_true = random_K_element(rng, 6).coeff(0).real
        zs = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        y = rp2_surface(2, zs, 1.0)
        lifts = np.concatenate([np.ones((40, 1)), y], axis=1)
        moved = lifts @ T_true.T
        moved = moved / moved[:, :1]
        T, defect, err = fit_global_motion(moved, lifts)
        assert defect < 1e-8
        assert err < 1e-8

    def test_compare_surfaces_antipodal_path(self):
        P = builtin_potential("rp2-family", m=2)
        zs = np.array([0.5, 0.9 + 0.3j, -0.4 + 0.8j])
        _, S = build_surface(P, zs, np.array([1.0]), branch="plus")
        orac = rp2_surface(2, zs, 1.0)[:, None, :]
        res = compare_surfaces(S, orac, tol=1e-8)
        assert res.path == "antipodal"
        assert res.error < 1e-10


class TestDualityCheck:
    def test_ten_sample_points(self, rng):
        zs = [complex(a, b) for a, b in rng.uniform(-0.7, 0.7, size=(10, 2))]
        res = duality_potential_match(zs)
        assert res["cross"] < 1e-5
        assert res["vs_potential"] < 1e-5


class TestReport:
    def test_render_and_flags(self):
        rep = VerificationReport()
        assert rep.add("alpha", 1e-9, 1e-6)
        assert not rep.add("beta", 2.0, 1e-6)
        assert not rep.passed
        text = rep.to_text()
        assert "PASS" in text and "FAIL" in text
        js = rep.to_json()
        assert '"passed": false' in js
