import numpy as np
import pytest

from betaplane import atlas, bifurcation as bif
from betaplane import modified_flow as mf
from betaplane.errors import PositiveEigenvalueError, ValidationError
from betaplane.rayleigh_kuo import couette, scaled_couette

KAPPAS = (1e-2, 5e-3, 2.5e-3, 1.25e-3)


@pytest.fixture(scope="module")
def modified_base():
    params = mf.ModifiedFlowParams(2.0, 0.02, 0.0)
    return mf.profile(params), 2.0, 0.0  # profile, beta, c


def fake_phi(grid):
    y = grid.nodes
    phi = np.sin(np.pi * (y + 1) / 2) + 0.3 * np.sin(np.pi * (y + 1))
    return phi / np.linalg.norm(phi)


class TestConstruct:
    def test_zero_amplitude_is_shear(self, modified_base):
        prof, beta, c = modified_base
        wave = bif.construct(prof, beta, c, 0.0, resolution=256)
        _, _, _, v2d = bif._fields(wave, 32)
        assert np.all(v2d == 0.0)

    def test_velocity_amplitude_scaling(self, modified_base):
        prof, beta, c = modified_base
        kappa = 1e-3
        wave = bif.construct(prof, beta, c, kappa, resolution=256)
        _, _, _, v2d = bif._fields(wave, 256)
        expected = wave.alpha0 * kappa * np.max(np.abs(wave.phi0))
        assert np.max(np.abs(v2d)) == pytest.approx(expected, rel=1e-3)
        assert np.max(np.abs(v2d)) > 0

    def test_positive_eigenvalue_rejected(self):
        prof = mf.profile(mf.ModifiedFlowParams(0.5, 0.02, 0.0))
        with pytest.raises(PositiveEigenvalueError):
            bif.construct(prof, 0.5, 0.0, 1e-3, resolution=256)

    def test_amplitude_cap(self, modified_base):
        prof, beta, c = modified_base
        with pytest.raises(ValidationError):
            bif.construct(prof, beta, c, 0.2, resolution=256)

    def test_scaled_couette_alpha_matches_inversion(self, beta_star):
        beta = 2 * beta_star
        alpha_b, alpha_err = atlas.alpha_beta(beta)
        a = 0.9
        c_a = atlas.speed_for_eigenvalue(beta / a, -alpha_b**2, tol=1e-7)
        wave = bif.construct(scaled_couette(a), beta, a * c_a, 1e-3, resolution=256)
        assert wave.alpha0 == pytest.approx(alpha_b, abs=max(1e-5, 10 * alpha_err))


class TestResidual:
    def test_zero_amplitude_zero_residual(self, modified_base):
        prof, beta, c = modified_base
        wave = bif.construct(prof, beta, c, 0.0, resolution=256)
        assert bif.residual_norm(wave, beta) <= 1e-14

    def test_quadratic_scaling_modified_flow(self, modified_base):
        prof, beta, c = modified_base
        rows = []
        for kappa in KAPPAS:
            wave = bif.construct(prof, beta, c, kappa, resolution=512)
            rows.append((kappa, bif.residual_norm(wave, beta)))
        slope = bif.residual_slope(rows)
        assert 1.8 <= slope <= 2.2
        # halving kappa cuts the residual by about four
        assert rows[1][1] / rows[0][1] == pytest.approx(0.25, abs=0.05)

    def test_random_phi_negative_control(self, modified_base):
        prof, beta, c = modified_base
        wave0 = bif.construct(prof, beta, c, 1e-3, resolution=512)
        phi = fake_phi(wave0.grid)
        rows = []
        for kappa in KAPPAS:
            wave = bif.construct(prof, beta, c, kappa, resolution=512, phi_override=phi)
            rows.append((kappa, bif.residual_norm(wave, beta)))
        slope = bif.residual_slope(rows)
        assert 0.8 <= slope <= 1.2

    def test_incompressibility(self, modified_base):
        prof, beta, c = modified_base
        wave = bif.construct(prof, beta, c, 5e-3, resolution=256)
        assert bif.divergence_max(wave) <= 1e-10

    def test_wall_boundary_condition(self, modified_base):
        prof, beta, c = modified_base
        wave = bif.construct(prof, beta, c, 5e-3, resolution=256)
        assert bif.boundary_velocity_max(wave) <= 1e-12


class TestPeriod:
    def test_reciprocal_of_alpha(self, modified_base):
        prof, beta, c = modified_base
        wave = bif.construct(prof, beta, c, 1e-3, resolution=256)
        assert wave.period == pytest.approx(2 * np.pi / wave.alpha0)

    def test_explicit_eigenvalue(self, modified_base):
        prof, beta, c = modified_base
        est = bif.period_estimate(prof, beta, c, resolution=256)
        lam = bif.lambda_n_general(prof, beta, c, 1, 256).value
        assert est == pytest.approx(2 * np.pi / np.sqrt(-lam))

    def test_compose_with_beta_T(self):
        T = 4.0
        bt = atlas.beta_T(T)
        est = bif.period_estimate(couette(), bt, -1.0)
        assert est == pytest.approx(T, abs=1e-3)

    def test_positive_eigenvalue_rejected(self):
        with pytest.raises(PositiveEigenvalueError):
            bif.period_estimate(couette(), 0.5, -1.0)

    def test_wave_speed_limit_monotone(self, beta_star):
        beta = 2 * beta_star
        alpha_b, _ = atlas.alpha_beta(beta)
        gaps = []
        for a in (0.9, 0.95, 0.99):
            c_a = atlas.speed_for_eigenvalue(beta / a, -alpha_b**2, tol=1e-7)
            assert a * c_a < -a
            gaps.append(abs(a * c_a + 1.0))
        assert gaps[0] > gaps[1] > gaps[2]
