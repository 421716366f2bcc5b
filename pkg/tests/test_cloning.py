import math

import numpy as np
import pytest

from qprand import cloning
from qprand.cloning import (
    BH_FIDELITY,
    CloneGeometry,
    DegenerateEnsembleError,
    Panel,
    bh_channel,
    bh_clone,
    bh_isometry,
    bh_residuals,
    bh_stats,
    ensemble_angles,
    qubit_pair,
    sd_fidelity,
    sd_randomness,
    sd_randomness_slopes,
    sd_ratio,
    sd_states,
    sd_stationary_points,
    sd_stats_from_states,
)
from qprand.process import fidelity, randomness_closed_form
from qprand.qcore import basis, dagger, projector, random_state

PI = math.pi
THETA = PI / 8


class TestBH:
    def test_isometry(self):
        v = bh_isometry()
        assert v.shape == (8, 2)
        np.testing.assert_allclose(dagger(v) @ v, np.eye(2), atol=1e-15)

    def test_up_image(self):
        # sqrt(2/3)|00>|up> + sqrt(1/3)|Psi+>|down>, ordering (original, clone, machine)
        v = bh_isometry()[:, 0]
        expected = np.zeros(8)
        expected[0b000] = math.sqrt(2 / 3)
        expected[0b011] = expected[0b101] = math.sqrt(1 / 6)
        np.testing.assert_allclose(v, expected, atol=1e-15)

    def test_clone_is_shrunk_bloch_vector(self, rng):
        for _ in range(20):
            psi = random_state(rng, 2)
            out = bh_clone(psi)
            expected = 2 / 3 * projector(psi) + np.eye(2) / 6
            np.testing.assert_allclose(out.clone_state, expected, atol=1e-12)
            np.testing.assert_allclose(out.original_state, expected, atol=1e-12)

    def test_fidelity_and_randomness_pointwise(self, rng):
        for _ in range(50):
            psi = random_state(rng, 2)
            rho = bh_clone(psi).clone_state
            assert abs(fidelity(rho, psi) - 5 / 6) < 1e-12
            assert randomness_closed_form(rho, psi) < 1e-10

    def test_channel_matches_clone(self, rng):
        psi = random_state(rng, 2)
        from qprand.process import apply_channel

        np.testing.assert_allclose(apply_channel(bh_channel(), psi), bh_clone(psi).clone_state, atol=1e-12)

    def test_residuals(self):
        res = bh_residuals(n_samples=500, seed=3)
        assert all(v <= 1e-10 for v in res.values())

    def test_stats(self):
        stats = bh_stats(200, 0)
        assert stats.fidelity == BH_FIDELITY
        assert stats.randomness == 0.0


class TestGeometry:
    def test_angles_at_pi_8(self):
        phi, gamma = ensemble_angles(THETA)
        assert abs(phi - PI / 3) < 1e-12
        assert abs(gamma - PI / 4) < 1e-12

    def test_ensemble_overlap(self):
        for theta in np.linspace(0.05, 0.75, 8):
            a, b = qubit_pair(theta)
            assert abs(np.vdot(a, b) - math.sin(2 * theta)) < 1e-14

    @pytest.mark.parametrize("panel", list(Panel))
    def test_state_layout(self, panel):
        geom = CloneGeometry(0.3, 0.2, panel)
        alpha, beta, aa, bb = sd_states(geom)
        assert abs(np.vdot(alpha, beta).real - math.sin(0.6)) < 1e-12
        assert abs(np.vdot(aa, bb).real - math.sin(0.6) ** 2) < 1e-12
        first = alpha if panel is Panel.LEFT else beta
        assert abs(np.vdot(aa, first).real - math.cos(0.2)) < 1e-12

    def test_delta_range(self):
        with pytest.raises(ValueError):
            CloneGeometry(THETA, 2.0)

    def test_theta_range(self):
        with pytest.raises(ValueError):
            CloneGeometry(1.0, 0.1)

    @pytest.mark.parametrize("theta, word", [(0.0, "orthogonal"), (PI / 4, "identical")])
    def test_degenerate_ensembles(self, theta, word):
        with pytest.raises(DegenerateEnsembleError, match=word):
            sd_stationary_points(theta)

    def test_identical_state_geometry_still_defined(self):
        alpha, beta, aa, bb = sd_states(CloneGeometry(PI / 4, 0.0))
        np.testing.assert_allclose(alpha, aa, atol=1e-12)


class TestAverages:
    def test_closed_forms_match_states_500(self):
        rng = np.random.default_rng(9)
        worst = 0.0
        for i in range(500):
            theta = rng.uniform(0.01, PI / 4 - 0.01)
            phi, gamma = ensemble_angles(theta)
            panel = (Panel.LEFT, Panel.RIGHT)[i % 2]
            hi = min(PI / 2, phi - gamma + PI / 2)
            delta = rng.uniform(0, hi)
            geom = CloneGeometry(theta, delta, panel)
            ref = sd_stats_from_states(geom)
            worst = max(
                worst,
                abs(ref.fidelity - sd_fidelity(theta, delta, panel)),
                abs(ref.randomness - sd_randomness(theta, delta, panel)),
            )
        assert worst <= 1e-10

    def test_values_at_pi_8(self):
        assert sd_fidelity(THETA, PI / 24) == pytest.approx(math.cos(PI / 24) ** 2, abs=1e-15)
        assert sd_fidelity(THETA, PI / 12) == pytest.approx((6 + math.sqrt(3)) / 8, abs=1e-15)
        assert sd_randomness(THETA, PI / 24) == pytest.approx(0.5 * math.sin(PI / 12), abs=1e-15)
        for d in (0.0, PI / 12, PI / 2):
            assert sd_randomness(THETA, d) == pytest.approx(0.125, abs=1e-15)

    def test_vectorized(self):
        ds = np.linspace(0, PI / 2, 7)
        f = sd_fidelity(THETA, ds)
        assert f.shape == (7,)
        assert f[3] == pytest.approx(float(sd_fidelity(THETA, ds[3])))

    def test_ratio(self):
        assert sd_ratio(THETA, 0.0) == pytest.approx(0.125 / float(sd_fidelity(THETA, 0.0)))

    def test_right_panel_worse(self):
        ds = np.linspace(0, PI / 2, 20001)
        left_f = sd_fidelity(THETA, ds, Panel.LEFT).max()
        right_f = sd_fidelity(THETA, ds, Panel.RIGHT).max()
        assert right_f < left_f
        left_r = min(sd_ratio(THETA, d, Panel.LEFT) for d in ds[::20])
        right_r = min(sd_ratio(THETA, d, Panel.RIGHT) for d in ds[::20])
        assert right_r > left_r


class TestStationary:
    def test_pi_8_structure(self):
        rep = sd_stationary_points(THETA)
        np.testing.assert_allclose([p.delta for p in rep.maxima], [PI / 24, 7 * PI / 24], atol=1e-12)
        np.testing.assert_allclose([p.delta for p in rep.minima], [0, PI / 12, PI / 2], atol=1e-12)
        assert rep.delta0 == pytest.approx(PI / 12, abs=1e-12)
        assert rep.fidelity_argmax == pytest.approx(PI / 24, abs=1e-12)
        labels = [p.label for p in rep.maxima]
        assert labels[0].startswith("case I:") and labels[1].startswith("case II:")
        assert any("delta0" in p.label for p in rep.minima)
        assert len(rep.rejected) == 2

    def test_maxima_have_negative_curvature(self):
        for theta in np.linspace(0.05, 0.75, 10):
            for p in sd_stationary_points(theta).maxima:
                assert p.second_derivative < 0
                assert abs(p.left_slope) < 1e-9 and abs(p.right_slope) < 1e-9

    def test_slopes_agree_with_finite_differences(self):
        rng = np.random.default_rng(2)
        h = 1e-7
        for _ in range(50):
            theta = rng.uniform(0.05, 0.75)
            d = rng.uniform(0.01, PI / 2 - 0.01)
            ls, rs = sd_randomness_slopes(theta, d)
            fd = (sd_randomness(theta, d + h) - sd_randomness(theta, d - h)) / (2 * h)
            if abs(ls - rs) < 1e-9:
                assert abs(fd - ls) < 1e-6

    def test_kink_minimum_slopes(self):
        ls, rs = sd_randomness_slopes(THETA, PI / 12)
        assert ls < 0 < rs

    def test_fidelity_optimum_never_a_randomness_minimum(self):
        for theta in np.linspace(0.02, 0.76, 25):
            for panel in Panel:
                rep = sd_stationary_points(theta, panel)
                assert all(abs(rep.fidelity_argmax - p.delta) > 1e-6 for p in rep.minima)

    def test_right_panel(self):
        rep = sd_stationary_points(THETA, Panel.RIGHT)
        np.testing.assert_allclose([p.delta for p in rep.minima], [0, PI / 4, PI / 3], atol=1e-12)
        assert rep.fidelity_argmax == pytest.approx(PI / 2, abs=1e-12)
