import numpy as np
import pytest
import statsmodels.api as sm

from elicitkit.distributions import BetaBelief
from elicitkit.elicitation import NoIncentive, Quadratic, Window
from elicitkit.errors import NoBestResponse, ZeroVariance
from elicitkit.hierarchical import HyperParams
from elicitkit.identification import (
    ExperimentConfig,
    PanelData,
    Regressor,
    estimate,
    ols,
    sign_flip_demo,
    simulate_experiment,
    stylized_config,
)
from elicitkit.stylized import B1, B2
from elicitkit.updating import BinomialSignal


def rows_for(panel, dist_means, treated=True):
    sel = panel.treated == treated
    return sel & np.isclose(panel.prior_mean, dist_means)


class TestOls:
    def test_statsmodels_oracle(self):
        rng = np.random.default_rng(41)
        x = rng.normal(size=300)
        y = (0.3 * x + rng.normal(size=300) > 0).astype(float)
        d1, d2, se = ols(x, y)
        fit = sm.OLS(y, sm.add_constant(x)).fit(cov_type="HC1")
        assert d1 == pytest.approx(fit.params[0], abs=1e-12)
        assert d2 == pytest.approx(fit.params[1], abs=1e-12)
        assert se == pytest.approx(fit.bse[1], rel=1e-10)

    def test_normal_equations(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            n = int(rng.integers(5, 40))
            x = rng.uniform(0, 1, n)
            y = rng.integers(0, 2, n).astype(float)
            d1, d2, _ = ols(x, y)
            resid = y - d1 - d2 * x
            assert abs(resid.sum()) < 1e-10
            assert abs(resid @ x) < 1e-10

    def test_perfect_fit(self):
        x = np.array([0, 1, 0, 1, 1, 0], dtype=float)
        d1, d2, se = ols(x, x)
        assert (d1, d2) == (pytest.approx(0.0, abs=1e-15), pytest.approx(1.0))
        assert se == pytest.approx(0.0, abs=1e-12)

    def test_null_rejection_rate(self):
        # uncorrelated regressor: |delta2| > 2 se in roughly 5% of panels
        rng = np.random.default_rng(43)
        rejections = 0
        for _ in range(400):
            x = rng.uniform(size=500)
            y = rng.integers(0, 2, 500).astype(float)
            _, d2, se = ols(x, y)
            rejections += abs(d2) > 2 * se
        assert 0.02 <= rejections / 400 <= 0.09

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            ols(np.full(10, 0.3), np.arange(10.0))


class TestConfig:
    @pytest.mark.parametrize("kw", [{"treated_share": 1.0}, {"treated_share": -0.1}, {"agents": 5}])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            stylized_config(**kw)


class TestSimulation:
    def test_window_group_one_treated(self):
        panel = simulate_experiment(stylized_config())
        g1 = rows_for(panel, B1.mean())
        assert g1.sum() > 30
        assert np.all(panel.prior_report[g1] == 0.30)
        assert np.all(panel.post_report[g1] == 0.17)
        assert np.all(panel.participates[g1])

    def test_quadratic_group_one_treated(self):
        panel = simulate_experiment(stylized_config(Quadratic()))
        g1 = rows_for(panel, B1.mean())
        assert panel.prior_report[g1] == pytest.approx(0.1645, abs=1e-12)
        assert panel.post_report[g1] == pytest.approx(0.17, abs=1e-12)
        assert np.array_equal(panel.post_report, panel.post_mean)

    def test_untreated_rows_unchanged(self):
        panel = simulate_experiment(stylized_config())
        c = ~panel.treated
        assert np.array_equal(panel.prior_report[c], panel.post_report[c])
        assert np.array_equal(panel.prior_mean[c], panel.post_mean[c])
        assert panel.treated.sum() == 100

    def test_no_treatment(self):
        panel = simulate_experiment(stylized_config(treated_share=0.0))
        assert np.array_equal(panel.prior_report, panel.post_report)

    def test_deterministic(self):
        cfg = ExperimentConfig(HyperParams(1, 3), Window(0.02), BinomialSignal(), agents=60, seed=5)
        assert simulate_experiment(cfg).to_csv() == simulate_experiment(cfg).to_csv()

    def test_seed_changes_assignment(self):
        a = simulate_experiment(stylized_config(seed=1)).treated
        b = simulate_experiment(stylized_config(seed=2)).treated
        assert not np.array_equal(a, b)

    def test_participation_uses_mean(self):
        panel = simulate_experiment(stylized_config())
        assert np.array_equal(panel.participates, panel.post_mean > 0.165)

    def test_noise_moves_some_decisions(self):
        base = simulate_experiment(stylized_config())
        noisy = simulate_experiment(stylized_config(noise_scale=0.05))
        assert not np.array_equal(base.participates, noisy.participates)

    def test_no_incentive_propagates(self):
        with pytest.raises(NoBestResponse):
            simulate_experiment(stylized_config(NoIncentive()))

    def test_incompatible_signal(self):
        with pytest.raises(TypeError):
            simulate_experiment(ExperimentConfig((BetaBelief(2, 3),), Window(), stylized_config().signal))

    def test_csv_round_trip(self):
        panel = simulate_experiment(stylized_config())
        back = PanelData.from_csv(panel.to_csv())
        for name in ("id", "treated", "prior_report", "post_report", "prior_mean", "post_mean", "participates"):
            assert np.array_equal(getattr(back, name), getattr(panel, name))


class TestSignFlip:
    def test_stylized(self):
        window, quad = sign_flip_demo(stylized_config())
        assert window.change.delta2 < 0
        assert quad.level.delta2 > 0
        assert window.change.regressor is Regressor.REPORT_CHANGE

    def test_group_one_moves_opposite(self):
        panel = simulate_experiment(stylized_config())
        g1 = rows_for(panel, B1.mean())
        assert np.all(panel.post_report[g1] < panel.prior_report[g1])
        assert np.all(panel.participates[g1])

    def test_symmetric_population_same_sign(self):
        pop = [BetaBelief(a, a) for a in (2.0, 3.0, 5.0, 8.0)]
        cfg = ExperimentConfig(pop, Window(0.02), BinomialSignal(0.17, 50), cost=0.3, agents=200)
        window, quad = sign_flip_demo(cfg)
        assert np.sign(window.level.delta2) == np.sign(quad.level.delta2) != 0
        assert np.sign(window.change.delta2) == np.sign(quad.change.delta2) != 0

    def test_requires_window(self):
        with pytest.raises(TypeError):
            sign_flip_demo(stylized_config(Quadratic()))

    def test_hierarchical_population_runs(self):
        cfg = ExperimentConfig(HyperParams(1, 3), Window(0.02), BinomialSignal(), cost=0.165, agents=200)
        window, quad = sign_flip_demo(cfg)
        assert np.isfinite(window.level.delta2) and np.isfinite(quad.level.delta2)

    def test_estimate_json(self):
        out = estimate(simulate_experiment(stylized_config()), Regressor.REPORT_CHANGE).to_json()
        assert out["regressor"] == "ReportChange" and out["n_obs"] == 200
