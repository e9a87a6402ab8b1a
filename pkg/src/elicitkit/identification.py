"""Synthetic information experiment and the participation regression.

Participation is decided on mean beliefs (complementarity holds by
construction) while reports follow whatever the incentive scheme rewards.
Regressing participation on reports then recovers the sign of the
complementarity parameter only when the scheme elicits means.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .distributions import BeliefDistribution, BetaBelief, DiscreteBelief
from .elicitation import Quadratic, Scheme, Window, optimal_report
from .errors import ZeroVariance
from .hierarchical import HyperParams, sample_population
from .stylized import B1, B2, DEFAULT_COST, participation_decision
from .updating import BinomialSignal, UniformSignal, beta_binomial_update, uniform_window_update

Population = Union[HyperParams, Sequence[BeliefDistribution]]
Signal = Union[BinomialSignal, UniformSignal]


class Regressor(str, enum.Enum):
    POST_REPORT = "PostReport"
    REPORT_CHANGE = "ReportChange"


@dataclass(frozen=True)
class ExperimentConfig:
    population: Population
    scheme: Scheme
    signal: Signal
    cost: float = DEFAULT_COST
    treated_share: float = 0.5
    agents: int = 200
    seed: int = 0
    noise_scale: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.treated_share < 1.0:
            raise ValueError("treated_share must lie in [0, 1)")
        if self.agents < 10:
            raise ValueError("need at least 10 agents")
        if self.noise_scale < 0:
            raise ValueError("noise_scale must be non-negative")

    def with_scheme(self, scheme: Scheme) -> "ExperimentConfig":
        return ExperimentConfig(
            self.population, scheme, self.signal, self.cost, self.treated_share,
            self.agents, self.seed, self.noise_scale,
        )


def stylized_config(scheme: Optional[Scheme] = None, **kw) -> ExperimentConfig:
    """Half the agents hold the first stylized prior, half the second."""
    return ExperimentConfig(
        population=(B1, B2),
        scheme=scheme if scheme is not None else Window(0.02, 10.0),
        signal=UniformSignal(0.17, 0.10),
        **kw,
    )


PANEL_COLUMNS = (
    "id", "treated", "prior_report", "post_report", "prior_mean", "post_mean", "participates",
)


@dataclass(frozen=True)
class PanelData:
    id: np.ndarray
    treated: np.ndarray
    prior_report: np.ndarray
    post_report: np.ndarray
    prior_mean: np.ndarray
    post_mean: np.ndarray
    participates: np.ndarray

    def __len__(self):
        return self.id.shape[0]

    def regressor(self, which: Regressor) -> np.ndarray:
        if Regressor(which) is Regressor.POST_REPORT:
            return self.post_report
        return self.post_report - self.prior_report

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(PANEL_COLUMNS)
        for i in range(len(self)):
            w.writerow([
                int(self.id[i]),
                int(self.treated[i]),
                repr(float(self.prior_report[i])),
                repr(float(self.post_report[i])),
                repr(float(self.prior_mean[i])),
                repr(float(self.post_mean[i])),
                int(self.participates[i]),
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PanelData":
        rows = list(csv.DictReader(io.StringIO(text)))
        col = {k: [r[k] for r in rows] for k in PANEL_COLUMNS}
        return cls(
            id=np.array(col["id"], dtype=np.int64),
            treated=np.array(col["treated"], dtype=np.int64).astype(bool),
            prior_report=np.array(col["prior_report"], dtype=np.float64),
            post_report=np.array(col["post_report"], dtype=np.float64),
            prior_mean=np.array(col["prior_mean"], dtype=np.float64),
            post_mean=np.array(col["post_mean"], dtype=np.float64),
            participates=np.array(col["participates"], dtype=np.int64).astype(bool),
        )


@dataclass(frozen=True)
class RegressionResult:
    delta1: float
    delta2: float
    se2: float
    n_obs: int
    regressor: Regressor

    def to_json(self) -> dict:
        return {
            "delta1": self.delta1,
            "delta2": self.delta2,
            "se2": self.se2,
            "n_obs": self.n_obs,
            "regressor": self.regressor.value,
        }


def _update(prior: BeliefDistribution, sig: Signal) -> BeliefDistribution:
    if isinstance(prior, BetaBelief) and isinstance(sig, BinomialSignal):
        return beta_binomial_update(prior, sig)
    if isinstance(prior, DiscreteBelief) and isinstance(sig, UniformSignal):
        return uniform_window_update(prior, sig)
    raise TypeError(
        f"cannot update a {type(prior).__name__} prior with a {type(sig).__name__}"
    )


def _priors(cfg: ExperimentConfig) -> list[BeliefDistribution]:
    if isinstance(cfg.population, HyperParams):
        return list(sample_population(cfg.population, cfg.agents, cfg.seed))
    pool = list(cfg.population)
    if not pool:
        raise ValueError("explicit population is empty")
    return [pool[i % len(pool)] for i in range(cfg.agents)]


def simulate_experiment(cfg: ExperimentConfig) -> PanelData:
    """Two-wave panel: every agent reports twice, treated agents see the signal.

    Treatment is assigned to exactly ``round(treated_share * agents)``
    agents drawn without replacement. With ``noise_scale > 0`` a logistic
    shock is added to the participation threshold.
    """
    priors = _priors(cfg)
    n = cfg.agents
    rng = np.random.default_rng([cfg.seed, 1])
    treated = np.zeros(n, dtype=bool)
    treated[rng.permutation(n)[: int(round(cfg.treated_share * n))]] = True
    shocks = rng.logistic(0.0, cfg.noise_scale, size=n) if cfg.noise_scale > 0 else np.zeros(n)

    reports: dict = {}

    def report(dist):
        if dist not in reports:
            reports[dist] = optimal_report(cfg.scheme, dist).report
        return reports[dist]

    cols = {k: np.empty(n) for k in ("prior_report", "post_report", "prior_mean", "post_mean")}
    part = np.empty(n, dtype=bool)
    for i, prior in enumerate(priors):
        post = _update(prior, cfg.signal) if treated[i] else prior
        cols["prior_report"][i] = report(prior)
        cols["post_report"][i] = report(post)
        cols["prior_mean"][i] = prior.mean()
        cols["post_mean"][i] = post.mean()
        part[i] = participation_decision(post, cfg.cost + shocks[i])
    return PanelData(
        id=np.arange(n),
        treated=treated,
        prior_report=cols["prior_report"],
        post_report=cols["post_report"],
        prior_mean=cols["prior_mean"],
        post_mean=cols["post_mean"],
        participates=part,
    )


def ols(x, y) -> tuple[float, float, float]:
    """Intercept, slope and HC1 robust standard error of the slope."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if n < 3 or sxx <= 1e-24 * max(1.0, float(x @ x)):
        raise ZeroVariance("regressor has no variation")
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - intercept - slope * x
    meat = float(np.sum(xc * xc * resid * resid))
    se = math.sqrt(meat / (sxx * sxx) * n / (n - 2))
    return intercept, slope, se


def estimate(panel: PanelData, regressor: Regressor = Regressor.POST_REPORT) -> RegressionResult:
    regressor = Regressor(regressor)
    d1, d2, se = ols(panel.regressor(regressor), panel.participates.astype(np.float64))
    return RegressionResult(d1, d2, se, len(panel), regressor)


@dataclass(frozen=True)
class SchemeEstimates:
    panel: PanelData
    level: RegressionResult
    change: RegressionResult

    def to_json(self) -> dict:
        return {"level": self.level.to_json(), "change": self.change.to_json()}


def _both(panel: PanelData) -> SchemeEstimates:
    return SchemeEstimates(
        panel, estimate(panel, Regressor.POST_REPORT), estimate(panel, Regressor.REPORT_CHANGE)
    )


def sign_flip_demo(
    cfg: ExperimentConfig, quadratic: Scheme = Quadratic()
) -> tuple[SchemeEstimates, SchemeEstimates]:
    """Same agents, same draws, window versus quadratic elicitation.

    ``cfg.scheme`` must be a window scheme. Both regressions (report level
    and report change) are run for each scheme.
    """
    if not isinstance(cfg.scheme, Window):
        raise TypeError("sign_flip_demo expects a window scheme in the config")
    window_panel = simulate_experiment(cfg)
    quad_panel = simulate_experiment(cfg.with_scheme(quadratic))
    return _both(window_panel), _both(quad_panel)
