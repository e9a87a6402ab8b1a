"""Population of heterogeneous Beta beliefs with chi-squared shape offsets.

Each subject holds Beta(alpha_i, beta_i) beliefs with
alpha_i - 1 ~ chi2(ell) and beta_i - 1 ~ chi2(q), independently. The
reported modes (alpha_i - 1) / (alpha_i + beta_i - 2) are then distributed
Beta(ell / 2, q / 2), which is what a mode-eliciting experiment observes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from . import kernels
from .distributions import BetaBelief
from .errors import DegenerateData, NonConvergence
from .updating import BinomialSignal

log = logging.getLogger(__name__)

CLAMP = 1e-6
Z95 = 1.959963984540054
MAX_ITER = 10_000

# maximum-likelihood (ell/2, q/2) for the first-survey modes
TREATMENT_ESTIMATES = (0.232, 1.383)
FULL_SAMPLE_ESTIMATES = (0.172, 1.192)


@dataclass(frozen=True)
class HyperParams:
    ell: float
    q: float

    def __post_init__(self):
        if not (self.ell > 0 and self.q > 0):
            raise ValueError(f"degrees of freedom must be positive, got ({self.ell}, {self.q})")

    @classmethod
    def from_mode_shapes(cls, a: float, b: float) -> "HyperParams":
        """Hyperparameters whose mode distribution is Beta(a, b)."""
        return cls(2.0 * a, 2.0 * b)

    def rounded_up(self) -> "HyperParams":
        return HyperParams(float(math.ceil(self.ell)), float(math.ceil(self.q)))

    def to_json(self) -> dict:
        return {"ell": self.ell, "q": self.q}


# the two readings of the reported estimates: rounded-up degrees of freedom,
# and twice the raw treatment-sample estimates
ROUNDED_HYPER = HyperParams(1.0, 3.0)
RAW_HYPER = HyperParams.from_mode_shapes(*TREATMENT_ESTIMATES)


@dataclass(frozen=True)
class BetaPopulation:
    """Sampled shape pairs, stored column-wise."""

    alpha: np.ndarray
    beta: np.ndarray

    def __len__(self):
        return self.alpha.shape[0]

    def __getitem__(self, i) -> BetaBelief:
        return BetaBelief(self.alpha[i], self.beta[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def means(self) -> np.ndarray:
        return self.alpha / (self.alpha + self.beta)

    @property
    def modes(self) -> np.ndarray:
        return (self.alpha - 1.0) / (self.alpha + self.beta - 2.0)


@dataclass
class ModeDataset:
    """Reported modes; reports of exactly 0 or 1 are clamped inward."""

    reports: np.ndarray
    n_clamped: int = field(init=False)

    def __post_init__(self):
        raw = np.asarray(self.reports, dtype=np.float64).ravel()
        if raw.size == 0:
            raise ValueError("mode dataset is empty")
        if np.any((raw < 0) | (raw > 1)) or not np.all(np.isfinite(raw)):
            raise ValueError("reports must lie in [0, 1]")
        clamped = np.where(raw == 0.0, CLAMP, np.where(raw == 1.0, 1.0 - CLAMP, raw))
        self.n_clamped = int(np.count_nonzero((raw == 0.0) | (raw == 1.0)))
        if self.n_clamped:
            log.warning("clamped %d boundary reports into [%g, %g]", self.n_clamped, CLAMP, 1 - CLAMP)
        self.reports = clamped


@dataclass(frozen=True)
class FitResult:
    a_hat: float
    b_hat: float
    ci_a: tuple[float, float]
    ci_b: tuple[float, float]
    loglik: float
    start_loglik: float
    ell_rounded: int
    q_rounded: int
    n_obs: int

    @property
    def hyper(self) -> HyperParams:
        return HyperParams.from_mode_shapes(self.a_hat, self.b_hat)

    def to_json(self) -> dict:
        return {
            "a_hat": self.a_hat,
            "b_hat": self.b_hat,
            "ci_a": list(self.ci_a),
            "ci_b": list(self.ci_b),
            "loglik": self.loglik,
            "ell_rounded": self.ell_rounded,
            "q_rounded": self.q_rounded,
            "n_obs": self.n_obs,
        }


@dataclass(frozen=True)
class QuantifyResult:
    share: float
    draws: int
    seed: int
    x_hat: float
    n: float
    delta: float
    hyper: HyperParams
    share_opposite_sides: float
    share_exact_update: float

    def to_json(self) -> dict:
        return {
            "share": self.share,
            "R": self.draws,
            "seed": self.seed,
            "params": {
                "ell": self.hyper.ell,
                "q": self.hyper.q,
                "x_hat": self.x_hat,
                "n": self.n,
                "delta": self.delta,
            },
            "share_opposite_sides": self.share_opposite_sides,
            "share_exact_update": self.share_exact_update,
        }


def sample_population(hyper: HyperParams, R: int, seed: int) -> BetaPopulation:
    """Draw R shape pairs; fractional degrees of freedom are allowed."""
    if R < 1:
        raise ValueError("R must be at least 1")
    rng = np.random.default_rng(seed)
    alpha = 1.0 + rng.chisquare(hyper.ell, size=R)
    beta = 1.0 + rng.chisquare(hyper.q, size=R)
    return BetaPopulation(alpha, beta)


def mode_distribution(hyper: HyperParams) -> BetaBelief:
    return BetaBelief(hyper.ell / 2.0, hyper.q / 2.0)


def model_fit_moments(hyper: HyperParams) -> tuple[float, float]:
    """Mean and variance of the implied distribution of reported modes."""
    d = mode_distribution(hyper)
    return d.mean(), d.variance()


def beta_loglik(a: float, b: float, mean_log: float, mean_log1m: float, n: int) -> float:
    return n * (
        gammaln(a + b) - gammaln(a) - gammaln(b) + (a - 1.0) * mean_log + (b - 1.0) * mean_log1m
    )


def _moment_start(x: np.ndarray) -> tuple[float, float]:
    m, v = float(x.mean()), float(x.var())
    common = m * (1.0 - m) / v - 1.0
    if common <= 0:
        return 1.0, 1.0
    return m * common, (1.0 - m) * common


def _hessian(f, x, rel_step=1e-4):
    x = np.asarray(x, dtype=np.float64)
    h = rel_step * np.maximum(np.abs(x), 1e-3)
    H = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            ei = np.zeros(2)
            ej = np.zeros(2)
            ei[i] = h[i]
            ej[j] = h[j]
            H[i, j] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
    return 0.5 * (H + H.T)


def fit_mle(data: ModeDataset) -> FitResult:
    """Maximum-likelihood Beta shapes for a sample of reported modes.

    Nelder-Mead on log-shapes from the method-of-moments start; confidence
    intervals come from the inverse of a finite-difference observed
    information matrix.
    """
    x = data.reports
    if x.size < 10:
        raise ValueError(f"need at least 10 reports, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateData("all reports are identical; Beta shapes are not identified")
    n = int(x.size)
    mlx = float(np.mean(np.log(x)))
    ml1mx = float(np.mean(np.log1p(-x)))

    def ll(ab):
        return beta_loglik(ab[0], ab[1], mlx, ml1mx, n)

    a0, b0 = _moment_start(x)
    start_ll = ll((a0, b0))
    res = minimize(
        lambda t: -ll(np.exp(t)) / n,
        x0=np.log([a0, b0]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": MAX_ITER, "maxfev": 2 * MAX_ITER},
    )
    if not res.success:
        raise NonConvergence(f"simplex search stopped: {res.message}")
    a_hat, b_hat = (float(v) for v in np.exp(res.x))
    H = _hessian(ll, (a_hat, b_hat))
    try:
        cov = np.linalg.inv(-H)
    except np.linalg.LinAlgError as exc:
        raise DegenerateData("observed information is singular") from exc
    se_a, se_b = math.sqrt(max(cov[0, 0], 0.0)), math.sqrt(max(cov[1, 1], 0.0))
    return FitResult(
        a_hat=a_hat,
        b_hat=b_hat,
        ci_a=(a_hat - Z95 * se_a, a_hat + Z95 * se_a),
        ci_b=(b_hat - Z95 * se_b, b_hat + Z95 * se_b),
        loglik=float(ll((a_hat, b_hat))),
        start_loglik=float(start_ll),
        ell_rounded=math.ceil(2.0 * a_hat),
        q_rounded=math.ceil(2.0 * b_hat),
        n_obs=n,
    )


def quantify_opposite_share(
    hyper: HyperParams = ROUNDED_HYPER,
    sig: BinomialSignal = BinomialSignal(),
    delta: float = 0.02,
    R: int = 100_000,
    seed: int = 0,
    require_mass: bool = True,
) -> QuantifyResult:
    """Share of sampled beliefs whose mean and mode straddle ``x_hat``.

    A draw counts when its prior mean and prior mode lie strictly on
    opposite sides of ``x_hat`` and (with ``require_mass``) the window of
    half-width ``delta`` around the mode carries at least as much mass as
    the one around the mean. ``share_exact_update`` additionally replaces the
    straddle test by the exact conjugate update at sample size ``sig.n``.
    """
    pop = sample_population(hyper, R, seed)
    opposite, heavier = kernels.opposite_flags(pop.alpha, pop.beta, sig.x_hat, delta)
    counted = opposite & heavier if require_mass else opposite

    k = sig.x_hat * sig.n
    a, b = pop.alpha, pop.beta
    post_mean = (a + k) / (a + b + sig.n)
    post_mode = (a - 1.0 + k) / (a + b - 2.0 + sig.n)
    dmean = np.sign(post_mean - pop.means)
    dmode = np.sign(post_mode - pop.modes)
    exact = (dmean * dmode < 0) & (heavier if require_mass else True)

    return QuantifyResult(
        share=float(np.count_nonzero(counted)) / R,
        draws=R,
        seed=seed,
        x_hat=sig.x_hat,
        n=sig.n,
        delta=delta,
        hyper=hyper,
        share_opposite_sides=float(np.count_nonzero(opposite)) / R,
        share_exact_update=float(np.count_nonzero(exact)) / R,
    )


def ks_statistic(sample, cdf_values_fn) -> float:
    """One-sample Kolmogorov-Smirnov statistic against a vectorized CDF."""
    x = np.sort(np.asarray(sample, dtype=np.float64))
    n = x.size
    F = cdf_values_fn(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_critical(n: int, level: float = 0.01) -> float:
    """Asymptotic critical value of the one-sample KS statistic."""
    return math.sqrt(-0.5 * math.log(level / 2.0)) / math.sqrt(n)


def mode_ks_check(hyper: HyperParams, R: int, seed: int, level: float = 0.01) -> tuple[float, float]:
    """KS distance between sampled modes and Beta(ell/2, q/2); returns (stat, critical)."""
    pop = sample_population(hyper, R, seed)
    d = mode_distribution(hyper)
    stat = ks_statistic(pop.modes, lambda t: kernels.betainc(d.alpha, d.beta, t))
    return stat, ks_critical(R, level)
