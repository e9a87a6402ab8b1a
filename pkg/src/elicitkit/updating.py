"""Bayesian updating of beliefs after an information intervention."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .distributions import ATOM_TOL, BetaBelief, DiscreteBelief
from .errors import EmptyPosterior


@dataclass(frozen=True)
class BinomialSignal:
    """Observed share ``x_hat`` out of ``n`` draws.

    ``x_hat * n`` is kept as a real-valued pseudo-count (no rounding).
    """

    x_hat: float = 0.17
    n: float = 1234

    def __post_init__(self):
        if not 0.0 <= self.x_hat <= 1.0:
            raise ValueError(f"x_hat must lie in [0, 1], got {self.x_hat}")
        if not self.n >= 1:
            raise ValueError(f"sample size must be at least 1, got {self.n}")

    def to_json(self) -> dict:
        return {"signal": "binomial", "x_hat": self.x_hat, "n": self.n}


@dataclass(frozen=True)
class UniformSignal:
    """Signal drawn uniformly from ``[theta - half_width, theta + half_width]``."""

    signal: float = 0.17
    half_width: float = 0.10

    def __post_init__(self):
        if not self.half_width >= 0:
            raise ValueError("half_width must be non-negative")

    def to_json(self) -> dict:
        return {"signal": "uniform", "value": self.signal, "half_width": self.half_width}


def signal_from_json(obj: dict):
    kind = obj.get("signal")
    if kind == "binomial":
        return BinomialSignal(obj["x_hat"], obj["n"])
    if kind == "uniform":
        return UniformSignal(obj["value"], obj["half_width"])
    raise ValueError(f"unknown signal type {kind!r}")


class Direction(str, enum.Enum):
    UP = "Up"
    DOWN = "Down"
    UNCHANGED = "Unchanged"

    @classmethod
    def of(cls, before: float, after: float, tol: float = 1e-12) -> "Direction":
        if after > before + tol:
            return cls.UP
        if after < before - tol:
            return cls.DOWN
        return cls.UNCHANGED


@dataclass(frozen=True)
class UpdateReport:
    prior_mean: float
    prior_mode: float
    post_mean: float
    post_mode: float
    mean_direction: Direction
    mode_direction: Direction
    opposite: bool

    def to_json(self) -> dict:
        return {
            "prior_mean": self.prior_mean,
            "prior_mode": self.prior_mode,
            "post_mean": self.post_mean,
            "post_mode": self.post_mode,
            "mean_direction": self.mean_direction.value,
            "mode_direction": self.mode_direction.value,
            "opposite": self.opposite,
        }


def beta_binomial_update(prior: BetaBelief, sig: BinomialSignal) -> BetaBelief:
    return BetaBelief(prior.alpha + sig.x_hat * sig.n, prior.beta + (1.0 - sig.x_hat) * sig.n)


def posterior_mean_bounds(sig: BinomialSignal, shape_sum_cap: float = 1.0) -> tuple[float, float]:
    """Range of the conjugate posterior mean over priors with alpha + beta <= cap.

    The extremes sit at (alpha, beta) = (0, cap) and (cap, 0).
    """
    k = sig.x_hat * sig.n
    s = float(shape_sum_cap)
    return (k / (sig.n + s), (s + k) / (sig.n + s))


def posterior_mode_bounds(
    sig: BinomialSignal, shape_sum_cap: float = 1.0, min_shape: float = 0.0
) -> tuple[float, float]:
    """Range of the posterior mode ``(a + k - 1) / (a + b + n - 2)``.

    Shapes range over ``a, b >= min_shape`` with ``a + b <= shape_sum_cap``.
    The mode rises in ``a`` and falls in ``b``, so the extremes are the two
    corners of that triangle. The defaults (cap 1, shapes from 0) give the
    tight interval around ``x_hat`` quoted for n = 1234; use
    ``min_shape=1`` with a cap above 2 for priors that have an interior mode.
    """
    s, lo = float(shape_sum_cap), float(min_shape)
    if s < 2 * lo:
        raise ValueError("shape_sum_cap must be at least 2 * min_shape")
    k, n = sig.x_hat * sig.n, sig.n

    def post_mode(a, b):
        return (a + k - 1.0) / (a + b + n - 2.0)

    return (post_mode(lo, s - lo), post_mode(s - lo, lo))


def opposite_direction(prior: BetaBelief, sig: BinomialSignal) -> UpdateReport:
    post = beta_binomial_update(prior, sig)
    mu0, m0 = prior.mean(), prior.mode()
    mu1, m1 = post.mean(), post.mode()
    dmean = Direction.of(mu0, mu1)
    dmode = Direction.of(m0, m1)
    opposite = {dmean, dmode} == {Direction.UP, Direction.DOWN}
    return UpdateReport(mu0, m0, mu1, m1, dmean, dmode, opposite)


def uniform_window_update(prior: DiscreteBelief, sig: UniformSignal) -> DiscreteBelief:
    """Keep the atoms within ``half_width`` of the signal and renormalize.

    A uniform signal likelihood is flat on the closed window and zero
    outside, so surviving atoms keep their relative weights.
    """
    lo = sig.signal - sig.half_width - ATOM_TOL
    hi = sig.signal + sig.half_width + ATOM_TOL
    kept = [(v, p) for v, p in prior.atoms if lo <= v <= hi]
    if not kept:
        raise EmptyPosterior(
            f"no atom of the prior lies within {sig.half_width} of the signal {sig.signal}"
        )
    total = math.fsum(p for _, p in kept)
    return DiscreteBelief(tuple((v, p / total) for v, p in kept))
