"""Belief distributions over a proportion in [0, 1].

Two families are supported: finitely many atoms (``DiscreteBelief``) and
the Beta family (``BetaBelief``). Both are immutable and hashable so they
can be used as cache keys by the simulation code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from . import kernels
from .errors import AmbiguousMode, UndefinedMode

# comparison slack for atoms sitting exactly on a window or CDF boundary
ATOM_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteBelief:
    """Finitely many atoms ``(value, prob)`` with strictly increasing values."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        atoms = tuple((float(v), float(p)) for v, p in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("a discrete belief needs at least one atom")
        for v, p in atoms:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"atom value {v} outside [0, 1]")
            if not p > 0.0:
                raise ValueError(f"atom probability {p} must be strictly positive")
        if any(b[0] <= a[0] for a, b in zip(atoms, atoms[1:])):
            raise ValueError("atom values must be strictly increasing")
        total = math.fsum(p for _, p in atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"atom probabilities sum to {total!r}, not 1")

    @classmethod
    def from_atoms(cls, atoms) -> "DiscreteBelief":
        """Build from ``(value, prob)`` pairs in any order."""
        return cls(tuple(sorted((float(v), float(p)) for v, p in atoms)))

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.atoms])

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.atoms])

    def mean(self) -> float:
        # exact rational sum of the binary products, rounded once
        return float(sum(Fraction(v) * Fraction(p) for v, p in self.atoms))

    def variance(self) -> float:
        mu = sum(Fraction(v) * Fraction(p) for v, p in self.atoms)
        return float(sum(Fraction(p) * (Fraction(v) - mu) ** 2 for v, p in self.atoms))

    def mode(self) -> float:
        top = max(p for _, p in self.atoms)
        winners = [v for v, p in self.atoms if top - p <= ATOM_TOL]
        if len(winners) > 1:
            raise AmbiguousMode(f"several atoms share the top probability {top}: {winners}")
        return winners[0]

    def cdf(self, t: float) -> float:
        return min(1.0, math.fsum(p for v, p in self.atoms if v <= t + ATOM_TOL))

    def median(self) -> tuple[float, float]:
        cum = 0.0
        for k, (v, p) in enumerate(self.atoms):
            cum = math.fsum([cum, p])
            if abs(cum - 0.5) <= ATOM_TOL:
                upper = self.atoms[k + 1][0] if k + 1 < len(self.atoms) else v
                return (v, upper)
            if cum > 0.5:
                return (v, v)
        v = self.atoms[-1][0]
        return (v, v)

    def window_mass(self, r: float, delta: float) -> float:
        lo, hi = r - delta - ATOM_TOL, r + delta + ATOM_TOL
        return math.fsum(p for v, p in self.atoms if lo <= v <= hi)

    def abs_loss(self, r: float) -> float:
        """Expected absolute distance ``E|x - r|``."""
        return math.fsum(p * abs(v - r) for v, p in self.atoms)

    def to_json(self) -> dict:
        return {"type": "discrete", "atoms": [[v, p] for v, p in self.atoms]}


@dataclass(frozen=True)
class BetaBelief:
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"Beta shapes must be positive, got ({self.alpha}, {self.beta})")

    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    def variance(self) -> float:
        a, b = self.alpha, self.beta
        s = a + b
        return a * b / (s * s * (s + 1.0))

    def mode(self) -> float:
        a, b = self.alpha, self.beta
        if a <= 1.0 or b <= 1.0:
            raise UndefinedMode(f"Beta({a}, {b}) has no interior mode (needs both shapes > 1)")
        return (a - 1.0) / (a + b - 2.0)

    def log_norm(self) -> float:
        return math.lgamma(self.alpha + self.beta) - math.lgamma(self.alpha) - math.lgamma(self.beta)

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        a, b = self.alpha, self.beta
        with np.errstate(divide="ignore", invalid="ignore"):
            logf = self.log_norm() + (a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x)
            out = np.exp(logf)
        # boundary limits: x**0 == 1 even at x == 0
        if a == 1.0:
            out = np.where(x == 0.0, math.exp(self.log_norm()), out)
        if b == 1.0:
            out = np.where(x == 1.0, math.exp(self.log_norm()), out)
        out = np.where((x < 0.0) | (x > 1.0), 0.0, out)
        return out if out.ndim else float(out)

    def cdf(self, t: float) -> float:
        return kernels.betainc_scalar(self.alpha, self.beta, min(max(t, 0.0), 1.0))

    def median(self) -> tuple[float, float]:
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.cdf(mid) < 0.5:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        m = 0.5 * (lo + hi)
        return (m, m)

    def window_mass(self, r: float, delta: float) -> float:
        return float(kernels.window_payoffs(self.alpha, self.beta, np.array([r]), delta)[0])

    def abs_loss(self, r: float) -> float:
        # E|x-r| = mu - r + 2 r F(r) - 2 mu F_{a+1,b}(r)
        a, b = self.alpha, self.beta
        mu = self.mean()
        return mu - r + 2.0 * r * self.cdf(r) - 2.0 * mu * kernels.betainc_scalar(a + 1.0, b, r)

    def to_json(self) -> dict:
        return {"type": "beta", "alpha": self.alpha, "beta": self.beta}


BeliefDistribution = Union[DiscreteBelief, BetaBelief]


def mean(dist: BeliefDistribution) -> float:
    return dist.mean()


def mode(dist: BeliefDistribution) -> float:
    return dist.mode()


def median(dist: BeliefDistribution) -> tuple[float, float]:
    """Closed interval of minimisers of ``E|x - r|``."""
    return dist.median()


def variance(dist: BeliefDistribution) -> float:
    return dist.variance()


def window_mass(dist: BeliefDistribution, r: float, delta: float) -> float:
    """P(x in [r - delta, r + delta]); the window is clipped to [0, 1]."""
    return dist.window_mass(r, delta)


def cdf(dist: BeliefDistribution, t: float) -> float:
    return dist.cdf(t)


def to_json(dist: BeliefDistribution) -> dict:
    return dist.to_json()


def from_json(obj: dict) -> BeliefDistribution:
    kind = obj.get("type")
    if kind == "discrete":
        return DiscreteBelief.from_atoms(obj["atoms"])
    if kind == "beta":
        return BetaBelief(obj["alpha"], obj["beta"])
    raise ValueError(f"unknown distribution type {kind!r}")
