"""Incentive schemes, expected payoffs and profit-maximizing reports."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import kernels
from .distributions import ATOM_TOL, BeliefDistribution, BetaBelief, DiscreteBelief
from .errors import NoBestResponse

NO_INCENTIVE_MESSAGE = (
    "no incentive scheme: a point report cannot be mapped to any functional of "
    "the belief distribution, so there is no best response"
)

COARSE_STEP = 1e-4
FINE_STEP = 1e-7
PAYOFF_TOL = 1e-9


@dataclass(frozen=True)
class Window:
    """Pays ``bonus`` when the realized value is within ``delta`` of the report."""

    delta: float = 0.02
    bonus: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.delta < 0.5:
            raise ValueError(f"window half-width must lie in [0, 0.5), got {self.delta}")
        if not self.bonus > 0:
            raise ValueError("window bonus must be positive")


@dataclass(frozen=True)
class Quadratic:
    """Pays ``B - A (x - r)**2``."""

    A: float = 1.0
    B: float = 2.0

    def __post_init__(self):
        if not self.B > self.A > 0:
            raise ValueError(f"need B > A > 0, got A={self.A}, B={self.B}")


@dataclass(frozen=True)
class Absolute:
    """Pays ``B - A |x - r|``."""

    A: float = 1.0
    B: float = 2.0

    def __post_init__(self):
        if not self.B > self.A > 0:
            raise ValueError(f"need B > A > 0, got A={self.A}, B={self.B}")


@dataclass(frozen=True)
class NoIncentive:
    pass


Scheme = Union[Window, Quadratic, Absolute, NoIncentive]


class Method(str, enum.Enum):
    ANALYTIC = "Analytic"
    GRID_SEARCH = "GridSearch"


class Claim1Condition(str, enum.Enum):
    DISCRETE_SEPARATED = "DiscreteSeparated"
    GLOBAL_UNIMODAL = "GlobalUnimodal"
    LOCAL_UNIMODAL = "LocalUnimodal"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class ReportSolution:
    """Set of profit-maximizing reports.

    ``intervals`` is a sorted tuple of disjoint closed intervals whose union
    is the maximizer set; ``report`` is the single point a subject would
    announce (see ``optimal_report`` for how it is chosen).
    """

    intervals: tuple[tuple[float, float], ...]
    payoff: float
    method: Method
    report: float

    def contains(self, r: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= r <= hi + tol for lo, hi in self.intervals)

    def to_json(self) -> dict:
        return {
            "report": self.report,
            "reports": [list(iv) for iv in self.intervals],
            "payoff": self.payoff,
            "method": self.method.value,
        }


def scheme_to_json(scheme: Scheme) -> dict:
    if isinstance(scheme, Window):
        return {"scheme": "window", "delta": scheme.delta, "bonus": scheme.bonus}
    if isinstance(scheme, Quadratic):
        return {"scheme": "quadratic", "A": scheme.A, "B": scheme.B}
    if isinstance(scheme, Absolute):
        return {"scheme": "absolute", "A": scheme.A, "B": scheme.B}
    if isinstance(scheme, NoIncentive):
        return {"scheme": "none"}
    raise TypeError(f"not a scheme: {scheme!r}")


def scheme_from_json(obj: dict) -> Scheme:
    kind = obj.get("scheme")
    if kind == "window":
        return Window(delta=obj.get("delta", 0.02), bonus=obj.get("bonus", 1.0))
    if kind == "quadratic":
        return Quadratic(A=obj.get("A", 1.0), B=obj.get("B", 2.0))
    if kind == "absolute":
        return Absolute(A=obj.get("A", 1.0), B=obj.get("B", 2.0))
    if kind in ("none", "no_incentive", "noincentive"):
        return NoIncentive()
    raise ValueError(f"unknown scheme {kind!r}")


def expected_payoff(scheme: Scheme, dist: BeliefDistribution, r: float) -> float:
    if isinstance(scheme, NoIncentive):
        raise NoBestResponse(NO_INCENTIVE_MESSAGE)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"report {r} outside [0, 1]")
    if isinstance(scheme, Window):
        return scheme.bonus * dist.window_mass(r, scheme.delta)
    if isinstance(scheme, Quadratic):
        mu = dist.mean()
        return scheme.B - scheme.A * (dist.variance() + (mu - r) ** 2)
    if isinstance(scheme, Absolute):
        return scheme.B - scheme.A * dist.abs_loss(r)
    raise TypeError(f"not a scheme: {scheme!r}")


def optimal_report(scheme: Scheme, dist: BeliefDistribution) -> ReportSolution:
    """Profit-maximizing report(s) under ``scheme``.

    Quadratic and absolute schemes are solved in closed form (mean and median
    interval). A window over discrete atoms is solved exactly: the payoff is
    piecewise constant and each maximal run of atoms spanning at most
    ``2 * delta`` yields one interval of reports; the announced report is
    the centre of the covered atoms, which is the atom itself when only one
    atom is covered. A window over a Beta belief is found by a grid search
    at ``COARSE_STEP`` refined to ``FINE_STEP``; all reports within
    ``PAYOFF_TOL`` of the best payoff are returned.

    When several disjoint intervals tie, ``report`` comes from the smallest.
    """
    if isinstance(scheme, NoIncentive):
        raise NoBestResponse(NO_INCENTIVE_MESSAGE)
    if isinstance(scheme, Quadratic):
        mu = dist.mean()
        return ReportSolution(((mu, mu),), expected_payoff(scheme, dist, mu), Method.ANALYTIC, mu)
    if isinstance(scheme, Absolute):
        lo, hi = dist.median()
        return ReportSolution(((lo, hi),), expected_payoff(scheme, dist, lo), Method.ANALYTIC, lo)
    if isinstance(scheme, Window):
        if isinstance(dist, DiscreteBelief):
            return _discrete_window_optimum(dist, scheme)
        if isinstance(dist, BetaBelief):
            def payoff_fn(r):
                return scheme.bonus * kernels.window_payoffs(dist.alpha, dist.beta, r, scheme.delta)
            return grid_search(payoff_fn)
        raise TypeError(f"unsupported distribution {dist!r}")
    raise TypeError(f"not a scheme: {scheme!r}")


def _discrete_window_optimum(dist: DiscreteBelief, scheme: Window) -> ReportSolution:
    values = [v for v, _ in dist.atoms]
    probs = [p for _, p in dist.atoms]
    span = 2.0 * scheme.delta + 2.0 * ATOM_TOL
    runs = []
    j = 0
    for i in range(len(values)):
        j = max(j, i)
        while j + 1 < len(values) and values[j + 1] - values[i] <= span:
            j += 1
        runs.append((i, j, math.fsum(probs[i: j + 1])))
    best = max(s for _, _, s in runs)
    intervals = []
    centres = []
    for i, j, s in runs:
        if best - s > ATOM_TOL:
            continue
        lo = max(0.0, values[j] - scheme.delta)
        hi = min(1.0, values[i] + scheme.delta)
        intervals.append((min(lo, hi), max(lo, hi)))
        centres.append(0.5 * (values[i] + values[j]))
    # a run nested in a longer maximal run cannot tie (probabilities are positive)
    merged = []
    for (lo, hi), c in sorted(zip(intervals, centres)):
        if merged and lo <= merged[-1][0][1] + ATOM_TOL:
            (plo, phi), pc = merged[-1]
            merged[-1] = ((plo, max(phi, hi)), pc)
        else:
            merged.append(((lo, hi), c))
    return ReportSolution(
        tuple(iv for iv, _ in merged),
        scheme.bonus * best,
        Method.ANALYTIC,
        merged[0][1],
    )


def grid_search(
    payoff_fn: Callable[[np.ndarray], np.ndarray],
    coarse_step: float = COARSE_STEP,
    fine_step: float = FINE_STEP,
    tol: float = PAYOFF_TOL,
) -> ReportSolution:
    """Maximize a vectorized payoff over reports in [0, 1].

    The coarse grid is scanned in full; every coarse local maximum within
    ``1e-4`` of the best coarse value is refined by successive tenfold
    zooms down to ``fine_step``. Each surviving peak is widened to the
    closed interval on which the payoff stays within ``tol`` of the global
    maximum (by vectorized subdivision against the payoff level).
    """
    n = int(round(1.0 / coarse_step))
    grid = np.linspace(0.0, 1.0, n + 1)
    pay = np.asarray(payoff_fn(grid), dtype=np.float64)
    cmax = pay.max()
    left = np.concatenate([[-np.inf], pay[:-1]])
    right = np.concatenate([pay[1:], [-np.inf]])
    peaks = np.nonzero((pay >= left) & (pay >= right) & (pay >= cmax - 1e-4))[0]
    # collapse plateaus to their first index
    peaks = [int(k) for i, k in enumerate(peaks) if i == 0 or k != peaks[i - 1] + 1]

    refined = []
    for k in peaks:
        r, v = _zoom(payoff_fn, grid[k], coarse_step, fine_step)
        refined.append((r, v))
    best = max(v for _, v in refined)
    level = best - tol

    def above(r):
        return np.asarray(payoff_fn(np.atleast_1d(np.asarray(r, dtype=np.float64)))) >= level

    intervals = []
    for r, v in sorted(refined):
        if v < level:
            continue
        lo = _edge(above, r, -coarse_step)
        hi = _edge(above, r, coarse_step)
        if intervals and lo <= intervals[-1][1][1]:
            prev_r, (plo, phi) = intervals[-1]
            intervals[-1] = (prev_r, (plo, max(phi, hi)))
        else:
            intervals.append((r, (lo, hi)))
    report, _ = intervals[0]
    return ReportSolution(
        tuple(iv for _, iv in intervals), best, Method.GRID_SEARCH, report
    )


def _zoom(payoff_fn, centre, step, fine_step):
    r = centre
    v = float(payoff_fn(np.array([r]))[0])
    while step > fine_step * (1 + 1e-9):
        lo, hi = max(0.0, r - step), min(1.0, r + step)
        step /= 10.0
        pts = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
        vals = payoff_fn(pts)
        j = int(np.argmax(vals))
        if vals[j] >= v:
            r, v = float(pts[j]), float(vals[j])
    return r, v


def _edge(above, r, step, points=101):
    """Walk from ``r`` (inside) in direction ``step``, then subdivide the boundary.

    Each subdivision evaluates ``points`` reports at once and keeps the first
    inside/outside pair, so about five vectorized calls reach 1e-12.
    """
    inside = r
    while True:
        nxt = min(1.0, max(0.0, inside + step))
        if nxt == inside:
            return inside
        if not above(nxt)[0]:
            break
        inside = nxt
    outside = nxt
    while abs(outside - inside) >= 1e-12:
        pts = np.linspace(inside, outside, points)
        ok = above(pts)
        k = int(np.argmin(ok))
        if k == 0:
            break
        inside, outside = float(pts[k - 1]), float(pts[k])
    return inside


def _min_gap(dist: DiscreteBelief) -> float:
    vals = [v for v, _ in dist.atoms]
    if len(vals) < 2:
        return math.inf
    return min(b - a for a, b in zip(vals, vals[1:]))


def verify_claim1_conditions(dist: BeliefDistribution, delta: float) -> Claim1Condition:
    """Which sufficient condition for mode elicitation under a window holds.

    Discrete atoms count as separated only when every gap exceeds the full
    window width ``2 * delta``: with a smaller gap a single window can cover
    two atoms and beat the modal atom.
    """
    if isinstance(dist, DiscreteBelief):
        if _min_gap(dist) > 2.0 * delta + ATOM_TOL:
            return Claim1Condition.DISCRETE_SEPARATED
        return Claim1Condition.NOT_APPLICABLE
    if isinstance(dist, BetaBelief):
        a, b = dist.alpha, dist.beta
        if a > 1.0 and b > 1.0:
            return Claim1Condition.GLOBAL_UNIMODAL
        if a >= 1.0 and b >= 1.0 and not (a == 1.0 and b == 1.0):
            grid = np.linspace(0.0, 1.0, 10_001)
            if check_local_unimodal(grid, dist.pdf(grid), delta):
                return Claim1Condition.LOCAL_UNIMODAL
        return Claim1Condition.NOT_APPLICABLE
    raise TypeError(f"unsupported distribution {dist!r}")


def check_local_unimodal(grid: np.ndarray, dens: np.ndarray, delta: float) -> bool:
    """Numerical check of the local single-peak condition on a density grid.

    Looks for some eps in {2, 4, 8} * delta such that the density rises up to
    the grid argmax, falls after it within eps, and the lowest density inside
    the eps-neighbourhood is at least the highest outside it.
    """
    dens = np.asarray(dens, dtype=np.float64)
    if not np.all(np.isfinite(dens)) or np.ptp(dens) == 0:
        return False
    k = int(np.argmax(dens))
    m = grid[k]
    slope = np.diff(dens)
    for eps in (2 * delta, 4 * delta, 8 * delta):
        inside = (grid >= m - eps) & (grid <= m + eps)
        lo = int(np.argmax(inside))
        hi = len(grid) - 1 - int(np.argmax(inside[::-1]))
        rising = np.all(slope[lo:k] >= 0)
        falling = np.all(slope[k:hi] <= 0)
        outside = dens[~inside]
        if rising and falling and (outside.size == 0 or dens[inside].min() >= outside.max()):
            return True
    return False
