"""Two-group protest model with discrete beliefs about others' turnout.

Agents pay a participation cost of 0.165 and enjoy the realized turnout of
others, so participating pays off in expectation exactly when the mean
belief exceeds the cost: strategic complementarity holds by construction.
Reports are chosen to maximize the elicitation reward, which under a
window bonus tracks the mode rather than the mean.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .distributions import BeliefDistribution, DiscreteBelief
from .elicitation import Scheme, Window, expected_payoff, optimal_report
from .updating import UniformSignal, uniform_window_update

DEFAULT_COST = 0.165
DEFAULT_REWARD = 10.0
DEFAULT_REPORT_WINDOW = 0.02

B1 = DiscreteBelief(((0.0, 0.30), (0.12, 0.10), (0.17, 0.15), (0.22, 0.10), (0.30, 0.35)))
B2 = DiscreteBelief(((0.05, 0.35), (0.08, 0.20), (0.12, 0.20), (0.17, 0.25)))
DEFAULT_SIGNAL = UniformSignal(0.17, 0.10)


@dataclass(frozen=True)
class AgentGroup:
    label: str
    beliefs: DiscreteBelief
    cost: float = DEFAULT_COST
    reward: float = DEFAULT_REWARD
    report_window: float = DEFAULT_REPORT_WINDOW

    def __post_init__(self):
        if not 0.0 < self.cost < 1.0:
            raise ValueError(f"cost must lie in (0, 1), got {self.cost}")
        if not self.report_window > 0:
            raise ValueError("report_window must be positive")

    @property
    def scheme(self) -> Window:
        return Window(self.report_window, self.reward)


def default_groups() -> list[AgentGroup]:
    return [AgentGroup("group1", B1), AgentGroup("group2", B2)]


class Verdict(str, enum.Enum):
    REJECTS_SC = "RejectsSC"
    CONSISTENT_WITH_SC = "ConsistentWithSC"


@dataclass(frozen=True)
class WaveOutcome:
    mean: float
    mode: float
    report: float
    participates: bool


@dataclass(frozen=True)
class GroupOutcome:
    label: str
    prior: WaveOutcome
    posterior: WaveOutcome

    @property
    def report_change(self) -> float:
        return self.posterior.report - self.prior.report

    @property
    def participation_change(self) -> int:
        return int(self.posterior.participates) - int(self.prior.participates)


@dataclass(frozen=True)
class StylizedOutcome:
    groups: tuple[GroupOutcome, ...]
    naive_sc_verdict: Verdict

    def group(self, label: str) -> GroupOutcome:
        for g in self.groups:
            if g.label == label:
                return g
        raise KeyError(label)

    def table_rows(self) -> list[tuple[str, str, float, float]]:
        rows = []
        for g in self.groups:
            rows.append((g.label, "mean", g.prior.mean, g.posterior.mean))
            rows.append((g.label, "mode", g.prior.mode, g.posterior.mode))
            rows.append((g.label, "report", g.prior.report, g.posterior.report))
        return rows

    def table_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["group", "statistic", "prior", "posterior"])
        for label, stat, pr, po in self.table_rows():
            w.writerow([label, stat, repr(pr), repr(po)])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "naive_sc_verdict": self.naive_sc_verdict.value,
            "groups": [
                {
                    "label": g.label,
                    "prior": vars(g.prior),
                    "posterior": vars(g.posterior),
                }
                for g in self.groups
            ],
        }


@dataclass(frozen=True)
class SplitOutcome:
    control: GroupOutcome
    treated: GroupOutcome


def participation_decision(beliefs: BeliefDistribution, cost: float = DEFAULT_COST) -> bool:
    """Attend iff the mean belief strictly exceeds the cost."""
    return beliefs.mean() > cost


def expected_utility(
    beliefs: BeliefDistribution,
    participate: bool,
    report: float,
    cost: float = DEFAULT_COST,
    reward: float = DEFAULT_REWARD,
    report_window: float = DEFAULT_REPORT_WINDOW,
) -> float:
    """E[P (others - cost) + reward * 1{|report - others| <= window}]."""
    attend = (beliefs.mean() - cost) if participate else 0.0
    return attend + expected_payoff(Window(report_window, reward), beliefs, report)


def _wave(beliefs: DiscreteBelief, cost: float, scheme: Scheme) -> WaveOutcome:
    return WaveOutcome(
        mean=beliefs.mean(),
        mode=beliefs.mode(),
        report=optimal_report(scheme, beliefs).report,
        participates=participation_decision(beliefs, cost),
    )


def _group_outcome(group: AgentGroup, sig: Optional[UniformSignal], scheme: Optional[Scheme]):
    scheme = scheme if scheme is not None else group.scheme
    prior = _wave(group.beliefs, group.cost, scheme)
    if sig is None:
        return GroupOutcome(group.label, prior, prior)
    post = uniform_window_update(group.beliefs, sig)
    return GroupOutcome(group.label, prior, _wave(post, group.cost, scheme))


def naive_verdict(outcomes: Sequence[GroupOutcome]) -> Verdict:
    """What an observer reading reports as mean beliefs would conclude.

    Complementarity is rejected when some group's report moved one way while
    its participation moved the other.
    """
    for g in outcomes:
        dr, dp = g.report_change, g.participation_change
        if abs(dr) > 1e-12 and dp != 0 and (dr > 0) != (dp > 0):
            return Verdict.REJECTS_SC
    return Verdict.CONSISTENT_WITH_SC


def run_stylized(
    groups: Optional[Sequence[AgentGroup]] = None,
    sig: UniformSignal = DEFAULT_SIGNAL,
    scheme: Optional[Scheme] = None,
) -> StylizedOutcome:
    """Prior and posterior beliefs, reports and turnout for every group.

    ``scheme`` overrides each group's own window scheme, e.g. to compare
    against quadratic elicitation.
    """
    groups = default_groups() if groups is None else list(groups)
    outcomes = tuple(_group_outcome(g, sig, scheme) for g in groups)
    return StylizedOutcome(outcomes, naive_verdict(outcomes))


def control_treatment_split(
    group: AgentGroup, sig: UniformSignal = DEFAULT_SIGNAL, scheme: Optional[Scheme] = None
) -> SplitOutcome:
    control = _group_outcome(group, None, scheme)
    treated = _group_outcome(group, sig, scheme)
    return SplitOutcome(control, treated)
