import csv
import io

import numpy as np
import pytest

from elicitkit.distributions import DiscreteBelief
from elicitkit.elicitation import Quadratic, Window
from elicitkit.stylized import (
    B1,
    B2,
    AgentGroup,
    Verdict,
    control_treatment_split,
    expected_utility,
    naive_verdict,
    participation_decision,
    run_stylized,
)
from elicitkit.updating import UniformSignal, uniform_window_update

SIG = UniformSignal(0.17, 0.10)


class TestParticipation:
    def test_group_one_prior_stays_home(self, b1):
        assert not participation_decision(b1, 0.165)

    def test_group_one_posterior_attends(self, b1):
        assert participation_decision(uniform_window_update(b1, SIG), 0.165)

    def test_group_two_posterior_stays_home(self, b2):
        assert not participation_decision(uniform_window_update(b2, SIG), 0.165)

    def test_tie_does_not_attend(self):
        assert not participation_decision(DiscreteBelief(((0.165, 1.0),)), 0.165)

    def test_monotone_in_mean(self):
        costs = np.linspace(0.01, 0.99, 99)
        for c in costs:
            beliefs = [DiscreteBelief(((v, 1.0),)) for v in np.linspace(0, 1, 51)]
            flags = [participation_decision(bl, c) for bl in beliefs]
            assert flags == sorted(flags)

    def test_utility_rises_with_mean(self):
        lo = expected_utility(DiscreteBelief(((0.2, 1.0),)), True, 0.5)
        hi = expected_utility(DiscreteBelief(((0.4, 1.0),)), True, 0.5)
        assert hi - lo == pytest.approx(0.2)

    def test_utility_includes_report_bonus(self, b1):
        assert expected_utility(b1, False, 0.30) == pytest.approx(10 * 0.35)
        assert expected_utility(b1, True, 0.30) == pytest.approx(0.1645 - 0.165 + 3.5)

    def test_group_validation(self, b1):
        with pytest.raises(ValueError):
            AgentGroup("g", b1, cost=1.5)
        with pytest.raises(ValueError):
            AgentGroup("g", b1, report_window=0.0)


class TestTableOne:
    def test_group_one_cells(self):
        g = run_stylized().group("group1")
        assert g.prior.mean == pytest.approx(0.1645, abs=1e-12)
        assert g.prior.mode == 0.30
        assert g.posterior.mean == pytest.approx(0.17, abs=1e-12)
        assert g.posterior.mode == 0.17

    def test_group_two_cells(self):
        g = run_stylized().group("group2")
        assert g.prior.mean == pytest.approx(0.10, abs=1e-12)
        assert g.prior.mode == 0.05
        assert g.posterior.mode == 0.17
        assert g.posterior.mean == pytest.approx(0.0825 / 0.65, abs=1e-15)
        assert g.posterior.mean == pytest.approx(0.127, abs=5e-4)

    def test_group_one_reports_follow_mode(self):
        g = run_stylized().group("group1")
        assert (g.prior.report, g.posterior.report) == (0.30, 0.17)
        assert (g.prior.participates, g.posterior.participates) == (False, True)

    def test_group_two_reports_cover_neighbouring_atoms(self):
        # atoms only 0.03 apart fit in one 0.04-wide window, so the report
        # sits between them rather than on the mode
        g = run_stylized().group("group2")
        assert g.prior.report == pytest.approx(0.065, abs=1e-15)
        assert g.posterior.report == pytest.approx(0.10, abs=1e-15)
        assert g.report_change > 0
        assert g.participation_change == 0

    def test_csv(self):
        rows = list(csv.reader(io.StringIO(run_stylized().table_csv())))
        assert rows[0] == ["group", "statistic", "prior", "posterior"]
        assert len(rows) == 7
        assert rows[2] == ["group1", "mode", "0.3", "0.17"]

    def test_json(self):
        out = run_stylized().to_json()
        assert out["naive_sc_verdict"] == "RejectsSC"
        assert out["groups"][0]["posterior"]["participates"] is True


class TestNaiveVerdict:
    def test_window_rejects(self):
        assert run_stylized().naive_sc_verdict is Verdict.REJECTS_SC

    def test_quadratic_consistent(self):
        out = run_stylized(scheme=Quadratic())
        assert out.naive_sc_verdict is Verdict.CONSISTENT_WITH_SC
        for g in out.groups:
            assert g.prior.report == pytest.approx(g.prior.mean, abs=1e-15)
            assert g.posterior.report == pytest.approx(g.posterior.mean, abs=1e-15)

    def test_group_one_split(self):
        split = control_treatment_split(AgentGroup("group1", B1))
        assert (split.control.prior.report, split.control.posterior.report) == (0.30, 0.30)
        assert not split.control.posterior.participates
        assert (split.treated.prior.report, split.treated.posterior.report) == (0.30, 0.17)
        assert split.treated.posterior.participates

    def test_group_two_split(self):
        split = control_treatment_split(AgentGroup("group2", B2))
        assert split.treated.report_change > 0
        assert not split.treated.posterior.participates

    def test_zero_width_signal_on_mode(self, b1):
        split = control_treatment_split(AgentGroup("group1", b1), UniformSignal(0.30, 0.0))
        assert split.treated.posterior.mean == 0.30

    def test_symmetric_group_consistent(self):
        sym = DiscreteBelief(((0.1, 0.25), (0.2, 0.5), (0.3, 0.25)))
        out = run_stylized([AgentGroup("sym", sym)], UniformSignal(0.2, 0.1))
        assert out.naive_sc_verdict is Verdict.CONSISTENT_WITH_SC

    def test_verdict_needs_opposite_nonzero_moves(self):
        g = run_stylized().group("group2")
        assert naive_verdict([g]) is Verdict.CONSISTENT_WITH_SC

    def test_scheme_override_used(self):
        out = run_stylized(scheme=Window(0.02, 1.0))
        assert out.group("group1").posterior.report == 0.17
