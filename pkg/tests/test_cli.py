import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from elicitkit import distributions as dists
from elicitkit.cli import main
from elicitkit.elicitation import NO_INCENTIVE_MESSAGE
from elicitkit.hierarchical import ROUNDED_HYPER, quantify_opposite_share
from elicitkit.identification import PanelData
from elicitkit.stylized import B1

BETA = '{"type":"beta","alpha":1.5,"beta":4}'
B1_JSON = json.dumps(dists.to_json(B1))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestReport:
    def test_quadratic_mean(self, capsys):
        code, out, _ = run(capsys, "report", "--dist", BETA, "--scheme", '{"scheme":"quadratic"}')
        assert code == 0
        assert json.loads(out)["report"] == pytest.approx(0.272727, abs=1e-6)

    def test_window_modal_atom(self, capsys):
        code, out, _ = run(capsys, "report", "--dist", B1_JSON, "--scheme", '{"scheme":"window","delta":0.02}')
        res = json.loads(out)
        assert code == 0
        assert res["report"] == 0.30
        assert res["claim1_condition"] == "DiscreteSeparated"

    def test_no_incentive_exit_3(self, capsys):
        code, out, err = run(capsys, "report", "--dist", BETA, "--scheme", '{"scheme":"none"}')
        assert code == 3 and out == ""
        assert NO_INCENTIVE_MESSAGE in err

    def test_bad_json_exit_2(self, capsys):
        code, _, err = run(capsys, "report", "--dist", "{nope", "--scheme", '{"scheme":"quadratic"}')
        assert code == 2 and "JSON" in err

    def test_invalid_distribution_exit_2(self, capsys):
        bad = '{"type":"discrete","atoms":[[0.1,0.3]]}'
        code, _, _ = run(capsys, "report", "--dist", bad, "--scheme", '{"scheme":"quadratic"}')
        assert code == 2

    def test_missing_flag_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["report", "--dist", BETA])
        assert exc.value.code == 2

    def test_file_arguments(self, capsys, tmp_path):
        d = tmp_path / "d.json"
        d.write_text(BETA)
        s = tmp_path / "s.json"
        s.write_text('{"scheme":"absolute","A":1,"B":2}')
        out_file = tmp_path / "r.json"
        code, out, _ = run(capsys, "report", "--dist", str(d), "--scheme", str(s), "--out", str(out_file))
        assert code == 0 and out == ""
        assert json.loads(out_file.read_text())["method"] == "Analytic"


class TestUpdate:
    def test_beta_binomial(self, capsys):
        code, out, _ = run(capsys, "update", "--prior", BETA, "--signal", '{"signal":"binomial","x_hat":0.17,"n":1234}')
        res = json.loads(out)
        assert code == 0
        assert dists.from_json(res["posterior"]).alpha == pytest.approx(211.28)
        assert res["update"]["mean_direction"] == "Down" and res["update"]["mode_direction"] == "Up"

    def test_uniform_window(self, capsys):
        code, out, _ = run(capsys, "update", "--prior", B1_JSON, "--signal", '{"signal":"uniform","value":0.17,"half_width":0.1}')
        assert code == 0
        assert json.loads(out)["update"]["post_mean"] == pytest.approx(0.17)

    def test_empty_posterior_exit_3(self, capsys):
        code, _, _ = run(capsys, "update", "--prior", B1_JSON, "--signal", '{"signal":"uniform","value":0.6,"half_width":0.05}')
        assert code == 3

    def test_mismatch_exit_2(self, capsys):
        code, _, _ = run(capsys, "update", "--prior", BETA, "--signal", '{"signal":"uniform","value":0.6,"half_width":0.05}')
        assert code == 2


class TestStylized:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "stylized")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[2] == ["group1", "mode", "0.3", "0.17"]

    def test_verdicts(self, capsys):
        _, out, _ = run(capsys, "stylized", "--json")
        assert json.loads(out)["naive_sc_verdict"] == "RejectsSC"
        _, out, _ = run(capsys, "stylized", "--json", "--scheme", '{"scheme":"quadratic"}')
        assert json.loads(out)["naive_sc_verdict"] == "ConsistentWithSC"

    def test_out_dir(self, capsys, tmp_path):
        run(capsys, "stylized", "--out", str(tmp_path))
        assert (tmp_path / "table1.csv").exists() and (tmp_path / "claims.json").exists()


class TestFit:
    def test_fit(self, capsys, tmp_path):
        x = np.random.default_rng(0).beta(2.0, 5.0, 3000)
        path = tmp_path / "modes.csv"
        path.write_text("report\n" + "\n".join(repr(float(v)) for v in x) + "\n")
        code, out, _ = run(capsys, "fit", "--data", str(path))
        res = json.loads(out)
        assert code == 0
        assert res["ci_a"][0] < 2.0 < res["ci_a"][1]

    def test_degenerate_exit_3(self, capsys, tmp_path):
        path = tmp_path / "modes.csv"
        path.write_text("report\n" + "0.3\n" * 20)
        assert run(capsys, "fit", "--data", str(path))[0] == 3

    def test_bad_header_exit_2(self, capsys, tmp_path):
        path = tmp_path / "modes.csv"
        path.write_text("value\n0.2\n")
        assert run(capsys, "fit", "--data", str(path))[0] == 2


class TestQuantify:
    def test_matches_library(self, capsys):
        code, out, _ = run(capsys, "quantify", "--seed", "4", "--R", "5000", "--reading", "rounded")
        res = json.loads(out)
        assert code == 0
        assert res["share"] == quantify_opposite_share(ROUNDED_HYPER, R=5000, seed=4).share
        assert set(res) >= {"share", "R", "seed", "params"}

    def test_both_readings(self, capsys):
        _, out, _ = run(capsys, "quantify", "--seed", "0", "--R", "2000")
        assert set(json.loads(out)) == {"rounded", "raw"}

    def test_seed_required(self):
        with pytest.raises(SystemExit) as exc:
            main(["quantify"])
        assert exc.value.code == 2

    def test_half_given_hyper(self, capsys):
        assert run(capsys, "quantify", "--seed", "0", "--ell", "2")[0] == 2


class TestIdentify:
    def test_window_change_negative(self, capsys, tmp_path):
        code, out, _ = run(capsys, "identify", "--scheme", '{"scheme":"window","delta":0.02,"bonus":10}',
                           "--seed", "0", "--regressor", "ReportChange", "--out", str(tmp_path))
        assert code == 0
        assert json.loads(out)["delta2"] < 0
        panel = PanelData.from_csv((tmp_path / "panel.csv").read_text())
        assert len(panel) == 200

    def test_quadratic_level_positive(self, capsys):
        _, out, _ = run(capsys, "identify", "--scheme", '{"scheme":"quadratic"}', "--seed", "0")
        assert json.loads(out)["delta2"] > 0

    def test_hyper_population(self, capsys):
        code, out, _ = run(capsys, "identify", "--scheme", '{"scheme":"quadratic"}', "--seed", "1",
                           "--population", '{"ell":1,"q":3}', "--agents", "50")
        assert code == 0 and json.loads(out)["n_obs"] == 50

    def test_bad_population(self, capsys):
        assert run(capsys, "identify", "--scheme", '{"scheme":"quadratic"}', "--seed", "1", "--population", "[1]")[0] == 2


class TestFigureAndDefaults:
    def test_grid(self, capsys):
        _, out, _ = run(capsys, "figure1")
        rows = list(csv.reader(io.StringIO(out)))[1:]
        x = np.array([float(r[0]) for r in rows])
        y = np.array([float(r[1]) for r in rows])
        assert x.size == 1001 and y[0] == 0.0
        trapezoid = getattr(np, "trapezoid", None) or np.trapz
        assert trapezoid(y, x) == pytest.approx(1.0, abs=1e-4)

    def test_sidecar(self, capsys):
        _, out, _ = run(capsys, "figure1", "--json")
        side = json.loads(out)
        assert side["mode"] == pytest.approx(0.142857, abs=1e-6)
        assert side["mean"] == pytest.approx(0.272727, abs=1e-6)
        assert side["intervention"] == 0.17

    def test_defaults(self, capsys):
        d = json.loads(run(capsys, "defaults")[1])
        assert (d["delta"], d["n"], d["R"], d["bonus"], d["cost"]) == (0.02, 1234, 100000, 10.0, 0.165)


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["quantify", "--seed", "3", "--R", "3000"],
        ["identify", "--scheme", '{"scheme":"window"}', "--seed", "2", "--population", '{"ell":1,"q":3}', "--agents", "40"],
    ])
    def test_byte_identical(self, capsys, argv):
        first = run(capsys, *argv)[1]
        assert run(capsys, *argv)[1] == first

    def test_module_entry_point(self):
        out = subprocess.run([sys.executable, "-m", "elicitkit", "defaults"], capture_output=True, text=True, check=True)
        assert json.loads(out.stdout)["x_hat"] == 0.17
