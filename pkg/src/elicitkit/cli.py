"""Command-line interface.

Exit codes: 0 success, 2 bad input, 3 domain error (no best response,
empty posterior, degenerate data, ...).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import distributions as dists
from .distributions import BetaBelief, DiscreteBelief
from .elicitation import (
    Window,
    optimal_report,
    scheme_from_json,
    verify_claim1_conditions,
)
from .errors import DomainError
from .hierarchical import (
    RAW_HYPER,
    ROUNDED_HYPER,
    HyperParams,
    ModeDataset,
    fit_mle,
    quantify_opposite_share,
)
from .identification import ExperimentConfig, Regressor, estimate, simulate_experiment
from .stylized import B1, B2, DEFAULT_COST, DEFAULT_REWARD, DEFAULT_SIGNAL, run_stylized
from .updating import (
    BinomialSignal,
    UniformSignal,
    beta_binomial_update,
    opposite_direction,
    signal_from_json,
    uniform_window_update,
)

EXIT_INPUT = 2
EXIT_DOMAIN = 3

DEFAULTS = {
    "delta": 0.02,
    "bonus": DEFAULT_REWARD,
    "currency": "HKD",
    "x_hat": 0.17,
    "n": 1234,
    "R": 100_000,
    "cost": DEFAULT_COST,
}

FIGURE1 = BetaBelief(1.5, 4.0)


class InputError(Exception):
    pass


def _load_json(text: str):
    """Inline JSON, or a path to a JSON file."""
    if os.path.exists(text):
        text = Path(text).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse JSON: {exc}") from exc


def _parse(fn, obj, what):
    try:
        return fn(obj)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"invalid {what}: {exc}") from exc


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _write_files(out_dir: str, files: dict[str, str]):
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (d / name).write_text(text, encoding="utf-8", newline="\n")


def cmd_report(args):
    dist = _parse(dists.from_json, _load_json(args.dist), "distribution")
    scheme = _parse(scheme_from_json, _load_json(args.scheme), "scheme")
    sol = optimal_report(scheme, dist)
    out = sol.to_json()
    if isinstance(scheme, Window):
        out["claim1_condition"] = verify_claim1_conditions(dist, scheme.delta).value
    _emit(_dumps(out) + "\n", args.out)


def cmd_update(args):
    prior = _parse(dists.from_json, _load_json(args.prior), "prior")
    sig = _parse(signal_from_json, _load_json(args.signal), "signal")
    if isinstance(prior, BetaBelief) and isinstance(sig, BinomialSignal):
        post = beta_binomial_update(prior, sig)
        out = {"posterior": post.to_json()}
        if prior.alpha > 1 and prior.beta > 1:
            out["update"] = opposite_direction(prior, sig).to_json()
        else:
            out["update"] = {"prior_mean": prior.mean(), "post_mean": post.mean()}
    elif isinstance(prior, DiscreteBelief) and isinstance(sig, UniformSignal):
        post = uniform_window_update(prior, sig)
        out = {
            "posterior": post.to_json(),
            "update": {"prior_mean": prior.mean(), "post_mean": post.mean()},
        }
    else:
        raise InputError(
            f"a {type(prior).__name__} prior cannot be updated with a {type(sig).__name__}"
        )
    _emit(_dumps(out) + "\n", args.out)


def cmd_stylized(args):
    scheme = _parse(scheme_from_json, _load_json(args.scheme), "scheme") if args.scheme else None
    outcome = run_stylized(sig=DEFAULT_SIGNAL, scheme=scheme)
    table = outcome.table_csv()
    claims = _dumps(outcome.to_json()) + "\n"
    if args.out:
        _write_files(args.out, {"table1.csv": table, "claims.json": claims})
    sys.stdout.write(claims if args.json else table)


def _read_reports(path: str) -> np.ndarray:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or "report" not in reader.fieldnames:
                raise InputError("CSV must have a 'report' header column")
            return np.array([float(row["report"]) for row in reader])
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(f"non-numeric report: {exc}") from exc


def cmd_fit(args):
    data = _parse(ModeDataset, _read_reports(args.data), "report data")
    res = fit_mle(data)
    out = res.to_json()
    out["n_clamped"] = data.n_clamped
    _emit(_dumps(out) + "\n", args.out)


def cmd_quantify(args):
    sig = _parse(lambda _: BinomialSignal(args.x_hat, args.n), None, "signal")
    if args.ell is not None or args.q is not None:
        if args.ell is None or args.q is None:
            raise InputError("--ell and --q must be given together")
        readings = {"custom": _parse(lambda _: HyperParams(args.ell, args.q), None, "hyperparameters")}
    elif args.reading == "both":
        readings = {"rounded": ROUNDED_HYPER, "raw": RAW_HYPER}
    else:
        readings = {args.reading: ROUNDED_HYPER if args.reading == "rounded" else RAW_HYPER}
    results = {
        name: quantify_opposite_share(h, sig, args.delta, args.R, args.seed).to_json()
        for name, h in readings.items()
    }
    out = next(iter(results.values())) if len(results) == 1 else results
    _emit(_dumps(out) + "\n", args.out)


def _population(text: str):
    if text == "stylized":
        return (B1, B2)
    obj = _load_json(text)
    if isinstance(obj, dict) and "ell" in obj:
        return _parse(lambda o: HyperParams(o["ell"], o["q"]), obj, "hyperparameters")
    if isinstance(obj, list):
        return tuple(_parse(dists.from_json, o, "population member") for o in obj)
    raise InputError("population must be 'stylized', {'ell':..,'q':..} or a list of distributions")


def cmd_identify(args):
    population = _population(args.population)
    scheme = _parse(scheme_from_json, _load_json(args.scheme), "scheme")
    if args.signal:
        sig = _parse(signal_from_json, _load_json(args.signal), "signal")
    elif isinstance(population, HyperParams) or isinstance(population[0], BetaBelief):
        sig = BinomialSignal(DEFAULTS["x_hat"], DEFAULTS["n"])
    else:
        sig = DEFAULT_SIGNAL
    cfg = _parse(
        lambda _: ExperimentConfig(
            population=population,
            scheme=scheme,
            signal=sig,
            cost=args.cost,
            treated_share=args.treated_share,
            agents=args.agents,
            seed=args.seed,
        ),
        None,
        "experiment config",
    )
    try:
        panel = simulate_experiment(cfg)
    except TypeError as exc:
        raise InputError(str(exc)) from exc
    res = estimate(panel, Regressor(args.regressor))
    summary = _dumps(res.to_json()) + "\n"
    if args.out:
        _write_files(args.out, {"panel.csv": panel.to_csv(), "regression.json": summary})
    sys.stdout.write(summary)


def figure1_data() -> tuple[str, dict]:
    x = np.linspace(0.0, 1.0, 1001)
    dens = FIGURE1.pdf(x)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "density"])
    for xi, di in zip(x, dens):
        w.writerow([repr(float(xi)), repr(float(di))])
    post = beta_binomial_update(FIGURE1, BinomialSignal(DEFAULTS["x_hat"], DEFAULTS["n"]))
    sidecar = {
        "alpha": FIGURE1.alpha,
        "beta": FIGURE1.beta,
        "mode": FIGURE1.mode(),
        "mean": FIGURE1.mean(),
        "intervention": DEFAULTS["x_hat"],
        "posterior_mode": post.mode(),
        "posterior_mean": post.mean(),
    }
    return buf.getvalue(), sidecar


def cmd_figure1(args):
    table, sidecar = figure1_data()
    side = _dumps(sidecar) + "\n"
    if args.out:
        _write_files(args.out, {"figure1.csv": table, "figure1.json": side})
    sys.stdout.write(side if args.json else table)


def cmd_defaults(args):
    sys.stdout.write(_dumps(DEFAULTS) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="elicitkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("report", help="profit-maximizing report for a belief and scheme")
    s.add_argument("--dist", required=True, help="distribution JSON (inline or path)")
    s.add_argument("--scheme", required=True, help="scheme JSON (inline or path)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("update", help="Bayesian update of a prior by a signal")
    s.add_argument("--prior", required=True)
    s.add_argument("--signal", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_update)

    s = sub.add_parser("stylized", help="two-group protest model (table as CSV, verdicts as JSON)")
    s.add_argument("--scheme", help="override the window scheme, e.g. quadratic")
    s.add_argument("--json", action="store_true", help="print the verdict JSON instead of the table")
    s.add_argument("--out", help="directory for table1.csv and claims.json")
    s.set_defaults(func=cmd_stylized)

    s = sub.add_parser("fit", help="MLE of the mode distribution from a CSV of reports")
    s.add_argument("--data", required=True, help="CSV with a 'report' column")
    s.add_argument("--out")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("quantify", help="Monte Carlo share of opposite-direction updaters")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--reading", choices=("rounded", "raw", "both"), default="both")
    s.add_argument("--ell", type=float)
    s.add_argument("--q", type=float)
    s.add_argument("--R", type=int, default=DEFAULTS["R"])
    s.add_argument("--x-hat", type=float, default=DEFAULTS["x_hat"])
    s.add_argument("--n", type=float, default=DEFAULTS["n"])
    s.add_argument("--delta", type=float, default=DEFAULTS["delta"])
    s.add_argument("--out")
    s.set_defaults(func=cmd_quantify)

    s = sub.add_parser("identify", help="simulate the experiment and run the regression")
    s.add_argument("--scheme", required=True)
    s.add_argument("--population", default="stylized",
                   help="'stylized', hyperparameter JSON, or a JSON list of distributions")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--regressor", choices=[r.value for r in Regressor], default="PostReport")
    s.add_argument("--signal")
    s.add_argument("--agents", type=int, default=200)
    s.add_argument("--treated-share", type=float, default=0.5)
    s.add_argument("--cost", type=float, default=DEFAULT_COST)
    s.add_argument("--out", help="directory for panel.csv and regression.json")
    s.set_defaults(func=cmd_identify)

    s = sub.add_parser("figure1", help="density grid of the calibration belief")
    s.add_argument("--json", action="store_true", help="print the sidecar JSON instead of the grid")
    s.add_argument("--out", help="directory for figure1.csv and figure1.json")
    s.set_defaults(func=cmd_figure1)

    s = sub.add_parser("defaults", help="print the experiment defaults")
    s.set_defaults(func=cmd_defaults)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
