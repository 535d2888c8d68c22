"""Command line entry point.

    pi3nn run --gen cubic1d --gammas 0.9,0.95,0.99 --seed 7 --out runs/cubic
    pi3nn run --csv data.csv --target y --gammas 0.95 --out runs/mine
    pi3nn ood-bench --out runs/ood

Outputs are pure functions of the arguments and input files. Failures print
one line ``error: <category>: <message>`` to stderr and exit with 2 (bad
configuration), 3 (bad data) or 4 (numerical failure).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import metrics
from .data import gen_cubic_1d, gen_cubic_10d, load_csv, split
from .errors import ConfigError, DataError, PI3NNError
from .nnet import MlpSpec, TrainConfig
from .pipeline import OodConfig, confidence_scores, fit, predict_intervals, solve_gammas

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _exit_code(err: Exception) -> int:
    if isinstance(err, ConfigError):
        return EXIT_CONFIG
    if isinstance(err, (DataError, OSError)):
        return EXIT_DATA
    return EXIT_NUMERIC


def parse_gammas(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse gamma list {text!r}") from None
    if not vals:
        raise ConfigError("empty gamma list")
    for g in vals:
        if not 0 < g < 1:
            raise ConfigError(f"gamma {g} outside (0, 1)")
    return sorted(set(vals))


def parse_widths(text: str) -> tuple[int, ...]:
    try:
        widths = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"cannot parse hidden widths {text!r}") from None
    return widths


def _add_training_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hidden", default="100", help="comma list of hidden layer widths")
    p.add_argument("--epochs", type=int, default=TrainConfig.epochs)
    p.add_argument("--lr", type=float, default=TrainConfig.learning_rate)
    p.add_argument("--batch-size", type=int, default=None, help="default: full batch")
    p.add_argument("--l1", type=float, default=0.0)
    p.add_argument("--l2", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ood-factor", type=float, default=10.0, help="output bias multiplier c")
    p.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pi3nn", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train, solve confidence levels, write bands")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", choices=["cubic1d", "cubic10d"])
    src.add_argument("--csv", type=Path)
    run.add_argument("--target", default=None, help="target column name (CSV input)")
    run.add_argument("--test-fraction", type=float, default=0.1, help="CSV hold-out share; 0 keeps all rows")
    run.add_argument("--n-train", type=int, default=2000)
    run.add_argument("--n-test", type=int, default=1000)
    run.add_argument("--gammas", default="0.9,0.95,0.99")
    run.add_argument("--ood", action="store_true", help="large output-bias initialisation")
    _add_training_args(run)

    bench = sub.add_parser("ood-bench", help="10-D cubic OOD experiment, OOD option on and off")
    bench.add_argument("--n-train", type=int, default=5000)
    bench.add_argument("--n-ood", type=int, default=1000)
    bench.add_argument("--ood-mean", type=float, default=2.0)
    bench.add_argument("--gamma", type=float, default=0.9)
    bench.add_argument("--bins", type=int, default=30)
    bench.add_argument("--separation-threshold", type=float, default=1.5)
    _add_training_args(bench)
    return parser


def _configs(args):
    spec = MlpSpec(1, parse_widths(args.hidden), l1=args.l1, l2=args.l2, seed=args.seed)
    cfg = TrainConfig(args.lr, args.epochs, args.batch_size, args.seed)
    return spec, cfg


def _write_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _gamma_tag(g: float) -> str:
    return repr(float(g))


def cmd_run(args) -> int:
    gammas = parse_gammas(args.gammas)
    spec, cfg = _configs(args)
    if args.gen == "cubic1d":
        train, test = gen_cubic_1d(args.n_train, args.n_test, seed=args.seed)
    elif args.gen == "cubic10d":
        train = gen_cubic_10d(args.n_train, 0.0, seed=args.seed)
        test = gen_cubic_10d(args.n_test, 0.0, seed=args.seed + 1)
    else:
        if args.target is None:
            raise ConfigError("--target is required with --csv")
        target = int(args.target) if args.target.isdigit() else args.target
        data = load_csv(args.csv, target)
        if args.test_fraction == 0:
            train, test = data, None
        else:
            train, test = split(data, args.test_fraction, seed=args.seed)

    spec = MlpSpec(train.d, spec.hidden_widths, l1=spec.l1, l2=spec.l2, seed=spec.seed)
    ood = OodConfig(enabled=args.ood, c=args.ood_factor)
    triplet = fit(train, spec, cfg, ood)
    sols = solve_gammas(triplet, train, gammas)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    triplet.save(out / "triplet.json")

    evaluation = test if test is not None else train
    bands = predict_intervals(triplet, sols, evaluation.x)
    train_bands = predict_intervals(triplet, sols, train.x)
    for band in bands:
        band.to_csv(out / f"band_gamma_{_gamma_tag(band.gamma)}.csv", evaluation.x, evaluation.feature_names)

    non_crossing = all(
        np.all(b.upper >= a.upper) and np.all(b.lower <= a.lower) for a, b in zip(bands, bands[1:])
    )
    report = {
        "config": {
            "source": args.gen or str(args.csv),
            "gammas": gammas,
            "hidden": list(spec.hidden_widths),
            "epochs": cfg.epochs,
            "learning_rate": cfg.learning_rate,
            "batch_size": cfg.batch_size,
            "l1": spec.l1,
            "l2": spec.l2,
            "seed": args.seed,
            "ood": ood.enabled,
            "ood_factor": ood.c,
        },
        "n_train": train.n,
        "n_eval": evaluation.n,
        "eval_set": "test" if test is not None else "train",
        "nu": triplet.nu,
        "solutions": [{"gamma": s.gamma, "alpha": s.alpha, "beta": s.beta} for s in sols],
        "train_coverage": [vars(metrics.coverage_report(b, train.y)) for b in train_bands],
        "eval_coverage": [vars(metrics.coverage_report(b, evaluation.y)) for b in bands],
        "non_crossing": bool(non_crossing),
    }
    _write_json(report, out / "report.json")
    return 0


def _bench_mode(train, ood_set, spec, cfg, ood, gamma, bins, threshold, out: Path, tag: str) -> dict:
    triplet = fit(train, spec, cfg, ood)
    sol = solve_gammas(triplet, train, [gamma])[0]
    ind_band = predict_intervals(triplet, [sol], train.x)[0]
    ood_band = predict_intervals(triplet, [sol], ood_set.x)[0]
    ind_w = metrics.width_distribution(ind_band, bins)
    ood_w = metrics.width_distribution(ood_band, bins)
    ind_w.histogram_to_csv(out / f"widths_{tag}_ind.csv")
    ood_w.histogram_to_csv(out / f"widths_{tag}_ood.csv")
    ind_s = confidence_scores(triplet, sol, train, train.x)
    ood_s = confidence_scores(triplet, sol, train, ood_set.x)
    return {
        "alpha": sol.alpha,
        "beta": sol.beta,
        "confidence": {
            "ind_mean": float(ind_s.mean()),
            "ind_std": float(ind_s.std()),
            "ood_mean": float(ood_s.mean()),
            "ood_std": float(ood_s.std()),
        },
        "width_ind": ind_w.to_dict(),
        "width_ood": ood_w.to_dict(),
        "separation": metrics.separation_report(ind_w, ood_w, threshold).to_dict(),
    }


def cmd_ood_bench(args) -> int:
    if not 0 < args.gamma < 1:
        raise ConfigError(f"gamma {args.gamma} outside (0, 1)")
    if args.ood_factor < 0:
        raise ConfigError("--ood-factor must be >= 0")
    spec, cfg = _configs(args)
    spec = MlpSpec(10, spec.hidden_widths, l1=spec.l1, l2=spec.l2, seed=spec.seed)
    train = gen_cubic_10d(args.n_train, 0.0, seed=args.seed)
    ood_set = gen_cubic_10d(args.n_ood, args.ood_mean, seed=args.seed + 1)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    # c = 0 switches the bias initialisation off for the "on" run as well
    on = OodConfig(enabled=args.ood_factor > 0, c=args.ood_factor or 1.0)
    modes = {"on": on, "off": OodConfig(enabled=False)}
    report = {
        "config": {
            "n_train": args.n_train,
            "n_ood": args.n_ood,
            "ood_mean": args.ood_mean,
            "gamma": args.gamma,
            "ood_factor": args.ood_factor,
            "hidden": list(spec.hidden_widths),
            "epochs": cfg.epochs,
            "learning_rate": cfg.learning_rate,
            "seed": args.seed,
        }
    }
    for tag, ood in modes.items():
        report[tag] = _bench_mode(
            train, ood_set, spec, cfg, ood, args.gamma, args.bins, args.separation_threshold, out, tag
        )
    _write_json(report, out / "report.json")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_ood_bench(args)
    except (PI3NNError, OSError) as err:
        category = getattr(err, "category", "io")
        message = str(err).replace("\n", " ")
        print(f"error: {category}: {message}", file=sys.stderr)
        return _exit_code(err)


if __name__ == "__main__":
    sys.exit(main())
