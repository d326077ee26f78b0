"""Command-line front end.

    recordlaws verify    --dist rayleigh --params rho=1 --n 400 --reps 50000 --seed 42
    recordlaws simulate  --dist normal --n 20 --reps 5000 --method naive
    recordlaws check     --dist exponential --n 100,400
    recordlaws exact-cdf --dist gumbel --n 5 --t 0:10:101
    recordlaws table

Exit codes: 0 success, 2 configuration error, 3 a failed cell under --strict.
"""
import argparse
import csv
import json
import sys
from dataclasses import dataclass, fields

import numpy as np

from .catalog import CatalogError, default_catalog, parse_dist
from .diagnostics import full_report
from .gof import MIN_REPS, default_threshold, run_experiment, write_reports_csv, write_reports_json
from .records import DEFAULT_MAX_DRAWS, exact_record_cdf, naive_batch, sample_records_representation
from .rng import check_seed
from .transforms import CENTERINGS, describe_route, parse_strategy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FAILED = 3


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    dist: str | None = None
    params: str | None = None
    n_grid: list | None = None
    reps: int = 20000
    seed: int = 0
    centering: str = "refined"
    strategy_override: str | None = None
    threshold: float | None = None
    output_path: str | None = None
    format: str = "csv"

    def validate(self, need_dist=True):
        if need_dist and not self.dist:
            raise ConfigError("--dist is required")
        if isinstance(self.reps, bool) or int(self.reps) != self.reps or self.reps < MIN_REPS:
            raise ConfigError(f"reps must be an integer >= {MIN_REPS}, got {self.reps}")
        self.reps = int(self.reps)
        try:
            self.seed = check_seed(self.seed)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if self.n_grid is not None:
            grid = list(self.n_grid)
            if not grid or any(int(n) != n or n < 1 for n in grid):
                raise ConfigError("n_grid must hold positive integers")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ConfigError("n_grid must be strictly increasing")
            self.n_grid = [int(n) for n in grid]
        if self.centering not in CENTERINGS:
            raise ConfigError(f"centering must be one of {', '.join(CENTERINGS)}")
        if self.threshold is not None and not 0 < self.threshold < 1:
            raise ConfigError("threshold must lie in (0, 1)")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.strategy_override is not None:
            try:
                parse_strategy(self.strategy_override)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        return self

    def distribution(self):
        try:
            return parse_dist(self.dist, self.params)
        except (CatalogError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


_FIELDS = {f.name for f in fields(ExperimentConfig)}


def _int_list(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of integers, got {text!r}") from None


def _t_values(text):
    """``a,b,c`` or an inclusive grid ``lo:hi:count``."""
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            count = int(count)
            if count < 2:
                raise ConfigError("a t grid needs count >= 2")
            return np.linspace(float(lo), float(hi), count)
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise ConfigError(f"malformed --t value {text!r}") from None


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    if isinstance(data.get("params"), dict):
        data["params"] = ",".join(f"{k}={v}" for k, v in data["params"].items())
    return data


def _build_config(args, reps_default=None):
    data = _load_config(args.config) if getattr(args, "config", None) else {}
    if reps_default is not None:
        data.setdefault("reps", reps_default)
    flags = {
        "dist": args.dist,
        "params": args.params,
        "n_grid": _int_list(args.n) if args.n is not None else None,
        "reps": args.reps,
        "seed": args.seed,
        "centering": getattr(args, "centering", None),
        "strategy_override": getattr(args, "strategy", None),
        "threshold": getattr(args, "threshold", None),
        "output_path": args.output,
        "format": getattr(args, "format", None),
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    return ExperimentConfig(**data)


def _open_output(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def _emit(path, write):
    fh, close = _open_output(path)
    try:
        write(fh)
    finally:
        if close:
            fh.close()


def _single_n(cfg, name):
    if not cfg.n_grid or len(cfg.n_grid) != 1:
        raise ConfigError(f"{name} takes a single --n")
    return cfg.n_grid[0]


def cmd_verify(args):
    cfg = _build_config(args).validate()
    dist = cfg.distribution()
    if not cfg.n_grid:
        raise ConfigError("--n is required")
    threshold = cfg.threshold if cfg.threshold is not None else default_threshold(dist.id, cfg.centering)
    try:
        reports = run_experiment(dist, cfg.n_grid, cfg.reps, cfg.seed, centering=cfg.centering,
                                 threshold=threshold, strategy=cfg.strategy_override, threads=args.threads)
    except CatalogError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.format == "json":
        _emit(cfg.output_path, lambda fh: write_reports_json(reports, fh))
    else:
        _emit(cfg.output_path, lambda fh: write_reports_csv(reports, fh))
    if args.strict and not all(r.passed for r in reports):
        return EXIT_FAILED
    return EXIT_OK


def cmd_simulate(args):
    cfg = _build_config(args).validate()
    dist = cfg.distribution()
    n = _single_n(cfg, "simulate")
    if args.method == "naive":
        if args.max_draws < 1:
            raise ConfigError("--max-draws must be >= 1")
        batch = naive_batch(dist, n, cfg.reps, cfg.seed, max_draws=args.max_draws, threads=args.threads)
    else:
        batch = sample_records_representation(dist, n, cfg.reps, cfg.seed, threads=args.threads)
    _emit(cfg.output_path, batch.to_csv)
    return EXIT_OK


def cmd_check(args):
    cfg = _build_config(args, reps_default=MIN_REPS).validate()
    dist = cfg.distribution()
    if not cfg.n_grid:
        raise ConfigError("--n is required")
    try:
        report = full_report(dist, cfg.n_grid, cfg.reps, cfg.seed, threads=args.threads)
    except CatalogError as exc:
        raise ConfigError(str(exc)) from None
    _emit(cfg.output_path, lambda fh: fh.write(report.to_json(indent=2) + "\n"))
    return EXIT_OK


def cmd_exact_cdf(args):
    cfg = _build_config(args, reps_default=MIN_REPS).validate()
    dist = cfg.distribution()
    n = _single_n(cfg, "exact-cdf")
    if args.t is None:
        raise ConfigError("--t is required")
    t = _t_values(args.t)
    p = np.atleast_1d(exact_record_cdf(dist, n, t))

    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "P"])
        w.writerows([f"{a:.17g}", f"{b:.17g}"] for a, b in zip(t, p))

    _emit(cfg.output_path, write)
    return EXIT_OK


TABLE_HEADER = ("dist", "params", "gamma", "strategy", "working_scale", "centering",
                "statistic", "limit_law")


def cmd_table(args):
    rows = []
    for dist in default_catalog():
        route = describe_route(dist)
        gamma = "0" if dist.gamma == 0 else f"{dist.gamma:.17g}"
        rows.append([dist.id, dist.params_text, gamma, route["strategy"], route["working_scale"],
                     route["centering"], route["statistic"], route["limit_law"]])
    fmt = args.format or "csv"

    def write(fh):
        if fmt == "json":
            fh.write(json.dumps([dict(zip(TABLE_HEADER, r)) for r in rows], indent=2) + "\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(TABLE_HEADER)
            w.writerows(rows)

    _emit(args.output, write)
    return EXIT_OK


def _common(p, reps_default):
    p.add_argument("--dist", help="catalog id, optionally with inline params: id:k=v,...")
    p.add_argument("--params", help="k=v,... parameter list")
    p.add_argument("--n", help="record index, or comma-separated grid")
    p.add_argument("--reps", type=int, default=reps_default)
    p.add_argument("--seed", type=int)
    p.add_argument("--output", "-o")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields; flags win")
    p.add_argument("--threads", type=int, default=1)


def build_parser():
    parser = argparse.ArgumentParser(prog="recordlaws", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="KS of transformed records against the limit law")
    _common(p, None)
    p.add_argument("--centering", choices=CENTERINGS)
    p.add_argument("--strategy", help="override the catalog transform")
    p.add_argument("--threshold", type=float)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--strict", action="store_true", help="exit 3 when any cell fails")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="raw n-th record values")
    _common(p, None)
    p.add_argument("--method", choices=("representation", "naive"), default="representation")
    p.add_argument("--max-draws", type=int, default=DEFAULT_MAX_DRAWS)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="numerical hypothesis diagnostics (JSON)")
    _common(p, None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("exact-cdf", help="exact CDF of the n-th record")
    _common(p, None)
    p.add_argument("--t", help="comma list or lo:hi:count grid")
    p.set_defaults(func=cmd_exact_cdf)

    p = sub.add_parser("table", help="routing and limit law of every catalog entry")
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
