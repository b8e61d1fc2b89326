"""Command-line experiment runner.

    taoopt bench [F1 ...]          benchmark protocol (50 trials, pop 100, 500 iters)
    taoopt solve PROBLEM           one constrained problem
    taoopt fishery                 harvesting study, writes effort.csv / biomass.csv
    taoopt compare [F1 ...]        TAO and PSO side by side on the benchmarks

Settings can also come from ``--config FILE`` holding ``key = value`` lines
(``#`` starts a comment).  Keys are the long flag names (algorithm, trials,
pop, iters, seed, out, svg); any other key is a parameter override, as with
``--set``.  Command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from ..benchmarks import BENCHMARKS
from ..core import ConfigurationError, NonFiniteObjectiveError, StatsSummary
from ..problems import CONSTRAINED_IDS, fishery_model, fishery_value, problem_ids
from .experiment import (
    DEFAULT_SEED,
    PSO_KEYS,
    TAO_KEYS,
    ExperimentConfig,
    ensure_writable,
    prepare,
    run_experiment,
    split_overrides,
)
from .report import emit_stats_table

FLAG_KEYS = ("algorithm", "trials", "pop", "iters", "seed", "out", "svg")
DEFAULT_OUT = "results"


def read_config_file(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        values[key.strip()] = value.strip()
    return values


def parse_assignment(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def _bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    lowered = str(value).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"expected a boolean, got {value!r}")


def _int(value: Any, name: str) -> Optional[int]:
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise ConfigurationError(f"{name} expects an integer, got {value!r}") from None


def resolve_settings(args: argparse.Namespace) -> dict[str, Any]:
    """Merge built-in defaults, the config file and command-line flags."""
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {k: v for k, v in file_values.items() if k not in FLAG_KEYS}
    overrides.update(dict(args.set or []))
    settings = {k: file_values.get(k) for k in FLAG_KEYS}
    for key in FLAG_KEYS:
        flag = getattr(args, key, None)
        if flag not in (None, False):
            settings[key] = flag
    seed = _int(settings["seed"], "seed")
    return dict(
        algorithm=settings["algorithm"] or "tao",
        n_trials=_int(settings["trials"], "trials"),
        population_size=_int(settings["pop"], "pop"),
        max_iterations=_int(settings["iters"], "iters"),
        master_seed=DEFAULT_SEED if seed is None else seed,
        output_directory=Path(settings["out"] or DEFAULT_OUT),
        svg=_bool(settings["svg"] or False),
        parameter_overrides=overrides,
    )


def _row(problem: str, algo: str, s: StatsSummary) -> str:
    return f"{problem:<24}{algo:<6} {s.best:>19.10g} {s.mean:>19.10g} {s.std:>19.10g}"


def _header() -> str:
    return f"{'problem':<24}{'algo':<6} {'best':>19} {'mean':>19} {'std':>19}"


def _check_benchmarks(ids: Sequence[str]) -> list[str]:
    ids = list(ids) or list(BENCHMARKS)
    bad = [i for i in ids if i not in BENCHMARKS]
    if bad:
        raise ConfigurationError(
            f"unknown benchmark(s) {bad}; valid ids: {', '.join(BENCHMARKS)}"
        )
    return ids


def _validated(configs: list[ExperimentConfig]) -> list[ExperimentConfig]:
    """Resolve every config up front so a bad option fails before any trial runs."""
    for cfg in configs:
        prepare(cfg)
    return configs


def cmd_bench(args, settings) -> int:
    configs = _validated([ExperimentConfig(problem_id=fid, **settings)
                          for fid in _check_benchmarks(args.functions)])
    ensure_writable(settings["output_directory"])
    table = {}
    print(_header())
    for cfg in configs:
        fid = cfg.problem_id
        summary, _ = run_experiment(cfg)
        table[fid] = {settings["algorithm"]: summary}
        print(_row(fid, settings["algorithm"], summary), flush=True)
    path = emit_stats_table(table, settings["output_directory"] / f"bench_{settings['algorithm']}.csv")
    print(f"stats table: {path}")
    return 0


def overrides_for(algorithm: str, overrides: dict[str, Any]) -> dict[str, Any]:
    """Drop keys that belong only to the other optimizer (compare runs both)."""
    foreign = set(PSO_KEYS if algorithm == "tao" else TAO_KEYS) - set(
        TAO_KEYS if algorithm == "tao" else PSO_KEYS)
    if algorithm == "pso":
        foreign.add("r")
    return {k: v for k, v in overrides.items() if k not in foreign}


def cmd_compare(args, settings) -> int:
    ids = _check_benchmarks(args.functions)
    configs = _validated([
        ExperimentConfig(problem_id=fid, **{
            **settings, "algorithm": algo,
            "parameter_overrides": overrides_for(algo, settings["parameter_overrides"])})
        for fid in ids for algo in ("pso", "tao")
    ])
    ensure_writable(settings["output_directory"])
    table: dict[str, dict[str, StatsSummary]] = {fid: {} for fid in ids}
    print(_header())
    for cfg in configs:
        fid, algo = cfg.problem_id, cfg.algorithm
        table[fid][algo], _ = run_experiment(cfg)
        print(_row(fid, algo, table[fid][algo]), flush=True)
    wins = sum(table[f]["tao"].mean < table[f]["pso"].mean for f in ids)
    path = emit_stats_table(table, settings["output_directory"] / "compare.csv")
    print(f"TAO has the lower mean on {wins} of {len(ids)} functions")
    print(f"stats table: {path}")
    return 0


def cmd_solve(args, settings) -> int:
    summary, records = run_experiment(ExperimentConfig(problem_id=args.problem, **settings))
    best = min(records, key=lambda r: r.final_best_fitness)
    print(_header())
    print(_row(args.problem, settings["algorithm"], summary))
    print("best position:", " ".join(f"{v:.10g}" for v in best.final_best_position))
    print(f"outputs in {settings['output_directory']}")
    return 0


def cmd_fishery(args, settings) -> int:
    cfg = ExperimentConfig(problem_id="fishery", **settings)
    summary, records = run_experiment(cfg)
    best = min(records, key=lambda r: r.final_best_fitness)
    model = fishery_model(split_overrides(cfg.algorithm, cfg.parameter_overrides)[1])
    print(_header())
    print(_row("fishery", settings["algorithm"], summary))
    print(f"value J of the best plan (discounted rent + terminal biomass): {fishery_value(best.final_best_position, model):.7f}")
    print(f"outputs in {settings['output_directory']} (effort.csv, biomass.csv)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algorithm", choices=("tao", "pso"), help="optimizer (default tao)")
    common.add_argument("--trials", help="number of independent trials")
    common.add_argument("--pop", help="population size")
    common.add_argument("--iters", help="iterations per trial")
    common.add_argument("--seed", help=f"master seed (default {DEFAULT_SEED})")
    common.add_argument("--out", help=f"output directory (default {DEFAULT_OUT})")
    common.add_argument("--set", action="append", type=parse_assignment, metavar="KEY=VALUE",
                        help="parameter override, e.g. gamma=0.8, rho=0.5, T=10 (repeatable)")
    common.add_argument("--svg", action="store_true", help="also render SVG plots")
    common.add_argument("--config", type=Path, help="key = value settings file")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="taoopt", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("bench", parents=[common], help="run the benchmark protocol")
    p.add_argument("functions", nargs="*", metavar="FUNCTION",
                   help=f"benchmark ids (default all: {' '.join(BENCHMARKS)})")
    p.set_defaults(func=cmd_bench)
    p = sub.add_parser("compare", parents=[common], help="TAO vs PSO statistics table")
    p.add_argument("functions", nargs="*", metavar="FUNCTION")
    p.set_defaults(func=cmd_compare)
    p = sub.add_parser("solve", parents=[common], help="solve one registered problem")
    p.add_argument("problem", metavar="PROBLEM",
                   help=f"one of {', '.join(CONSTRAINED_IDS)} (benchmark ids also accepted)")
    p.set_defaults(func=cmd_solve)
    p = sub.add_parser("fishery", parents=[common], help="sustainable harvesting study")
    p.set_defaults(func=cmd_fishery)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(message)s",
    )
    try:
        settings = resolve_settings(args)
        if args.command == "solve" and args.problem not in problem_ids():
            raise ConfigurationError(
                f"unknown problem {args.problem!r}; valid ids: {', '.join(problem_ids())}"
            )
        return args.func(args, settings)
    except ConfigurationError as exc:
        print(f"taoopt: configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, NonFiniteObjectiveError) as exc:
        print(f"taoopt: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
