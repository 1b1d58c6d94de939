"""Command-line interface.

Subcommands:
  run                one configuration, N seeded runs, CSV outputs
  sweep              the full 11-configuration grid on one problem
  compose            down-sample composition CSV from run logs
  stats              starred success-rate comparison table from summary.csv
  dump-instructions  instruction/constant listing for a problem
  export-cases       write generated train/test case sets as CSV

Every `run`/`sweep` flag can also come from a JSON config file
(--config file.json, keys named like the long flags with dashes or
underscores); explicit flags override the file.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .experiment import (
    ExperimentConfig,
    downsample_composition_log,
    read_run_csv,
    run_experiment,
    write_composition_csv,
    write_run_csv,
    write_sizes_csv,
    write_summary_csv,
)
from .problems import PROBLEMS, export_cases, generate_case_sets, get_problem
from .rng import stream_rng
from .selection import StrategyConfig, StrategyKind
from .stats import compare_family

_CONFIG_DEFAULTS = {
    "problem": "fizz_buzz",
    "strategy": "lexicase",
    "r": None,
    "rho": None,
    "k": None,
    "pop": 1000,
    "train_size": 200,
    "test_size": 1000,
    "generations": 300,
    "budget": 60_000_000,
    "step_limit": 2000,
    "umad_rate": 0.1,
    "max_plushy": 250,
    "runs": 100,
    "seed": 0,
    "early_stop": False,
    "workers": 1,
}


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON file with flag defaults")
    p.add_argument("--problem", choices=sorted(PROBLEMS))
    p.add_argument("--strategy",
                   choices=[k.value for k in StrategyKind])
    p.add_argument("--r", type=float, help="down-sample rate")
    p.add_argument("--rho", type=float, help="parent sampling rate")
    p.add_argument("--k", type=int, help="distance recomputation schedule")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--train-size", type=int)
    p.add_argument("--test-size", type=int)
    p.add_argument("--generations", type=int, help="base generation cap")
    p.add_argument("--budget", type=int, help="program execution budget")
    p.add_argument("--step-limit", type=int)
    p.add_argument("--umad-rate", type=float)
    p.add_argument("--max-plushy", type=int, help="max initial genome size")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--early-stop", action=argparse.BooleanOptionalAction,
                   default=None, help="stop a run once a verified solution appears")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=Path, required=True, help="output directory")


def _merged_options(args) -> dict:
    opts = dict(_CONFIG_DEFAULTS)
    if args.config is not None:
        loaded = json.loads(Path(args.config).read_text())
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in opts:
                raise SystemExit(f"unknown config key: {key}")
            opts[key] = value
    for key in opts:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def _strategy_from_options(opts) -> StrategyConfig:
    return StrategyConfig(
        kind=StrategyKind(opts["strategy"]),
        r=opts["r"], rho=opts["rho"], k=opts["k"],
    )


def _experiment_config(opts, strategy: StrategyConfig) -> ExperimentConfig:
    return ExperimentConfig(
        problem=opts["problem"],
        strategy=strategy,
        population_size=opts["pop"],
        train_size=opts["train_size"],
        test_size=opts["test_size"],
        base_generations=opts["generations"],
        execution_budget=opts["budget"],
        step_limit=opts["step_limit"],
        umad_rate=opts["umad_rate"],
        max_initial_plushy_size=opts["max_plushy"],
        runs=opts["runs"],
        seed=opts["seed"],
        early_stop=opts["early_stop"],
        workers=opts["workers"],
    )


def _emit_experiment(summary, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    for rec in summary.records:
        write_run_csv(rec, out_dir / f"run_{rec.run_id}.csv")
    write_sizes_csv(summary.records, out_dir / "sizes.csv")
    if summary.config.strategy.kind is not StrategyKind.LEXICASE:
        freq = downsample_composition_log(
            summary.records, summary.config.train_size
        )
        write_composition_csv(
            freq, summary.records[0].expert_cutoff, out_dir / "composition.csv"
        )


def _cmd_run(args) -> int:
    opts = _merged_options(args)
    config = _experiment_config(opts, _strategy_from_options(opts))
    summary = run_experiment(config)
    out_dir = Path(args.out)
    _emit_experiment(summary, out_dir)
    write_summary_csv([summary], out_dir / "summary.csv")
    rate = summary.generalization_rate
    print(
        f"{config.strategy.label()} on {config.problem}: "
        f"{summary.successes}/{len(summary.records)} successes, "
        f"{summary.solves} solves, generalization "
        f"{'-' if rate is None else f'{rate:.2f}'}"
    )
    return 0


def sweep_strategies() -> list[StrategyConfig]:
    """The 11-configuration grid: lexicase, and per rate in {0.05, 0.1}
    random plus informed with (rho, k) in {(1,1), (0.01,1), (0.01,10),
    (0.01,100)}."""
    grid = [StrategyConfig(StrategyKind.LEXICASE)]
    for r in (0.05, 0.1):
        grid.append(StrategyConfig(StrategyKind.RANDOM_DS, r=r))
        for rho, k in ((1.0, 1), (0.01, 1), (0.01, 10), (0.01, 100)):
            grid.append(StrategyConfig(StrategyKind.INFORMED_DS, r=r, rho=rho, k=k))
    return grid


def _cmd_sweep(args) -> int:
    opts = _merged_options(args)
    out_dir = Path(args.out)
    summaries = []
    for strategy in sweep_strategies():
        config = _experiment_config(opts, strategy)
        summary = run_experiment(config)
        summaries.append(summary)
        _emit_experiment(summary, out_dir / strategy.label())
        rate = summary.generalization_rate
        print(
            f"{strategy.label()}: {summary.successes} successes, "
            f"{summary.solves} solves, generalization "
            f"{'-' if rate is None else f'{rate:.2f}'}"
        )
    write_summary_csv(summaries, out_dir / "summary.csv")
    return 0


def _cmd_compose(args) -> int:
    runs_dir = Path(args.runs_dir)
    records = [read_run_csv(p) for p in sorted(runs_dir.glob("run_*.csv"))]
    if not records:
        raise SystemExit(f"no run_*.csv files under {runs_dir}")
    freq = downsample_composition_log(records, records[0].train_size)
    write_composition_csv(freq, records[0].expert_cutoff, args.out)
    print(f"wrote {args.out} ({freq.shape[0]} cases x {freq.shape[1]} generations)")
    return 0


def _cmd_stats(args) -> int:
    rows = []
    with open(args.summary, newline="") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            fh.seek(0)
        rows = list(csv.DictReader(fh))
    families: dict[tuple[str, str], dict] = {}
    for row in rows:
        key = (row["problem"], row["r"])
        fam = families.setdefault(key, {"baseline": None, "entries": []})
        if row["strategy"] == "random-ds":
            fam["baseline"] = row
        elif row["strategy"] == "informed-ds":
            fam["entries"].append(row)

    out_lines = [
        "| problem | r | strategy | successes/runs | baseline | p_adj | sig |",
        "|---|---|---|---|---|---|---|",
    ]
    for (problem, r), fam in sorted(families.items()):
        if fam["baseline"] is None or not fam["entries"]:
            continue
        base = (int(fam["baseline"]["successes"]), int(fam["baseline"]["runs"]))
        entries = [(int(e["successes"]), int(e["runs"])) for e in fam["entries"]]
        results = compare_family(entries, base, alternative=args.alternative)
        for row, res in zip(fam["entries"], results):
            out_lines.append(
                f"| {problem} | {r} | {row['label']} | "
                f"{res.successes_a}/{res.n_a} | {res.successes_b}/{res.n_b} | "
                f"{res.p_adjusted:.4g} | {res.stars} |"
            )
    text = "\n".join(out_lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0


def _cmd_dump_instructions(args) -> int:
    problem = get_problem(args.problem)
    print(f"problem: {problem.name}")
    print(f"inputs: {', '.join(problem.input_types)}")
    print(f"outputs: {', '.join(problem.output_types)}")
    print("instructions:")
    for name in problem.instruction_names:
        print(f"  {name}")
    for i, t in enumerate(problem.input_types):
        print(f"  in{i}  (push input {i}, {t})")
    print("constants:")
    for lit in problem.literals:
        print(f"  {lit.value!r} ({lit.stack})")
    print("structure: close")
    return 0


def _cmd_export_cases(args) -> int:
    problem = get_problem(args.problem)
    rng = stream_rng(args.seed, "problem-generation")
    train, test = generate_case_sets(problem, args.train_size, args.test_size, rng)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    export_cases(train, problem, out_dir / "train_cases.csv")
    export_cases(test, problem, out_dir / "test_cases.csv")
    print(f"wrote {out_dir}/train_cases.csv ({len(train)} cases, "
          f"{train.expert_cutoff} expert) and test_cases.csv ({len(test)} cases)")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="idslex",
        description="Lexicase selection with random/informed down-sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration")
    _add_run_flags(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the 11-configuration grid")
    _add_run_flags(p_sweep)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_comp = sub.add_parser("compose", help="composition CSV from run logs")
    p_comp.add_argument("--runs-dir", type=Path, required=True)
    p_comp.add_argument("--out", type=Path, required=True)
    p_comp.set_defaults(fn=_cmd_compose)

    p_stats = sub.add_parser("stats", help="starred comparison table")
    p_stats.add_argument("--summary", type=Path, required=True)
    p_stats.add_argument("--alternative", choices=["two-sided", "greater"],
                         default="two-sided")
    p_stats.add_argument("--out", type=Path)
    p_stats.set_defaults(fn=_cmd_stats)

    p_dump = sub.add_parser("dump-instructions", help="list a problem's instruction set")
    p_dump.add_argument("--problem", choices=sorted(PROBLEMS), required=True)
    p_dump.set_defaults(fn=_cmd_dump_instructions)

    p_exp = sub.add_parser("export-cases", help="write generated case sets as CSV")
    p_exp.add_argument("--problem", choices=sorted(PROBLEMS), required=True)
    p_exp.add_argument("--train-size", type=int, default=200)
    p_exp.add_argument("--test-size", type=int, default=1000)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--out", type=Path, required=True)
    p_exp.set_defaults(fn=_cmd_export_cases)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
