"""Budget-accounted evolutionary runs, logging, and post-hoc success checks.

A run evolves a fixed-size population with lexicase parents and UMAD
children until it hits either the strategy's generation limit (scaled so
all strategies consume the same execution budget) or the budget itself.
Down-sampled runs detect solutions on the active down-sample only; flagged
candidates are re-checked against the full training set after the run, and
the earliest true solution is scored on the held-out test set. Those
post-hoc checks are not charged to the budget, which covers evolutionary
evaluations only.
"""

from __future__ import annotations

import csv
import math
import statistics
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import CaseDistanceMatrix, CaseSet, exact_rate
from .problems import generate_case_sets, get_problem
from .rng import RunRngs, stream_rng
from .selection import (
    StrategyConfig,
    StrategyKind,
    informed_downsample_sparse,
    lexicase_select,
    random_downsample,
)
from .vm import (
    ExecutionCounter,
    Individual,
    evaluate_population,
    random_plushy,
    run_program,
    translate,
    umad,
)

RUN_SCHEMA = "ids-lexicase run v1"
SUMMARY_SCHEMA = "ids-lexicase summary v1"
COMPOSITION_SCHEMA = "ids-lexicase composition v1"
SIZES_SCHEMA = "ids-lexicase sizes v1"


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    strategy: StrategyConfig
    population_size: int = 1000
    train_size: int = 200
    test_size: int = 1000
    base_generations: int = 300
    execution_budget: int = 60_000_000
    step_limit: int = 2000
    umad_rate: float = 0.1
    max_initial_plushy_size: int = 250
    runs: int = 100
    seed: int = 0
    early_stop: bool = False
    workers: int = 1


class RunOutcome(Enum):
    SOLVED_AND_GENERALIZED = "solved_and_generalized"
    SOLVED_TRAIN_ONLY = "solved_train_only"
    UNSOLVED = "unsolved"


@dataclass(frozen=True)
class GenerationLog:
    generation: int
    best_active_score: int
    active_size: int
    downsample: tuple[int, ...]  # empty for standard lexicase
    mean_size: float
    median_size: float
    cum_executions: int


@dataclass
class RunRecord:
    run_id: int
    run_seed: int
    problem: str
    strategy_label: str
    train_size: int
    expert_cutoff: int
    generations: list[GenerationLog]
    outcome: RunOutcome
    solving_generation: int | None
    total_executions: int
    solution_genome: tuple[str, ...] | None  # token names, for reporting


def generation_limit(base_generations: int, strategy: StrategyConfig) -> int:
    """Generation cap that equalizes execution budgets across strategies.

    Standard lexicase runs the base count G. Random down-sampling at rate r
    affords floor(G / r). Informed down-sampling also pays for its parent
    sample, rho * |pop| extra full-training evaluations every k generations,
    giving floor(G / (r + rho * (1 - r) / k)); at rho=1, k=1 (full
    information) the denominator is 1 and the cap is back to G.
    """
    if base_generations < 1:
        raise ValueError(f"base generations must be >= 1, got {base_generations}")
    if strategy.kind is StrategyKind.LEXICASE:
        return base_generations
    r = exact_rate(strategy.r)
    if strategy.kind is StrategyKind.RANDOM_DS:
        return math.floor(base_generations / r)
    rho = exact_rate(strategy.rho)
    return math.floor(base_generations / (r + rho * (1 - r) / strategy.k))


def _passes_all(genome: tuple, cases, problem, step_limit: int) -> bool:
    """Full-case check for one genome; not charged to the budget."""
    from .vm import _read_outputs

    program = translate(genome)
    for case in cases:
        state = run_program(program, case.inputs, step_limit)
        if _read_outputs(state, problem.output_types) != case.expected_outputs:
            return False
    return True


def run_evolution(config: ExperimentConfig, run_seed: int, run_id: int = 0,
                  data: tuple[CaseSet, CaseSet] | None = None) -> RunRecord:
    """One seeded evolutionary run under the configured strategy."""
    problem = get_problem(config.problem)
    if data is None:
        data = generate_case_sets(
            problem, config.train_size, config.test_size,
            stream_rng(config.seed, "problem-generation"),
        )
    train_set, test_set = data
    n_train = len(train_set)
    strategy = config.strategy
    pool = problem.token_pool()
    rngs = RunRngs.from_seed(run_seed)
    counter = ExecutionCounter()

    pop = [
        Individual(random_plushy(rngs.variation, pool, config.max_initial_plushy_size), i)
        for i in range(config.population_size)
    ]
    gen_limit = generation_limit(config.base_generations, strategy)
    # "maximally far" sentinel: strictly above any reachable Hamming distance
    dist_state = CaseDistanceMatrix.maximally_far(
        n_train, sentinel=config.population_size + 1
    )

    logs: list[GenerationLog] = []
    flagged: list[tuple[int, tuple]] = []  # (generation, genome)
    flagged_seen: set = set()
    solved_gen: int | None = None
    solution: tuple | None = None

    g = 0
    while g < gen_limit and counter.count < config.execution_budget:
        if strategy.kind is StrategyKind.LEXICASE:
            sample_indices: tuple[int, ...] = ()
            active_idx = list(range(n_train))
        elif strategy.kind is StrategyKind.RANDOM_DS:
            ds = random_downsample(n_train, strategy.r, rngs.sampling)
            sample_indices = ds.case_indices
            active_idx = sorted(ds.case_indices)
        else:
            ds, dist_state, used = informed_downsample_sparse(
                pop, train_set.cases, strategy, g, dist_state, rngs,
                evaluate=lambda parents, cases: evaluate_population(
                    parents, cases, problem, config.step_limit
                ),
            )
            counter.add(used)
            sample_indices = ds.case_indices
            active_idx = sorted(ds.case_indices)

        active_cases = [train_set[i] for i in active_idx]
        solves = evaluate_population(pop, active_cases, problem,
                                     config.step_limit, counter)
        scores = solves.passes.sum(axis=0)
        best = int(scores.max())
        new_flags = []
        if best == len(active_cases):
            for i in np.flatnonzero(scores == len(active_cases)):
                genome = pop[int(i)].genome
                if genome not in flagged_seen:
                    flagged_seen.add(genome)
                    flagged.append((g, genome))
                    new_flags.append(genome)

        sizes = [ind.size for ind in pop]
        logs.append(GenerationLog(
            generation=g,
            best_active_score=best,
            active_size=len(active_cases),
            downsample=sample_indices,
            mean_size=statistics.fmean(sizes),
            median_size=float(statistics.median(sizes)),
            cum_executions=counter.count,
        ))

        if config.early_stop and new_flags:
            for genome in new_flags:
                if _passes_all(genome, train_set.cases, problem, config.step_limit):
                    solved_gen, solution = g, genome
                    break
            if solution is not None:
                break
        if counter.count >= config.execution_budget:
            break

        parents = lexicase_select(pop, solves, config.population_size, rngs.selection)
        pop = [
            Individual(umad(p.genome, config.umad_rate, rngs.variation, pool), i)
            for i, p in enumerate(parents)
        ]
        g += 1

    if solution is None:
        for gen, genome in flagged:
            if _passes_all(genome, train_set.cases, problem, config.step_limit):
                solved_gen, solution = gen, genome
                break

    if solution is None:
        outcome = RunOutcome.UNSOLVED
    elif _passes_all(solution, test_set.cases, problem, config.step_limit):
        outcome = RunOutcome.SOLVED_AND_GENERALIZED
    else:
        outcome = RunOutcome.SOLVED_TRAIN_ONLY

    return RunRecord(
        run_id=run_id,
        run_seed=run_seed,
        problem=config.problem,
        strategy_label=strategy.label(),
        train_size=n_train,
        expert_cutoff=train_set.expert_cutoff,
        generations=logs,
        outcome=outcome,
        solving_generation=solved_gen,
        total_executions=counter.count,
        solution_genome=tuple(t.name for t in solution) if solution else None,
    )


@dataclass
class ExperimentSummary:
    config: ExperimentConfig
    records: list[RunRecord]

    @property
    def successes(self) -> int:
        return sum(r.outcome is RunOutcome.SOLVED_AND_GENERALIZED for r in self.records)

    @property
    def solves(self) -> int:
        return sum(r.outcome is not RunOutcome.UNSOLVED for r in self.records)

    @property
    def generalization_rate(self) -> float | None:
        """successes / solves; None when no run passed the training set."""
        return self.successes / self.solves if self.solves else None


def run_seed_for(seed: int, run_index: int) -> int:
    """Stable per-run seed; shared across strategies for paired comparisons."""
    return seed * 100_000 + run_index


def _run_job(args):
    config, run_seed, run_id = args
    return run_evolution(config, run_seed, run_id=run_id)


def run_experiment(config: ExperimentConfig) -> ExperimentSummary:
    """`runs` independent seeded runs, optionally across worker processes."""
    if config.runs < 1:
        raise ValueError(f"runs must be >= 1, got {config.runs}")
    jobs = [
        (config, run_seed_for(config.seed, i), i) for i in range(config.runs)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_job, jobs))
    else:
        problem = get_problem(config.problem)
        data = generate_case_sets(
            problem, config.train_size, config.test_size,
            stream_rng(config.seed, "problem-generation"),
        )
        records = [
            run_evolution(config, run_seed, run_id=i, data=data)
            for config, run_seed, i in jobs
        ]
    return ExperimentSummary(config=config, records=records)


# ---------------------------------------------------------------------------
# down-sample composition analysis
# ---------------------------------------------------------------------------

def downsample_composition_log(records: list[RunRecord], n_train: int) -> np.ndarray:
    """Per-(case, generation) inclusion frequency, averaged over active runs.

    A run is active at generation g while it is still executing. Runs from
    non-down-sampling strategies contribute nothing; an all-lexicase input
    yields an empty log (with a warning).
    """
    ds_records = [r for r in records if any(g.downsample for g in r.generations)]
    if not ds_records:
        warnings.warn("no down-sampled runs given; composition log is empty")
        return np.zeros((n_train, 0))
    max_gens = max(len(r.generations) for r in ds_records)
    counts = np.zeros((n_train, max_gens))
    active = np.zeros(max_gens)
    for rec in ds_records:
        for log in rec.generations:
            active[log.generation] += 1
            for case in log.downsample:
                counts[case, log.generation] += 1
    return counts / np.maximum(active, 1)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def write_run_csv(record: RunRecord, path):
    with open(path, "w", newline="") as fh:
        fh.write(
            f"# {RUN_SCHEMA} run_id={record.run_id} run_seed={record.run_seed} "
            f"problem={record.problem} strategy={record.strategy_label} "
            f"train_size={record.train_size} expert_cutoff={record.expert_cutoff} "
            f"outcome={record.outcome.value} "
            f"solving_generation={record.solving_generation} "
            f"total_executions={record.total_executions}\n"
        )
        writer = csv.writer(fh)
        writer.writerow([
            "generation", "best_active_score", "active_size",
            "mean_size", "median_size", "cum_executions", "downsample",
        ])
        for g in record.generations:
            writer.writerow([
                g.generation, g.best_active_score, g.active_size,
                f"{g.mean_size:.6f}", f"{g.median_size:.6f}",
                g.cum_executions, "|".join(map(str, g.downsample)),
            ])


def read_run_csv(path) -> RunRecord:
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if not header.startswith(f"# {RUN_SCHEMA}"):
            raise ValueError(f"unrecognized run file header: {header}")
        meta = dict(kv.split("=", 1) for kv in header.split()[4:])
        gens = []
        for row in csv.DictReader(fh):
            ds = tuple(int(x) for x in row["downsample"].split("|")) \
                if row["downsample"] else ()
            gens.append(GenerationLog(
                generation=int(row["generation"]),
                best_active_score=int(row["best_active_score"]),
                active_size=int(row["active_size"]),
                downsample=ds,
                mean_size=float(row["mean_size"]),
                median_size=float(row["median_size"]),
                cum_executions=int(row["cum_executions"]),
            ))
    solving = meta["solving_generation"]
    return RunRecord(
        run_id=int(meta["run_id"]),
        run_seed=int(meta["run_seed"]),
        problem=meta["problem"],
        strategy_label=meta["strategy"],
        train_size=int(meta["train_size"]),
        expert_cutoff=int(meta["expert_cutoff"]),
        generations=gens,
        outcome=RunOutcome(meta["outcome"]),
        solving_generation=None if solving == "None" else int(solving),
        total_executions=int(meta["total_executions"]),
        solution_genome=None,
    )


def write_summary_csv(summaries: list[ExperimentSummary], path):
    with open(path, "w", newline="") as fh:
        fh.write(f"# {SUMMARY_SCHEMA}\n")
        writer = csv.writer(fh)
        writer.writerow([
            "label", "problem", "strategy", "r", "rho", "k",
            "runs", "successes", "solves", "generalization_rate",
        ])
        for s in summaries:
            strat = s.config.strategy
            rate = s.generalization_rate
            writer.writerow([
                strat.label(), s.config.problem, strat.kind.value,
                "" if strat.r is None else strat.r,
                "" if strat.rho is None else strat.rho,
                "" if strat.k is None else strat.k,
                len(s.records), s.successes, s.solves,
                "-" if rate is None else f"{rate:.2f}",
            ])


def write_composition_csv(freq: np.ndarray, expert_cutoff: int, path):
    with open(path, "w", newline="") as fh:
        fh.write(f"# {COMPOSITION_SCHEMA} expert_cutoff={expert_cutoff}\n")
        writer = csv.writer(fh)
        writer.writerow(["case_index"] + [f"gen_{g}" for g in range(freq.shape[1])])
        for idx, row in enumerate(freq):
            writer.writerow([idx] + [f"{v:.6f}" for v in row])


def write_sizes_csv(records: list[RunRecord], path):
    with open(path, "w", newline="") as fh:
        fh.write(f"# {SIZES_SCHEMA}\n")
        writer = csv.writer(fh)
        writer.writerow(["run_id", "generation", "mean_size", "median_size"])
        for rec in records:
            for g in rec.generations:
                writer.writerow([
                    rec.run_id, g.generation,
                    f"{g.mean_size:.6f}", f"{g.median_size:.6f}",
                ])
