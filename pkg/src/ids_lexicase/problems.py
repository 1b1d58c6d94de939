"""Benchmark problem definitions: oracles, input samplers, edge cases.

Each problem bundles a reference oracle (the ground-truth function used to
label generated cases), a hand-authored list of expert edge-case inputs
that sit at the head of every training set, a random input sampler, and
the instruction/constant pool the GP engine uses on that problem.

Training data is regenerated rather than shipped: a training set is the
expert edge cases (fixed order) followed by oracle-labelled random cases;
test sets are oracle-labelled random cases only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import CaseOrigin, CaseRole, CaseSet, TrainingCase
from .instructions import CLOSE, INSTRUCTIONS, Literal
from .vm import make_input_instruction


class ProblemDomainError(ValueError):
    """Oracle applied to an input outside the problem's domain."""


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def count_odds_oracle(inputs):
    (v,) = inputs
    return (sum(1 for x in v if x % 2 != 0),)


def find_pair_oracle(inputs):
    v, target = inputs
    hits = [
        (v[i], v[j])
        for i in range(len(v))
        for j in range(i + 1, len(v))
        if v[i] + v[j] == target
    ]
    if not hits:
        raise ProblemDomainError(f"no pair in {v} sums to {target}")
    return hits[0]


def fizz_buzz_oracle(inputs):
    (x,) = inputs
    if x % 15 == 0:
        return ("FizzBuzz",)
    if x % 3 == 0:
        return ("Fizz",)
    if x % 5 == 0:
        return ("Buzz",)
    return (str(x),)


def fuel_cost_oracle(inputs):
    (v,) = inputs
    return (sum(x // 3 - 2 for x in v),)


def gcd_oracle(inputs):
    a, b = inputs
    return (math.gcd(a, b),)


def grade_oracle(inputs):
    a, b, c, d, score = inputs
    if not (a > b > c > d):
        raise ProblemDomainError(f"thresholds not distinct descending: {inputs[:4]}")
    for threshold, letter in ((a, "A"), (b, "B"), (c, "C"), (d, "D")):
        if score >= threshold:
            return (letter,)
    return ("F",)


# standard letter values, a..z
SCRABBLE_LETTER_VALUES = (
    1, 3, 3, 2, 1, 4, 2, 4, 1, 8, 5, 1, 3,
    1, 1, 3, 10, 1, 1, 1, 1, 4, 4, 8, 4, 10,
)


def scrabble_score_oracle(inputs):
    (text,) = inputs
    total = 0
    for ch in text.lower():
        if "a" <= ch <= "z":
            total += SCRABBLE_LETTER_VALUES[ord(ch) - ord("a")]
    return (total,)


def small_or_large_oracle(inputs):
    (n,) = inputs
    if n < 1000:
        return ("small",)
    if n >= 2000:
        return ("large",)
    return ("",)


def const_small_oracle(inputs):
    return ("small",)


# ---------------------------------------------------------------------------
# input samplers
# ---------------------------------------------------------------------------

def _int_vec(rng, min_len, max_len, lo, hi):
    length = int(rng.integers(min_len, max_len + 1))
    return tuple(int(x) for x in rng.integers(lo, hi + 1, size=length))


def count_odds_sampler(rng):
    return (_int_vec(rng, 0, 50, -1000, 1000),)


def find_pair_sampler(rng):
    # plant a target hit by exactly one index pair
    while True:
        v = _int_vec(rng, 2, 20, -10_000, 10_000)
        i = int(rng.integers(0, len(v) - 1))
        j = int(rng.integers(i + 1, len(v)))
        target = v[i] + v[j]
        n_hits = sum(
            1
            for a in range(len(v))
            for b in range(a + 1, len(v))
            if v[a] + v[b] == target
        )
        if n_hits == 1:
            return (v, target)


def fizz_buzz_sampler(rng):
    return (int(rng.integers(1, 1_000_001)),)


def fuel_cost_sampler(rng):
    return (_int_vec(rng, 1, 20, 6, 100_000),)


def gcd_sampler(rng):
    return (int(rng.integers(1, 1_000_001)), int(rng.integers(1, 1_000_001)))


def grade_sampler(rng):
    thresholds = sorted((int(x) for x in rng.choice(101, size=4, replace=False)),
                        reverse=True)
    return (*thresholds, int(rng.integers(0, 101)))


def scrabble_score_sampler(rng):
    length = int(rng.integers(0, 21))
    # visible ASCII plus space
    return ("".join(chr(int(c)) for c in rng.integers(32, 127, size=length)),)


def small_or_large_sampler(rng):
    return (int(rng.integers(-10_000, 10_001)),)


def const_small_sampler(rng):
    return (int(rng.integers(-100, 101)),)


# ---------------------------------------------------------------------------
# problem specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemSpec:
    name: str
    input_types: tuple[str, ...]
    output_types: tuple[str, ...]
    oracle: Callable
    edge_cases: tuple
    sampler: Callable
    instruction_names: tuple[str, ...]
    literals: tuple[Literal, ...]

    def token_pool(self) -> list:
        """Gene pool: instructions, input pushers, constants, close markers."""
        pool = [INSTRUCTIONS[n] for n in self.instruction_names]
        pool += [make_input_instruction(i, t) for i, t in enumerate(self.input_types)]
        pool += list(self.literals)
        n_openers = sum(INSTRUCTIONS[n].opens for n in self.instruction_names)
        pool += [CLOSE] * (2 if n_openers else 0)
        return pool


_INT_OPS = (
    "int_add", "int_sub", "int_mult", "int_quot", "int_mod", "int_inc",
    "int_dec", "int_abs", "int_max", "int_min", "int_eq", "int_gt", "int_lt",
    "int_gte", "int_lte", "int_dup", "int_swap", "int_rot", "int_pop",
)
_BOOL_OPS = (
    "bool_and", "bool_or", "bool_not", "bool_xor", "bool_eq",
    "bool_from_int", "int_from_bool", "bool_dup", "bool_pop",
)
_EXEC_OPS = ("exec_if", "exec_when", "exec_dup", "exec_pop", "exec_swap",
             "exec_do_times")
_STR_OPS = (
    "str_concat", "str_length", "str_reverse", "str_from_int",
    "str_from_bool", "str_take", "str_rest", "str_butlast", "str_first",
    "str_ord", "str_contains", "str_eq", "str_dup", "str_swap", "str_pop",
    "int_from_string",
)
_VEC_OPS = (
    "vec_length", "vec_first", "vec_last", "vec_nth", "vec_rest",
    "vec_butlast", "vec_is_empty", "vec_contains", "vec_dup", "vec_pop",
    "vec_do_each",
)


def _ints(*values):
    return tuple(Literal("int", v) for v in values)


def _strs(*values):
    return tuple(Literal("str", v) for v in values)


PROBLEMS: dict[str, ProblemSpec] = {}


def _problem(spec: ProblemSpec) -> ProblemSpec:
    PROBLEMS[spec.name] = spec
    return spec


_problem(ProblemSpec(
    name="count_odds",
    input_types=("vec",),
    output_types=("int",),
    oracle=count_odds_oracle,
    edge_cases=(
        ((),), ((0,),), ((1,),), ((2,),), ((-1,),), ((-2,),),
        ((0, 1),), ((1, 3),),
    ),
    sampler=count_odds_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS + _VEC_OPS,
    literals=_ints(0, 1, 2),
))

_problem(ProblemSpec(
    name="find_pair",
    input_types=("vec", "int"),
    output_types=("int", "int"),
    oracle=find_pair_oracle,
    edge_cases=(
        ((1, 2), 3), ((0, 0), 0), ((-1, 1), 0), ((5, -3), 2),
        ((1, 2, 3), 5), ((1, 2, 4), 3), ((-3, 1, 2), -1), ((10, 20, 30), 50),
    ),
    sampler=find_pair_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS + _VEC_OPS,
    literals=_ints(0, 1, 2),
))

_problem(ProblemSpec(
    name="fizz_buzz",
    input_types=("int",),
    output_types=("str",),
    oracle=fizz_buzz_oracle,
    edge_cases=((1,), (2,), (3,), (5,), (6,), (10,), (15,), (30,)),
    sampler=fizz_buzz_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS + _STR_OPS,
    literals=_strs("Fizz", "Buzz", "FizzBuzz") + _ints(0, 3, 5),
))

_problem(ProblemSpec(
    name="fuel_cost",
    input_types=("vec",),
    output_types=("int",),
    oracle=fuel_cost_oracle,
    edge_cases=(
        ((6,),), ((7,),), ((8,),), ((9,),), ((11,),), ((12,),),
        ((6, 9),), ((1000,),),
    ),
    sampler=fuel_cost_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS + _VEC_OPS,
    literals=_ints(0, 1, 2, 3),
))

_problem(ProblemSpec(
    name="gcd",
    input_types=("int", "int"),
    output_types=("int",),
    oracle=gcd_oracle,
    edge_cases=(
        (1, 1), (1_000_000, 1_000_000), (1, 1_000_000), (1_000_000, 1),
        (2, 3), (12, 18), (4, 6), (999_999, 3),
    ),
    sampler=gcd_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS,
    literals=_ints(0, 1),
))

_problem(ProblemSpec(
    name="grade",
    input_types=("int", "int", "int", "int", "int"),
    output_types=("str",),
    oracle=grade_oracle,
    edge_cases=(
        (80, 70, 60, 50, 85), (80, 70, 60, 50, 80), (80, 70, 60, 50, 79),
        (4, 3, 2, 1, 5), (4, 3, 2, 1, 4), (4, 3, 2, 1, 3), (4, 3, 2, 1, 2),
        (4, 3, 2, 1, 1), (4, 3, 2, 1, 0), (100, 99, 98, 97, 96),
    ),
    sampler=grade_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS + (
        "str_eq", "str_dup", "str_swap", "str_pop"),
    literals=_strs("A", "B", "C", "D", "F") + _ints(0,),
))

_problem(ProblemSpec(
    name="scrabble_score",
    input_types=("str",),
    output_types=("int",),
    oracle=scrabble_score_oracle,
    edge_cases=tuple((ch,) for ch in "abcdefghijklmnopqrstuvwxyz")
    + (("",), (" ",), ("*",)),
    sampler=scrabble_score_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS + _STR_OPS + _VEC_OPS,
    literals=(Literal("vec", SCRABBLE_LETTER_VALUES),) + _ints(0, 1, 26, 97),
))

_problem(ProblemSpec(
    name="small_or_large",
    input_types=("int",),
    output_types=("str",),
    oracle=small_or_large_oracle,
    edge_cases=(
        (0,), (999,), (1000,), (1001,), (1500,), (1999,), (2000,), (2001,),
        (10_000,), (-10_000,),
    ),
    sampler=small_or_large_sampler,
    instruction_names=_INT_OPS + _BOOL_OPS + _EXEC_OPS + (
        "str_eq", "str_dup", "str_swap", "str_pop"),
    literals=_strs("small", "large", "") + _ints(1000, 2000),
))

# Trivial constant-output smoke problem: solvable by a one-literal genome.
_problem(ProblemSpec(
    name="const_small",
    input_types=("int",),
    output_types=("str",),
    oracle=const_small_oracle,
    edge_cases=((0,), (1,)),
    sampler=const_small_sampler,
    instruction_names=("str_dup", "str_swap", "str_pop"),
    literals=_strs("small", "large", ""),
))


def get_problem(name: str) -> ProblemSpec:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise KeyError(
            f"unknown problem {name!r}; available: {sorted(PROBLEMS)}"
        ) from None


def oracle_eval(problem: ProblemSpec, inputs) -> tuple:
    """Reference answer for one input."""
    return problem.oracle(inputs)


# ---------------------------------------------------------------------------
# case-set generation
# ---------------------------------------------------------------------------

def generate_case_sets(problem: ProblemSpec, train_size: int, test_size: int,
                       rng: np.random.Generator) -> tuple[CaseSet, CaseSet]:
    """Train set (expert prefix + random fill) and disjoint test set.

    Inputs already used are resampled (bounded retries), keeping train and
    test input sets disjoint whenever the input domain allows it.
    """
    edges = list(problem.edge_cases)
    if train_size < len(edges):
        raise ValueError(
            f"train_size {train_size} < {len(edges)} expert edge cases"
        )
    seen = {repr(e) for e in edges}

    def fresh_input():
        inputs = problem.sampler(rng)
        for _ in range(100):
            if repr(inputs) not in seen:
                break
            inputs = problem.sampler(rng)
        seen.add(repr(inputs))
        return inputs

    train_cases = [
        TrainingCase(i, inputs, problem.oracle(inputs), CaseOrigin.EXPERT_EDGE_CASE)
        for i, inputs in enumerate(edges)
    ]
    for i in range(len(edges), train_size):
        inputs = fresh_input()
        train_cases.append(
            TrainingCase(i, inputs, problem.oracle(inputs), CaseOrigin.ORACLE_GENERATED)
        )
    test_cases = []
    for i in range(test_size):
        inputs = fresh_input()
        test_cases.append(
            TrainingCase(i, inputs, problem.oracle(inputs), CaseOrigin.ORACLE_GENERATED)
        )
    train = CaseSet(train_cases, CaseRole.TRAIN, expert_cutoff=len(edges))
    test = CaseSet(test_cases, CaseRole.TEST, expert_cutoff=0)
    return train, test


# ---------------------------------------------------------------------------
# CSV interchange
# ---------------------------------------------------------------------------

CASES_SCHEMA = "ids-lexicase cases v1"


def export_cases(case_set: CaseSet, problem: ProblemSpec, path):
    """Write a case set as CSV (inputs/outputs as JSON literals)."""
    import csv

    with open(path, "w", newline="") as fh:
        fh.write(
            f"# {CASES_SCHEMA} problem={problem.name} role={case_set.role.value} "
            f"expert_cutoff={case_set.expert_cutoff}\n"
        )
        writer = csv.writer(fh)
        writer.writerow(["case_index", "origin", "inputs", "outputs"])
        for case in case_set.cases:
            writer.writerow([
                case.index,
                case.origin.value,
                json.dumps([list(v) if isinstance(v, tuple) else v
                            for v in case.inputs]),
                json.dumps(list(case.expected_outputs)),
            ])


def import_cases(path) -> tuple[CaseSet, str]:
    """Read a case CSV written by export_cases; returns (case_set, problem name)."""
    import csv

    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if not header.startswith(f"# {CASES_SCHEMA}"):
            raise ValueError(f"unrecognized case file header: {header}")
        meta = dict(kv.split("=") for kv in header.split()[4:])
        problem = get_problem(meta["problem"])
        cases = []
        for row in csv.DictReader(fh):
            inputs = tuple(
                tuple(v) if t == "vec" else v
                for v, t in zip(json.loads(row["inputs"]), problem.input_types)
            )
            outputs = tuple(json.loads(row["outputs"]))
            cases.append(TrainingCase(
                int(row["case_index"]),
                inputs,
                outputs,
                CaseOrigin(row["origin"]),
            ))
    case_set = CaseSet(
        cases,
        CaseRole(meta["role"]),
        expert_cutoff=int(meta["expert_cutoff"]),
    )
    return case_set, problem.name
