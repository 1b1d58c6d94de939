"""Plushy genomes and the stack-machine interpreter.

A plushy genome is a flat sequence of tokens (instructions, typed literals,
and `close` markers). Translation turns it into a nested program: an
instruction that opens N blocks is followed by N sibling code blocks, with
`close` ending the current block and unclosed blocks auto-closed at the end
of the genome. Execution is deterministic, never raises on operand
underflow, and halts when the exec stack empties or the step limit is hit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instructions import CLOSE, Instruction, Literal

_STACK_ATTR = {"int": "ints", "bool": "bools", "str": "strs", "vec": "vecs"}


class VmState:
    __slots__ = ("ints", "bools", "strs", "vecs", "exec", "inputs", "printed", "steps_used")

    def __init__(self, inputs: tuple = ()):
        self.ints = []
        self.bools = []
        self.strs = []
        self.vecs = []
        self.exec = []
        self.inputs = inputs
        self.printed = ""
        self.steps_used = 0


@dataclass(frozen=True)
class Individual:
    genome: tuple
    id: int

    @property
    def size(self) -> int:
        return len(self.genome)


class ExecutionCounter:
    """Running count of program executions charged against the run budget."""

    def __init__(self):
        self.count = 0

    def add(self, n: int):
        self.count += n


def translate(genes) -> list:
    """Plushy genome -> nested program list."""
    root: list = []
    cur = root
    # (parent container, sibling blocks still to open once cur closes)
    frames: list[tuple[list, int]] = []

    def open_block(container, remaining):
        nonlocal cur
        block: list = []
        container.append(block)
        frames.append((container, remaining))
        cur = block

    def close_block():
        nonlocal cur
        container, remaining = frames.pop()
        if remaining > 1:
            open_block(container, remaining - 1)
        else:
            cur = container

    for gene in genes:
        if gene is CLOSE:
            if frames:
                close_block()
        else:
            cur.append(gene)
            if isinstance(gene, Instruction) and gene.opens:
                open_block(cur, gene.opens)
    while frames:
        close_block()
    return root


def run_program(program: list, inputs: tuple, step_limit: int) -> VmState:
    """Execute a translated program; returns the final machine state."""
    state = VmState(inputs)
    stack = state.exec
    stack.append(program)
    steps = 0
    while stack and steps < step_limit:
        steps += 1
        item = stack.pop()
        cls = item.__class__
        if cls is list:
            stack.extend(reversed(item))
        elif cls is Literal:
            getattr(state, _STACK_ATTR[item.stack]).append(item.value)
        else:
            item.fn(state)
    state.steps_used = steps
    return state


def _read_outputs(state: VmState, output_types) -> tuple | None:
    """Top of the designated typed stack per output; None if any is missing.

    Multi-output problems read the top len(output_types) values of the one
    designated stack, earliest output deepest (e.g. two ints: output 1 is
    second-from-top).
    """
    stack = getattr(state, _STACK_ATTR[output_types[0]])
    n = len(output_types)
    if len(stack) < n:
        return None
    return tuple(stack[-n:])


def execute(genome, inputs, output_types, step_limit: int) -> tuple | None:
    """Run a plushy genome on one input; None means no output (case fails)."""
    state = run_program(translate(genome), inputs, step_limit)
    return _read_outputs(state, output_types)


def make_input_instruction(i: int, value_type: str) -> Instruction:
    """inN: push the N-th input value onto its typed stack."""
    attr = _STACK_ATTR[value_type]

    def fn(s, _i=i, _attr=attr):
        getattr(s, _attr).append(s.inputs[_i])

    return Instruction(name=f"in{i}", fn=fn, opens=0)


def random_plushy(rng: np.random.Generator, token_pool, max_size: int) -> tuple:
    """Uniform-length genome in [1, max_size], tokens uniform from the pool."""
    if not token_pool:
        raise ValueError("empty instruction set")
    if max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")
    length = int(rng.integers(1, max_size + 1))
    idx = rng.integers(0, len(token_pool), size=length)
    return tuple(token_pool[i] for i in idx)


def umad(parent: tuple, rate: float, rng: np.random.Generator, token_pool) -> tuple:
    """Uniform mutation by addition and deletion.

    Addition: each gene gains a random neighbor token with probability
    `rate` (inserted before or after, 50/50). Deletion: each gene of the
    grown genome is dropped with probability rate/(1+rate), which makes the
    expected size change zero.
    """
    if not 0 < rate < 1:
        raise ValueError(f"UMAD rate must be in (0, 1), got {rate}")
    n = len(parent)
    grown: list = []
    if n:
        add = rng.random(n) < rate
        n_add = int(add.sum())
        before = rng.random(n_add) < 0.5
        new_idx = rng.integers(0, len(token_pool), size=n_add)
        j = 0
        for i, gene in enumerate(parent):
            if add[i]:
                tok = token_pool[new_idx[j]]
                if before[j]:
                    grown.append(tok)
                    grown.append(gene)
                else:
                    grown.append(gene)
                    grown.append(tok)
                j += 1
            else:
                grown.append(gene)
    if not grown:
        return ()
    keep = rng.random(len(grown)) >= rate / (1.0 + rate)
    return tuple(g for g, k in zip(grown, keep) if k)


def evaluate_population(pop, cases, problem, step_limit: int,
                        counter: ExecutionCounter | None = None):
    """Solve matrix of `pop` on `cases`; charges |pop| * |cases| executions.

    Entry (j, i) is 1 iff individual i's outputs exactly equal case j's
    expected outputs.
    """
    from .core import SolveMatrix

    if not cases:
        raise ValueError("cases must be non-empty")
    passes = np.zeros((len(cases), len(pop)), dtype=np.uint8)
    out_types = problem.output_types
    for i, ind in enumerate(pop):
        program = translate(ind.genome)
        for j, case in enumerate(cases):
            state = run_program(program, case.inputs, step_limit)
            if _read_outputs(state, out_types) == case.expected_outputs:
                passes[j, i] = 1
    if counter is not None:
        counter.add(len(pop) * len(cases))
    return SolveMatrix(passes=passes)
