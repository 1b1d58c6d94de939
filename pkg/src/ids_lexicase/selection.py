"""Parent selection: lexicase plus random and informed down-sampling.

Lexicase filters the population through a random ordering of the active
cases, keeping case-by-case only the individuals that pass. Down-sampling
replaces the active set with a per-generation subset of the training cases:
chosen uniformly (random down-sampling) or by farthest-first traversal over
pairwise case distances (informed down-sampling), where distances come from
solve vectors of either the whole population (full information) or a small
parent sample refreshed every k generations (sparse information).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    CaseDistanceMatrix,
    DimensionError,
    DownSample,
    SolveMatrix,
    compute_case_distances,
    downsample_target_size,
)


class StrategyKind(Enum):
    LEXICASE = "lexicase"
    RANDOM_DS = "random-ds"
    INFORMED_DS = "informed-ds"


@dataclass(frozen=True)
class StrategyConfig:
    """Strategy choice plus down-sampling hyperparameters.

    r: down-sample rate; rho: parent sampling rate; k: generations between
    case-distance recomputations. rho=1, k=1 is the full-information
    configuration.
    """

    kind: StrategyKind
    r: float | None = None
    rho: float | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind in (StrategyKind.RANDOM_DS, StrategyKind.INFORMED_DS):
            if self.r is None or not 0 < self.r <= 1:
                raise ValueError(f"{self.kind.value} requires r in (0, 1], got {self.r}")
        if self.kind is StrategyKind.INFORMED_DS:
            if self.rho is None or not 0 < self.rho <= 1:
                raise ValueError(f"informed-ds requires rho in (0, 1], got {self.rho}")
            if self.k is None or self.k < 1:
                raise ValueError(f"informed-ds requires k >= 1, got {self.k}")

    def label(self) -> str:
        if self.kind is StrategyKind.LEXICASE:
            return "lexicase"
        if self.kind is StrategyKind.RANDOM_DS:
            return f"random-ds_r{self.r}"
        return f"informed-ds_r{self.r}_rho{self.rho}_k{self.k}"


def _pick_set_bit(mask: int, rng: np.random.Generator) -> int:
    """Uniform-random index among the set bits of a candidate mask."""
    if mask & (mask - 1) == 0:
        return mask.bit_length() - 1
    bits = []
    while mask:
        low = mask & -mask
        bits.append(low.bit_length() - 1)
        mask ^= low
    return bits[int(rng.integers(len(bits)))]


def lexicase_select(pop, solves: SolveMatrix, count: int,
                    rng: np.random.Generator) -> list:
    """`count` independent lexicase selection events over the active cases.

    Each event shuffles the cases, then repeatedly keeps only the passing
    individuals (a case nobody left passes filters nothing), stopping when
    one candidate remains or cases run out; ties split uniformly.
    """
    if not pop:
        raise ValueError("empty population")
    if solves.n_individuals != len(pop):
        raise DimensionError("solve matrix does not cover the population")
    masks = solves.case_masks()
    n_cases = len(masks)
    everyone = (1 << len(pop)) - 1
    chosen = []
    for _ in range(count):
        cand = everyone
        for j in rng.permutation(n_cases):
            passing = cand & masks[j]
            if passing:
                cand = passing
                if passing & (passing - 1) == 0:
                    break
        chosen.append(pop[_pick_set_bit(cand, rng)])
    return chosen


def selection_probability_oracle(solves: SolveMatrix) -> np.ndarray:
    """Exact lexicase selection probability per individual.

    Brute force: enumerate every ordering of the cases, run the filter
    deterministically, and split the final survivors' probability evenly.
    Only feasible for small case counts.
    """
    n_cases = solves.n_cases
    if n_cases > 8:
        raise ValueError(f"too many cases for enumeration: {n_cases} > 8")
    masks = solves.case_masks()
    n = solves.n_individuals
    everyone = (1 << n) - 1
    probs = np.zeros(n, dtype=float)
    n_orderings = math.factorial(n_cases)
    for order in itertools.permutations(range(n_cases)):
        cand = everyone
        for j in order:
            passing = cand & masks[j]
            if passing:
                cand = passing
        share = 1.0 / (n_orderings * cand.bit_count())
        while cand:
            low = cand & -cand
            probs[low.bit_length() - 1] += share
            cand ^= low
    return probs


def random_downsample(n_train: int, r: float, rng: np.random.Generator) -> DownSample:
    """Uniform subset of floor(r * n_train) distinct case indices."""
    size = downsample_target_size(n_train, r)
    indices = rng.choice(n_train, size=size, replace=False)
    return DownSample(tuple(int(i) for i in indices), target_size=size)


def farthest_first_downsample(dist: CaseDistanceMatrix, n_train: int, r: float,
                              rng: np.random.Generator,
                              first_case: int | None = None) -> DownSample:
    """Greedy max-min traversal over case distances.

    The first case is uniform-random (or forced via `first_case`); each
    later pick maximizes its minimum distance to the sample so far, ties
    split uniformly. Once every remaining case is synonymous with the
    sample (all min-distances zero), the max-min rule itself degenerates to
    uniform-random fill.
    """
    if dist.n_cases != n_train:
        raise DimensionError(
            f"distance matrix covers {dist.n_cases} cases, training set has {n_train}"
        )
    size = downsample_target_size(n_train, r)
    d = dist.dist
    first = int(rng.integers(n_train)) if first_case is None else first_case
    picked = [first]
    remaining = [i for i in range(n_train) if i != first]
    min_dist = d[first].copy()
    while len(picked) < size:
        best = max(min_dist[i] for i in remaining)
        candidates = [i for i in remaining if min_dist[i] == best]
        nxt = candidates[int(rng.integers(len(candidates)))] if len(candidates) > 1 \
            else candidates[0]
        picked.append(nxt)
        remaining.remove(nxt)
        np.minimum(min_dist, d[nxt], out=min_dist)
    return DownSample(tuple(picked), target_size=size)


def informed_downsample_sparse(pop, train_cases, config: StrategyConfig,
                               generation: int, state: CaseDistanceMatrix,
                               rngs, evaluate) -> tuple[DownSample, CaseDistanceMatrix, int]:
    """One generation of sparse-information informed down-sampling.

    Every k-th generation (including generation 0), a uniform sample of
    ceil(rho * |pop|) parents is evaluated on the full training set and the
    case-distance matrix is recomputed from those solve vectors; every
    generation the down-sample is rebuilt from the current matrix by
    farthest-first traversal. Returns the down-sample, the (possibly
    refreshed) distance state, and the executions spent on parent sampling.

    `evaluate(parents, cases) -> SolveMatrix` is supplied by the caller so
    budget accounting stays with the harness. Parent sampling draws from
    rngs.parent_sample; traversal randomness from rngs.sampling.
    """
    if config.kind is not StrategyKind.INFORMED_DS:
        raise ValueError(f"strategy is {config.kind}, expected informed-ds")
    executions = 0
    if generation % config.k == 0:
        n_parents = math.ceil(config.rho * len(pop))
        idx = rngs.parent_sample.choice(len(pop), size=n_parents, replace=False)
        parents = [pop[int(i)] for i in idx]
        solves = evaluate(parents, list(train_cases))
        executions = n_parents * len(train_cases)
        state = compute_case_distances(solves)
    sample = farthest_first_downsample(
        state, len(train_cases), config.r, rngs.sampling
    )
    return sample, state, executions
