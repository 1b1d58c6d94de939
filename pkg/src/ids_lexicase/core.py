"""Shared domain types: training cases, solve matrices, case distances.

A solve matrix records, per (case, individual), whether the individual
produced the exact expected output. The row for a case is its solve vector;
the distance between two cases is the Hamming distance between their solve
vectors, and two cases at distance zero are synonymous (solved by exactly
the same individuals).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np


class CaseOrigin(Enum):
    EXPERT_EDGE_CASE = "expert"
    ORACLE_GENERATED = "oracle"


class CaseRole(Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class TrainingCase:
    """One input/output example. Inputs and outputs are tuples of typed
    values (int, str, bool, or tuple-of-int for integer vectors)."""

    index: int
    inputs: tuple
    expected_outputs: tuple
    origin: CaseOrigin


@dataclass
class CaseSet:
    """Ordered list of cases; the first `expert_cutoff` are expert edge cases."""

    cases: list[TrainingCase]
    role: CaseRole
    expert_cutoff: int = 0

    def __post_init__(self):
        for pos, case in enumerate(self.cases):
            if case.index != pos:
                raise ValueError(f"case index {case.index} at position {pos}")
            want = (
                CaseOrigin.EXPERT_EDGE_CASE
                if pos < self.expert_cutoff
                else CaseOrigin.ORACLE_GENERATED
            )
            if case.origin is not want:
                raise ValueError(
                    f"case {pos} has origin {case.origin}, expected {want}"
                )

    def __len__(self) -> int:
        return len(self.cases)

    def __getitem__(self, i: int) -> TrainingCase:
        return self.cases[i]


class DimensionError(ValueError):
    """Mismatched or empty matrix/vector dimensions."""


@dataclass
class SolveMatrix:
    """Binary pass/fail outcomes, cases (rows) x individuals (columns).

    `evaluated` distinguishes "evaluated and failed" from "not evaluated";
    all operations here require fully evaluated matrices.
    """

    passes: np.ndarray
    evaluated: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        self.passes = np.asarray(self.passes, dtype=np.uint8)
        if self.passes.ndim != 2:
            raise DimensionError("solve matrix must be 2-dimensional")
        if self.evaluated is None:
            self.evaluated = np.ones_like(self.passes, dtype=bool)
        else:
            self.evaluated = np.asarray(self.evaluated, dtype=bool)
            if self.evaluated.shape != self.passes.shape:
                raise DimensionError("evaluated mask shape mismatch")

    @property
    def n_cases(self) -> int:
        return self.passes.shape[0]

    @property
    def n_individuals(self) -> int:
        return self.passes.shape[1]

    def solve_vector(self, j: int) -> np.ndarray:
        return self.passes[j]

    def case_masks(self) -> list[int]:
        """Per-case bitmask of passing individuals (bit i = column i)."""
        masks = []
        for row in self.passes:
            m = 0
            for i in np.flatnonzero(row):
                m |= 1 << int(i)
            masks.append(m)
        return masks


def hamming_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions where two equal-length binary vectors differ."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))


@dataclass
class CaseDistanceMatrix:
    """Pairwise Hamming distances between case solve vectors.

    `max_distance` is the number of individuals behind the most recent
    computation, or the maximally-far sentinel before the first one.
    Distances are plain integers; only their relative order is ever used.
    """

    dist: np.ndarray
    max_distance: int

    def __post_init__(self):
        self.dist = np.asarray(self.dist, dtype=np.int64)
        if self.dist.ndim != 2 or self.dist.shape[0] != self.dist.shape[1]:
            raise DimensionError("distance matrix must be square")

    @property
    def n_cases(self) -> int:
        return self.dist.shape[0]

    @classmethod
    def maximally_far(cls, n_cases: int, sentinel: int) -> "CaseDistanceMatrix":
        """Pre-computation state: every pair looks maximally far apart."""
        d = np.full((n_cases, n_cases), sentinel, dtype=np.int64)
        np.fill_diagonal(d, 0)
        return cls(dist=d, max_distance=sentinel)


def compute_case_distances(solves: SolveMatrix) -> CaseDistanceMatrix:
    """All-pairs Hamming distances between the rows of a solve matrix.

    For binary rows, |x - y| summed equals x.x + y.y - 2 x.y, so the whole
    matrix comes from one Gram product.
    """
    if solves.n_cases < 1 or solves.n_individuals < 1:
        raise DimensionError("solve matrix must have at least one case and one individual")
    if not solves.evaluated.all():
        raise ValueError("solve matrix is not fully evaluated")
    m = solves.passes.astype(np.int64)
    gram = m @ m.T
    ones = np.diag(gram)
    dist = ones[:, None] + ones[None, :] - 2 * gram
    return CaseDistanceMatrix(dist=dist, max_distance=solves.n_individuals)


@dataclass(frozen=True)
class DownSample:
    """Ordered, duplicate-free case indices selected for one generation."""

    case_indices: tuple[int, ...]
    target_size: int

    def __post_init__(self):
        if len(self.case_indices) != self.target_size:
            raise ValueError(
                f"down-sample has {len(self.case_indices)} indices, "
                f"target is {self.target_size}"
            )
        if len(set(self.case_indices)) != len(self.case_indices):
            raise ValueError("down-sample contains duplicate case indices")

    def __len__(self) -> int:
        return self.target_size


def exact_rate(r: float) -> Fraction:
    """Recover the rational rate a float was meant to be (e.g. 0.05 -> 1/20,
    6/9 -> 2/3), so size and generation arithmetic floors exactly."""
    return Fraction(r).limit_denominator(1_000_000)


def downsample_target_size(n_train: int, r: float) -> int:
    """floor(r * n_train), clamped to at least one case (with a warning)."""
    if not 0 < r <= 1:
        raise ValueError(f"down-sample rate must be in (0, 1], got {r}")
    size = math.floor(exact_rate(r) * n_train)
    if size == 0:
        warnings.warn(
            f"down-sample of {n_train} cases at r={r} is empty; clamping to 1 case"
        )
        size = 1
    return size
