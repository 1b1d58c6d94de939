"""Seeded random-number streams.

Every stochastic component of a run draws from its own named stream so that
changing how one component consumes randomness (e.g. how the down-sample is
built) cannot perturb the others. Identical (seed, stream) pairs reproduce
identical draw sequences on every platform (PCG64 via SeedSequence).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Stream ids are part of the reproducibility contract; never renumber.
STREAM_IDS = {
    "selection": 0,
    "variation": 1,
    "sampling": 2,
    "parent-sample": 3,
    "problem-generation": 4,
}


def stream_rng(seed: int, stream: str) -> np.random.Generator:
    """Generator for one named sub-stream of `seed`."""
    if stream not in STREAM_IDS:
        raise ValueError(f"unknown rng stream: {stream!r}")
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([int(seed), STREAM_IDS[stream]]))
    )


@dataclass
class RunRngs:
    """The per-run bundle of independent streams.

    selection: lexicase selection events (case shuffles, tie splits)
    variation: genome initialization and mutation
    sampling: down-sample construction (random picks, traversal ties, fill)
    parent_sample: parent sub-sampling for case-distance estimation
    """

    selection: np.random.Generator
    variation: np.random.Generator
    sampling: np.random.Generator
    parent_sample: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RunRngs":
        return cls(
            selection=stream_rng(seed, "selection"),
            variation=stream_rng(seed, "variation"),
            sampling=stream_rng(seed, "sampling"),
            parent_sample=stream_rng(seed, "parent-sample"),
        )
