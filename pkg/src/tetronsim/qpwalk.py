"""Random-walk model for quasiparticle-pair absorption at the chain ends.

Two excited quasiparticles start at the same lattice point x of [0, L] and
perform independent unbiased +/-1 walks until each is absorbed at an end.
A pair absorbed at opposite ends flips the parities of both end modes, which
is a Pauli error; absorption of both at the same end is harmless.  For a
uniformly distributed starting point the opposite-end probability is
(1/3)(1 - 1/L), approaching 1/3 for long chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

# Trials are split over this many deterministic sub-streams (fewer when there
# are fewer trials).  Partitioning work over threads must keep the per-chunk
# streams, so results do not depend on the executor.
N_CHUNKS = 64

# Absorbing walks take O(L^2) expected steps; this cap only trips on bugs.
MAX_STEPS_PER_WALKER = 10 ** 9


@dataclass(frozen=True)
class WalkConfig:
    """Domain size, trial count, and RNG seed of a Monte Carlo run."""

    length: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.length < 1:
            raise InvalidParameterError("length must be >= 1")
        if self.trials < 1:
            raise InvalidParameterError("trials must be >= 1")


@dataclass(frozen=True)
class WalkResult:
    """Exact and Monte Carlo opposite-end absorption probabilities."""

    p_opposite_exact: float
    p_opposite_mc: float
    mc_std_error: float


def absorb_prob_right(x: int, length: int) -> float:
    """Probability that a walker from x is absorbed at L rather than 0: x/L."""
    _check_point(x, length)
    return x / length


def prob_opposite_ends(x: int, length: int) -> float:
    """Probability that two independent walkers from x end at opposite ends."""
    _check_point(x, length)
    p = x / length
    return 2.0 * p * (1.0 - p)


def _check_point(x: int, length: int) -> None:
    if length < 1:
        raise InvalidParameterError("length must be >= 1")
    if not 0 <= x <= length:
        raise InvalidParameterError("start point %r outside [0, %d]" % (x, length))


def average_opposite(length: int) -> float:
    """Opposite-end probability averaged over all L+1 starting points.

    Returns the closed form (1/3)(1 - 1/L) after checking it against the
    direct lattice summation to within 1e-14.
    """
    if length < 1:
        raise InvalidParameterError("length must be >= 1")
    closed = (1.0 - 1.0 / length) / 3.0
    direct = math.fsum(prob_opposite_ends(x, length) for x in range(length + 1))
    direct /= (length + 1)
    if abs(closed - direct) > 1e-14:
        raise AssertionError(
            "closed form %.17g disagrees with summation %.17g" % (closed, direct)
        )
    return closed


def _walk_to_ends(rng: np.random.Generator, pos: np.ndarray, length: int) -> np.ndarray:
    """Advance every walker until absorption; returns True where absorbed at L."""
    pos = pos.astype(np.int64, copy=True)
    active = (pos > 0) & (pos < length)
    sweeps = 0
    while np.any(active):
        steps = rng.integers(0, 2, size=int(active.sum()), dtype=np.int64) * 2 - 1
        pos[active] += steps
        active = (pos > 0) & (pos < length)
        sweeps += 1
        if sweeps > MAX_STEPS_PER_WALKER:
            raise RuntimeError("walker exceeded the %d-step cap" % MAX_STEPS_PER_WALKER)
    return pos == length


def _chunk_sizes(trials: int, n_chunks: int):
    base, extra = divmod(trials, n_chunks)
    return [base + (1 if i < extra else 0) for i in range(n_chunks)]


def simulate_pair_walks(config: WalkConfig) -> WalkResult:
    """Monte Carlo estimate of the average opposite-end absorption probability.

    Per trial the common starting point is drawn uniformly on {0..L}, then the
    two walkers are advanced independently (walker A fully, then walker B).
    The trial set is split over ``N_CHUNKS`` PCG64 streams spawned from the
    seed, so the result depends only on the seed, not on how chunks are
    scheduled.
    """
    length = config.length
    seq = np.random.SeedSequence(config.seed)
    n_chunks = min(N_CHUNKS, config.trials)
    children = seq.spawn(n_chunks)
    opposite = 0
    for child, n in zip(children, _chunk_sizes(config.trials, n_chunks)):
        if n == 0:
            continue
        rng = np.random.default_rng(child)
        start = rng.integers(0, length + 1, size=n, dtype=np.int64)
        end_a = _walk_to_ends(rng, start, length)
        end_b = _walk_to_ends(rng, start, length)
        opposite += int(np.count_nonzero(end_a != end_b))
    p_hat = opposite / config.trials
    std_err = math.sqrt(p_hat * (1.0 - p_hat) / config.trials)
    return WalkResult(
        p_opposite_exact=average_opposite(length),
        p_opposite_mc=p_hat,
        mc_std_error=std_err,
    )
