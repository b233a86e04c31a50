"""Expansion of N-copy product states over fixed occupation-count sectors.

A single-copy state with level probabilities p_i, repeated N times, carries
weight multinomial(N; {n_i}) * prod_i p_i^{n_i} on the sector where exactly
n_i copies occupy level i.  With two levels the sectors are indexed by the
count n of the first level and the relative frequency is r = n/N.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .combinatorics import LOG_ZERO, log_sum_exp_array, occupancy_log_weights
from .errors import NormalizationError, check_capacity

STATE_NORM_TOLERANCE = 1e-9

MAX_TWO_LEVEL_COPIES = 10**7
MAX_SECTORS = 10**7
MAX_BRUTE_FORCE_SEQUENCES = 2 * 10**7


class SingleCopyState:
    """Normalized single-copy state of an M-level system (M >= 2).

    ``level_probs`` holds the squared amplitude moduli.  States built through
    :meth:`from_probabilities` keep the given probabilities exactly instead of
    round-tripping them through square roots.
    """

    __slots__ = ("amplitudes", "level_probs")

    def __init__(self, amplitudes: Sequence[complex], renormalize: bool = False):
        amps = np.array(amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] < 2:
            raise ValueError("need a one-dimensional amplitude vector with at least two levels")
        probs = amps.real * amps.real + amps.imag * amps.imag
        total = float(np.sum(probs))
        if renormalize:
            if total <= 0.0:
                raise ValueError("cannot renormalize a zero state")
            amps = amps / math.sqrt(total)
            probs = amps.real * amps.real + amps.imag * amps.imag
        elif abs(total - 1.0) > STATE_NORM_TOLERANCE:
            raise NormalizationError(
                f"squared amplitudes sum to {total!r}, off 1 by more than {STATE_NORM_TOLERANCE}"
            )
        amps.setflags(write=False)
        probs.setflags(write=False)
        self.amplitudes = amps
        self.level_probs = probs

    @classmethod
    def from_probabilities(cls, probs: Sequence[float], renormalize: bool = False) -> "SingleCopyState":
        """Build a state from level probabilities, stored exactly as given."""
        p = np.array(probs, dtype=np.float64)
        if p.ndim != 1 or p.shape[0] < 2:
            raise ValueError("need at least two level probabilities")
        if np.any(p < 0.0):
            raise ValueError("probabilities must be nonnegative")
        total = float(np.sum(p))
        if renormalize:
            if total <= 0.0:
                raise ValueError("cannot renormalize zero probabilities")
            p = p / total
        elif abs(total - 1.0) > STATE_NORM_TOLERANCE:
            raise NormalizationError(
                f"probabilities sum to {total!r}, off 1 by more than {STATE_NORM_TOLERANCE}"
            )
        state = cls.__new__(cls)
        amps = np.sqrt(p).astype(np.complex128)
        amps.setflags(write=False)
        p.setflags(write=False)
        state.amplitudes = amps
        state.level_probs = p
        return state

    @classmethod
    def from_alpha_probability(cls, a_sq: float) -> "SingleCopyState":
        """Two-level state whose designated outcome carries probability ``a_sq``."""
        a_sq = float(a_sq)
        if not 0.0 <= a_sq <= 1.0:
            raise ValueError(f"a_sq must lie in [0, 1], got {a_sq!r}")
        return cls.from_probabilities([a_sq, 1.0 - a_sq])

    @property
    def num_levels(self) -> int:
        return self.amplitudes.shape[0]

    def __repr__(self) -> str:
        return f"SingleCopyState(level_probs={self.level_probs.tolist()})"


@dataclass(frozen=True)
class MomentReport:
    """Mean and variance of one level's relative frequency, against prediction.

    The variance is centered at the level probability, not at the empirical
    mean; ``predicted_variance`` is p(1-p)/N.
    """

    level: int
    mean: float
    variance: float
    predicted_mean: float
    predicted_variance: float
    mean_deviation: float
    variance_deviation: float


class FrequencyDecomposition:
    """Sector weights of an N-copy state, in the natural-log domain.

    Two-level decompositions store a dense ``(N+1,)`` weight array indexed by
    the count of level 0; multi-level ones also carry the ``(R, M)`` count
    matrix, rows in ascending lexicographic order.
    """

    __slots__ = ("num_copies", "level_probs", "log_weights", "_counts", "_index")

    def __init__(
        self,
        num_copies: int,
        level_probs: np.ndarray,
        log_weights: np.ndarray,
        counts: np.ndarray | None = None,
    ):
        self.num_copies = int(num_copies)
        probs = np.asarray(level_probs, dtype=np.float64)
        probs.setflags(write=False)
        self.level_probs = probs
        log_weights.setflags(write=False)
        self.log_weights = log_weights
        if counts is not None:
            counts.setflags(write=False)
        self._counts = counts
        self._index: dict[tuple[int, ...], int] | None = None

    @property
    def num_levels(self) -> int:
        return self.level_probs.shape[0]

    @property
    def num_sectors(self) -> int:
        return self.log_weights.shape[0]

    def level_counts(self, level: int) -> np.ndarray:
        """Copy counts of one level across all sectors."""
        if not 0 <= level < self.num_levels:
            raise ValueError(f"level {level} out of range for {self.num_levels} levels")
        if self._counts is None:
            ns = np.arange(self.num_copies + 1, dtype=np.int64)
            return ns if level == 0 else self.num_copies - ns
        return self._counts[:, level]

    def items(self) -> Iterator[tuple[tuple[int, ...], float]]:
        """(counts, log weight) pairs in storage order."""
        if self._counts is None:
            for n, w in enumerate(self.log_weights.tolist()):
                yield (n, self.num_copies - n), w
        else:
            for row, w in zip(self._counts.tolist(), self.log_weights.tolist()):
                yield tuple(row), w

    def log_weight_of(self, counts: Sequence[int]) -> float:
        """Log weight of one occupation sector."""
        key = tuple(int(c) for c in counts)
        if len(key) != self.num_levels or any(c < 0 for c in key) or sum(key) != self.num_copies:
            raise ValueError(f"{key} is not an occupation of {self.num_copies} copies "
                             f"over {self.num_levels} levels")
        if self._counts is None:
            return float(self.log_weights[key[0]])
        if self._index is None:
            self._index = {tuple(row): i for i, row in enumerate(self._counts.tolist())}
        return float(self.log_weights[self._index[key]])


def decompose_two_level(state: SingleCopyState, num_copies: int) -> FrequencyDecomposition:
    """Dense expansion of the N-copy state of a two-level system.

    Weight at count ``n`` equals C(N,n) |a|^{2n} |b|^{2(N-n)} in the linear
    domain; levels with zero probability yield the ``LOG_ZERO`` sentinel.
    """
    if state.num_levels != 2:
        raise ValueError(f"state has {state.num_levels} levels, expected 2")
    num_copies = int(num_copies)
    if num_copies < 1:
        raise ValueError(f"num_copies must be positive, got {num_copies}")
    check_capacity(num_copies, MAX_TWO_LEVEL_COPIES, "two-level decomposition copy count")
    ns = np.arange(num_copies + 1, dtype=np.int64)
    log_weights = occupancy_log_weights(
        num_copies,
        [ns, num_copies - ns],
        [float(state.level_probs[0]), float(state.level_probs[1])],
    )
    return FrequencyDecomposition(num_copies, state.level_probs, log_weights)


def compositions(total: int, parts: int) -> np.ndarray:
    """All length-``parts`` nonnegative integer vectors summing to ``total``.

    Rows come out in ascending lexicographic order, the fixed enumeration
    order of every multi-level decomposition.
    """
    total = int(total)
    parts = int(parts)
    if total < 0 or parts < 1:
        raise ValueError(f"need total >= 0 and parts >= 1, got ({total}, {parts})")
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    if parts == 2:
        first = np.arange(total + 1, dtype=np.int64)
        return np.column_stack([first, total - first])
    blocks = []
    for first in range(total + 1):
        rest = compositions(total - first, parts - 1)
        head = np.full((rest.shape[0], 1), first, dtype=np.int64)
        blocks.append(np.hstack([head, rest]))
    return np.vstack(blocks)


def decompose_multilevel(state: SingleCopyState, num_copies: int) -> FrequencyDecomposition:
    """Expansion of the N-copy state of an M-level system over all occupations.

    Covers every composition of N into M parts exactly once; at M = 2 the
    weights agree with :func:`decompose_two_level` bit for bit.
    """
    num_copies = int(num_copies)
    if num_copies < 1:
        raise ValueError(f"num_copies must be positive, got {num_copies}")
    m = state.num_levels
    sector_count = math.comb(num_copies + m - 1, m - 1)
    check_capacity(sector_count, MAX_SECTORS, "multi-level decomposition sector count")
    counts = compositions(num_copies, m)
    log_weights = occupancy_log_weights(
        num_copies,
        [counts[:, i] for i in range(m)],
        [float(p) for p in state.level_probs],
    )
    return FrequencyDecomposition(num_copies, state.level_probs, log_weights, counts=counts)


def total_mass(decomp: FrequencyDecomposition) -> float:
    """exp(log-sum-exp over all sector weights); 1 within 1e-10 for valid states."""
    return float(np.exp(log_sum_exp_array(decomp.log_weights)))


def frequency_moments(decomp: FrequencyDecomposition, level: int = 0) -> MomentReport:
    """Mean and variance of one level's relative frequency.

    The variance is taken about the level probability p, and the report
    carries the closed-form prediction p(1-p)/N alongside.
    """
    counts = decomp.level_counts(level)
    prob = float(decomp.level_probs[level])
    r = counts / np.float64(decomp.num_copies)
    weights = np.exp(decomp.log_weights)
    mean = float(np.dot(r, weights))
    variance = float(np.dot((r - prob) ** 2, weights))
    predicted = prob * (1.0 - prob) / decomp.num_copies
    return MomentReport(
        level=int(level),
        mean=mean,
        variance=variance,
        predicted_mean=prob,
        predicted_variance=predicted,
        mean_deviation=abs(mean - prob),
        variance_deviation=abs(variance - predicted),
    )


def brute_force_decompose(state: SingleCopyState, num_copies: int) -> FrequencyDecomposition:
    """Oracle expansion by enumerating every outcome sequence.

    Each of the M^N sequences contributes the squared modulus of its amplitude
    product to the sector matching its occupation counts.  Deliberately shares
    no numerics with the closed-form route beyond complex arithmetic.
    """
    num_copies = int(num_copies)
    if num_copies < 1:
        raise ValueError(f"num_copies must be positive, got {num_copies}")
    m = state.num_levels
    sequences = m**num_copies
    check_capacity(sequences, MAX_BRUTE_FORCE_SEQUENCES, "brute-force sequence enumeration")
    amps = [complex(a) for a in state.amplitudes]
    masses: dict[tuple[int, ...], float] = {}
    for seq in itertools.product(range(m), repeat=num_copies):
        amp = complex(1.0)
        occupation = [0] * m
        for s in seq:
            amp *= amps[s]
            occupation[s] += 1
        key = tuple(occupation)
        masses[key] = masses.get(key, 0.0) + (amp.real * amp.real + amp.imag * amp.imag)
    keys = sorted(masses)
    counts = np.array(keys, dtype=np.int64)
    log_weights = np.array(
        [math.log(masses[k]) if masses[k] > 0.0 else LOG_ZERO for k in keys]
    )
    return FrequencyDecomposition(num_copies, state.level_probs, log_weights, counts=counts)
