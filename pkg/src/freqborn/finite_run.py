"""Statistics of many-but-finite measurement runs.

A run of N_inner identical two-level measurements has outcome-count masses
equal to the linear two-level sector weights.  Repeating the whole run many
times concentrates the frequency of any particular count at that count's
mass, which the outer check measures through the hit-vs-miss marginal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concentration import WindowMass, window_masses
from .decomposition import SingleCopyState, decompose_two_level


@dataclass(frozen=True, eq=False)
class FiniteRunDistribution:
    """Masses of observing n successes in a run of ``num_measurements``."""

    num_measurements: int
    a_sq: float
    masses: np.ndarray


def finite_run_distribution(state: SingleCopyState, num_measurements: int) -> FiniteRunDistribution:
    """Outcome-count distribution of one finite run of identical measurements."""
    if state.num_levels != 2:
        raise ValueError("finite_run_distribution needs a two-level state")
    decomp = decompose_two_level(state, num_measurements)
    masses = np.exp(decomp.log_weights)
    masses.setflags(write=False)
    return FiniteRunDistribution(
        num_measurements=int(num_measurements),
        a_sq=float(state.level_probs[0]),
        masses=masses,
    )


def outer_frequency_check(
    dist: FiniteRunDistribution, num_runs: int, observed_count: int, eps: float
) -> WindowMass:
    """Concentration of 'exactly observed_count successes per run' over many runs.

    Uses the two-level hit-vs-miss marginal of the full (N_inner+1)-level
    expansion, which agrees with it for single-count frequencies; the window
    sits at r0 = masses[observed_count].
    """
    observed_count = int(observed_count)
    if not 0 <= observed_count <= dist.num_measurements:
        raise ValueError(
            f"observed_count={observed_count} out of range 0..{dist.num_measurements}"
        )
    hit_probability = float(dist.masses[observed_count])
    state = SingleCopyState.from_alpha_probability(hit_probability)
    decomp = decompose_two_level(state, num_runs)
    return window_masses(decomp, 0, hit_probability, eps)


def surprise_index(dist: FiniteRunDistribution, observed_count: int) -> float:
    """Total mass of outcomes no more likely than the observed count.

    1.0 means maximally typical (the mode); small values flag outcomes whose
    likelihood class is collectively improbable.
    """
    observed_count = int(observed_count)
    if not 0 <= observed_count <= dist.num_measurements:
        raise ValueError(
            f"observed_count={observed_count} out of range 0..{dist.num_measurements}"
        )
    threshold = dist.masses[observed_count]
    return float(dist.masses[dist.masses <= threshold].sum())
