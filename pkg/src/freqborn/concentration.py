"""Concentration diagnostics: window masses, variance tail bounds, localization.

The weight of a two-level decomposition concentrates at the level probability
as N grows; these helpers measure how much mass escapes an epsilon-window and
compare it with the variance/eps^2 tail bound, which is the finite-N evidence
for that limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .decomposition import FrequencyDecomposition, SingleCopyState, decompose_two_level
from .errors import NormalizationError

LOCALIZATION_INPUT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class WindowMass:
    """Mass split at the window [r0 - eps, r0 + eps].

    ``mass_below``/``mass_above`` use strict inequalities; frequencies falling
    exactly on a boundary count as inside.
    """

    r0: float
    eps: float
    mass_below: float
    mass_inside: float
    mass_above: float
    chebyshev_bound: float

    @property
    def mass_outside(self) -> float:
        return self.mass_below + self.mass_above


@dataclass(frozen=True)
class ScanRecord:
    num_copies: int
    window: WindowMass


@dataclass(frozen=True)
class ConvergenceScan:
    """Window analyses at r0 = |a|^2 for an increasing list of copy counts."""

    level_probs: tuple[float, ...]
    eps: float
    records: tuple[ScanRecord, ...]


@dataclass(frozen=True)
class LocalizationVerdict:
    localized: bool
    q0_estimate: float
    residual_outside: float
    eps: float
    mass_tolerance: float


def chebyshev_bound(a_sq: float, num_copies: int, eps: float) -> float:
    """Tail bound a_sq (1 - a_sq) / (eps^2 N) on the mass outside the window."""
    a_sq = float(a_sq)
    if not 0.0 <= a_sq <= 1.0:
        raise ValueError(f"a_sq must lie in [0, 1], got {a_sq!r}")
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    if num_copies < 1:
        raise ValueError(f"num_copies must be positive, got {num_copies}")
    # left-to-right division keeps round cases like (0.5, 100, 0.1) -> 0.25 exact
    return a_sq * (1.0 - a_sq) / eps / eps / num_copies


def _nearest_count(r: float, total: int) -> int:
    # nearest admissible n/total to r; equidistant cases take the lower n
    x = float(r) * total
    lower = math.floor(x)
    n = lower if x - lower <= 0.5 else lower + 1
    return min(max(n, 0), total)


def nearest_frequency_weight(decomp: FrequencyDecomposition, r: float) -> float:
    """Linear-domain weight at the admissible frequency n/N nearest to ``r``."""
    if decomp.num_levels != 2:
        raise ValueError("nearest_frequency_weight needs a two-level decomposition")
    n = _nearest_count(r, decomp.num_copies)
    return float(np.exp(decomp.log_weights[n]))


def scaled_density(decomp: FrequencyDecomposition, r: float) -> float:
    """N times the nearest sector weight: the finite-N density approximant.

    Its Riemann sum over the grid {n/N} with spacing 1/N reproduces the total
    mass.
    """
    return decomp.num_copies * nearest_frequency_weight(decomp, r)


def window_masses(
    decomp: FrequencyDecomposition, level: int, r0: float, eps: float
) -> WindowMass:
    """Partition one level's frequency mass at the window around ``r0``.

    Strictly below r0 - eps, strictly above r0 + eps, closed window between;
    the attached bound uses the level's own probability.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    counts = decomp.level_counts(level)
    r = counts / np.float64(decomp.num_copies)
    weights = np.exp(decomp.log_weights)
    below = r < r0 - eps
    above = r > r0 + eps
    return WindowMass(
        r0=float(r0),
        eps=float(eps),
        mass_below=float(weights[below].sum()),
        mass_inside=float(weights[~(below | above)].sum()),
        mass_above=float(weights[above].sum()),
        chebyshev_bound=chebyshev_bound(float(decomp.level_probs[level]), decomp.num_copies, eps),
    )


def convergence_scan(
    state: SingleCopyState, eps: float, copy_counts: Sequence[int]
) -> ConvergenceScan:
    """Window analysis at r0 = |a|^2 for each N in a strictly increasing list."""
    if state.num_levels != 2:
        raise ValueError("convergence_scan needs a two-level state")
    counts = [int(n) for n in copy_counts]
    if not counts:
        raise ValueError("need at least one copy count")
    if any(b <= a for a, b in zip(counts, counts[1:])):
        raise ValueError(f"copy counts must be strictly increasing, got {counts}")
    a_sq = float(state.level_probs[0])
    records = []
    for n in counts:
        decomp = decompose_two_level(state, n)
        records.append(ScanRecord(num_copies=n, window=window_masses(decomp, 0, a_sq, eps)))
    return ConvergenceScan(
        level_probs=tuple(float(p) for p in state.level_probs),
        eps=float(eps),
        records=tuple(records),
    )


def check_localization(
    weights: Mapping[float, float] | Iterable[tuple[float, float]],
    eps: float,
    mass_tolerance: float,
) -> LocalizationVerdict:
    """Decide whether a distribution over a real variable sits in one window.

    The candidate location q0 is the weighted median (first point where the
    cumulative mass reaches half the total); the verdict is localized iff the
    mass outside [q0 - eps, q0 + eps] is at most ``mass_tolerance``.  Works
    for any finitely supported weight map, not only frequency decompositions.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")
    if mass_tolerance < 0.0:
        raise ValueError(f"mass_tolerance must be nonnegative, got {mass_tolerance!r}")
    if isinstance(weights, Mapping):
        pairs = list(weights.items())
    else:
        pairs = [(float(q), float(w)) for q, w in weights]
    if not pairs:
        raise ValueError("weights must be nonempty")
    qs = np.array([q for q, _ in pairs], dtype=np.float64)
    masses = np.array([w for _, w in pairs], dtype=np.float64)
    if np.any(masses < 0.0):
        raise ValueError("weights must be nonnegative")
    total = float(masses.sum())
    if abs(total - 1.0) > LOCALIZATION_INPUT_TOLERANCE:
        raise NormalizationError(
            f"weights sum to {total!r}, off 1 by more than {LOCALIZATION_INPUT_TOLERANCE}"
        )
    order = np.argsort(qs, kind="stable")
    qs = qs[order]
    masses = masses[order]
    cumulative = np.cumsum(masses)
    q0 = float(qs[np.searchsorted(cumulative, 0.5 * total)])
    outside = float(masses[(qs < q0 - eps) | (qs > q0 + eps)].sum())
    return LocalizationVerdict(
        localized=outside <= mass_tolerance,
        q0_estimate=q0,
        residual_outside=outside,
        eps=float(eps),
        mass_tolerance=float(mass_tolerance),
    )


def frequency_weight_map(decomp: FrequencyDecomposition, level: int = 0) -> dict[float, float]:
    """Linear weights keyed by one level's relative frequency n/N.

    Multi-level sectors sharing the same frequency are accumulated.
    """
    counts = decomp.level_counts(level)
    r = counts / np.float64(decomp.num_copies)
    weights = np.exp(decomp.log_weights)
    out: dict[float, float] = {}
    for rv, wv in zip(r.tolist(), weights.tolist()):
        out[rv] = out.get(rv, 0.0) + wv
    return out
