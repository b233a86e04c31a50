"""One-dimensional grid wavefunctions reduced to region-occupancy statistics.

A sampled wavefunction plus a measurable region collapses to an effective
two-level system: the probability of finding a copy inside the region plays
the role of |a|^2, and the N-copy sector weights coincide with the two-level
decomposition.  Half-open intervals make region membership a partition.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinatorics import occupancy_log_weights
from .decomposition import (
    FrequencyDecomposition,
    MomentReport,
    SingleCopyState,
    decompose_two_level,
    frequency_moments,
)
from .concentration import WindowMass, window_masses
from .errors import NormalizationError

GRID_NORM_TOLERANCE = 1e-6
UNIFORM_SPACING_RTOL = 1e-9


class GridWavefunction:
    """Complex samples psi(x_k) on the uniform grid x_k = origin + k * spacing.

    The left-point Riemann mass sum(|psi|^2) * spacing must be 1 within 1e-6
    unless ``renormalize`` is set.
    """

    __slots__ = ("origin", "spacing", "samples")

    def __init__(
        self,
        origin: float,
        spacing: float,
        samples: Sequence[complex],
        renormalize: bool = False,
    ):
        spacing = float(spacing)
        if not spacing > 0.0:
            raise ValueError(f"spacing must be positive, got {spacing!r}")
        values = np.array(samples, dtype=np.complex128)
        if values.ndim != 1 or values.shape[0] == 0:
            raise ValueError("need a one-dimensional, nonempty sample vector")
        density = values.real * values.real + values.imag * values.imag
        total = float(density.sum() * spacing)
        if renormalize:
            if total <= 0.0:
                raise ValueError("cannot renormalize a zero wavefunction")
            values = values / math.sqrt(total)
        elif abs(total - 1.0) > GRID_NORM_TOLERANCE:
            raise NormalizationError(
                f"grid mass is {total!r}, off 1 by more than {GRID_NORM_TOLERANCE}"
            )
        values.setflags(write=False)
        self.origin = float(origin)
        self.spacing = spacing
        self.samples = values

    @property
    def size(self) -> int:
        return self.samples.shape[0]

    def grid(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.size)

    def probability_density(self) -> np.ndarray:
        values = self.samples
        return values.real * values.real + values.imag * values.imag


@dataclass(frozen=True)
class Region:
    """Union of disjoint, sorted, half-open intervals [lo, hi)."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        previous_hi = None
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ValueError(f"interval [{lo}, {hi}) is empty or reversed")
            if previous_hi is not None and lo < previous_hi:
                raise ValueError("intervals must be sorted and pairwise disjoint")
            previous_hi = hi

    @classmethod
    def parse(cls, text: str) -> "Region":
        """Parse 'lo:hi[,lo:hi...]'; 'inf'/'-inf' bounds are accepted."""
        text = text.strip()
        if not text:
            return cls(())
        intervals = []
        for part in text.split(","):
            pieces = part.split(":")
            if len(pieces) != 2:
                raise ValueError(f"malformed interval {part!r}, expected lo:hi")
            try:
                lo, hi = float(pieces[0]), float(pieces[1])
            except ValueError:
                raise ValueError(f"malformed interval bounds in {part!r}") from None
            intervals.append((lo, hi))
        return cls(tuple(intervals))

    def membership(self, x: np.ndarray) -> np.ndarray:
        mask = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.intervals:
            mask |= (x >= lo) & (x < hi)
        return mask

    def complement(self) -> "Region":
        """The complementary region over the whole real line."""
        intervals = []
        start = float("-inf")
        for lo, hi in self.intervals:
            if start < lo:
                intervals.append((start, lo))
            start = hi
        if start < float("inf"):
            intervals.append((start, float("inf")))
        return Region(tuple(intervals))


def read_wavefunction_csv(path: str, renormalize: bool = False) -> GridWavefunction:
    """Load a wavefunction from a CSV file with header ``x,re,im``.

    The grid must be uniformly spaced within 1e-9 relative tolerance.
    """
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        rows = [row for row in reader if row and not row[0].lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty wavefunction file")
    header = [cell.strip().lower() for cell in rows[0]]
    if header != ["x", "re", "im"]:
        raise ValueError(f"{path}: expected header x,re,im, got {rows[0]!r}")
    if len(rows) < 3:
        raise ValueError(f"{path}: need at least two sample rows")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]], dtype=np.float64)
    except ValueError:
        raise ValueError(f"{path}: non-numeric cell in wavefunction data") from None
    if data.shape[1] != 3:
        raise ValueError(f"{path}: every row needs exactly three columns")
    x = data[:, 0]
    spacing = (x[-1] - x[0]) / (len(x) - 1)
    if not spacing > 0.0:
        raise ValueError(f"{path}: grid is not increasing")
    if np.max(np.abs(np.diff(x) - spacing)) > UNIFORM_SPACING_RTOL * spacing:
        raise ValueError(f"{path}: grid spacing is not uniform within {UNIFORM_SPACING_RTOL} relative")
    samples = data[:, 1] + 1j * data[:, 2]
    return GridWavefunction(float(x[0]), float(spacing), samples, renormalize=renormalize)


def region_probability(psi: GridWavefunction, region: Region) -> float:
    """Left-point Riemann mass of |psi|^2 over the region's grid points.

    Clipped to [0, 1]; the complement region yields 1 minus this up to the
    grid normalization error.
    """
    mask = region.membership(psi.grid())
    mass = float(psi.probability_density()[mask].sum() * psi.spacing)
    return min(max(mass, 0.0), 1.0)


def projector_weights(a_sq: float, num_copies: int) -> np.ndarray:
    """All N-copy sector weights (n copies inside, n = 0..N), linear domain."""
    a_sq = float(a_sq)
    if not 0.0 <= a_sq <= 1.0:
        raise ValueError(f"a_sq must lie in [0, 1], got {a_sq!r}")
    num_copies = int(num_copies)
    if num_copies < 1:
        raise ValueError(f"num_copies must be positive, got {num_copies}")
    ns = np.arange(num_copies + 1, dtype=np.int64)
    log_weights = occupancy_log_weights(
        num_copies, [ns, num_copies - ns], [a_sq, 1.0 - a_sq]
    )
    return np.exp(log_weights)


def projector_weight(a_sq: float, num_copies: int, n: int) -> float:
    """Weight of the sector with exactly ``n`` of ``num_copies`` copies inside.

    Identical to the two-level sector weight at count ``n`` for the same
    probability.
    """
    num_copies = int(num_copies)
    n = int(n)
    if not 0 <= n <= num_copies:
        raise ValueError(f"n={n} out of range 0..{num_copies}")
    a_sq = float(a_sq)
    if not 0.0 <= a_sq <= 1.0:
        raise ValueError(f"a_sq must lie in [0, 1], got {a_sq!r}")
    counts = np.array([n], dtype=np.int64)
    log_weights = occupancy_log_weights(
        num_copies, [counts, num_copies - counts], [a_sq, 1.0 - a_sq]
    )
    return float(np.exp(log_weights[0]))


def region_frequency_analysis(
    psi: GridWavefunction, region: Region, num_copies: int, eps: float
) -> tuple[MomentReport, WindowMass]:
    """Full pipeline: region mass, effective two-level expansion, diagnostics.

    Returns the frequency moments of the inside-count and the window masses
    around r0 = region probability.
    """
    a_sq = region_probability(psi, region)
    state = SingleCopyState.from_alpha_probability(a_sq)
    decomp = decompose_two_level(state, num_copies)
    return frequency_moments(decomp, level=0), window_masses(decomp, 0, a_sq, eps)


def multilevel_state_from_regions(
    psi: GridWavefunction, regions: Sequence[Region], renormalize: bool = False
) -> SingleCopyState:
    """Reduce K disjoint regions covering the grid to a K-level state.

    Each region's mass becomes one level probability; the regions must not
    overlap on the grid and must jointly carry all of the mass (within the
    usual normalization tolerance) unless ``renormalize`` is set.
    """
    if len(regions) < 2:
        raise ValueError("need at least two regions")
    x = psi.grid()
    coverage = np.zeros(x.shape, dtype=np.int64)
    for region in regions:
        coverage += region.membership(x)
    if np.any(coverage > 1):
        raise ValueError("regions overlap on the grid")
    probs = [region_probability(psi, region) for region in regions]
    return SingleCopyState.from_probabilities(probs, renormalize=renormalize)
