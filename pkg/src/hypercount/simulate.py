"""Simulation of under-sampled count observations from discrete populations.

A dataset is built per distribution: draw category probabilities from a
symmetric Dirichlet, scale by the requested total and round to integer
ground-truth counts, then repeatedly sample without replacement at a depth
drawn uniformly from the configured fraction range. Groups of
distributions may share one probability vector (with their own totals) to
create populations that differ only in size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "SimulationConfig",
    "SimulatedDataset",
    "DegenerateDistributionError",
    "dirichlet_sample",
    "ground_truth_counts",
    "mvhg_sample",
    "simulate_dataset",
]

# Sampling depths below 2 carry almost no ratio information; the uniform
# depth range is floored here.
MIN_SAMPLE_DEPTH = 2


class DegenerateDistributionError(ValueError):
    """All category counts rounded to zero; the population is empty."""


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of one simulated dataset.

    Attributes:
        num_distributions: number of underlying populations M.
        num_categories: number of categories K shared by all populations.
        trials_per_distribution: observations T drawn from each population.
        total_counts: nominal population total N, one int for all
            distributions or a per-distribution sequence of length M.
        sample_fraction_min/max: per-trial depth is uniform on
            [max(2, ceil(f_min*N)), floor(f_max*N)] using the effective
            (post-rounding) total of each distribution.
        shared_prob_groups: groups of distribution indices that reuse a
            single probability vector; totals still apply per distribution.
        dirichlet_alpha: symmetric Dirichlet concentration for probability
            draws (1 = uniform over the simplex).
        seed: seed for all random draws.
    """

    num_distributions: int
    num_categories: int
    trials_per_distribution: int
    total_counts: int | Sequence[int]
    sample_fraction_min: float = 0.0
    sample_fraction_max: float = 0.5
    shared_prob_groups: Optional[Sequence[Sequence[int]]] = None
    dirichlet_alpha: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.num_distributions < 1:
            raise ValueError("num_distributions must be >= 1")
        if self.num_categories < 2:
            raise ValueError("num_categories must be >= 2")
        if self.trials_per_distribution < 1:
            raise ValueError("trials_per_distribution must be >= 1")
        if np.any(np.asarray(self.totals_per_distribution()) < 1):
            raise ValueError("total_counts must be >= 1")
        if not 0.0 <= self.sample_fraction_min < self.sample_fraction_max <= 1.0:
            raise ValueError("need 0 <= sample_fraction_min < sample_fraction_max <= 1")
        if self.dirichlet_alpha <= 0:
            raise ValueError("dirichlet_alpha must be positive")
        if self.shared_prob_groups is not None:
            seen: set[int] = set()
            for group in self.shared_prob_groups:
                for idx in group:
                    if not 0 <= idx < self.num_distributions:
                        raise ValueError(f"shared_prob_groups index {idx} out of range")
                    if idx in seen:
                        raise ValueError(f"distribution {idx} appears in two groups")
                    seen.add(idx)

    def totals_per_distribution(self) -> np.ndarray:
        if np.isscalar(self.total_counts):
            return np.full(self.num_distributions, int(self.total_counts), dtype=np.int64)
        totals = np.asarray(self.total_counts, dtype=np.int64)
        if totals.shape != (self.num_distributions,):
            raise ValueError("total_counts sequence must have one entry per distribution")
        return totals


@dataclass(frozen=True)
class SimulatedDataset:
    """Counts plus the ground truth that generated them.

    Attributes:
        counts: (M*T, K) integer observation matrix.
        labels: (M*T,) distribution index of each row.
        ground_truth: (M, K) integer population counts after rounding.
        config: the generating configuration.
    """

    counts: np.ndarray
    labels: np.ndarray
    ground_truth: np.ndarray
    config: SimulationConfig

    @property
    def effective_totals(self) -> np.ndarray:
        """Post-rounding total population size per distribution."""
        return self.ground_truth.sum(axis=1)

    def truth_rows(self) -> np.ndarray:
        """Ground-truth vector aligned to each observation row, (M*T, K)."""
        return self.ground_truth[self.labels]


def dirichlet_sample(alpha: float, k: int, rng: np.random.Generator) -> np.ndarray:
    """One draw from a symmetric Dirichlet over k categories."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if k < 2:
        raise ValueError("k must be >= 2")
    return rng.dirichlet(np.full(k, float(alpha)))


def ground_truth_counts(probs: np.ndarray, total: int) -> np.ndarray:
    """Integer ground-truth counts: probabilities scaled by the total.

    Each entry is round(p_i * total) with halves rounded up. The realized
    sum may differ slightly from `total`; callers should treat that sum as
    the distribution's effective total.

    Raises:
        DegenerateDistributionError: if every entry rounds to zero.
    """
    if total < 1:
        raise ValueError("total must be >= 1")
    probs = np.asarray(probs, dtype=np.float64)
    counts = np.floor(probs * total + 0.5).astype(np.int64)
    if counts.sum() == 0:
        raise DegenerateDistributionError(
            f"all {probs.shape[0]} categories rounded to zero at total {total}"
        )
    return counts


def mvhg_sample(population, n, rng: np.random.Generator) -> np.ndarray:
    """Multivariate hypergeometric draw(s) from an integer population.

    Samples category by category through the marginal decomposition: each
    category's count is a univariate hypergeometric draw conditional on
    what remains, which avoids materializing the population multiset.

    Args:
        population: (K,) integer category sizes.
        n: number of elements to draw; a scalar yields one (K,) draw, an
            (R,) array yields an (R, K) matrix of independent draws.
        rng: random generator.

    Raises:
        ValueError: if any requested draw exceeds the population total.
    """
    population = np.asarray(population, dtype=np.int64)
    scalar = np.isscalar(n) or np.ndim(n) == 0
    n_arr = np.atleast_1d(np.asarray(n, dtype=np.int64))
    pop_total = int(population.sum())
    if np.any(n_arr < 0) or np.any(n_arr > pop_total):
        raise ValueError(f"draw size must lie in [0, {pop_total}]")
    k = population.shape[0]
    out = np.zeros((n_arr.shape[0], k), dtype=np.int64)
    remaining_pop = pop_total
    remaining_n = n_arr.copy()
    for i in range(k - 1):
        good = int(population[i])
        bad = remaining_pop - good
        if good == 0:
            continue
        if bad == 0:
            out[:, i] = remaining_n
            remaining_n = np.zeros_like(remaining_n)
            remaining_pop = 0
            continue
        draw = rng.hypergeometric(good, bad, remaining_n)
        out[:, i] = draw
        remaining_n = remaining_n - draw
        remaining_pop = bad
    out[:, k - 1] = remaining_n
    return out[0] if scalar else out


def _depth_bounds(effective_total: int, f_min: float, f_max: float) -> tuple[int, int]:
    low = max(MIN_SAMPLE_DEPTH, int(np.ceil(f_min * effective_total)))
    high = min(int(np.floor(f_max * effective_total)), effective_total)
    if low > high:
        raise ValueError(
            f"empty sample-depth range [{low}, {high}] for total {effective_total}; "
            "increase the population or the sample fractions"
        )
    return low, high


def simulate_dataset(config: SimulationConfig) -> SimulatedDataset:
    """Generate observations for every configured distribution.

    Deterministic for a fixed config (including seed). Distributions are
    processed in index order; a shared-probability group draws its vector
    when its first member is reached.
    """
    rng = np.random.default_rng(config.seed)
    totals = config.totals_per_distribution()
    m, k, t = config.num_distributions, config.num_categories, config.trials_per_distribution

    group_of = {}
    if config.shared_prob_groups is not None:
        for group in config.shared_prob_groups:
            for idx in group:
                group_of[idx] = tuple(group)
    group_probs: dict[tuple, np.ndarray] = {}

    counts = np.empty((m * t, k), dtype=np.int64)
    labels = np.repeat(np.arange(m), t)
    ground_truth = np.empty((m, k), dtype=np.int64)
    for dist in range(m):
        group = group_of.get(dist)
        if group is not None and group in group_probs:
            probs = group_probs[group]
        else:
            probs = dirichlet_sample(config.dirichlet_alpha, k, rng)
            if group is not None:
                group_probs[group] = probs
        truth = ground_truth_counts(probs, int(totals[dist]))
        ground_truth[dist] = truth
        low, high = _depth_bounds(
            int(truth.sum()), config.sample_fraction_min, config.sample_fraction_max
        )
        depths = rng.integers(low, high, size=t, endpoint=True)
        counts[dist * t : (dist + 1) * t] = mvhg_sample(truth, depths, rng)
    return SimulatedDataset(counts=counts, labels=labels, ground_truth=ground_truth, config=config)
