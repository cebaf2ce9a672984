"""Likelihood mathematics for count observations drawn without replacement.

The central objects are the exact multivariate hypergeometric log-pmf and
its continuous relaxation: binomial coefficients are rewritten through the
gamma function so the log-likelihood is differentiable in real-valued
population estimates. Feasibility (every estimate at least as large as the
observed count) is handled by a hinge penalty on raw estimates plus
clamping before likelihood evaluation. Multinomial and Poisson
log-likelihoods are provided as baselines, and the diagonal-Gaussian KL
divergence supports the latent-variable model.

All functions are pure and accept plain sequences/arrays; `CountVector`
and `PopulationEstimate` are validated convenience wrappers accepted
anywhere an array is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .special import DomainError, digamma, log_gamma

__all__ = [
    "CountVector",
    "PopulationEstimate",
    "PenaltyConfig",
    "FeasibilityError",
    "log_binomial_relaxed",
    "hypergeom_log_pmf",
    "hypergeom_log_pmf_rows",
    "hypergeom_nll",
    "hypergeom_nll_grad",
    "hypergeom_nll_grad_rows",
    "violation_penalty",
    "threshold_estimates",
    "multinomial_log_lik",
    "poisson_log_lik",
    "kl_diag_gaussian",
]


class FeasibilityError(ValueError):
    """An observed count exceeds its population estimate.

    Signals that the caller evaluated the likelihood without thresholding
    the estimates first (see `threshold_estimates`).
    """


@dataclass(frozen=True)
class CountVector:
    """Observed counts for K categories from one sampling trial."""

    counts: np.ndarray
    total: int = field(init=False)

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 1 or counts.shape[0] < 2:
            raise ValueError("counts must be 1-D with at least 2 categories")
        if np.any(counts < 0) or not np.all(counts == np.floor(counts)):
            raise ValueError("counts must be non-negative integers")
        object.__setattr__(self, "counts", counts.astype(np.int64))
        object.__setattr__(self, "total", int(counts.sum()))

    def __len__(self) -> int:
        return self.counts.shape[0]


@dataclass(frozen=True)
class PopulationEstimate:
    """Relaxed (real-valued) per-category population size estimates."""

    sizes: np.ndarray
    total: float = field(init=False)

    def __post_init__(self):
        sizes = np.asarray(self.sizes, dtype=np.float64)
        if sizes.ndim != 1:
            raise ValueError("sizes must be 1-D")
        if np.any(sizes < 0) or not np.all(np.isfinite(sizes)):
            raise ValueError("sizes must be finite and non-negative")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "total", float(sizes.sum()))

    def rounded(self) -> np.ndarray:
        """Nearest-integer estimates for discrete reporting."""
        return np.floor(self.sizes + 0.5).astype(np.int64)

    def __len__(self) -> int:
        return self.sizes.shape[0]


@dataclass(frozen=True)
class PenaltyConfig:
    """Weight of the feasibility-violation hinge term.

    A constant `weight` is used unless `ramp_epochs` > 0, in which case the
    weight ramps linearly from `weight_min` to `weight_max` over the first
    `ramp_epochs` epochs and stays at `weight_max` afterwards.
    """

    weight: float = 1.0
    weight_min: float = 1.0
    weight_max: float = 1.0
    ramp_epochs: int = 0

    def __post_init__(self):
        if self.weight < 0 or self.weight_min < 0:
            raise ValueError("penalty weights must be non-negative")
        if self.weight_min > self.weight_max:
            raise ValueError("weight_min must not exceed weight_max")
        if self.ramp_epochs < 0:
            raise ValueError("ramp_epochs must be non-negative")

    def weight_at(self, epoch: int) -> float:
        """Penalty weight in effect at a given zero-based epoch."""
        if self.ramp_epochs <= 0:
            return self.weight
        frac = min(1.0, epoch / self.ramp_epochs)
        return self.weight_min + (self.weight_max - self.weight_min) * frac


def _values(x) -> np.ndarray:
    """Unwrap CountVector / PopulationEstimate, pass arrays through."""
    if isinstance(x, CountVector):
        return x.counts
    if isinstance(x, PopulationEstimate):
        return x.sizes
    return np.asarray(x)


def log_binomial_relaxed(a, b):
    """Gamma-relaxed log binomial coefficient log C(a, b) for reals a >= b >= 0.

    Equals the log of the integer binomial coefficient when both arguments
    are integers. Broadcasts elementwise.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("log_binomial_relaxed requires non-negative arguments")
    if np.any(b > a):
        raise DomainError("log_binomial_relaxed requires b <= a")
    out = log_gamma(a + 1.0) - log_gamma(b + 1.0) - log_gamma(a - b + 1.0)
    return out if np.ndim(out) else float(out)


def hypergeom_log_pmf(c, est) -> float:
    """Relaxed hypergeometric log-pmf of one count vector.

    Args:
        c: observed counts, length K.
        est: population estimates, length K, elementwise >= c.

    Raises:
        FeasibilityError: if any count exceeds its estimate.
    """
    c = _values(c)
    est = _values(est)
    if np.any(c > est):
        raise FeasibilityError(
            "count exceeds estimate; apply threshold_estimates first"
        )
    num = log_binomial_relaxed(est, c)
    den = log_binomial_relaxed(float(est.sum()), float(c.sum()))
    return float(np.sum(num) - den)


def hypergeom_log_pmf_rows(counts: np.ndarray, est: np.ndarray) -> np.ndarray:
    """Row-wise relaxed log-pmf for a batch of trials.

    Args:
        counts: (T, K) observed counts.
        est: (K,) shared estimate or (T, K) per-row estimates, >= counts.

    Returns:
        (T,) log-pmf values.
    """
    counts = np.asarray(counts, dtype=np.float64)
    est = np.asarray(est, dtype=np.float64)
    if est.ndim == 1:
        est = np.broadcast_to(est, counts.shape)
    if np.any(counts > est):
        raise FeasibilityError(
            "count exceeds estimate; apply threshold_estimates first"
        )
    if counts.shape[0] == 0:
        return np.zeros(0)
    num = log_binomial_relaxed(est, counts).sum(axis=1)
    den = log_binomial_relaxed(est.sum(axis=1), counts.sum(axis=1))
    return num - den


def hypergeom_nll(batch, est) -> float:
    """Negative relaxed log-likelihood of a shared estimate over all trials.

    Args:
        batch: (T, K) count matrix.
        est: length-K shared estimate, elementwise >= every row.
    """
    batch = np.atleast_2d(_values(batch))
    return float(-hypergeom_log_pmf_rows(batch, _values(est)).sum())


def hypergeom_nll_grad(batch, est) -> np.ndarray:
    """Analytic gradient of `hypergeom_nll` with respect to the estimate.

    Component i sums, over trials t, the digamma terms
    psi(N+1) - psi(N-n_t+1) - psi(N_i+1) + psi(N_i-c_ti+1)
    where N is the estimate total and n_t the trial total.
    """
    batch = np.atleast_2d(np.asarray(_values(batch), dtype=np.float64))
    est = np.asarray(_values(est), dtype=np.float64)
    if batch.shape[0] == 0 or batch.size == 0:
        return np.zeros_like(est)
    if np.any(batch > est):
        raise FeasibilityError(
            "count exceeds estimate; apply threshold_estimates first"
        )
    t_rows = batch.shape[0]
    total = float(est.sum())
    n_t = batch.sum(axis=1)
    shared = t_rows * digamma(total + 1.0) - digamma(total - n_t + 1.0).sum()
    per_cat = -t_rows * digamma(est + 1.0) + digamma(est - batch + 1.0).sum(axis=0)
    return shared + per_cat


def hypergeom_nll_grad_rows(counts: np.ndarray, est: np.ndarray) -> np.ndarray:
    """Per-row gradient of the negative relaxed log-pmf wrt per-row estimates.

    Args:
        counts: (T, K) observed counts.
        est: (T, K) per-row estimates, elementwise >= counts.

    Returns:
        (T, K) gradient d(-log pmf_t)/d est_t.
    """
    counts = np.asarray(counts, dtype=np.float64)
    est = np.asarray(est, dtype=np.float64)
    if np.any(counts > est):
        raise FeasibilityError(
            "count exceeds estimate; apply threshold_estimates first"
        )
    tot = est.sum(axis=1, keepdims=True)
    n = counts.sum(axis=1, keepdims=True)
    shared = digamma(tot + 1.0) - digamma(tot - n + 1.0)
    return shared - digamma(est + 1.0) + digamma(est - counts + 1.0)


def violation_penalty(c, raw_est) -> float:
    """Hinge penalty: total shortfall of raw estimates below observed counts."""
    c = _values(c)
    raw = _values(raw_est)
    return float(np.sum(np.maximum(0.0, c - raw)))


def threshold_estimates(c, raw_est) -> np.ndarray:
    """Clamp raw estimates up to the observed counts, elementwise."""
    return np.maximum(np.asarray(_values(c), dtype=np.float64), _values(raw_est))


def multinomial_log_lik(c, probs) -> float:
    """Multinomial log-likelihood sum_i c_i log p_i.

    The multinomial coefficient is dropped: it does not depend on the
    probabilities, so gradients and likelihood comparisons are unaffected.
    Zero-count categories contribute nothing even at p_i = 0; a positive
    count on a zero-probability category yields -inf.
    """
    c = np.asarray(_values(c), dtype=np.float64)
    probs = np.asarray(_values(probs), dtype=np.float64)
    if np.any(probs < 0):
        raise DomainError("probabilities must be non-negative")
    if abs(float(probs.sum()) - 1.0) > 1e-9:
        raise DomainError("probabilities must sum to 1")
    active = c > 0
    if np.any(probs[active] == 0.0):
        return float("-inf")
    return float(np.sum(c[active] * np.log(probs[active])))


def poisson_log_lik(c, rates) -> float:
    """Independent-Poisson log-likelihood sum_i [c_i log r_i - r_i - log c_i!]."""
    c = np.asarray(_values(c), dtype=np.float64)
    rates = np.asarray(_values(rates), dtype=np.float64)
    if np.any(rates <= 0) or not np.all(np.isfinite(rates)):
        raise DomainError("rates must be positive")
    return float(np.sum(c * np.log(rates) - rates - log_gamma(c + 1.0)))


def kl_diag_gaussian(mean, log_var) -> float:
    """KL divergence of a diagonal Gaussian from the standard normal.

    0.5 * sum_d (mu_d^2 + sigma_d^2 - 1 - log sigma_d^2); non-negative,
    zero exactly when mean = 0 and log_var = 0.
    """
    mean = np.asarray(mean, dtype=np.float64)
    log_var = np.asarray(log_var, dtype=np.float64)
    return float(0.5 * np.sum(mean**2 + np.exp(log_var) - 1.0 - log_var))
