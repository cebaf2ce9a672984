"""Log-gamma and digamma implemented from scratch on numpy arrays.

Both functions accept scalars or arrays of positive reals and broadcast
elementwise. Accuracy targets (checked in the test suite against mpmath
and the C library): log_gamma absolute error below 1e-10 wherever the
result magnitude permits it in float64, relative error below 1e-12 up to
x = 1e7; digamma absolute error below 1e-8 on [1e-3, 1e7].
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["log_gamma", "digamma", "DomainError"]


class DomainError(ValueError):
    """Argument outside the mathematical domain of a special function."""


# Lanczos approximation, g=7, 9 terms. Valid for all positive real
# arguments; ~1e-14 relative accuracy in float64.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Asymptotic series psi(x) ~ ln x - 1/(2x) - sum_n B_{2n}/(2n x^{2n});
# coefficients are -B_{2n}/(2n) for n = 1..7. Used for x >= 10, where the
# truncation error is below 1e-15.
_DIGAMMA_ASYMP = (
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32760.0,
    -1.0 / 12.0,
)

_DIGAMMA_SHIFT = 10.0


def _validate_positive(x: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise DomainError(f"{name} requires finite positive input")


def log_gamma(x):
    """Natural log of the gamma function for positive real x.

    Args:
        x: scalar or array of positive reals.

    Returns:
        log Gamma(x), same shape as the input.

    Raises:
        DomainError: if any entry is non-positive or non-finite.
    """
    x = np.asarray(x, dtype=np.float64)
    _validate_positive(x, "log_gamma")
    z = x - 1.0
    series = np.full_like(z, _LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        series = series + _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    out = _HALF_LOG_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(series)
    return out if out.ndim else float(out)


def digamma(x):
    """Derivative of log_gamma (psi function) for positive real x.

    Small arguments are shifted upward with the recurrence
    psi(x) = psi(x+1) - 1/x, then the asymptotic series is applied.

    Args:
        x: scalar or array of positive reals.

    Returns:
        psi(x), same shape as the input.

    Raises:
        DomainError: if any entry is non-positive or non-finite.
    """
    x = np.asarray(x, dtype=np.float64)
    _validate_positive(x, "digamma")
    xs = x.copy() if x.ndim else np.atleast_1d(x).copy()
    acc = np.zeros_like(xs)
    for _ in range(int(_DIGAMMA_SHIFT)):
        mask = xs < _DIGAMMA_SHIFT
        if not mask.any():
            break
        acc = np.where(mask, acc - 1.0 / xs, acc)
        xs = np.where(mask, xs + 1.0, xs)
    inv_sq = 1.0 / (xs * xs)
    poly = np.zeros_like(xs)
    for coef in reversed(_DIGAMMA_ASYMP):
        poly = (poly + coef) * inv_sq
    out = acc + np.log(xs) - 0.5 / xs + poly
    return out.reshape(x.shape) if x.ndim else float(out[0])
