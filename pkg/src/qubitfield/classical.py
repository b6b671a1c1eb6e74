"""Classical bits sent through the field one at a time, plus the counter baseline.

A bit starts at 0 and flips to 1 (irreversibly) with probability
``1 - exp(-lam * I)``. The flip fraction over ``N`` bits is inverted by maximum
likelihood. When bits may travel together they form a probabilistic counter
with up to ``2**N`` counts, whose relative error falls as ``2**(-N/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .field import MagnitudeScale
from .rng import RngStream

#: Coupling used by the reference simulation, in units of 1/M.
CONVENTIONAL_LAMBDA_TIMES_M = 1.2

MAX_COUNTER_BITS = 40


class CounterOverflowError(OverflowError):
    """The counter registered more counts than its 2**N capacity."""


@dataclass(frozen=True)
class ClassicalConfig:
    lam: float
    n_bits: int
    scale: MagnitudeScale

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.n_bits < 1:
            raise ValueError(f"n_bits must be >= 1, got {self.n_bits}")

    @classmethod
    def default(cls, M: float = 5.0, n_bits: int = 30, lam: float | None = None) -> ClassicalConfig:
        """Config with ``lam = 1.2/M`` unless given explicitly."""
        if lam is None:
            lam = CONVENTIONAL_LAMBDA_TIMES_M / M
        return cls(lam=lam, n_bits=n_bits, scale=MagnitudeScale(M))


@dataclass(frozen=True)
class CounterConfig:
    n_bits: int
    scale: MagnitudeScale
    guard: float = 10.0

    def __post_init__(self):
        if not 1 <= self.n_bits <= MAX_COUNTER_BITS:
            raise ValueError(f"counter supports 1..{MAX_COUNTER_BITS} bits, got {self.n_bits}")
        if not self.guard > 0:
            raise ValueError("guard must be positive")


@dataclass(frozen=True)
class ClassicalEstimate:
    flip_count: int
    p_hat: float
    i_hat: float
    clamped: bool


@dataclass(frozen=True)
class CounterEstimate:
    count: int
    rate: float  # expected counts per unit of integral
    i_hat: float


def flip_probability(I: float, lam: float) -> float:
    if I < 0:
        raise ValueError(f"classical protocol needs a non-negative integral, got {I}")
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return -math.expm1(-lam * I)


def simulate_bits(I: float, cfg: ClassicalConfig, rng: RngStream) -> int:
    """Number of the ``cfg.n_bits`` bits that flipped.

    Bit ``j`` uses the ``j``-th uniform of ``rng``.
    """
    p = flip_probability(I, cfg.lam)
    return int(np.count_nonzero(rng.random(cfg.n_bits) < p))


def mle_integral(flip_count, n_bits: int, lam: float):
    """Vectorised MLE inversion; returns ``(i_hat, clamped)``.

    An all-flipped outcome has no finite MLE, so ``p_hat`` is pulled in to
    ``(N - 1/2)/N`` there.
    """
    k = np.asarray(flip_count, dtype=float)
    clamped = k >= n_bits
    p_hat = np.where(clamped, (n_bits - 0.5) / n_bits, k / n_bits)
    i_hat = -np.log1p(-p_hat) / lam
    return i_hat, clamped


def estimate_integral(flip_count: int, cfg: ClassicalConfig) -> ClassicalEstimate:
    if not 0 <= flip_count <= cfg.n_bits:
        raise ValueError(f"flip_count {flip_count} outside [0, {cfg.n_bits}]")
    i_hat, clamped = mle_integral(flip_count, cfg.n_bits, cfg.lam)
    return ClassicalEstimate(
        flip_count=int(flip_count),
        p_hat=flip_count / cfg.n_bits,
        i_hat=float(i_hat),
        clamped=bool(clamped),
    )


def uncertainty(I: float, lam: float, N: int) -> float:
    """Propagated standard error of the estimate: ``sqrt(exp(lam I) - 1) / (lam sqrt(N))``."""
    if lam <= 0 or N < 1 or I < 0:
        raise ValueError("need lam > 0, N >= 1, I >= 0")
    return math.sqrt(math.expm1(lam * I)) / (lam * math.sqrt(N))


def optimize_lambda(M: float, N: int = 1) -> float:
    """Coupling minimising :func:`uncertainty` at ``I = M``.

    The optimum depends only on ``x = lam * M`` (``N`` factors out), so the
    search runs over ``x`` with Brent's method and is rescaled by ``1/M``.
    """
    if not M > 0:
        raise ValueError(f"M must be positive, got {M}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")

    def shape(x: float) -> float:
        return math.sqrt(math.expm1(x)) / x

    res = minimize_scalar(shape, bracket=(0.5, 1.5, 4.0), method="brent", tol=1e-12)
    return float(res.x) / M


def counter_rate(n_bits: int, scale: float, guard: float = 10.0) -> float:
    """Counts per unit integral so that ``I = guard * scale`` fills the ``2**N`` counter."""
    return 2.0**n_bits / (guard * scale)


def counter_baseline(
    I: float, n_bits: int, scale: float, rng: RngStream, guard: float = 10.0
) -> CounterEstimate:
    """Bits sent together as a probabilistic counter.

    The count is Poisson with mean ``rate * I``; the estimate is
    ``count / rate`` with relative standard error ``1/sqrt(rate * I)``.
    """
    if I < 0:
        raise ValueError(f"counter needs a non-negative integral, got {I}")
    if not 1 <= n_bits <= MAX_COUNTER_BITS:
        raise ValueError(f"counter supports 1..{MAX_COUNTER_BITS} bits, got {n_bits}")
    if guard <= 0 or scale <= 0:
        raise ValueError("guard and scale must be positive")
    rate = counter_rate(n_bits, scale, guard)
    count = rng.poisson(rate * I) if I > 0 else 0
    if count > 2**n_bits:
        raise CounterOverflowError(f"{count} counts exceed the 2**{n_bits} capacity")
    return CounterEstimate(count=count, rate=rate, i_hat=count / rate)
