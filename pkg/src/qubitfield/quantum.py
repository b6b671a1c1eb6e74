"""Qubits sent one at a time as planar spins precessing in the field.

A spin starts along +x and the field rotates it about z by an angle
proportional to the integral, so a single azimuth describes the whole state.
Three procedures are built on that:

* the parity test: couple so that ``I = alpha`` gives a half turn, then read
  whether ``m`` in ``I = m * alpha`` is even or odd;
* method I: many spins with the same coupling and a direction estimate, error
  shrinking as ``N**-0.5``;
* method II: a ladder of couplings halving at each step, with correction
  rotations that cancel the digits already read, one binary digit of ``m`` per
  qubit and an error of order ``alpha ~ 2**-N``.

Phase arithmetic never forms ``I * pi / alpha`` directly: at 30 qubits that is
about 1e8 rad and ``cos**2`` of it is noise. The integral is instead reduced
modulo ``2**k * alpha`` in exact rational arithmetic before any angle is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Literal, Sequence

import numpy as np

from .field import MagnitudeScale
from .rng import RngStream

TWO_PI = 2.0 * math.pi
DEFAULT_GUARD = 10.0
MAX_LADDER_STEPS = 40
#: Smallest usable ladder quantum relative to M in double precision.
MIN_ALPHA_OVER_M = 2.0**-46

QuantumMode = Literal["method-i", "method-ii", "combined", "gh-parity"]
QUANTUM_MODES = ("method-i", "method-ii", "combined", "gh-parity")


class PrecisionError(ValueError):
    """The ladder quantum is too small for double-precision phase reduction."""


class Outcome(Enum):
    PLUS = "+"
    MINUS = "-"


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class PlanarSpin:
    """Spin-1/2 in the x-y plane; ``theta`` is its azimuth, 0 meaning +x."""

    theta: float = 0.0

    def __post_init__(self):
        t = self.theta % TWO_PI
        if t >= TWO_PI:  # tiny negative inputs round up to 2*pi
            t = 0.0
        object.__setattr__(self, "theta", t)


def precess(spin: PlanarSpin, angle: float) -> PlanarSpin:
    return PlanarSpin(spin.theta + angle)


def minus_probability(theta):
    """Probability of the ``-`` outcome of an x measurement at azimuth ``theta``."""
    return np.sin(np.asarray(theta) / 2.0) ** 2


def measure_x(spin: PlanarSpin, rng: RngStream) -> Outcome:
    """Destructive x measurement: ``+`` with probability ``cos(theta/2)**2``."""
    return Outcome.MINUS if rng.uniform() < math.sin(spin.theta / 2.0) ** 2 else Outcome.PLUS


def measure_y(spin: PlanarSpin, rng: RngStream) -> Outcome:
    return measure_x(precess(spin, -math.pi / 2), rng)


def reduced_turns(I: float, unit: float, period: int) -> float:
    """``(I / unit) mod period`` computed exactly from the binary values of the floats."""
    return float((Fraction(I) / Fraction(unit)) % period)


def ladder_turns(I: float, alpha: float, n_steps: int) -> list[float]:
    """``(I / alpha) mod 2**k`` for ``k = 1..n_steps``, exact up to the final rounding."""
    ratio = Fraction(I) / Fraction(alpha)
    num, den = ratio.numerator, ratio.denominator
    return [(num % (den << k)) / den for k in range(1, n_steps + 1)]


def gh_parity(I: float, alpha: float, rng: RngStream) -> Parity:
    """Is ``m`` even or odd, for ``I = m * alpha``? One qubit, half a turn per ``alpha``."""
    spin = precess(PlanarSpin(), math.pi * reduced_turns(I, alpha, 2))
    return Parity.ODD if measure_x(spin, rng) is Outcome.MINUS else Parity.EVEN


def _partial_value(digits: Sequence[int]) -> int:
    return sum(int(d) << i for i, d in enumerate(digits))


def correction_angle(digits: Sequence[int], k: int, beta_hat: float, alpha: float) -> float:
    """Pre-measurement rotation for ladder step ``k``.

    Cancels the digits ``d(1..k-1)`` already read (least significant first)
    and the remainder estimate ``beta_hat``::

        theta_k = -sum_i pi d(i) / 2**(k-i) - pi beta_hat / (2**(k-1) alpha)

    The digit sum is formed as the integer ``sum_i d(i) 2**(i-1)`` over
    ``2**(k-1)``, which is the same quantity without rounding in the sum.
    """
    if k < 1:
        raise ValueError(f"step index must be >= 1, got {k}")
    if len(digits) != k - 1:
        raise ValueError(f"step {k} needs {k - 1} prior digits, got {len(digits)}")
    scale = 2.0 ** (k - 1)
    return -(math.pi * _partial_value(digits) / scale) - math.pi * beta_hat / (scale * alpha)


def check_alpha(alpha: float, M: float) -> None:
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if alpha < MIN_ALPHA_OVER_M * M:
        raise PrecisionError(
            f"alpha={alpha:.3e} is below 2**-46 * M={MIN_ALPHA_OVER_M * M:.3e}; "
            "double-precision phase reduction is no longer trustworthy"
        )


def choose_alpha(M: float, N: int, N0: int = 0, guard: float = DEFAULT_GUARD) -> float:
    """Ladder quantum ``guard * M / 2**(N - N0)``."""
    if not N > N0 >= 0:
        raise ValueError(f"need N > N0 >= 0, got N={N}, N0={N0}")
    if not M > 0 or not guard > 0:
        raise ValueError("M and guard must be positive")
    alpha = guard * M / 2.0 ** (N - N0)
    check_alpha(alpha, M)
    return alpha


@dataclass(frozen=True)
class QuantumConfig:
    alpha: float
    n_qubits: int
    n0: int = 0
    guard: float = DEFAULT_GUARD
    scale: MagnitudeScale = MagnitudeScale(5.0)
    mode: QuantumMode = "method-ii"

    def __post_init__(self):
        if self.mode not in QUANTUM_MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if not 0 <= self.n0 < self.n_qubits:
            raise ValueError(f"need 0 <= n0 < n_qubits, got n0={self.n0}")
        if self.guard < 1:
            raise ValueError(f"guard must be >= 1, got {self.guard}")
        if self.mode in ("method-ii", "combined"):
            if self.ladder_steps > MAX_LADDER_STEPS:
                raise PrecisionError(f"{self.ladder_steps} ladder steps exceed {MAX_LADDER_STEPS}")
            check_alpha(self.alpha, self.scale.M)
        elif not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def for_scale(
        cls,
        M: float = 5.0,
        n_qubits: int = 30,
        n0: int = 0,
        guard: float = DEFAULT_GUARD,
        mode: QuantumMode = "method-ii",
    ) -> QuantumConfig:
        """Config with ``alpha`` from :func:`choose_alpha`.

        Method I has no ladder; its ``alpha`` is set to the full range
        ``guard * M`` and only ``range_max`` is used.
        """
        alpha = guard * M if mode == "method-i" else choose_alpha(M, n_qubits, n0, guard)
        return cls(
            alpha=alpha,
            n_qubits=n_qubits,
            n0=n0,
            guard=guard,
            scale=MagnitudeScale(M),
            mode=mode,
        )

    @property
    def ladder_steps(self) -> int:
        return self.n_qubits - self.n0

    @property
    def range_max(self) -> float:
        """Integral range that method I maps onto one full turn."""
        return self.guard * self.scale.M


@dataclass(frozen=True)
class LadderStep:
    k: int
    coupling: float  # rotation per unit integral, pi / (2**(k-1) alpha)
    theta_corr: float
    theta_total: float  # azimuth before measurement, reduced to [0, 2 pi)
    p_minus: float


@dataclass(frozen=True)
class DigitReadout:
    digits: tuple[int, ...]  # least significant first
    m_hat: int
    i_tilde: float
    beta_hat: float = 0.0
    steps: tuple[LadderStep, ...] = field(default=(), repr=False)


def run_method_II(
    I: float, cfg: QuantumConfig, rng: RngStream, beta_hat: float = 0.0
) -> DigitReadout:
    """Read the binary digits of ``m`` in ``I = m alpha + beta_hat``, one qubit per digit.

    Always emits ``cfg.ladder_steps`` digits. The readout is exact and
    deterministic when ``I - beta_hat`` is a multiple of ``alpha`` inside the
    ladder range; otherwise ``m`` is recovered modulo ``2**steps``.
    """
    alpha = cfg.alpha
    digits: list[int] = []
    steps: list[LadderStep] = []
    for k, turns in enumerate(ladder_turns(I, alpha, cfg.ladder_steps), 1):
        field_angle = math.pi * turns / 2.0 ** (k - 1)
        theta_corr = correction_angle(digits, k, beta_hat, alpha)
        spin = precess(precess(PlanarSpin(), field_angle), theta_corr)
        p_minus = math.sin(spin.theta / 2.0) ** 2
        digit = 1 if measure_x(spin, rng) is Outcome.MINUS else 0
        steps.append(LadderStep(k, math.pi / (2.0 ** (k - 1) * alpha), theta_corr, spin.theta, p_minus))
        digits.append(digit)
    m_hat = _partial_value(digits)
    return DigitReadout(tuple(digits), m_hat, m_hat * alpha + beta_hat, beta_hat, tuple(steps))


def ladder_readouts(I: float, alpha: float, uniforms: np.ndarray, beta_hat=0.0) -> np.ndarray:
    """Method II over many independent trials at once.

    ``uniforms`` has shape ``(trials, steps)``; row ``t`` holds the draws that
    trial ``t`` would feed to :func:`measure_x`, step by step. ``beta_hat``
    may be a scalar or a per-trial array. Returns the ``m_hat`` values.
    """
    u = np.atleast_2d(uniforms)
    trials, n_steps = u.shape
    beta = np.broadcast_to(np.asarray(beta_hat, dtype=float), (trials,))
    partial = np.zeros(trials, dtype=np.int64)
    for k, turns in enumerate(ladder_turns(I, alpha, n_steps), 1):
        scale = 2.0 ** (k - 1)
        field_angle = math.pi * turns / scale
        theta_corr = -(math.pi * partial / scale) - math.pi * beta / (scale * alpha)
        theta = np.mod(np.mod(field_angle, TWO_PI) + theta_corr, TWO_PI)
        theta = np.where(theta >= TWO_PI, 0.0, theta)
        digit = u[:, k - 1] < minus_probability(theta)
        partial += digit.astype(np.int64) << (k - 1)
    return partial


def _direction_from_draws(theta: float, u: np.ndarray) -> np.ndarray:
    """Azimuth estimate from draws ``u`` (last axis = qubits); first ceil(n/2) measure x."""
    n = u.shape[-1]
    n_x = (n + 1) // 2
    minus_x = u[..., :n_x] < minus_probability(theta)
    minus_y = u[..., n_x:] < minus_probability(theta - math.pi / 2)
    c_hat = 1.0 - 2.0 * minus_x.mean(axis=-1)
    s_hat = 1.0 - 2.0 * minus_y.mean(axis=-1)
    return np.mod(np.arctan2(s_hat, c_hat), TWO_PI)


def method_I_estimates(I: float, range_max: float, uniforms: np.ndarray) -> np.ndarray:
    """Vectorised :func:`method_I_estimate`; ``uniforms`` is ``(trials, n_qubits)``."""
    u = np.atleast_2d(uniforms)
    if u.shape[-1] < 2:
        raise ValueError("method I needs at least 2 qubits")
    theta = TWO_PI * reduced_turns(I, range_max, 1)
    est = _direction_from_draws(theta, u) * (range_max / TWO_PI)
    return np.where(est >= range_max, 0.0, est)


def method_I_estimate(I: float, range_max: float, n_qubits: int, rng: RngStream) -> float:
    """Estimate ``I`` from the common azimuth of ``n_qubits`` identically rotated spins.

    The coupling turns the spins once around per ``range_max`` of integral, so
    the result lies in ``[0, range_max)`` and is ``I`` modulo ``range_max``.
    ``ceil(n/2)`` spins are measured along x and the rest along y; the azimuth
    is ``atan2`` of the two sample means.
    """
    if n_qubits < 2:
        raise ValueError("method I needs at least 2 qubits")
    if not range_max > 0:
        raise ValueError("range_max must be positive")
    return float(method_I_estimates(I, range_max, rng.random(n_qubits)[None, :])[0])


def run_combined(I: float, cfg: QuantumConfig, rng: RngStream) -> DigitReadout:
    """Remainder ``beta`` by method I on ``n0`` qubits, then the ladder on the rest.

    Method I here turns a full circle per ``alpha``, so its estimate is the
    remainder directly. The stream feeds the ``n0`` method-I qubits first.
    """
    if cfg.n0 < 2:
        raise ValueError("combined mode needs n0 >= 2 qubits for the remainder")
    beta_hat = method_I_estimate(I, cfg.alpha, cfg.n0, rng)
    return run_method_II(I, cfg, rng, beta_hat=beta_hat)


def readout_probability(i_tilde, I: float, alpha: float, N: int):
    """Probability of reading ``i_tilde`` when the integral is ``I``.

    ``prod_{k=1..N} cos**2((I - i_tilde) pi / (2**k alpha))``; accepts arrays
    for ``i_tilde``.
    """
    if N < 1 or not alpha > 0:
        raise ValueError("need N >= 1 and alpha > 0")
    delta = (I - np.asarray(i_tilde, dtype=float)) / alpha
    k = np.arange(1, N + 1)
    factors = np.cos(np.multiply.outer(delta, math.pi / 2.0**k)) ** 2
    out = factors.prod(axis=-1)
    return float(out) if out.ndim == 0 else out


def error_probability(delta_I, M: float, N: int, guard: float = DEFAULT_GUARD):
    """Probability of a readout error ``delta_I`` with ``alpha = guard M / 2**N``."""
    if not guard * M > 0:
        raise ValueError("guard * M must be positive")
    d = np.asarray(delta_I, dtype=float)
    k = np.arange(1, N + 1)
    factors = np.cos(np.multiply.outer(d, math.pi / (2.0 ** (k - N) * guard * M))) ** 2
    out = factors.prod(axis=-1)
    return float(out) if out.ndim == 0 else out


def tail_probability(threshold: int, N: int, symmetric: bool = False) -> float:
    """Probability of an error beyond ``threshold * alpha`` at the worst offset ``I mod alpha = alpha/2``.

    Sums the readout lattice ``delta = (n + 1/2) alpha`` over
    ``n = -(T-1) .. T`` (the published range, one step wider on the positive
    side) or, with ``symmetric``, over ``n = -T .. T-1`` so that
    ``|delta| < T alpha`` exactly.
    """
    if threshold < 1 or N < 1:
        raise ValueError("need threshold >= 1 and N >= 1")
    lo, hi = (-threshold, threshold - 1) if symmetric else (-(threshold - 1), threshold)
    offsets = np.arange(lo, hi + 1) + 0.5
    k = np.arange(1, N + 1)
    inside = (np.cos(np.multiply.outer(offsets, math.pi / 2.0**k)) ** 2).prod(axis=1).sum()
    return float(max(0.0, 1.0 - inside))
