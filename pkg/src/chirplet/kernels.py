"""Chirplet kernel generation.

A chirplet is a windowed sinusoid whose instantaneous frequency sweeps from
a start frequency ``f0`` to an end frequency ``f1`` over a Gaussian-tapered
support of ``sigma`` seconds.  The sweep law is polynomial of order ``p``
(``p=1`` linear, ``p=2`` quadratic, ...) while ``p=0`` selects an
exponential sweep.  Downward kernels are the exact time-reversal of their
upward counterparts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParams, UnsupportedOrder

SUPPORTED_ORDERS = (0, 1, 2, 3)


class Direction(enum.Enum):
    UPWARD = "upward"
    DOWNWARD = "downward"


class Variant(enum.Enum):
    REAL_COSINE = "real_cosine"
    COMPLEX_ANALYTIC = "complex_analytic"


@dataclass(frozen=True)
class ChirpParams:
    """Frequency endpoints and time support of one chirplet kernel.

    ``f0`` and ``f1`` are the start and end frequencies in Hz (``0 < f0 <
    f1 <= fs/2``), ``fs`` the sampling rate, ``sigma`` the kernel support
    in seconds, and ``p`` the sweep order.
    """

    f0: float
    f1: float
    fs: float
    sigma: float
    p: int = 1

    def __post_init__(self) -> None:
        if self.p not in SUPPORTED_ORDERS:
            raise UnsupportedOrder(
                f"sweep order p must be one of {SUPPORTED_ORDERS}, got {self.p}"
            )
        if self.fs <= 0:
            raise InvalidParams(f"fs must be > 0, got {self.fs}")
        if self.f0 <= 0:
            raise InvalidParams(f"f0 must be > 0, got {self.f0}")
        if self.f0 >= self.f1:
            raise InvalidParams(f"f0 < f1 required, got f0={self.f0}, f1={self.f1}")
        if self.f1 > self.fs / 2.0:
            raise InvalidParams(
                f"f1 must not exceed fs/2 = {self.fs / 2.0}, got {self.f1}"
            )
        if self.sigma <= 0 or self.sigma * self.fs < 2:
            raise InvalidParams(
                f"sigma*fs must be >= 2 samples, got {self.sigma * self.fs}"
            )

    @property
    def num_samples(self) -> int:
        """Kernel length M = ceil(sigma * fs)."""
        return int(math.ceil(self.sigma * self.fs))


@dataclass(frozen=True)
class ChirpletFilter:
    """One generated kernel plus the parameters that produced it.

    ``samples`` is real for the cosine variant and complex for the analytic
    variant (complex128, i.e. interleaved real/imaginary pairs in memory).
    Instances are immutable; the sample buffer is marked read-only.
    """

    params: ChirpParams
    direction: Direction
    samples: np.ndarray = field(repr=False)
    variant: Variant = Variant.REAL_COSINE

    def __len__(self) -> int:
        return len(self.samples)


def time_grid(params: ChirpParams) -> np.ndarray:
    """Sample instants t = k/fs for k = 0..M-1 covering [0, sigma)."""
    return np.arange(params.num_samples, dtype=np.float64) / params.fs


def gaussian_envelope(params: ChirpParams) -> np.ndarray:
    """Gaussian taper exp(-(t - sigma/2)^2 / (2 sigma^2)) on the time grid."""
    t = time_grid(params)
    return np.exp(-((t - params.sigma / 2.0) ** 2) / (2.0 * params.sigma**2))


def _waveform(params: ChirpParams, t: np.ndarray) -> np.ndarray:
    f0, f1, sigma, p = params.f0, params.f1, params.sigma, params.p
    if p:
        rate = (f1 - f0) / ((p + 1) * sigma**p)
        return np.cos(2.0 * np.pi * (rate * t**p + f0) * t)
    # p = 0: exponential sweep; instantaneous frequency is f0*(f1/f0)^(t/sigma),
    # running from f0 at t=0 to f1 at t=sigma.
    ratio = f1 / f0
    return np.cos(2.0 * np.pi * (f0 * ratio ** (t / sigma) - f0) * sigma / np.log(ratio))


def generate_upward(params: ChirpParams, normalize: bool = False) -> ChirpletFilter:
    """Generate the real cosine kernel sweeping f0 -> f1.

    ``normalize=True`` rescales the samples to unit L2 norm; the default
    leaves the raw cosine-times-Gaussian amplitude untouched.
    """
    samples = _waveform(params, time_grid(params)) * gaussian_envelope(params)
    if normalize:
        samples /= np.linalg.norm(samples)
    samples.setflags(write=False)
    return ChirpletFilter(params=params, direction=Direction.UPWARD, samples=samples)


def generate_downward(params: ChirpParams, normalize: bool = False) -> ChirpletFilter:
    """Generate the f1 -> f0 kernel: the exact reversal of the upward one."""
    upward = generate_upward(params, normalize=normalize)
    samples = upward.samples[::-1].copy()
    samples.setflags(write=False)
    return ChirpletFilter(params=params, direction=Direction.DOWNWARD, samples=samples)


def analytic_chirp_rate(params: ChirpParams) -> float:
    """Quadratic-phase coefficient c = (f1 - f0) / (2 sigma) in Hz/s."""
    return (params.f1 - params.f0) / (2.0 * params.sigma)


def generate_analytic(
    params: ChirpParams, direction: Direction = Direction.UPWARD
) -> ChirpletFilter:
    """Generate the complex analytic kernel (linear sweep only, p=1).

    g(t) = (1/sqrt(sqrt(pi)*dt)) * exp(-(t-tc)^2/(2 dt^2))
                                 * exp(j 2 pi (c (t-tc)^2 + fc (t-tc)))
    with tc = sigma/2, dt = sigma, fc = f0 and c = (f1-f0)/(2 sigma).  The
    (tc, fc, dt, c) <-> (f0, f1, sigma) mapping is a reconstruction, not a
    canonical one; the carrier is centered on f0 and the instantaneous
    frequency sweeps a band of width f1-f0 across the support.
    """
    if params.p != 1:
        raise UnsupportedOrder(
            f"analytic kernels are defined for p=1 only, got p={params.p}"
        )
    t = time_grid(params)
    t_c = params.sigma / 2.0
    delta_t = params.sigma
    rate = analytic_chirp_rate(params)
    amplitude = 1.0 / math.sqrt(math.sqrt(math.pi) * delta_t)
    gauss = np.exp(-((t - t_c) ** 2) / (2.0 * delta_t**2))
    phase = 2.0 * np.pi * (rate * (t - t_c) ** 2 + params.f0 * (t - t_c))
    samples = amplitude * gauss * np.exp(1j * phase)
    if direction is Direction.DOWNWARD:
        samples = samples[::-1].copy()
    samples.setflags(write=False)
    return ChirpletFilter(
        params=params,
        direction=direction,
        samples=samples,
        variant=Variant.COMPLEX_ANALYTIC,
    )
