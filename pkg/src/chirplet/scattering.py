"""Modulus and Gaussian time-averaging: the chirpletgram pipeline.

Convolving audio against every kernel in a bank gives one complex or signed
row per band; taking the modulus removes phase, and smoothing each row with
a unit-mass Gaussian low-pass before subsampling trades time resolution for
local time-invariance and SNR.  The result is a non-negative bands x frames
matrix with per-band frequency metadata: the chirpletgram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .audio import AudioBuffer
from .bank import BandInfo, FilterBank
from .convolution import convolve_chunked, plan_for
from .errors import EmptyInput, InvalidConfig, InvalidWidth, SampleRateMismatch


@dataclass(frozen=True)
class SmoothConfig:
    """Output frame period and low-pass width, both in seconds.

    ``smooth_width_s`` is the standard deviation of the Gaussian low-pass;
    it must be at least half the frame period so subsampling stays
    anti-aliased.
    """

    frame_period_t: float = 0.001
    smooth_width_s: float = 0.01

    def __post_init__(self) -> None:
        if self.frame_period_t <= 0:
            raise InvalidConfig(f"frame_period_t must be > 0, got {self.frame_period_t}")
        if self.smooth_width_s <= 0:
            raise InvalidConfig(f"smooth_width_s must be > 0, got {self.smooth_width_s}")
        if self.smooth_width_s < self.frame_period_t / 2.0:
            raise InvalidConfig(
                "smooth_width_s must be >= frame_period_t/2 (anti-aliasing guard), "
                f"got {self.smooth_width_s} < {self.frame_period_t / 2.0}"
            )


@dataclass
class Chirpletgram:
    """Bands x frames matrix of non-negative magnitudes with axis metadata."""

    values: np.ndarray
    band_meta: tuple[BandInfo, ...]
    frame_period: float
    origin_time: float = 0.0
    source_sr: float = 0.0

    @property
    def num_bands(self) -> int:
        return int(self.values.shape[0])

    @property
    def num_frames(self) -> int:
        return int(self.values.shape[1])


def modulus(conv_output) -> np.ndarray:
    """Element-wise magnitude: |.| of real or complex convolution output."""
    return np.abs(np.asarray(conv_output))


def build_phi(smooth_width_s: float, fs: float) -> np.ndarray:
    """Discrete Gaussian low-pass, truncated at +/-4 std, summing to 1."""
    std = smooth_width_s * fs
    if std < 1:
        raise InvalidWidth(
            f"smooth_width_s*fs must be >= 1 sample, got {std}"
        )
    radius = int(round(4.0 * std))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    phi = np.exp(-(t**2) / (2.0 * std**2))
    phi /= phi.sum()
    return phi


def _num_frames(n: int, frame_period_t: float, fs: float, hop: int) -> int:
    # floor(N / (t*fs)) with an epsilon so an exact multiple is not lost to
    # float rounding; clamped so strided indices stay inside the row.
    nominal = int(math.floor(n / (frame_period_t * fs) + 1e-9))
    return max(1, min(nominal, 1 + (n - 1) // hop))


def smooth_and_subsample(
    modulus_rows,
    cfg: SmoothConfig,
    fs: float,
    band_meta: tuple[BandInfo, ...] | None = None,
    origin_time: float = 0.0,
) -> Chirpletgram:
    """Low-pass every row with phi, then pick every round(t*fs)-th sample.

    Rows must share one length N; the output has floor(N/(t*fs)) frames.
    ``band_meta`` defaults to zero-filled placeholders when the rows did not
    come from a bank.
    """
    rows = np.atleast_2d(np.asarray(modulus_rows, dtype=np.float64))
    if rows.size == 0:
        raise EmptyInput("modulus rows are empty")
    if cfg.frame_period_t * fs < 1.0:
        raise InvalidConfig(
            f"frame_period_t*fs must be >= 1 sample, got {cfg.frame_period_t * fs}"
        )
    hop = int(round(cfg.frame_period_t * fs))
    n = rows.shape[1]
    frames = _num_frames(n, cfg.frame_period_t, fs, hop)
    phi = build_phi(cfg.smooth_width_s, fs)
    plan = plan_for(len(phi))

    out = np.empty((rows.shape[0], frames), dtype=np.float64)
    for i in range(rows.shape[0]):
        smoothed = convolve_chunked(rows[i], phi, plan)
        out[i] = smoothed[: frames * hop : hop]
    np.maximum(out, 0.0, out=out)  # FFT roundoff can leave -1e-18 in silence

    if band_meta is None:
        band_meta = tuple(BandInfo(0.0, 0.0, 0.0) for _ in range(rows.shape[0]))
    return Chirpletgram(
        values=out,
        band_meta=band_meta,
        frame_period=cfg.frame_period_t,
        origin_time=origin_time,
        source_sr=fs,
    )


def transform(
    audio: AudioBuffer,
    bank: FilterBank,
    cfg: SmoothConfig | None = None,
    raw_mode: bool = False,
) -> Chirpletgram:
    """Full pipeline: per-band chunked convolution, modulus, smoothing.

    ``raw_mode=True`` skips the smoothing stage and returns the per-sample
    magnitudes (one frame per input sample).
    """
    if audio.sr != bank.config.fs:
        raise SampleRateMismatch(
            f"audio sr {audio.sr} != bank fs {bank.config.fs}"
        )
    if cfg is None:
        cfg = SmoothConfig()
    x = np.asarray(audio.samples, dtype=np.float64)

    rows = np.empty((len(bank.filters), x.size), dtype=np.float64)
    for i, filt in enumerate(bank.filters):
        plan = plan_for(len(filt.samples))
        rows[i] = modulus(convolve_chunked(x, filt.samples, plan))

    meta = bank.band_meta
    if raw_mode:
        return Chirpletgram(
            values=rows,
            band_meta=meta,
            frame_period=1.0 / audio.sr,
            origin_time=audio.origin.offset_s,
            source_sr=audio.sr,
        )
    return smooth_and_subsample(
        rows, cfg, audio.sr, band_meta=meta, origin_time=audio.origin.offset_s
    )
