"""WAV decoding, segmentation, and the energy/flatness activity detector.

Supported input is plain RIFF/WAVE PCM 16-bit at 16, 22.05, or 44.1 kHz;
stereo is averaged to mono.  The detector flags a segment as containing a
vocalization when its energy stands out against the whole recording while
its spectrum stays tonal (low spectral flatness).
"""

from __future__ import annotations

import math
import wave
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (
    ContextMismatch,
    CorruptFile,
    EmptyInput,
    InvalidSegmentation,
    UnsupportedFormat,
)

SUPPORTED_RATES = (16000, 22050, 44100)

DETECTOR_FRAME = 256
DETECTOR_HOP = 128  # 50% overlap
DEFAULT_ER_THRESH = 0.2
DEFAULT_SFW_THRESH = 0.3
_FLATNESS_FLOOR = 1e-12


class AudioOrigin(NamedTuple):
    """Where a buffer came from: source path and offset into it."""

    path: str
    offset_s: float


@dataclass
class AudioBuffer:
    """Mono samples in [-1, 1) plus their sampling rate."""

    samples: np.ndarray
    sr: int
    origin: AudioOrigin = AudioOrigin("", 0.0)

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.size < 1:
            raise EmptyInput("audio buffer must contain at least one sample")

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sr

    def __len__(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class ActivityDecision:
    """Detector statistics and the thresholded verdict for one segment."""

    energy_ratio: float
    spectral_flatness_weighted_mean: float
    detected: bool
    er_thresh: float = DEFAULT_ER_THRESH
    sfw_thresh: float = DEFAULT_SFW_THRESH


def load_wav(path) -> AudioBuffer:
    """Decode a PCM16 RIFF/WAVE file; stereo is averaged to mono.

    Samples are scaled by 1/32768 into [-1, 1).
    """
    try:
        with wave.open(str(path), "rb") as wf:
            channels = wf.getnchannels()
            sampwidth = wf.getsampwidth()
            sr = wf.getframerate()
            comptype = wf.getcomptype()
            raw = wf.readframes(wf.getnframes())
    except (wave.Error, EOFError) as exc:
        raise CorruptFile(f"{path}: not a readable RIFF/WAVE file ({exc})") from exc
    if comptype != "NONE" or sampwidth != 2:
        raise UnsupportedFormat(f"{path}: only uncompressed PCM16 is supported")
    if sr not in SUPPORTED_RATES:
        raise UnsupportedFormat(
            f"{path}: sample rate {sr} not in {SUPPORTED_RATES} (no resampling)"
        )
    data = np.frombuffer(raw, dtype="<i2")
    if data.size == 0 or data.size % channels:
        raise CorruptFile(f"{path}: sample data is empty or truncated")
    if channels > 1:
        samples = data.reshape(-1, channels).mean(axis=1) / 32768.0
    else:
        samples = data.astype(np.float64) / 32768.0
    return AudioBuffer(samples=samples, sr=sr, origin=AudioOrigin(str(path), 0.0))


def segment(
    buffer: AudioBuffer, seg_len_s: float, overlap_frac: float = 0.0
) -> list[AudioBuffer]:
    """Fixed windows of round(seg_len*sr) samples; trailing partial dropped.

    Consecutive windows advance by round(seg_len*(1-overlap_frac)*sr) samples.
    """
    if not 0.0 <= overlap_frac < 1.0:
        raise InvalidSegmentation(f"overlap_frac must be in [0, 1), got {overlap_frac}")
    win = int(round(seg_len_s * buffer.sr))
    if win < 2:
        raise InvalidSegmentation(
            f"seg_len_s*sr must be >= 2 samples, got {seg_len_s * buffer.sr}"
        )
    hop = int(round(seg_len_s * (1.0 - overlap_frac) * buffer.sr))
    if hop < 1:
        raise InvalidSegmentation("overlap leaves no hop between segments")
    out = []
    for start in range(0, len(buffer.samples) - win + 1, hop):
        out.append(
            AudioBuffer(
                samples=buffer.samples[start : start + win],
                sr=buffer.sr,
                origin=AudioOrigin(
                    buffer.origin.path, buffer.origin.offset_s + start / buffer.sr
                ),
            )
        )
    return out


def _frames(samples: np.ndarray) -> np.ndarray:
    if samples.size < DETECTOR_FRAME:
        raise EmptyInput(
            f"need at least {DETECTOR_FRAME} samples for detector frames, "
            f"got {samples.size}"
        )
    return sliding_window_view(samples, DETECTOR_FRAME)[::DETECTOR_HOP]


def _frame_energies(samples: np.ndarray) -> np.ndarray:
    frames = _frames(samples)
    return np.einsum("ij,ij->i", frames, frames)


def nearest_rank_percentile(values: np.ndarray, pct: float) -> float:
    """Nearest-rank percentile: value at rank ceil(pct/100 * n), 1-based."""
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    rank = max(1, math.ceil(pct / 100.0 * ordered.size))
    return float(ordered[rank - 1])


def spectral_flatness(frames: np.ndarray) -> np.ndarray:
    """Per-frame flatness: geometric over arithmetic mean of the spectrum.

    Frames are Hann-windowed before the FFT and magnitudes floored at 1e-12,
    so silence reads as flat (ratio 1) rather than undefined.
    """
    windowed = frames * np.hanning(DETECTOR_FRAME)
    mags = np.abs(np.fft.rfft(windowed, axis=1))
    mags = np.maximum(mags, _FLATNESS_FLOOR)
    geometric = np.exp(np.mean(np.log(mags), axis=1))
    arithmetic = np.mean(mags, axis=1)
    return geometric / arithmetic


def detect_activity(
    seg: AudioBuffer,
    file_context: AudioBuffer,
    er_thresh: float = DEFAULT_ER_THRESH,
    sfw_thresh: float = DEFAULT_SFW_THRESH,
) -> ActivityDecision:
    """Energy-ratio + flatness heuristic for vocal activity in a segment.

    energy_ratio = mean segment frame energy / 95th-percentile file frame
    energy (nearest rank); the flatness weighted mean averages per-frame
    flatness with frame energies as weights.  A segment is detected when
    energy_ratio > er_thresh AND the weighted flatness < sfw_thresh.
    """
    if seg.sr != file_context.sr:
        raise ContextMismatch(
            f"segment sr {seg.sr} != file context sr {file_context.sr}"
        )
    seg_energy = _frame_energies(seg.samples)
    file_energy = _frame_energies(file_context.samples)

    p95 = nearest_rank_percentile(file_energy, 95.0)
    er = float(seg_energy.mean() / p95) if p95 > 0 else 0.0

    total = float(seg_energy.sum())
    if total > 0:
        flatness = spectral_flatness(_frames(seg.samples))
        sfw = float(np.dot(flatness, seg_energy) / total)
    else:
        sfw = 1.0  # silent segment: maximally flat, never detected
    return ActivityDecision(
        energy_ratio=er,
        spectral_flatness_weighted_mean=sfw,
        detected=bool(er > er_thresh and sfw < sfw_thresh),
        er_thresh=er_thresh,
        sfw_thresh=sfw_thresh,
    )
