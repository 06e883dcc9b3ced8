"""Chirpletgram serialization: CSV, a compact binary container, and PNG.

Band cropping (drop counts from the low-index/high-frequency and
high-index/low-frequency ends) and optional log compression happen at
export time so the in-memory pipeline stays linear and positive.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .bank import BandInfo
from .errors import CorruptFile, InvalidInput
from .scattering import Chirpletgram

MAGIC = b"FCT1"
_HEADER = struct.Struct("<4sIIdd")
_BAND = struct.Struct("<ddd")
LOG_EPS = 1e-10
BIN_SUFFIX = ".fct1"


@dataclass
class ExportOptions:
    """Shared export knobs; ``crop`` drops (low_index, high_index) bands."""

    crop: tuple[int, int] = (0, 0)
    log_compress: bool = False
    flip_rows: bool = False


def bin_file_size(bands: int, frames: int) -> int:
    """Exact byte size of the binary container for a bands x frames gram."""
    return _HEADER.size + bands * frames * 4 + bands * _BAND.size


def _prepare(gram: Chirpletgram, opts: ExportOptions) -> Chirpletgram:
    values = np.asarray(gram.values)
    if values.ndim != 2 or values.size == 0:
        raise InvalidInput("chirpletgram is empty")
    if len(gram.band_meta) != values.shape[0]:
        raise InvalidInput(
            f"band metadata length {len(gram.band_meta)} != band count "
            f"{values.shape[0]}"
        )
    low, high = opts.crop
    if low < 0 or high < 0:
        raise InvalidInput(f"crop counts must be >= 0, got {opts.crop}")
    if low + high >= values.shape[0]:
        raise InvalidInput(
            f"crop {opts.crop} would remove all {values.shape[0]} bands"
        )
    stop = values.shape[0] - high
    values = values[low:stop]
    meta = tuple(gram.band_meta[low:stop])
    if opts.log_compress:
        values = np.log1p(values / LOG_EPS)
    return Chirpletgram(
        values=values,
        band_meta=meta,
        frame_period=gram.frame_period,
        origin_time=gram.origin_time,
        source_sr=gram.source_sr,
    )


def write_csv(gram: Chirpletgram, opts: ExportOptions, path) -> None:
    """One row per frame: time_s then per-band values at 9 significant digits.

    Band columns are labelled f{F0}_{F1} from the band metadata.
    """
    g = _prepare(gram, opts)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["time_s"] + [f"f{b.f0:g}_{b.f1:g}" for b in g.band_meta]
        )
        for j in range(g.num_frames):
            t = g.origin_time + j * g.frame_period
            writer.writerow([f"{t:.9g}"] + [f"{v:.9g}" for v in g.values[:, j]])


def write_bin(gram: Chirpletgram, opts: ExportOptions, path) -> None:
    """Binary container: FCT1 magic, dimensions, f32 values, f64 band table.

    Layout (little-endian): magic "FCT1", u32 bands, u32 frames, f64
    frame_period, f64 source_sr, bands*frames f32 values in band-major
    order, then per band (f64 lambda, f64 f0, f64 f1).
    """
    g = _prepare(gram, opts)
    header = _HEADER.pack(MAGIC, g.num_bands, g.num_frames, g.frame_period, g.source_sr)
    payload = np.ascontiguousarray(g.values, dtype="<f4").tobytes()
    band_table = b"".join(_BAND.pack(b.lam, b.f0, b.f1) for b in g.band_meta)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
        fh.write(band_table)


def read_bin(path) -> Chirpletgram:
    """Read a container written by write_bin; values come back as f32-exact."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise CorruptFile(f"{path}: shorter than the fixed header")
    magic, bands, frames, frame_period, source_sr = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CorruptFile(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    expected = bin_file_size(bands, frames)
    if len(blob) != expected:
        raise CorruptFile(
            f"{path}: size {len(blob)} does not match layout for "
            f"{bands}x{frames} ({expected})"
        )
    offset = _HEADER.size
    values = (
        np.frombuffer(blob, dtype="<f4", count=bands * frames, offset=offset)
        .astype(np.float64)
        .reshape(bands, frames)
    )
    offset += bands * frames * 4
    meta = tuple(
        BandInfo(*_BAND.unpack_from(blob, offset + i * _BAND.size))
        for i in range(bands)
    )
    return Chirpletgram(
        values=values,
        band_meta=meta,
        frame_period=frame_period,
        origin_time=0.0,
        source_sr=source_sr,
    )


def write_png(gram: Chirpletgram, opts: ExportOptions, path) -> None:
    """Grayscale rendering, one pixel per cell, min-max scaled to [0, 255].

    Rows run high to low frequency top to bottom unless ``flip_rows``; a
    constant image degenerates to black instead of dividing by zero.
    """
    g = _prepare(gram, opts)
    values = g.values
    lo = float(values.min())
    hi = float(values.max())
    if hi > lo:
        pixels = np.round((values - lo) / (hi - lo) * 255.0).astype(np.uint8)
    else:
        pixels = np.zeros(values.shape, dtype=np.uint8)
    if opts.flip_rows:
        pixels = pixels[::-1]
    Image.fromarray(pixels, mode="L").save(path, format="PNG")
