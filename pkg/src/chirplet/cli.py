"""Command-line front end: batch transform, bank inspection, detection, bench.

Exit codes: 0 success, 1 invalid flags, 2 when any per-file step failed
(remaining files are still processed).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import audio as audio_io
from .bank import BankConfig, FilterBank, build_bank, summary_csv
from .convolution import bench_csv, benchmark
from .errors import ChirpletError
from .export import BIN_SUFFIX, ExportOptions, write_bin, write_csv, write_png
from .kernels import SUPPORTED_ORDERS
from .scattering import SmoothConfig, transform

OUT_DIR_ENV = "FCT_OUT_DIR"
FORMATS = ("csv", "bin", "png")
_SUFFIXES = {"csv": ".csv", "bin": BIN_SUFFIX, "png": ".png"}

DEFAULT_BENCH_NS = (2**16, 2**20)
DEFAULT_BENCH_MS = (128, 1024)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; this artifact reserves 2 for file errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(name: str):
    def parse(text: str) -> int:
        value = int(text)
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {value}")
        return value

    return parse


def _positive_float(name: str):
    def parse(text: str) -> float:
        value = float(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{name} must be > 0, got {value}")
        return value

    return parse


def _nonneg_int(name: str):
    def parse(text: str) -> int:
        value = int(text)
        if value < 0:
            raise argparse.ArgumentTypeError(f"{name} must be >= 0, got {value}")
        return value

    return parse


def _add_bank_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--j", type=_positive_int("--j"), default=None,
                     help="octave count (default: 6 at 44.1 kHz, else 4)")
    sub.add_argument("--q", type=_positive_int("--q"), default=16,
                     help="filters per octave (default: %(default)s)")
    sub.add_argument("--p", type=int, choices=SUPPORTED_ORDERS, default=1,
                     help="chirp sweep order, 0 = exponential (default: %(default)s)")
    sub.add_argument("--d", type=_positive_float("--d"), default=1.0,
                     help="kernel duration multiplier (default: %(default)s)")
    sub.add_argument("--eq5-sigma", action="store_true",
                     help="assign sigma = 2d/lambda without reversing the sequence")
    sub.add_argument("--analytic", action="store_true",
                     help="complex analytic kernels (requires --p 1)")


def _add_out_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-o", "--out", default=None,
                     help=f"output directory (default: ${OUT_DIR_ENV} or cwd)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chirplet",
                     description="Chirplet filter banks and chirpletgram extraction")
    commands = parser.add_subparsers(dest="command", required=True)

    tr = commands.add_parser("transform", parents=[], help="batch WAV -> chirpletgram",
                             description="Transform WAV files into chirpletgrams.")
    tr.add_argument("inputs", nargs="+", help="WAV files or directories of WAVs")
    _add_bank_flags(tr)
    tr.add_argument("--t", type=_positive_float("--t"), default=0.001,
                    help="output frame period, seconds (default: %(default)s)")
    tr.add_argument("--s", type=_positive_float("--s"), default=0.01,
                    help="smoothing Gaussian std, seconds (default: %(default)s)")
    tr.add_argument("--format", default="bin",
                    help="comma-separated subset of csv,bin,png (default: %(default)s)")
    tr.add_argument("--crop-low", type=_nonneg_int("--crop-low"), default=0,
                    help="bands dropped from the high-frequency edge (default: 0)")
    tr.add_argument("--crop-high", type=_nonneg_int("--crop-high"), default=0,
                    help="bands dropped from the low-frequency edge (default: 0)")
    tr.add_argument("--log-compress", action="store_true",
                    help="log(1 + x/1e-10) before writing")
    tr.add_argument("--raw", action="store_true",
                    help="skip smoothing; one frame per input sample")
    tr.add_argument("--workers", type=_positive_int("--workers"), default=1,
                    help="files processed in parallel (default: %(default)s)")
    _add_out_flag(tr)

    bk = commands.add_parser("bank", help="print the filter-bank summary CSV",
                             description="Print one summary row per filter to stdout.")
    _add_bank_flags(bk)
    bk.add_argument("--fs", type=_positive_float("--fs"), default=16000.0,
                    help="sampling rate the bank targets (default: %(default)s)")

    dt = commands.add_parser("detect", help="flag segments with vocal activity",
                             description="Run the energy/flatness detector per segment.")
    dt.add_argument("inputs", nargs="+", help="WAV files or directories of WAVs")
    dt.add_argument("--seg-len", type=_positive_float("--seg-len"), default=0.5,
                    help="segment length, seconds (default: %(default)s)")
    dt.add_argument("--overlap", type=float, default=0.0,
                    help="segment overlap fraction in [0,1) (default: %(default)s)")
    dt.add_argument("--er-thresh", type=float, default=audio_io.DEFAULT_ER_THRESH,
                    help="energy-ratio threshold (default: %(default)s)")
    dt.add_argument("--sfw-thresh", type=float, default=audio_io.DEFAULT_SFW_THRESH,
                    help="weighted-flatness threshold (default: %(default)s)")
    dt.add_argument("--workers", type=_positive_int("--workers"), default=1,
                    help="files processed in parallel (default: %(default)s)")
    _add_out_flag(dt)

    bn = commands.add_parser(
        "bench", help="time the convolution paths",
        description="Benchmark naive/full-FFT/chunked convolution over an "
        f"(N, M) grid; defaults N={list(DEFAULT_BENCH_NS)}, M={list(DEFAULT_BENCH_MS)}. "
        "Every grid point is oracle-checked at 1e-9 before timing.")
    bn.add_argument("--n", type=_positive_int("--n"), action="append", default=None,
                    help=f"signal length, repeatable (default: {list(DEFAULT_BENCH_NS)})")
    bn.add_argument("--m", type=_positive_int("--m"), action="append", default=None,
                    help=f"kernel length, repeatable (default: {list(DEFAULT_BENCH_MS)})")
    bn.add_argument("--runs", type=_positive_int("--runs"), default=5,
                    help="timed repetitions per point (default: %(default)s)")
    _add_out_flag(bn)

    return parser


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _expand_inputs(inputs: list[str]) -> list[Path]:
    paths: list[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.wav")))
        else:
            paths.append(p)
    return paths


def _default_j(sr: int) -> int:
    return 6 if sr == 44100 else 4


class _BankCache:
    """Banks are pure functions of their config; share them across files."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._banks: dict[BankConfig, FilterBank] = {}

    def get(self, config: BankConfig) -> FilterBank:
        with self._lock:
            bank = self._banks.get(config)
            if bank is None:
                bank = self._banks[config] = build_bank(config)
            return bank


def cmd_transform(args) -> int:
    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    bad = [f for f in formats if f not in FORMATS]
    if bad or not formats:
        print(f"chirplet: error: --format must name {FORMATS}, got {args.format!r}",
              file=sys.stderr)
        return 1
    try:
        cfg = SmoothConfig(frame_period_t=args.t, smooth_width_s=args.s)
    except ChirpletError as exc:
        print(f"chirplet: error: {exc}", file=sys.stderr)
        return 1
    if args.analytic and args.p != 1:
        print("chirplet: error: --analytic requires --p 1", file=sys.stderr)
        return 1
    if args.j is not None and args.crop_low + args.crop_high >= args.j * args.q:
        print(f"chirplet: error: crop ({args.crop_low},{args.crop_high}) must drop "
              f"fewer than j*q = {args.j * args.q} bands", file=sys.stderr)
        return 1

    out_dir = _out_dir(args)
    opts = ExportOptions(crop=(args.crop_low, args.crop_high),
                         log_compress=args.log_compress)
    files = _expand_inputs(args.inputs)
    if not files:
        print("chirplet: error: no input files", file=sys.stderr)
        return 1
    cache = _BankCache()
    started = time.perf_counter()

    def process(path: Path) -> tuple[str, float, str | None]:
        buf = audio_io.load_wav(path)
        config = BankConfig(
            j=args.j if args.j is not None else _default_j(buf.sr),
            q=args.q, fs=float(buf.sr), p=args.p, d=args.d,
            eq5_sigma=args.eq5_sigma, analytic=args.analytic,
        )
        gram = transform(buf, cache.get(config), cfg, raw_mode=args.raw)
        written = []
        for fmt in formats:
            target = out_dir / (path.stem + _SUFFIXES[fmt])
            if fmt == "csv":
                write_csv(gram, opts, target)
            elif fmt == "bin":
                write_bin(gram, opts, target)
            else:
                write_png(gram, opts, target)
            written.append(target.name)
        note = (f"{path}: {gram.num_bands}x{gram.num_frames} "
                f"-> {', '.join(written)}")
        return note, buf.duration_s, None

    failures = 0
    total_audio = 0.0
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        def safe(path: Path):
            try:
                return process(path)
            except (ChirpletError, OSError) as exc:
                return f"{path}: error: {exc}", 0.0, str(exc)

        for note, seconds, err in pool.map(safe, files):
            print(note, file=sys.stderr if err else sys.stdout)
            total_audio += seconds
            failures += err is not None
    wall = time.perf_counter() - started
    print(f"{len(files)} file(s), {total_audio:.2f} s audio, {wall:.2f} s wall, "
          f"{failures} failure(s)")
    return 2 if failures else 0


def cmd_bank(args) -> int:
    j = args.j if args.j is not None else _default_j(int(args.fs))
    try:
        config = BankConfig(j=j, q=args.q, fs=args.fs, p=args.p, d=args.d,
                            eq5_sigma=args.eq5_sigma, analytic=args.analytic)
        if args.analytic and args.p != 1:
            raise ChirpletError("--analytic requires --p 1")
        sys.stdout.write(summary_csv(build_bank(config)))
    except ChirpletError as exc:
        print(f"chirplet: error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_detect(args) -> int:
    if not 0.0 <= args.overlap < 1.0:
        print(f"chirplet: error: --overlap must be in [0, 1), got {args.overlap}",
              file=sys.stderr)
        return 1
    files = _expand_inputs(args.inputs)
    if not files:
        print("chirplet: error: no input files", file=sys.stderr)
        return 1
    out_dir = _out_dir(args)

    def process(path: Path):
        buf = audio_io.load_wav(path)
        rows = []
        for seg in audio_io.segment(buf, args.seg_len, args.overlap):
            decision = audio_io.detect_activity(
                seg, buf, er_thresh=args.er_thresh, sfw_thresh=args.sfw_thresh
            )
            rows.append((
                str(path),
                seg.origin.offset_s,
                seg.origin.offset_s + seg.duration_s,
                decision.energy_ratio,
                decision.spectral_flatness_weighted_mean,
                decision.detected,
            ))
        return rows, None

    failures = 0
    all_rows = []
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        def safe(path: Path):
            try:
                return process(path)
            except (ChirpletError, OSError) as exc:
                return [], f"{path}: error: {exc}"

        for rows, err in pool.map(safe, files):
            if err:
                print(err, file=sys.stderr)
                failures += 1
            all_rows.extend(rows)

    target = out_dir / "detections.csv"
    with open(target, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["file", "seg_start_s", "seg_end_s", "er", "sfw", "detected"])
        for file, start, end, er, sfw, detected in all_rows:
            writer.writerow([file, f"{start:.9g}", f"{end:.9g}", f"{er:.9g}",
                             f"{sfw:.9g}", "true" if detected else "false"])
    detected_count = sum(1 for row in all_rows if row[5])
    print(f"{target}: {len(all_rows)} segment(s), {detected_count} detected")
    return 2 if failures else 0


def cmd_bench(args) -> int:
    ns = args.n or list(DEFAULT_BENCH_NS)
    ms = args.m or list(DEFAULT_BENCH_MS)
    out_dir = _out_dir(args)
    try:
        results = benchmark(ns, ms, runs=args.runs)
    except RuntimeError as exc:
        print(f"chirplet: error: {exc}", file=sys.stderr)
        return 2
    target = out_dir / "bench.csv"
    target.write_text(bench_csv(results))
    for r in results:
        if r.method == "chunked":
            print(f"N={r.n} M={r.m}: chunked {r.median_ns / 1e6:.2f} ms, "
                  f"{r.speedup_vs_full:.2f}x vs full FFT")
    print(f"wrote {target}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "transform": cmd_transform,
        "bank": cmd_bank,
        "detect": cmd_detect,
        "bench": cmd_bench,
    }
    return handlers[args.command](args)


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
