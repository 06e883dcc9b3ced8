"""Centered "same"-length linear convolution, three ways.

``convolve_naive`` is the direct time-domain oracle, ``convolve_full_fft``
a single full-signal FFT, and ``convolve_chunked`` the overlap-save scheme
that processes the signal in power-of-two blocks.  Chunking keeps the cost
at O(N log M) for a length-M kernel and sidesteps the padding penalty a
full-signal FFT pays when N sits just above a power of two.

All three produce the same mathematical object: the linear convolution
trimmed to the input length, with the kernel center aligned to the input
(output index n corresponds to full-convolution index n + (M-1)//2), and
zero signal assumed outside [0, N).
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import EmptyInput, InvalidConfig, PlanMismatch, SizeGuard

NAIVE_GUARD = 2**28
MIN_CHUNK = 1024

BENCH_CSV_HEADER = "method,N,M,chunk_len,median_ns,speedup_vs_full"


def next_pow2(n: int) -> int:
    """Smallest power of two >= n (1 for n <= 1)."""
    if n <= 1:
        return 1
    return 1 << (int(n) - 1).bit_length()


@dataclass(frozen=True)
class ConvPlan:
    """Block layout for overlap-save: power-of-two chunks of at least 2M."""

    kernel_len: int
    chunk_len: int

    def __post_init__(self) -> None:
        if self.kernel_len < 1:
            raise InvalidConfig(f"kernel_len must be >= 1, got {self.kernel_len}")
        if self.chunk_len & (self.chunk_len - 1) or self.chunk_len < 1:
            raise InvalidConfig(f"chunk_len must be a power of 2, got {self.chunk_len}")
        if self.chunk_len < 2 * self.kernel_len:
            raise InvalidConfig(
                f"chunk_len must be >= 2*kernel_len, got {self.chunk_len} < "
                f"{2 * self.kernel_len}"
            )

    @property
    def fft_size(self) -> int:
        return self.chunk_len

    @property
    def overlap(self) -> int:
        """Samples discarded at the head of every block."""
        return self.kernel_len - 1

    @property
    def hop(self) -> int:
        """Valid output samples produced per block."""
        return self.chunk_len - self.kernel_len + 1


def plan_for(kernel_len: int, target_chunk: int | None = None) -> ConvPlan:
    """Pick a chunk length: at least 2M and 1024, rounded up to a power of 2."""
    if kernel_len < 1:
        raise InvalidConfig(f"kernel_len must be >= 1, got {kernel_len}")
    chunk = max(next_pow2(2 * kernel_len), MIN_CHUNK)
    if target_chunk is not None:
        chunk = max(chunk, next_pow2(target_chunk))
    return ConvPlan(kernel_len=kernel_len, chunk_len=chunk)


def _as_1d(x, name: str) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1:
        arr = np.atleast_1d(np.squeeze(arr))
    if arr.size == 0:
        raise EmptyInput(f"{name} must contain at least one sample")
    if not np.iscomplexobj(arr):
        arr = arr.astype(np.float64, copy=False)
    return arr


def convolve_naive(signal, kernel) -> np.ndarray:
    """Direct O(N*M) time-domain convolution; the correctness oracle.

    Guarded to desk-scale inputs (N*M <= 2^28).
    """
    x = _as_1d(signal, "signal")
    k = _as_1d(kernel, "kernel")
    n, m = x.size, k.size
    if n * m > NAIVE_GUARD:
        raise SizeGuard(f"N*M = {n * m} exceeds the naive guard {NAIVE_GUARD}")
    dtype = np.result_type(x.dtype, k.dtype, np.float64)
    full = np.zeros(n + m - 1, dtype=dtype)
    for j in range(m):
        full[j : j + n] += k[j] * x
    start = (m - 1) // 2
    return full[start : start + n]


def convolve_full_fft(signal, kernel) -> np.ndarray:
    """Same contract as the oracle via one FFT of size next_pow2(N+M-1)."""
    x = _as_1d(signal, "signal")
    k = _as_1d(kernel, "kernel")
    n, m = x.size, k.size
    size = next_pow2(n + m - 1)
    if np.iscomplexobj(x) or np.iscomplexobj(k):
        full = np.fft.ifft(np.fft.fft(x, size) * np.fft.fft(k, size))
    else:
        full = np.fft.irfft(np.fft.rfft(x, size) * np.fft.rfft(k, size), size)
    start = (m - 1) // 2
    return full[start : start + n]


def convolve_chunked(signal, kernel, plan: ConvPlan | None = None) -> np.ndarray:
    """Overlap-save convolution: blocked FFTs, O(N log M).

    Each length-L window of the (front-padded) signal is multiplied with the
    kernel spectrum; the first M-1 samples of every inverse transform are
    circular-aliasing casualties and are discarded, the remaining L-M+1 are
    exact linear-convolution samples and are concatenated.
    """
    x = _as_1d(signal, "signal")
    k = _as_1d(kernel, "kernel")
    n, m = x.size, k.size
    if plan is None:
        plan = plan_for(m)
    elif plan.kernel_len != m:
        raise PlanMismatch(
            f"plan was built for kernel_len={plan.kernel_len}, got kernel of length {m}"
        )
    length = plan.chunk_len
    hop = plan.hop
    start = (m - 1) // 2
    total = n + start  # full-convolution samples needed to cover the output
    num_blocks = -(-total // hop)

    complex_path = np.iscomplexobj(x) or np.iscomplexobj(k)
    padded = np.zeros(
        (num_blocks - 1) * hop + length,
        dtype=np.complex128 if np.iscomplexobj(x) else np.float64,
    )
    padded[m - 1 : m - 1 + n] = x
    blocks = sliding_window_view(padded, length)[::hop][:num_blocks]

    if complex_path:
        spectra = np.fft.fft(blocks, axis=1)
        spectra *= np.fft.fft(k, length)
        valid = np.fft.ifft(spectra, axis=1)[:, m - 1 :]
    else:
        spectra = np.fft.rfft(blocks, axis=1)
        spectra *= np.fft.rfft(k, length)
        valid = np.fft.irfft(spectra, length, axis=1)[:, m - 1 :]
    return valid.reshape(-1)[start : start + n]


# ---------------------------------------------------------------------------
# benchmark harness (used by the CLI `bench` command and the acceptance suite)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchResult:
    method: str
    n: int
    m: int
    chunk_len: int
    median_ns: int
    speedup_vs_full: float


def _median_time_ns(fn, runs: int) -> int:
    fn()  # warm caches and FFT twiddle tables
    times = []
    for _ in range(runs):
        t0 = time.perf_counter_ns()
        fn()
        times.append(time.perf_counter_ns() - t0)
    return int(statistics.median(times))


def benchmark(
    ns: list[int],
    ms: list[int],
    runs: int = 5,
    seed: int = 0,
    naive_limit: int = 2**26,
) -> list[BenchResult]:
    """Time the three convolution paths over an (N, M) grid.

    Every grid point is checked against an oracle (the naive path when the
    guard allows, the full-FFT path otherwise) at 1e-9 relative L-infinity
    before any timing happens; a failure raises RuntimeError.
    """
    rng = np.random.default_rng(seed)
    results: list[BenchResult] = []
    for n in ns:
        for m in ms:
            x = rng.standard_normal(n)
            k = rng.standard_normal(m)
            plan = plan_for(m)
            time_naive = n * m <= naive_limit
            reference = convolve_naive(x, k) if time_naive else convolve_full_fft(x, k)
            scale = float(np.max(np.abs(reference)))
            for candidate in (convolve_chunked(x, k, plan), convolve_full_fft(x, k)):
                err = float(np.max(np.abs(candidate - reference))) / scale
                if err > 1e-9:
                    raise RuntimeError(
                        f"oracle check failed at N={n}, M={m}: rel err {err:.3e}"
                    )
            full_ns = _median_time_ns(lambda: convolve_full_fft(x, k), runs)
            chunk_ns = _median_time_ns(lambda: convolve_chunked(x, k, plan), runs)
            results.append(BenchResult("full_fft", n, m, 0, full_ns, 1.0))
            results.append(
                BenchResult("chunked", n, m, plan.chunk_len, chunk_ns, full_ns / chunk_ns)
            )
            if time_naive:
                naive_ns = _median_time_ns(lambda: convolve_naive(x, k), runs)
                results.append(
                    BenchResult("naive", n, m, 0, naive_ns, full_ns / naive_ns)
                )
    return results


def bench_csv(results: list[BenchResult]) -> str:
    lines = [BENCH_CSV_HEADER]
    for r in results:
        lines.append(
            f"{r.method},{r.n},{r.m},{r.chunk_len},{r.median_ns},{r.speedup_vs_full:.4f}"
        )
    return "\n".join(lines) + "\n"
