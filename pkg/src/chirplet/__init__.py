"""Q-constant chirplet filter banks and fast chirpletgram extraction."""

from .audio import (
    ActivityDecision,
    AudioBuffer,
    AudioOrigin,
    detect_activity,
    load_wav,
    nearest_rank_percentile,
    segment,
    spectral_flatness,
)
from .bank import (
    BandInfo,
    BankConfig,
    FilterBank,
    bank_lambdas,
    bank_summary,
    build_bank,
    summary_csv,
)
from .convolution import (
    BenchResult,
    ConvPlan,
    bench_csv,
    benchmark,
    convolve_chunked,
    convolve_full_fft,
    convolve_naive,
    next_pow2,
    plan_for,
)
from .errors import (
    ChirpletError,
    ContextMismatch,
    CorruptFile,
    EmptyInput,
    InvalidConfig,
    InvalidInput,
    InvalidParams,
    InvalidSegmentation,
    InvalidWidth,
    PlanMismatch,
    SampleRateMismatch,
    SizeGuard,
    UnsupportedFormat,
    UnsupportedOrder,
)
from .export import (
    ExportOptions,
    bin_file_size,
    read_bin,
    write_bin,
    write_csv,
    write_png,
)
from .kernels import (
    ChirpParams,
    ChirpletFilter,
    Direction,
    Variant,
    analytic_chirp_rate,
    gaussian_envelope,
    generate_analytic,
    generate_downward,
    generate_upward,
    time_grid,
)
from .scattering import (
    Chirpletgram,
    SmoothConfig,
    build_phi,
    modulus,
    smooth_and_subsample,
    transform,
)

__version__ = "0.1.0"

__all__ = [
    "ActivityDecision",
    "AudioBuffer",
    "AudioOrigin",
    "BandInfo",
    "BankConfig",
    "BenchResult",
    "ChirpParams",
    "ChirpletError",
    "ChirpletFilter",
    "Chirpletgram",
    "ContextMismatch",
    "ConvPlan",
    "CorruptFile",
    "Direction",
    "EmptyInput",
    "ExportOptions",
    "FilterBank",
    "InvalidConfig",
    "InvalidInput",
    "InvalidParams",
    "InvalidSegmentation",
    "InvalidWidth",
    "PlanMismatch",
    "SampleRateMismatch",
    "SizeGuard",
    "SmoothConfig",
    "UnsupportedFormat",
    "UnsupportedOrder",
    "Variant",
    "analytic_chirp_rate",
    "bank_lambdas",
    "bank_summary",
    "bench_csv",
    "benchmark",
    "bin_file_size",
    "build_bank",
    "build_phi",
    "convolve_chunked",
    "convolve_full_fft",
    "convolve_naive",
    "detect_activity",
    "gaussian_envelope",
    "generate_analytic",
    "generate_downward",
    "generate_upward",
    "load_wav",
    "modulus",
    "nearest_rank_percentile",
    "next_pow2",
    "plan_for",
    "read_bin",
    "segment",
    "smooth_and_subsample",
    "spectral_flatness",
    "summary_csv",
    "time_grid",
    "transform",
    "write_bin",
    "write_csv",
    "write_png",
]
