"""Q-constant chirplet filter-bank construction.

The bank is parameterized like a wavelet filter bank: ``j`` octaves with
``q`` filters per octave give the dilation sequence lambda_i = 2^(1 + i/q).
Each filter spans exactly one octave, f0 = fs/(2 lambda) to f1 = fs/lambda,
so the first filter sits at the top of the spectrum (f1 = fs/2) and
frequency decreases as lambda grows.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidConfig, InvalidParams, UnsupportedOrder
from .kernels import (
    ChirpParams,
    ChirpletFilter,
    Direction,
    generate_analytic,
    generate_downward,
    generate_upward,
)

SUMMARY_HEADER = "index,lambda,f0_hz,f1_hz,sigma_s,kernel_len"


class BandInfo(NamedTuple):
    """Per-band frequency metadata carried through to chirpletgrams."""

    lam: float
    f0: float
    f1: float


@dataclass(frozen=True)
class BankConfig:
    """Parameters deriving the whole bank.

    ``d`` scales every kernel duration: by default sigma_i = 2*d / lambda
    taken over the *reversed* lambda sequence, so high-frequency filters get
    the shortest supports.  ``eq5_sigma=True`` selects the un-reversed
    assignment sigma_i = 2*d/lambda_i instead (compatibility switch).
    """

    j: int
    q: int
    fs: float
    p: int = 1
    d: float = 1.0
    include_downward: bool = False
    eq5_sigma: bool = False
    analytic: bool = False

    def __post_init__(self) -> None:
        if self.j < 1 or self.q < 1:
            raise InvalidConfig(f"j and q must be >= 1, got j={self.j}, q={self.q}")
        if self.fs <= 0:
            raise InvalidConfig(f"fs must be > 0, got {self.fs}")
        if self.d <= 0:
            raise InvalidConfig(f"d must be > 0, got {self.d}")

    @property
    def num_bands(self) -> int:
        return self.j * self.q


@dataclass(frozen=True)
class FilterBank:
    """Immutable, ordered collection of chirplet filters (ascending lambda)."""

    config: BankConfig
    lambdas: np.ndarray = field(repr=False)
    filters: tuple[ChirpletFilter, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.filters)

    @property
    def band_meta(self) -> tuple[BandInfo, ...]:
        """One (lambda, f0, f1) entry per filter, in bank order."""
        per_lambda = 2 if self.config.include_downward else 1
        return tuple(
            BandInfo(lam=self.lambdas[i // per_lambda], f0=f.params.f0, f1=f.params.f1)
            for i, f in enumerate(self.filters)
        )


def bank_lambdas(config: BankConfig) -> np.ndarray:
    """Dilation sequence lambda_i = 2^(1 + i/q), i = 0..j*q-1."""
    return 2.0 ** (1.0 + np.arange(config.num_bands, dtype=np.float64) / config.q)


def build_bank(config: BankConfig) -> FilterBank:
    """Derive per-filter (f0, f1, sigma) from the config and generate kernels.

    Upward and (optionally) downward kernels for the same lambda are adjacent
    in the output, upward first.
    """
    lambdas = bank_lambdas(config)
    f0s = config.fs / (2.0 * lambdas)
    f1s = config.fs / lambdas
    sigma_lambdas = lambdas if config.eq5_sigma else lambdas[::-1]
    sigmas = 2.0 * config.d / sigma_lambdas

    filters: list[ChirpletFilter] = []
    for f0, f1, sigma in zip(f0s, f1s, sigmas):
        try:
            params = ChirpParams(
                f0=float(f0), f1=float(f1), fs=config.fs, sigma=float(sigma), p=config.p
            )
        except (InvalidParams, UnsupportedOrder) as exc:
            raise InvalidConfig(f"derived kernel parameters are invalid: {exc}") from exc
        if config.analytic:
            filters.append(generate_analytic(params, Direction.UPWARD))
            if config.include_downward:
                filters.append(generate_analytic(params, Direction.DOWNWARD))
        else:
            filters.append(generate_upward(params))
            if config.include_downward:
                filters.append(generate_downward(params))

    lambdas.setflags(write=False)
    return FilterBank(config=config, lambdas=lambdas, filters=tuple(filters))


def bank_summary(bank: FilterBank) -> list[tuple[int, float, float, float, float, int]]:
    """One (index, lambda, f0, f1, sigma, kernel_len) row per filter."""
    rows = []
    for i, (filt, meta) in enumerate(zip(bank.filters, bank.band_meta)):
        p = filt.params
        rows.append((i, float(meta.lam), p.f0, p.f1, p.sigma, len(filt)))
    return rows


def summary_csv(bank: FilterBank) -> str:
    """Bank summary as CSV text; floats use shortest round-trip formatting."""
    out = io.StringIO()
    out.write(SUMMARY_HEADER + "\n")
    for index, lam, f0, f1, sigma, length in bank_summary(bank):
        out.write(f"{index},{lam!r},{f0!r},{f1!r},{sigma!r},{length}\n")
    return out.getvalue()
