import math

import numpy as np
import pytest

from chirplet import (
    BankConfig,
    Direction,
    InvalidConfig,
    Variant,
    bank_lambdas,
    bank_summary,
    build_bank,
    summary_csv,
)
from chirplet.bank import SUMMARY_HEADER


@pytest.fixture(scope="module")
def speech_bank():
    return build_bank(BankConfig(j=4, q=16, fs=16000.0))


class TestConstruction:
    def test_filter_count(self, speech_bank):
        assert len(speech_bank) == 4 * 16

    def test_first_filter_tops_the_spectrum(self, speech_bank):
        assert speech_bank.lambdas[0] == 2.0
        assert speech_bank.filters[0].params.f0 == 4000.0
        assert speech_bank.filters[0].params.f1 == 8000.0

    def test_last_lambda_and_f1(self, speech_bank):
        assert speech_bank.lambdas[63] == pytest.approx(2.0 ** (1 + 63 / 16), rel=1e-15)
        assert speech_bank.filters[63].params.f1 == pytest.approx(
            16000.0 / 2.0 ** (1 + 63 / 16), rel=1e-15
        )

    def test_bird_configuration(self):
        bank = build_bank(BankConfig(j=6, q=16, fs=44100.0))
        assert len(bank) == 96
        assert bank.filters[0].params.f1 == pytest.approx(22050.0)

    def test_octave_span(self, speech_bank):
        for filt in speech_bank.filters:
            ratio = filt.params.f1 / filt.params.f0
            assert abs(ratio - 2.0) <= 2.0 * 1e-12

    def test_geometric_progression(self, speech_bank):
        lams = speech_bank.lambdas
        step = 2.0 ** (1.0 / 16)
        np.testing.assert_allclose(lams[1:] / lams[:-1], step, rtol=1e-12)

    def test_frequencies_decrease(self, speech_bank):
        f0s = np.array([f.params.f0 for f in speech_bank.filters])
        assert np.all(np.diff(f0s) < 0)

    def test_kernel_lengths(self, speech_bank):
        for filt in speech_bank.filters:
            assert len(filt) == math.ceil(filt.params.sigma * 16000.0)

    def test_rebuild_is_bit_identical(self):
        cfg = BankConfig(j=3, q=8, fs=22050.0, p=2, d=0.7)
        a = build_bank(cfg)
        b = build_bank(cfg)
        assert a.lambdas.tobytes() == b.lambdas.tobytes()
        for fa, fb in zip(a.filters, b.filters):
            assert fa.samples.tobytes() == fb.samples.tobytes()


class TestSigmaAssignment:
    def test_default_reverses_lambda_sequence(self, speech_bank):
        # shortest support goes to the highest-frequency filter
        lams = speech_bank.lambdas
        assert speech_bank.filters[0].params.sigma == 2.0 / lams[63]
        assert speech_bank.filters[63].params.sigma == 2.0 / lams[0] == 1.0

    def test_eq5_switch_uses_own_lambda(self):
        bank = build_bank(BankConfig(j=4, q=16, fs=16000.0, eq5_sigma=True))
        assert bank.filters[0].params.sigma == 1.0
        assert bank.filters[63].params.sigma == 2.0 / bank.lambdas[63]

    def test_d_scales_every_support(self):
        half = build_bank(BankConfig(j=2, q=4, fs=16000.0, d=0.5))
        unit = build_bank(BankConfig(j=2, q=4, fs=16000.0, d=1.0))
        for fh, fu in zip(half.filters, unit.filters):
            assert fh.params.sigma == pytest.approx(fu.params.sigma / 2.0, rel=1e-15)


class TestVariants:
    def test_downward_pairs_adjacent(self):
        bank = build_bank(BankConfig(j=2, q=4, fs=16000.0, include_downward=True))
        assert len(bank) == 16
        for i in range(0, 16, 2):
            up, down = bank.filters[i], bank.filters[i + 1]
            assert up.direction is Direction.UPWARD
            assert down.direction is Direction.DOWNWARD
            assert up.params == down.params
            assert np.array_equal(down.samples, up.samples[::-1])

    def test_analytic_bank(self):
        bank = build_bank(BankConfig(j=2, q=4, fs=16000.0, analytic=True))
        assert all(f.variant is Variant.COMPLEX_ANALYTIC for f in bank.filters)
        assert all(f.samples.dtype == np.complex128 for f in bank.filters)

    def test_band_meta_matches_filters(self):
        bank = build_bank(BankConfig(j=2, q=4, fs=16000.0, include_downward=True))
        meta = bank.band_meta
        assert len(meta) == len(bank)
        for info, filt in zip(meta, bank.filters):
            assert info.f0 == filt.params.f0
            assert info.f1 == filt.params.f1
        assert meta[0].lam == meta[1].lam == bank.lambdas[0]


class TestValidation:
    def test_rejects_zero_octaves(self):
        with pytest.raises(InvalidConfig):
            BankConfig(j=0, q=16, fs=16000.0)

    def test_rejects_nonpositive_d(self):
        with pytest.raises(InvalidConfig):
            BankConfig(j=4, q=16, fs=16000.0, d=0.0)

    def test_rejects_d_too_small_for_kernels(self):
        # smallest sigma = 2d/lambda_max; sigma*fs < 2 must be caught
        with pytest.raises(InvalidConfig):
            build_bank(BankConfig(j=4, q=16, fs=16000.0, d=1e-4))


class TestSummary:
    def test_row_count(self, speech_bank):
        assert len(bank_summary(speech_bank)) == 64

    def test_first_row_echoes_construction(self, speech_bank):
        index, lam, f0, f1, sigma, length = bank_summary(speech_bank)[0]
        assert (index, lam, f0, f1) == (0, 2.0, 4000.0, 8000.0)
        assert sigma == speech_bank.filters[0].params.sigma
        assert length == math.ceil(sigma * 16000.0)

    def test_every_row_spans_an_octave(self, speech_bank):
        for _, _, f0, f1, _, _ in bank_summary(speech_bank):
            assert f1 == pytest.approx(2.0 * f0, rel=1e-12)

    def test_csv_header_and_shape(self, speech_bank):
        lines = summary_csv(speech_bank).strip().split("\n")
        assert lines[0] == SUMMARY_HEADER == "index,lambda,f0_hz,f1_hz,sigma_s,kernel_len"
        assert len(lines) == 65
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == 2.0
        assert float(first[2]) == 4000.0
