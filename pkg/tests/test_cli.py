import csv

import numpy as np
import pytest

from chirplet import read_bin
from chirplet.cli import main

import synth


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBankCommand:
    def test_summary_to_stdout(self, capsys):
        code, out, _ = run(capsys, ["bank", "--j", "4", "--q", "16", "--fs", "16000"])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "index,lambda,f0_hz,f1_hz,sigma_s,kernel_len"
        assert len(lines) == 65
        first = lines[1].split(",")
        assert float(first[1]) == 2.0
        assert float(first[2]) == 4000.0
        assert float(first[3]) == 8000.0

    def test_default_j_tracks_rate(self, capsys):
        code, out, _ = run(capsys, ["bank", "--fs", "44100"])
        assert code == 0
        assert len(out.strip().split("\n")) == 1 + 96

    def test_bad_d_exits_one(self, capsys):
        code, _, err = run(capsys, ["bank", "--fs", "16000", "--d", "1e-5"])
        assert code == 1
        assert "invalid" in err.lower()


class TestFlagValidation:
    def test_zero_j_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["transform", "--j", "0", "whatever.wav"])
        assert exc.value.code == 1
        assert "--j must be >= 1" in capsys.readouterr().err

    def test_unknown_format_exits_one(self, capsys, tmp_path, fixture_wav):
        code, _, err = run(capsys, ["transform", "--format", "jpeg",
                                    str(fixture_wav), "-o", str(tmp_path)])
        assert code == 1
        assert "--format" in err

    def test_smoothing_guard_exits_one(self, capsys, tmp_path, fixture_wav):
        code, _, err = run(capsys, ["transform", "--t", "0.01", "--s", "0.001",
                                    str(fixture_wav), "-o", str(tmp_path)])
        assert code == 1
        assert "smooth_width_s" in err

    def test_missing_command_exits_one(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 1


class TestTransformCommand:
    def test_end_to_end_formats(self, capsys, tmp_path, fixture_wav):
        code, out, _ = run(capsys, [
            "transform", "--j", "4", "--q", "16", "--p", "1",
            "--t", "0.001", "--s", "0.01", str(fixture_wav),
            "-o", str(tmp_path), "--format", "bin,png,csv",
        ])
        assert code == 0
        stem = fixture_wav.stem
        assert (tmp_path / f"{stem}.fct1").exists()
        assert (tmp_path / f"{stem}.png").exists()
        assert (tmp_path / f"{stem}.csv").exists()
        gram = read_bin(tmp_path / f"{stem}.fct1")
        assert gram.values.shape == (64, 1000)
        assert "1 file(s)" in out

    def test_rerun_byte_identical(self, capsys, tmp_path, fixture_wav):
        argv = ["transform", str(fixture_wav), "-o", str(tmp_path), "--format", "bin"]
        assert run(capsys, argv)[0] == 0
        first = (tmp_path / f"{fixture_wav.stem}.fct1").read_bytes()
        assert run(capsys, argv)[0] == 0
        second = (tmp_path / f"{fixture_wav.stem}.fct1").read_bytes()
        assert first == second

    def test_missing_file_continues(self, capsys, tmp_path, fixture_wav):
        code, _, err = run(capsys, [
            "transform", str(tmp_path / "nope.wav"), str(fixture_wav),
            "-o", str(tmp_path), "--format", "bin",
        ])
        assert code == 2
        assert "nope.wav" in err
        assert (tmp_path / f"{fixture_wav.stem}.fct1").exists()

    def test_crop_and_raw_flags(self, capsys, tmp_path, fixture_wav):
        code, _, _ = run(capsys, [
            "transform", str(fixture_wav), "-o", str(tmp_path),
            "--format", "bin", "--crop-low", "16", "--crop-high", "16",
        ])
        assert code == 0
        gram = read_bin(tmp_path / f"{fixture_wav.stem}.fct1")
        assert gram.values.shape[0] == 32  # 64 bands cropped by 16 + 16

    def test_workers_do_not_change_bytes(self, capsys, tmp_path, fixture_wav):
        serial = tmp_path / "serial"
        parallel = tmp_path / "parallel"
        run(capsys, ["transform", str(fixture_wav), "-o", str(serial),
                     "--format", "bin", "--workers", "1"])
        run(capsys, ["transform", str(fixture_wav), str(fixture_wav),
                     "-o", str(parallel), "--format", "bin", "--workers", "2"])
        name = f"{fixture_wav.stem}.fct1"
        assert (serial / name).read_bytes() == (parallel / name).read_bytes()

    def test_directory_input(self, capsys, tmp_path, fixture_wav):
        src = tmp_path / "in"
        src.mkdir()
        (src / "copy.wav").write_bytes(fixture_wav.read_bytes())
        code, _, _ = run(capsys, ["transform", str(src), "-o", str(tmp_path),
                                  "--format", "bin"])
        assert code == 0
        assert (tmp_path / "copy.fct1").exists()

    def test_env_out_dir(self, capsys, tmp_path, fixture_wav, monkeypatch):
        target = tmp_path / "from_env"
        monkeypatch.setenv("FCT_OUT_DIR", str(target))
        code, _, _ = run(capsys, ["transform", str(fixture_wav), "--format", "bin"])
        assert code == 0
        assert (target / f"{fixture_wav.stem}.fct1").exists()


class TestDetectCommand:
    @pytest.fixture
    def tone_wav(self, tmp_path):
        context, _ = synth.tone_in_quiet(file_s=4.0, tone_at_s=1.5)
        return synth.write_wav(tmp_path / "tone.wav", context.samples, 16000)

    def test_writes_decision_csv(self, capsys, tmp_path, tone_wav):
        code, out, _ = run(capsys, ["detect", str(tone_wav), "-o", str(tmp_path)])
        assert code == 0
        with open(tmp_path / "detections.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 8  # 4 s file, 0.5 s segments, no overlap
        assert set(rows[0]) == {"file", "seg_start_s", "seg_end_s", "er", "sfw",
                                "detected"}
        assert any(r["detected"] == "true" for r in rows)
        assert "detected" in out

    def test_unreachable_threshold(self, capsys, tmp_path, tone_wav):
        code, _, _ = run(capsys, ["detect", str(tone_wav), "-o", str(tmp_path),
                                  "--er-thresh", "1e9"])
        assert code == 0
        with open(tmp_path / "detections.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert all(r["detected"] == "false" for r in rows)

    def test_bad_overlap_exits_one(self, capsys, tmp_path, tone_wav):
        code, _, err = run(capsys, ["detect", str(tone_wav), "-o", str(tmp_path),
                                    "--overlap", "1.5"])
        assert code == 1
        assert "overlap" in err


class TestBenchCommand:
    def test_small_grid(self, capsys, tmp_path):
        code, out, _ = run(capsys, ["bench", "--n", "4096", "--m", "32",
                                    "--runs", "2", "-o", str(tmp_path)])
        assert code == 0
        lines = (tmp_path / "bench.csv").read_text().strip().split("\n")
        assert lines[0] == "method,N,M,chunk_len,median_ns,speedup_vs_full"
        assert len(lines) == 4  # full, chunked, naive
        assert "x vs full FFT" in out
