"""
Tests for manifest parsing, loading and corpus export.
"""

from pathlib import Path

import numpy as np
import pytest

from shield.audio.corpus import synthetic_corpus
from shield.audio.manifest import load_manifest, parse_manifest, write_corpus
from shield.audio.wav import read_wav, write_wav
from shield.exceptions import ManifestError
from shield.models.clip import ClipLabel
from shield.utils.hash import compute_sha256


def _write_sine(path: Path, freq_hz: float, sample_rate_hz: int, seconds: float):
    t = np.arange(int(sample_rate_hz * seconds)) / sample_rate_hz
    write_wav(path, 0.5 * np.sin(2 * np.pi * freq_hz * t), sample_rate_hz)


class TestParseManifest:
    """Tests for parse_manifest"""

    def test_empty_file(self, shared_datadir: Path):
        assert parse_manifest(shared_datadir / "empty_manifest.csv").entries == []

    def test_header_only(self, shared_datadir: Path):
        assert parse_manifest(shared_datadir / "header_only.csv").entries == []

    def test_single_row(self, shared_datadir: Path):
        entries = parse_manifest(shared_datadir / "single_real.csv").entries
        assert len(entries) == 1
        assert entries[0].path == "a.wav"
        assert entries[0].label == ClipLabel.REAL
        assert entries[0].source == "asvspoof"

    def test_unknown_label_names_row(self, shared_datadir: Path):
        with pytest.raises(ManifestError, match="row 3"):
            parse_manifest(shared_datadir / "bad_label.csv")

    def test_wrong_header(self, shared_datadir: Path):
        with pytest.raises(ManifestError, match="header"):
            parse_manifest(shared_datadir / "bad_header.csv")

    def test_short_row(self, shared_datadir: Path):
        with pytest.raises(ManifestError, match="row 2"):
            parse_manifest(shared_datadir / "short_row.csv")

    def test_missing_manifest(self, tmp_path: Path):
        with pytest.raises(ManifestError, match="not found"):
            parse_manifest(tmp_path / "nope.csv")


class TestLoadManifest:
    """Tests for load_manifest"""

    def test_empty_manifest(self, shared_datadir: Path):
        manifest = shared_datadir / "empty_manifest.csv"
        assert load_manifest(shared_datadir, manifest) == []

    def test_loads_labelled_clip(self, shared_datadir: Path):
        _write_sine(shared_datadir / "a.wav", 440.0, 16000, 1.0)
        clips = load_manifest(shared_datadir, shared_datadir / "single_real.csv")
        assert len(clips) == 1
        assert clips[0].label == ClipLabel.REAL
        assert clips[0].source == "asvspoof"
        assert clips[0].clip_id == "a.wav"
        assert np.max(np.abs(clips[0].waveform.samples)) == pytest.approx(1.0)

    def test_resamples_8khz_input(self, shared_datadir: Path):
        _write_sine(shared_datadir / "a.wav", 1000.0, 8000, 1.0)
        clip = load_manifest(shared_datadir, shared_datadir / "single_real.csv")[0]
        assert clip.waveform.sample_rate_hz == 16000
        assert clip.waveform.length == 16000
        spectrum = np.abs(np.fft.rfft(clip.waveform.samples.astype(np.float64)))
        peak_hz = np.argmax(spectrum) * 16000 / clip.waveform.length
        assert abs(peak_hz - 1000.0) <= 1.0

    def test_short_file_is_padded(self, shared_datadir: Path):
        _write_sine(shared_datadir / "a.wav", 440.0, 16000, 0.25)
        clip = load_manifest(shared_datadir, shared_datadir / "single_real.csv")[0]
        assert clip.waveform.length == 16000
        assert np.all(clip.waveform.samples[4000:] == 0.0)

    def test_missing_audio_file(self, shared_datadir: Path):
        with pytest.raises(ManifestError, match="missing.wav"):
            load_manifest(shared_datadir, shared_datadir / "missing_audio.csv")

    def test_path_outside_root(self, shared_datadir: Path):
        with pytest.raises(ManifestError, match="escapes"):
            load_manifest(shared_datadir, shared_datadir / "escaping_path.csv")

    def test_undecodable_audio(self, shared_datadir: Path):
        (shared_datadir / "a.wav").write_bytes(b"not a wav file")
        with pytest.raises(ManifestError, match="decode"):
            load_manifest(shared_datadir, shared_datadir / "single_real.csv")


class TestWriteCorpus:
    """Tests for write_corpus"""

    def test_writes_one_row_per_clip(self, tmp_path: Path):
        clips = synthetic_corpus(seed=1, n_real=3, n_fake=2, clip_length=2048)
        manifest = write_corpus(clips, tmp_path)
        rows = manifest.read_text().splitlines()
        assert rows[0] == "path,label,source"
        assert len(rows) == 6

    def test_rerun_is_byte_identical(self, tmp_path: Path):
        clips = synthetic_corpus(seed=1, n_real=2, n_fake=2, clip_length=2048)
        first = compute_sha256(write_corpus(clips, tmp_path / "a").read_bytes())
        second = compute_sha256(write_corpus(clips, tmp_path / "b").read_bytes())
        assert first == second

    def test_round_trip_within_pcm_resolution(self, tmp_path: Path):
        clips = synthetic_corpus(seed=2, n_real=2, n_fake=2, clip_length=2048)
        manifest = write_corpus(clips, tmp_path)
        loaded = load_manifest(tmp_path, manifest, clip_length=2048)
        assert [c.label for c in loaded] == [c.label for c in clips]
        for original, back in zip(clips, loaded):
            samples, _ = read_wav(tmp_path / back.clip_id)
            error = np.max(np.abs(samples - original.waveform.samples))
            assert error <= 2**-15
