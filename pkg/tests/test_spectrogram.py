import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaitspec.gait import BasebandSignal, baseband_from_velocities, default_profile, synthesize_baseband
from gaitspec.radar import RadarConfig, velocity_resolution
from gaitspec.spectrogram import (
    gaussian_window,
    normalize_gait,
    segment_half_gaits,
    stft_frames,
    stft_spectrogram,
)


def tone(radar, velocity, n=4000, amplitude=1.0):
    return baseband_from_velocities(
        np.full((1, n), velocity), np.array([amplitude]), radar
    )


class TestGaussianWindow:
    def test_symmetry(self):
        w = gaussian_window(512, 0.4)
        np.testing.assert_allclose(w, w[::-1], atol=0)

    def test_center_peak_is_one(self):
        w = gaussian_window(511, 0.4)
        assert w[255] == 1.0

    def test_endpoint_closed_form(self):
        w = gaussian_window(512, 0.4)
        assert w[0] == pytest.approx(math.exp(-0.5 * (1.0 / 0.4) ** 2), rel=1e-12)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            gaussian_window(512, 0.0)


class TestStft:
    def test_tone_ridge_lands_on_its_velocity_bin(self, radar):
        # 6 m/s -> 1000 Hz -> exactly 128 bins above center
        spec = stft_spectrogram(tone(radar, 6.0))
        ridge = np.argmax(spec.values_db.mean(axis=1))
        v_ridge = spec.velocity_axis[ridge]
        assert abs(v_ridge - 6.0) <= velocity_resolution(radar, 512)

    def test_off_bin_tone_within_one_bin(self, radar):
        v = 5.97  # not an exact bin center
        spec = stft_spectrogram(tone(radar, v))
        ridge = np.argmax(spec.values_db.mean(axis=1))
        assert abs(spec.velocity_axis[ridge] - v) <= velocity_resolution(radar, 512)

    def test_all_zero_signal_is_pinned_at_floor(self, radar):
        sig = BasebandSignal(np.zeros(2048, dtype=complex), radar.pulse_repetition_hz)
        spec = stft_spectrogram(sig, floor_db=-45.0)
        np.testing.assert_array_equal(spec.values_db, np.full_like(spec.values_db, -45.0))

    def test_signal_shorter_than_window_rejected(self, radar):
        sig = BasebandSignal(np.ones(100, dtype=complex), radar.pulse_repetition_hz)
        with pytest.raises(ValueError, match="shorter"):
            stft_spectrogram(sig)

    def test_hop_shift_moves_columns_by_one_frame(self, radar):
        rng = np.random.default_rng(0)
        x = rng.normal(size=4096) + 1j * rng.normal(size=4096)
        base = stft_frames(BasebandSignal(x, radar.pulse_repetition_hz))
        shifted = stft_frames(BasebandSignal(np.concatenate([np.zeros(16, complex), x]), radar.pulse_repetition_hz))
        # interior frames coincide; edges differ because of the zero pad
        np.testing.assert_allclose(shifted[:, 3:250], base[:, 2:249], rtol=1e-10, atol=1e-10)

    def test_frame_count_covers_duration(self, radar):
        sig = tone(radar, 2.0, n=12000)
        spec = stft_spectrogram(sig)
        assert spec.n_frames == 750
        assert spec.duration_s == pytest.approx(3.0)

    def test_parseval_per_frame(self, radar):
        rng = np.random.default_rng(7)
        x = rng.normal(size=2048) + 1j * rng.normal(size=2048)
        sig = BasebandSignal(x, radar.pulse_repetition_hz)
        frames = stft_frames(sig, 512, 16, 0.4)
        w = gaussian_window(512, 0.4)
        pad = np.concatenate([np.zeros(256, complex), x, np.zeros(512, complex)])
        for m in (20, 63, 101):
            segment = pad[m * 16 : m * 16 + 512] * w
            spectrum_power = np.sum(np.abs(frames[:, m]) ** 2)
            signal_power = 512.0 * np.sum(np.abs(segment) ** 2)
            assert spectrum_power == pytest.approx(signal_power, rel=1e-6)

    def test_velocity_axis_spans_unambiguous_range(self, radar):
        spec = stft_spectrogram(tone(radar, 1.0))
        v = spec.velocity_axis
        assert v[0] == pytest.approx(-12.0)
        assert v[256] == 0.0
        assert v[-1] == pytest.approx(12.0 - velocity_resolution(radar, 512))

    def test_two_tones_separated_by_two_bins_resolve(self, radar):
        vres = velocity_resolution(radar, 512)
        v0 = 4.0
        tracks = np.stack([np.full(8000, v0), np.full(8000, v0 + 2 * vres)])
        sig = baseband_from_velocities(tracks, np.array([1.0, 1.0]), radar)
        spec = stft_spectrogram(sig)
        profile = spec.values_db.mean(axis=1)
        local_max = np.flatnonzero(
            (profile[1:-1] > profile[:-2]) & (profile[1:-1] > profile[2:])
        ) + 1
        strong = [i for i in local_max if profile[i] > profile.max() - 10.0]
        assert len(strong) == 2
        got = sorted(spec.velocity_axis[i] for i in strong)
        assert got[0] == pytest.approx(v0, abs=vres)
        assert got[1] == pytest.approx(v0 + 2 * vres, abs=vres)


class TestSegmentation:
    def test_three_seconds_gives_six_slices(self, radar):
        spec = stft_spectrogram(tone(radar, 2.0, n=12000))
        slices = segment_half_gaits(spec, 0.5)
        assert len(slices) == 6

    def test_long_recording_slice_arithmetic(self, radar):
        # 180 s at 0.5 s per half gait -> 360 slices (checked via frame math,
        # not a full synthesis: 45000 frames / 125 per slice)
        spec = stft_spectrogram(tone(radar, 2.0, n=720000), hop=16)
        assert len(segment_half_gaits(spec, 0.5)) == 360

    def test_too_short_recording_rejected(self, radar):
        spec = stft_spectrogram(tone(radar, 2.0, n=1200))  # 0.3 s
        with pytest.raises(ValueError, match="half gait"):
            segment_half_gaits(spec, 0.5)

    def test_orientation_alternates(self, radar):
        spec = stft_spectrogram(tone(radar, 2.0, n=12000))
        slices = segment_half_gaits(spec, 0.5)
        assert [s.orientation for s in slices] == ["left", "right"] * 3
        assert [s.index for s in slices] == list(range(6))

    def test_trailing_partial_segment_dropped(self, radar):
        spec = stft_spectrogram(tone(radar, 2.0, n=13000))  # 3.25 s
        assert len(segment_half_gaits(spec, 0.5)) == 6


class TestNormalize:
    def test_shifts_peak_to_zero(self, radar):
        spec = stft_spectrogram(tone(radar, 3.0))
        shifted = normalize_gait(spec)
        assert shifted.values_db.max() == 0.0

    def test_idempotent(self, clean_slice):
        again = normalize_gait(clean_slice)
        np.testing.assert_array_equal(again.values_db, clean_slice.values_db)

    def test_constant_slice_becomes_all_zero(self, radar):
        sig = BasebandSignal(np.zeros(2048, dtype=complex), radar.pulse_repetition_hz)
        spec = stft_spectrogram(sig, floor_db=-45.0)
        np.testing.assert_array_equal(normalize_gait(spec).values_db, np.zeros_like(spec.values_db))

    def test_clamps_at_dynamic_range(self, radar):
        spec = stft_spectrogram(tone(radar, 3.0), floor_db=-90.0)
        norm = normalize_gait(spec, 45.0)
        assert norm.values_db.min() == -45.0


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 40), st.floats(0.05, 2.0))
def test_gaussian_window_symmetry_property(length, sigma_fraction):
    w = gaussian_window(length, sigma_fraction)
    np.testing.assert_allclose(w, w[::-1], atol=0)
    assert w.max() <= 1.0


def test_default_profile_envelope_reaches_foot_velocity(radar):
    """The brightest high-velocity cell is the foot's turning point."""
    profile = default_profile()
    sig = synthesize_baseband(profile, radar, 3.0, seed=42)
    spec = stft_spectrogram(sig, floor_db=-90.0)
    vres = velocity_resolution(radar, 512)
    foot_peak = 2.8 * profile.treadmill_speed_m_s
    vax = spec.velocity_axis
    for side in (vax > 3.45, vax < -3.45):  # legs top out at 1.8 * 1.5 = 2.7 m/s
        masked = np.where(side[:, None], spec.values_db, -np.inf)
        row = np.unravel_index(np.argmax(masked), masked.shape)[0]
        assert abs(vax[row]) == pytest.approx(foot_peak, abs=vres)
