import numpy as np
import pytest

from gaitspec.corruption import NoiseSpec, add_awgn
from gaitspec.gait import default_profile, synthesize_baseband
from gaitspec.radar import RadarConfig
from gaitspec.spectrogram import normalize_gait, segment_half_gaits, stft_spectrogram


@pytest.fixture(scope="session")
def radar():
    return RadarConfig()


@pytest.fixture(scope="session")
def clean_slice(radar):
    """One normalized half-gait slice of the default walker."""
    profile = default_profile()
    signal = synthesize_baseband(profile, radar, 1.5, seed=5)
    spec = stft_spectrogram(signal, floor_db=-90.0)
    return normalize_gait(segment_half_gaits(spec, profile.half_gait_duration_s)[1].spectrogram)


@pytest.fixture(scope="session")
def noisy_slice(clean_slice):
    return add_awgn(clean_slice, NoiseSpec(snr_db=0.0, seed=99))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)
