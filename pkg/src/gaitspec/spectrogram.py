"""Gaussian-window STFT spectrograms, half-gait slicing, and normalization.

The spectrogram is the dB-scale magnitude of a sliding windowed DFT with the
zero-velocity bin centered, floored a fixed number of dB below the peak.
Frames are centered on multiples of the hop (edges zero-padded) so a signal
of duration T yields ceil(T * F_p / hop) frames and slicing arithmetic works
out to duration / half_gait slices.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal.windows import gaussian as _gaussian

from .gait import BasebandSignal
from .radar import RadarConfig

DEFAULT_WINDOW_LEN = 512
DEFAULT_HOP = 16
DEFAULT_SIGMA_FRACTION = 0.4
DEFAULT_FLOOR_DB = -45.0


@dataclass(frozen=True)
class Spectrogram:
    """dB magnitudes, rows = velocity bins (zero centered), cols = time frames."""

    values_db: np.ndarray
    frame_hop_samples: int
    window_len: int
    config: RadarConfig

    @property
    def n_frames(self) -> int:
        return self.values_db.shape[1]

    @property
    def frame_period_s(self) -> float:
        return self.frame_hop_samples / self.config.pulse_repetition_hz

    @property
    def duration_s(self) -> float:
        return self.n_frames * self.frame_period_s

    @property
    def velocity_axis(self) -> np.ndarray:
        """Velocity in m/s of each row, spanning [-v_max, +v_max)."""
        n_rows = self.values_db.shape[0]
        freqs = np.fft.fftshift(np.fft.fftfreq(n_rows, d=1.0 / self.config.pulse_repetition_hz))
        return freqs * self.config.wavelength_m / 2.0


@dataclass(frozen=True)
class HalfGaitSlice:
    spectrogram: Spectrogram
    index: int
    orientation: str  # "left" or "right"


def gaussian_window(length: int, sigma_fraction: float = DEFAULT_SIGMA_FRACTION) -> np.ndarray:
    """Gaussian taper with unit peak; sigma is a fraction of the half-width."""
    if length < 2:
        raise ValueError(f"window length must be >= 2, got {length}")
    if sigma_fraction <= 0:
        raise ValueError(f"sigma_fraction must be positive, got {sigma_fraction}")
    return _gaussian(length, std=sigma_fraction * (length - 1) / 2.0, sym=True)


def stft_frames(
    signal: BasebandSignal,
    window_len: int = DEFAULT_WINDOW_LEN,
    hop: int = DEFAULT_HOP,
    sigma_fraction: float = DEFAULT_SIGMA_FRACTION,
) -> np.ndarray:
    """Complex STFT, shape (window_len, n_frames), zero velocity centered.

    Frame m is centered on sample m*hop; the signal is zero-padded by half a
    window at each end so every sample is covered.
    """
    x = np.asarray(signal.samples, dtype=np.complex128)
    if hop < 1:
        raise ValueError(f"hop must be >= 1, got {hop}")
    if len(x) < window_len:
        raise ValueError(f"signal length {len(x)} is shorter than one window ({window_len})")
    n_frames = -(-len(x) // hop)  # ceil
    pad_left = window_len // 2
    pad_right = max(0, (n_frames - 1) * hop + window_len - pad_left - len(x))
    xp = np.pad(x, (pad_left, pad_right))
    frames = sliding_window_view(xp, window_len)[:: hop][:n_frames]
    w = gaussian_window(window_len, sigma_fraction)
    spectrum = np.fft.fft(frames * w, axis=1)
    return np.fft.fftshift(spectrum, axes=1).T


def stft_spectrogram(
    signal: BasebandSignal,
    window_len: int = DEFAULT_WINDOW_LEN,
    hop: int = DEFAULT_HOP,
    sigma_fraction: float = DEFAULT_SIGMA_FRACTION,
    floor_db: float = DEFAULT_FLOOR_DB,
    config: RadarConfig | None = None,
) -> Spectrogram:
    """dB-scale spectrogram floored `floor_db` dB below its own peak.

    floor_db is negative (dB relative to the peak). An all-zero signal
    yields a spectrogram pinned at floor_db with a 0 dB reference peak.
    """
    if floor_db >= 0:
        raise ValueError(f"floor_db is relative to the peak and must be negative, got {floor_db}")
    frames = stft_frames(signal, window_len, hop, sigma_fraction)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(np.abs(frames))
    peak = db.max()
    if not np.isfinite(peak):
        peak = 0.0
    values = np.maximum(db, peak + floor_db)
    if config is None:
        config = RadarConfig(pulse_repetition_hz=signal.sample_rate_hz)
    return Spectrogram(values, hop, window_len, config)


def segment_half_gaits(spec: Spectrogram, half_gait_duration_s: float) -> list[HalfGaitSlice]:
    """Split into consecutive non-overlapping half-gait column ranges.

    The trailing partial segment is discarded; slices carry alternating
    left/right swing-orientation tags.
    """
    if half_gait_duration_s <= 0:
        raise ValueError(f"half_gait_duration_s must be positive, got {half_gait_duration_s}")
    frames_per = round(half_gait_duration_s / spec.frame_period_s)
    if frames_per < 1 or spec.n_frames < frames_per:
        raise ValueError(
            f"spectrogram spans {spec.duration_s:.3f} s, less than one half gait ({half_gait_duration_s:.3f} s)"
        )
    slices = []
    for i in range(spec.n_frames // frames_per):
        values = spec.values_db[:, i * frames_per : (i + 1) * frames_per]
        orientation = "left" if i % 2 == 0 else "right"
        slices.append(HalfGaitSlice(replace(spec, values_db=values), i, orientation))
    return slices


def normalize_gait(spec: Spectrogram, dynamic_range_db: float = -DEFAULT_FLOOR_DB) -> Spectrogram:
    """Shift so the slice maximum sits at 0 dB and clamp below -dynamic_range_db."""
    if spec.values_db.size == 0:
        raise ValueError("cannot normalize an empty slice")
    shifted = spec.values_db - spec.values_db.max()
    return replace(spec, values_db=np.maximum(shifted, -dynamic_range_db))
