"""SNR-controlled additive white Gaussian noise on dB-scale slices.

Noise is injected on the logarithmic values of a normalized slice and the
result re-clamped to the [-R, 0] display range. SNR is defined as the ratio
of the dB-image variance to the noise variance (the corruption is applied to
the log-spectrum, so both live on the same dB scale).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from .spectrogram import Spectrogram


@dataclass(frozen=True)
class NoiseSpec:
    snr_db: float
    seed: int

    def __post_init__(self) -> None:
        # +inf is the zero-noise limit; NaN / -inf make no sense.
        if math.isnan(self.snr_db) or self.snr_db == -math.inf:
            raise ValueError(f"snr_db must be a real level (or +inf for no noise), got {self.snr_db}")


@dataclass(frozen=True)
class ResidualStats:
    """Histogram and first four standardized moments of noisy - clean."""

    bin_edges: np.ndarray
    counts: np.ndarray
    mean_db: float
    std_db: float
    skewness: float
    excess_kurtosis: float

    @property
    def pixel_count(self) -> int:
        return int(self.counts.sum())


def sigma_for_snr(spec: Spectrogram, snr_db: float) -> float:
    """Noise standard deviation (dB) hitting the requested variance-ratio SNR."""
    variance = float(np.var(spec.values_db))
    if variance == 0.0:
        raise ValueError("slice is constant; SNR relative to zero variance is undefined")
    return math.sqrt(variance / 10.0 ** (snr_db / 10.0))


def add_awgn(spec: Spectrogram, noise: NoiseSpec, dynamic_range_db: float = 45.0) -> Spectrogram:
    """Per-pixel i.i.d. Gaussian noise on the dB values, re-clamped to [-R, 0].

    Deterministic given the seed; the input slice is left untouched.
    """
    peak = spec.values_db.max()
    if abs(peak) > 1e-9:
        raise ValueError(f"slice must be normalized before corruption (peak = {peak:.3f} dB)")
    sigma = sigma_for_snr(spec, noise.snr_db)
    if sigma == 0.0:
        return replace(spec, values_db=spec.values_db.copy())
    rng = np.random.default_rng(noise.seed)
    noisy = spec.values_db + rng.normal(0.0, sigma, spec.values_db.shape)
    return replace(spec, values_db=np.clip(noisy, -dynamic_range_db, 0.0))


class ResidualAccumulator:
    """Streaming residual distribution over many noisy/clean pairs.

    Keeps a fixed-edge histogram plus raw power sums, so arbitrarily large
    image sets fit in constant memory. The edge span defaults to the widest
    difference two [-R, 0] dB images can produce.
    """

    def __init__(self, bins: int = 181, range_db: tuple[float, float] = (-90.0, 90.0)):
        self.bin_edges = np.linspace(range_db[0], range_db[1], bins + 1)
        self.counts = np.zeros(bins, dtype=np.int64)
        self._n = 0
        self._sums = np.zeros(4)

    def add(self, noisy_db: np.ndarray, clean_db: np.ndarray) -> None:
        if noisy_db.shape != clean_db.shape:
            raise ValueError(f"shape mismatch: {noisy_db.shape} vs {clean_db.shape}")
        diff = (noisy_db - clean_db).ravel()
        self.counts += np.histogram(diff, self.bin_edges)[0]
        self._n += diff.size
        self._sums += [diff.sum(), (diff**2).sum(), (diff**3).sum(), (diff**4).sum()]

    def finalize(self) -> ResidualStats:
        if self._n == 0:
            raise ValueError("no residuals accumulated")
        n = self._n
        mean = self._sums[0] / n
        m2 = self._sums[1] / n - mean**2
        m3 = self._sums[2] / n - 3 * mean * self._sums[1] / n + 2 * mean**3
        m4 = (
            self._sums[3] / n
            - 4 * mean * self._sums[2] / n
            + 6 * mean**2 * self._sums[1] / n
            - 3 * mean**4
        )
        std = math.sqrt(max(m2, 0.0))
        if std == 0.0:
            skewness, kurt = 0.0, 0.0
        else:
            skewness = m3 / std**3
            kurt = m4 / std**4 - 3.0
        return ResidualStats(self.bin_edges, self.counts, float(mean), std, float(skewness), float(kurt))


def residual_stats(noisy: Spectrogram, clean: Spectrogram, bins: int = 101) -> ResidualStats:
    """Pixelwise difference histogram plus mean/std/skewness/excess kurtosis."""
    if noisy.values_db.shape != clean.values_db.shape:
        raise ValueError(
            f"shape mismatch: noisy {noisy.values_db.shape} vs clean {clean.values_db.shape}"
        )
    diff = (noisy.values_db - clean.values_db).ravel()
    counts, edges = np.histogram(diff, bins=bins)
    std = float(np.std(diff))
    if std == 0.0:
        skewness, kurt = 0.0, 0.0  # degenerate residual, moments undefined
    else:
        skewness = float(stats.skew(diff))
        kurt = float(stats.kurtosis(diff))  # Fisher: 0 for a Gaussian
    return ResidualStats(edges, counts, float(np.mean(diff)), std, skewness, kurt)
