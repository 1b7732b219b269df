"""Full-reference image quality metrics: MSE, PSNR, SSIM, and pixel-domain VIF.

All metrics run on a single luminance plane. For the default grayscale
encoding the three channels are identical and channel 0 is used directly;
colormapped inputs are reduced with ITU-R BT.601 luminance weights first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .image import SpectrumImage

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
VIF_SCALES = 4
VIF_SIGMA_N_SQ = 2.0  # HVS noise variance on the 0..255 intensity scale
_EPS = 1e-10


@dataclass(frozen=True)
class MetricsReport:
    ssim: float
    psnr_db: float  # math.inf when mse == 0
    mse: float
    vif: float
    pixel_count: int


def _plane(img: np.ndarray | SpectrumImage) -> np.ndarray:
    if isinstance(img, SpectrumImage):
        img = img.pixels
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim == 2:
        return arr
    if arr.ndim == 3 and arr.shape[2] == 3:
        if np.array_equal(arr[:, :, 0], arr[:, :, 1]) and np.array_equal(arr[:, :, 0], arr[:, :, 2]):
            return arr[:, :, 0]
        return 0.299 * arr[:, :, 0] + 0.587 * arr[:, :, 1] + 0.114 * arr[:, :, 2]
    raise ValueError(f"expected a 2D plane or HxWx3 image, got shape {arr.shape}")


def _check_shapes(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def mse(a: np.ndarray | SpectrumImage, b: np.ndarray | SpectrumImage) -> float:
    """Mean squared pixel difference in native intensity units."""
    pa, pb = _plane(a), _plane(b)
    _check_shapes(pa, pb)
    return float(np.mean((pa - pb) ** 2))


def psnr(a, b, data_range: float = 65535.0) -> float:
    """20*log10(range) - 10*log10(mse), with +inf for identical images."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 20.0 * math.log10(data_range) - 10.0 * math.log10(err)


def _gaussian_taps(size: int, sigma: float) -> np.ndarray:
    k = np.arange(size) - (size - 1) / 2.0
    taps = np.exp(-0.5 * (k / sigma) ** 2)
    return taps / taps.sum()


def _valid_filter(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Separable correlation cropped to the fully-covered (valid) region."""
    pad = len(taps) // 2
    out = correlate1d(correlate1d(x, taps, axis=0), taps, axis=1)
    return out[pad:-pad, pad:-pad]


def ssim(a, b, data_range: float = 65535.0) -> float:
    """Mean local structural similarity with an 11x11 Gaussian window (sigma 1.5)."""
    pa, pb = _plane(a), _plane(b)
    _check_shapes(pa, pb)
    if min(pa.shape) < SSIM_WINDOW:
        raise ValueError(f"image {pa.shape} smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window")
    taps = _gaussian_taps(SSIM_WINDOW, SSIM_SIGMA)
    mu_a = _valid_filter(pa, taps)
    mu_b = _valid_filter(pb, taps)
    var_a = _valid_filter(pa * pa, taps) - mu_a**2
    var_b = _valid_filter(pb * pb, taps) - mu_b**2
    cov = _valid_filter(pa * pb, taps) - mu_a * mu_b
    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    ssim_map = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
        (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    )
    return float(ssim_map.mean())


def vif(reference, distorted, data_range: float = 65535.0, sigma_n_sq: float = VIF_SIGMA_N_SQ) -> float:
    """Pixel-domain visual information fidelity over a 4-scale Gaussian pyramid.

    Not symmetric: the first argument is the reference whose information
    content normalizes the result. Inputs are rescaled to the 0..255
    convention the HVS noise variance is calibrated for.
    """
    ref = _plane(reference) * (255.0 / data_range)
    dist = _plane(distorted) * (255.0 / data_range)
    _check_shapes(ref, dist)
    numerator = 0.0
    denominator = 0.0
    for scale in range(1, VIF_SCALES + 1):
        size = 2 ** (VIF_SCALES + 1 - scale) + 1
        taps = _gaussian_taps(size, size / 5.0)
        if min(ref.shape) < 2 * (size // 2) + 1:
            raise ValueError(f"image too small for VIF pyramid scale {scale}")
        if scale > 1:
            ref = _valid_filter(ref, taps)[::2, ::2]
            dist = _valid_filter(dist, taps)[::2, ::2]
            if min(ref.shape) < 2 * (size // 2) + 1:
                raise ValueError(f"image too small for VIF pyramid scale {scale}")
        mu_r = _valid_filter(ref, taps)
        mu_d = _valid_filter(dist, taps)
        var_r = np.maximum(_valid_filter(ref * ref, taps) - mu_r**2, 0.0)
        var_d = np.maximum(_valid_filter(dist * dist, taps) - mu_d**2, 0.0)
        cov = _valid_filter(ref * dist, taps) - mu_r * mu_d

        g = cov / (var_r + _EPS)
        noise_var = var_d - g * cov
        flat_ref = var_r < _EPS
        g[flat_ref] = 0.0
        noise_var[flat_ref] = var_d[flat_ref]
        var_r = np.where(flat_ref, 0.0, var_r)
        flat_dist = var_d < _EPS
        g[flat_dist] = 0.0
        noise_var[flat_dist] = 0.0
        negative_gain = g < 0
        noise_var[negative_gain] = var_d[negative_gain]
        g[negative_gain] = 0.0
        noise_var = np.maximum(noise_var, _EPS)

        numerator += float(np.sum(np.log10(1.0 + g**2 * var_r / (noise_var + sigma_n_sq))))
        denominator += float(np.sum(np.log10(1.0 + var_r / sigma_n_sq)))
    if denominator == 0.0:
        return 1.0  # constant reference carries no information to lose
    return numerator / denominator


def evaluate_pair(clean, test, data_range: float = 65535.0) -> MetricsReport:
    """All four metrics of a test image against its clean reference."""
    plane = _plane(clean)
    return MetricsReport(
        ssim=ssim(clean, test, data_range),
        psnr_db=psnr(clean, test, data_range),
        mse=mse(clean, test),
        vif=vif(clean, test, data_range),
        pixel_count=plane.size,
    )
