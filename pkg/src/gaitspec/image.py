"""Quantization of normalized spectrogram slices to 16-bit images and PNG I/O.

Normalized dB values in [-R, 0] map linearly onto [0, 65535]; the default
encoding replicates the grayscale plane into three identical channels so a
single channel carries all information. PNG files are 16-bit RGB, written
through OpenCV (Pillow has no 16-bit-per-channel RGB support).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .spectrogram import Spectrogram

IMAGE_SIZE = 256
PIXEL_MAX = 65535


@dataclass(frozen=True)
class SpectrumImage:
    """256x256x3 uint16 image of one half-gait slice plus its identity."""

    pixels: np.ndarray
    subject_id: str | None = None
    gait_index: int | None = None
    orientation: str | None = None
    snr_tag: str = "clean"

    def __post_init__(self) -> None:
        if self.pixels.dtype != np.uint16:
            raise ValueError(f"pixels must be uint16, got {self.pixels.dtype}")
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError(f"pixels must be HxWx3, got shape {self.pixels.shape}")


def bilinear_resize(values: np.ndarray, out_shape: tuple[int, int]) -> np.ndarray:
    """Separable endpoint-aligned bilinear resampling of a 2D float array."""
    h, w = values.shape
    oh, ow = out_shape
    xs = np.linspace(0.0, w - 1.0, ow)
    x0 = np.floor(xs).astype(int)
    x1 = np.minimum(x0 + 1, w - 1)
    fx = xs - x0
    tmp = values[:, x0] * (1.0 - fx) + values[:, x1] * fx
    ys = np.linspace(0.0, h - 1.0, oh)
    y0 = np.floor(ys).astype(int)
    y1 = np.minimum(y0 + 1, h - 1)
    fy = (ys - y0)[:, None]
    return tmp[y0, :] * (1.0 - fy) + tmp[y1, :] * fy


def to_image(
    spec: Spectrogram,
    dynamic_range_db: float = 45.0,
    size: int = IMAGE_SIZE,
    colormap: str | None = None,
    subject_id: str | None = None,
    gait_index: int | None = None,
    orientation: str | None = None,
    snr_tag: str = "clean",
) -> SpectrumImage:
    """Resize a normalized slice to size x size and quantize to uint16.

    Requires a normalized input (peak at 0 dB). [-R, 0] dB maps linearly to
    [0, 65535]; the mapping is monotone and invertible up to quantization.
    The optional colormap (any matplotlib name) trades that invertibility
    for figure-style rendering.
    """
    peak = spec.values_db.max()
    if abs(peak) > 1e-9:
        raise ValueError(f"slice must be normalized to a 0 dB peak before imaging (peak = {peak:.3f} dB)")
    resized = bilinear_resize(spec.values_db, (size, size))
    unit = np.clip((resized + dynamic_range_db) / dynamic_range_db, 0.0, 1.0)
    if colormap is None:
        plane = np.round(unit * PIXEL_MAX).astype(np.uint16)
        pixels = np.repeat(plane[:, :, None], 3, axis=2)
    else:
        import matplotlib  # deferred: only the colormap path needs it

        rgb = matplotlib.colormaps[colormap](unit)[:, :, :3]
        pixels = np.round(rgb * PIXEL_MAX).astype(np.uint16)
    return SpectrumImage(pixels, subject_id, gait_index, orientation, snr_tag)


def from_image(pixels: np.ndarray | SpectrumImage, dynamic_range_db: float = 45.0) -> np.ndarray:
    """Invert the grayscale encoding back to dB values in [-R, 0]."""
    if isinstance(pixels, SpectrumImage):
        pixels = pixels.pixels
    plane = pixels[:, :, 0] if pixels.ndim == 3 else pixels
    return plane.astype(np.float64) / PIXEL_MAX * dynamic_range_db - dynamic_range_db


def save_png(image: SpectrumImage | np.ndarray, path: str | Path) -> None:
    pixels = image.pixels if isinstance(image, SpectrumImage) else image
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not cv2.imwrite(str(path), pixels[:, :, ::-1]):  # RGB -> BGR
        raise OSError(f"failed to write PNG {path}")


def load_png(path: str | Path) -> np.ndarray:
    pixels = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if pixels is None:
        raise FileNotFoundError(f"cannot read PNG {path}")
    if pixels.dtype != np.uint16 or pixels.ndim != 3:
        raise ValueError(f"{path} is not a 16-bit RGB PNG")
    return pixels[:, :, ::-1]  # BGR -> RGB
