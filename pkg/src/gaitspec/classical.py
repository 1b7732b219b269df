"""Classical spectrum denoisers: 2D cell-averaging CFAR and gamma correction.

CFAR runs on linear power (the regime where the cell-averaging threshold
factor is exact for exponentially distributed noise); gamma correction maps
display intensities in [0, 1] through a power law.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .image import PIXEL_MAX, SpectrumImage
from .spectrogram import Spectrogram


@dataclass(frozen=True)
class CfarParams:
    guard_cells: int = 2
    training_cells: int = 4
    pfa: float = 1e-3
    floor_db: float = -45.0

    def __post_init__(self) -> None:
        if self.guard_cells < 0:
            raise ValueError(f"guard_cells must be >= 0, got {self.guard_cells}")
        if self.training_cells < 1:
            raise ValueError(f"training_cells must be >= 1, got {self.training_cells}")
        if not 0.0 < self.pfa < 1.0:
            raise ValueError(f"pfa must be in (0, 1), got {self.pfa}")


@dataclass(frozen=True)
class GammaParams:
    gamma: float = 2.0

    def __post_init__(self) -> None:
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def cfar_threshold_factor(n_training: int | np.ndarray, pfa: float) -> float | np.ndarray:
    """Cell-averaging threshold scale alpha = n * (pfa^(-1/n) - 1).

    Exact for i.i.d. exponential linear powers: P(X > alpha * mean of n) = pfa.
    """
    if not 0.0 < pfa < 1.0:
        raise ValueError(f"pfa must be in (0, 1), got {pfa}")
    n = np.asarray(n_training, dtype=np.float64)
    if np.any(n < 1):
        raise ValueError("n_training must be >= 1")
    alpha = n * (pfa ** (-1.0 / n) - 1.0)
    return alpha if alpha.ndim else float(alpha)


def _integral(values: np.ndarray) -> np.ndarray:
    return np.pad(values, ((1, 0), (1, 0))).cumsum(axis=0).cumsum(axis=1)


def _box_sums(integral: np.ndarray, radius: int, h: int, w: int) -> tuple[np.ndarray, np.ndarray]:
    """Clipped (2r+1)-square box sum and cell count centered on every cell."""
    i = np.arange(h)[:, None]
    j = np.arange(w)[None, :]
    i0 = np.clip(i - radius, 0, h)
    i1 = np.clip(i + radius + 1, 0, h)
    j0 = np.clip(j - radius, 0, w)
    j1 = np.clip(j + radius + 1, 0, w)
    sums = integral[i1, j1] - integral[i0, j1] - integral[i1, j0] + integral[i0, j0]
    counts = (i1 - i0) * (j1 - j0)
    return sums, counts


def ca_cfar_2d(spec: Spectrogram | np.ndarray, params: CfarParams) -> np.ndarray:
    """Boolean detection mask of the cells exceeding the adaptive threshold.

    Per cell, the mean linear power of the training ring (window box minus
    guard box) scales the threshold. At edges the ring shrinks and the
    threshold factor is renormalized to the actual training count, keeping
    the false-alarm rate constant there too.
    """
    values_db = spec.values_db if isinstance(spec, Spectrogram) else np.asarray(spec)
    h, w = values_db.shape
    reach = params.guard_cells + params.training_cells
    if min(h, w) <= 2 * reach + 1:
        raise ValueError(
            f"slice {h}x{w} too small for a CFAR window of half-extent {reach} per axis"
        )
    power = 10.0 ** (values_db / 10.0)
    integral = _integral(power)
    win_sum, win_count = _box_sums(integral, reach, h, w)
    guard_sum, guard_count = _box_sums(integral, params.guard_cells, h, w)
    train_sum = win_sum - guard_sum
    n_train = win_count - guard_count
    alpha = cfar_threshold_factor(n_train, params.pfa)
    threshold = alpha * train_sum / n_train
    return power > threshold


def apply_cfar(spec: Spectrogram, params: CfarParams) -> Spectrogram:
    """Mask-gated spectrum: detections keep their dB value, the rest drops to the floor."""
    mask = ca_cfar_2d(spec, params)
    return replace(spec, values_db=np.where(mask, spec.values_db, params.floor_db))


def gamma_correct(
    obj: SpectrumImage | Spectrogram,
    params: GammaParams,
    dynamic_range_db: float = 45.0,
):
    """Power-law intensity mapping I -> I**gamma on the normalized [0, 1] scale.

    gamma > 1 compresses low intensities (background noise) toward zero.
    Accepts either a quantized image or a normalized dB slice and returns
    the same type.
    """
    if isinstance(obj, SpectrumImage):
        unit = obj.pixels.astype(np.float64) / PIXEL_MAX
        mapped = np.round(unit**params.gamma * PIXEL_MAX).astype(np.uint16)
        return replace(obj, pixels=mapped)
    unit = np.clip((obj.values_db + dynamic_range_db) / dynamic_range_db, 0.0, 1.0)
    mapped_db = unit**params.gamma * dynamic_range_db - dynamic_range_db
    return replace(obj, values_db=mapped_db)
