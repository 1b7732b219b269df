"""Walking-gait velocity spectrogram synthesis, corruption, denoising, and scoring."""

from .classical import CfarParams, GammaParams, apply_cfar, ca_cfar_2d, cfar_threshold_factor, gamma_correct
from .corruption import NoiseSpec, ResidualAccumulator, ResidualStats, add_awgn, residual_stats, sigma_for_snr
from .dataset import DatasetConfig, DatasetManifest, ManifestEntry, desk_scale_config, make_dataset
from .gait import (
    BasebandSignal,
    GaitProfile,
    Scatterer,
    baseband_from_velocities,
    default_profile,
    limb_velocity_profile,
    subject_profile,
    synthesize_baseband,
)
from .image import SpectrumImage, from_image, load_png, save_png, to_image
from .metrics import MetricsReport, evaluate_pair, mse, psnr, ssim, vif
from .pipeline import ComparisonTable, TuneResult, evaluate, run_denoiser, tune_classical
from .radar import RadarConfig, max_velocity, velocity_resolution
from .spectrogram import (
    HalfGaitSlice,
    Spectrogram,
    gaussian_window,
    normalize_gait,
    segment_half_gaits,
    stft_frames,
    stft_spectrogram,
)

__version__ = "0.1.0"
