#!/usr/bin/env python3
"""Render example figures from a generated dataset: a full-gait spectrogram,
the corruption ladder for one slice, and the residual histogram."""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from gaitspec.corruption import NoiseSpec, ResidualAccumulator, add_awgn
from gaitspec.dataset import DatasetManifest
from gaitspec.gait import default_profile, synthesize_baseband
from gaitspec.image import from_image, load_png
from gaitspec.radar import RadarConfig
from gaitspec.spectrogram import normalize_gait, segment_half_gaits, stft_spectrogram


def plot_full_gait(out: Path):
    config = RadarConfig()
    profile = default_profile()
    signal = synthesize_baseband(profile, config, 2.0, seed=7)
    spec = stft_spectrogram(signal, floor_db=-90.0)
    fig, ax = plt.subplots(figsize=(6, 4))
    extent = [0, spec.duration_s, spec.velocity_axis[0], spec.velocity_axis[-1]]
    ax.imshow(spec.values_db, aspect="auto", origin="lower", extent=extent, cmap="jet", vmin=-45, vmax=0)
    ax.set_ylim(-6, 6)
    ax.set_xlabel("Time [s]")
    ax.set_ylabel("Velocity [m/s]")
    fig.tight_layout()
    fig.savefig(out / "full_gait_spectrogram.png", dpi=150)
    print(f"wrote {out / 'full_gait_spectrogram.png'}")


def plot_snr_ladder(out: Path):
    config = RadarConfig()
    profile = default_profile()
    signal = synthesize_baseband(profile, config, 1.5, seed=7)
    spec = stft_spectrogram(signal, floor_db=-90.0)
    clean = normalize_gait(segment_half_gaits(spec, profile.half_gait_duration_s)[1].spectrogram)
    panels = [("clean", clean)]
    for snr in (10.0, 5.0, 0.0):
        panels.append((f"SNR {snr:g} dB", add_awgn(clean, NoiseSpec(snr, seed=int(snr)))))
    fig, axes = plt.subplots(1, len(panels), figsize=(3 * len(panels), 3.2))
    for ax, (title, sl) in zip(axes, panels):
        ax.imshow(sl.values_db, aspect="auto", origin="lower", cmap="jet", vmin=-45, vmax=0)
        ax.set_title(title)
        ax.set_xticks([])
        ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(out / "snr_ladder.png", dpi=150)
    print(f"wrote {out / 'snr_ladder.png'}")


def plot_residuals(out: Path, manifest_path: str | None):
    if manifest_path is None:
        return
    manifest = DatasetManifest.load(manifest_path)
    dyn = manifest.config.dynamic_range_db
    acc = ResidualAccumulator()
    for entry in manifest.test_entries:
        noisy = from_image(load_png(manifest.resolve(entry.noisy_path)), dyn)
        clean = from_image(load_png(manifest.resolve(entry.clean_path)), dyn)
        acc.add(noisy, clean)
    stats = acc.finalize()
    centers = (stats.bin_edges[:-1] + stats.bin_edges[1:]) / 2.0
    density = stats.counts / max(stats.pixel_count, 1) / np.diff(stats.bin_edges)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(centers, density, width=np.diff(stats.bin_edges), color="tab:red", alpha=0.6)
    ax.set_xlabel("Power [dB]")
    ax.set_ylabel("Probability density")
    ax.set_title(f"mean {stats.mean_db:.2f} dB, std {stats.std_db:.2f} dB")
    fig.tight_layout()
    fig.savefig(out / "residual_histogram.png", dpi=150)
    print(f"wrote {out / 'residual_histogram.png'}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="figures")
    parser.add_argument("--manifest", default=None, help="dataset manifest for the residual histogram")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    plot_full_gait(out)
    plot_snr_ladder(out)
    plot_residuals(out, args.manifest)
