"""End-to-end acceptance criteria, one test per criterion.

Each test prints a [PASS] line with the measured values when it succeeds
(visible with `pytest -s` or on failure); the stated tolerances are pinned
in the assertions.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from gaitspec.classical import CfarParams, GammaParams, ca_cfar_2d
from gaitspec.cli import main
from gaitspec.corruption import NoiseSpec, add_awgn, residual_stats
from gaitspec.dataset import desk_scale_config, make_dataset
from gaitspec.gait import baseband_from_velocities, default_profile, synthesize_baseband
from gaitspec.image import to_image
from gaitspec.metrics import evaluate_pair, mse, psnr, ssim, vif
from gaitspec.pipeline import evaluate, run_denoiser, tune_classical
from gaitspec.radar import RadarConfig, max_velocity, velocity_resolution
from gaitspec.spectrogram import Spectrogram, normalize_gait, segment_half_gaits, stft_spectrogram


def _report(criterion: str, detail: str) -> None:
    print(f"[PASS] {criterion}: {detail}")


@pytest.fixture(scope="module")
def desk_manifest(tmp_path_factory):
    root = tmp_path_factory.mktemp("desk_dataset")
    return make_dataset(desk_scale_config(seed=7), root)


def test_radar_math_exact():
    config = RadarConfig(25e9, 4e3)
    vmax = max_velocity(config)
    vres = velocity_resolution(config, 512)
    assert vmax == 12.0
    assert vres == 0.046875
    _report("radar math", f"v_max = {vmax} m/s, v_res = {vres} m/s")


def test_stft_localization_within_one_bin():
    config = RadarConfig()
    velocity = 6.0
    track = np.full((1, 8000), velocity)
    signal = baseband_from_velocities(track, np.array([1.0]), config)
    spec = stft_spectrogram(signal)
    ridge = spec.velocity_axis[np.argmax(spec.values_db.mean(axis=1))]
    vres = velocity_resolution(config, 512)
    assert abs(ridge - velocity) <= vres
    _report("STFT localization", f"ridge at {ridge:.6f} m/s for a {velocity} m/s scatterer (bin {vres} m/s)")


def test_cfar_false_alarm_rate_within_factor_two():
    rng = np.random.default_rng(2718)
    power = rng.exponential(1.0, (1024, 1024))  # 1.05e6 cells
    values_db = 10.0 * np.log10(power)
    measured = {}
    for pfa in (1e-2, 1e-3):
        mask = ca_cfar_2d(values_db, CfarParams(guard_cells=2, training_cells=4, pfa=pfa))
        rate = mask.mean()
        assert 0.5 * pfa <= rate <= 2.0 * pfa
        measured[pfa] = rate
    _report(
        "CFAR statistics",
        ", ".join(f"pfa {p:g}: empirical {r:.2e}" for p, r in measured.items()) + " over 2^20 cells",
    )


@pytest.fixture(scope="module")
def metric_images():
    config = RadarConfig()
    profile = default_profile()
    signal = synthesize_baseband(profile, config, 1.5, seed=5)
    spec = stft_spectrogram(signal, floor_db=-90.0)
    clean = normalize_gait(segment_half_gaits(spec, profile.half_gait_duration_s)[1].spectrogram)
    clean_img = to_image(clean).pixels
    noisy_imgs = {
        snr: to_image(add_awgn(clean, NoiseSpec(snr, seed=int(snr) + 40))).pixels
        for snr in (10.0, 5.0, 0.0)
    }
    return clean_img, noisy_imgs


def test_metric_identities_and_monotone_degradation(metric_images):
    clean_img, noisy_imgs = metric_images
    assert ssim(clean_img, clean_img) == 1.0
    assert mse(clean_img, clean_img) == 0.0
    assert psnr(clean_img, clean_img) == math.inf
    assert vif(clean_img, clean_img) == pytest.approx(1.0, abs=1e-6)
    reports = [evaluate_pair(clean_img, noisy_imgs[snr]) for snr in (10.0, 5.0, 0.0)]
    assert reports[0].ssim > reports[1].ssim > reports[2].ssim
    assert reports[0].psnr_db > reports[1].psnr_db > reports[2].psnr_db
    assert reports[0].vif > reports[1].vif > reports[2].vif
    assert reports[0].mse < reports[1].mse < reports[2].mse
    _report(
        "metric identities",
        "identity values exact; SSIM "
        + " > ".join(f"{r.ssim:.3f}" for r in reports)
        + " across SNR 10/5/0 dB",
    )


def test_residual_gaussianity_tooling():
    rng = np.random.default_rng(3141)
    base = rng.uniform(-25.0, -15.0, (1024, 1024))  # > 1e6 pixels, clamp never engages
    clean = Spectrogram(base, 16, 512, RadarConfig())
    noisy = replace(clean, values_db=base + rng.normal(0.0, 3.0, base.shape))
    stats = residual_stats(noisy, clean)
    assert stats.pixel_count >= 10**6
    assert abs(stats.skewness) < 0.05
    assert abs(stats.excess_kurtosis) < 0.1
    _report(
        "residual gaussianity",
        f"skewness {stats.skewness:+.4f}, excess kurtosis {stats.excess_kurtosis:+.4f} "
        f"over {stats.pixel_count} pixels",
    )


def test_tuned_classical_denoisers_beat_noisy_baseline(desk_manifest, tmp_path_factory):
    out = tmp_path_factory.mktemp("desk_denoised")
    floor = -desk_manifest.config.dynamic_range_db
    gamma_grid = [GammaParams(g) for g in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0)]
    cfar_grid = [
        CfarParams(g, t, p, floor)
        for g in (2, 4, 8)
        for t in (4, 8)
        for p in (1e-1, 1e-2, 1e-3)
    ]
    gamma_best = tune_classical(desk_manifest, "gamma", gamma_grid).best
    cfar_best = tune_classical(desk_manifest, "cfar", cfar_grid).best
    run_denoiser(desk_manifest, "gamma", out / "gamma", gamma_params=gamma_best)
    run_denoiser(desk_manifest, "cfar", out / "cfar", cfar_params=cfar_best)
    table = evaluate(desk_manifest, {"gamma": out / "gamma", "cfar": out / "cfar"})
    noisy_ssim = table.rows["noisy"]["ssim"]
    assert table.rows["gamma"]["ssim"] > noisy_ssim
    assert table.rows["cfar"]["ssim"] > noisy_ssim
    _report(
        "classical denoisers",
        f"mean SSIM noisy {noisy_ssim:.4f} < gamma {table.rows['gamma']['ssim']:.4f} "
        f"(gamma={gamma_best.gamma}) and < cfar {table.rows['cfar']['ssim']:.4f} "
        f"(guard={cfar_best.guard_cells}, train={cfar_best.training_cells}, pfa={cfar_best.pfa:g})",
    )


def test_make_dataset_reproducibility(tmp_path):
    outputs = []
    for run in ("first", "second"):
        out = tmp_path / run
        rc = main(
            [
                "make-dataset",
                "--out",
                str(out),
                "--subjects",
                "2",
                "--seconds",
                "6",
                "--train-subjects",
                "1",
                "--seed",
                "77",
            ]
        )
        assert rc == 0
        outputs.append(out)
    first, second = outputs
    assert (first / "manifest.json").read_bytes() == (second / "manifest.json").read_bytes()
    first_pngs = sorted(p.relative_to(first) for p in first.rglob("*.png"))
    second_pngs = sorted(p.relative_to(second) for p in second.rglob("*.png"))
    assert first_pngs == second_pngs and first_pngs
    for rel in first_pngs:
        assert (first / rel).read_bytes() == (second / rel).read_bytes()
    _report(
        "reproducibility",
        f"manifest and {len(first_pngs)} PNGs byte-identical across two seeded runs",
    )
