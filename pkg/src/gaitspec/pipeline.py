"""Denoise the test split, score every method against clean references,
and grid-search classical parameters on the training subjects.

Denoised image sets live in flat directories keyed by manifest entry id
(`<entry_id>.png`), which is also the contract external denoisers must
follow to plug into `denoise --method external`.
"""

from __future__ import annotations

import csv
import json
import shutil
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .classical import CfarParams, GammaParams, ca_cfar_2d, gamma_correct
from .dataset import DatasetManifest, ManifestEntry
from .image import PIXEL_MAX, SpectrumImage, from_image, load_png, save_png
from .metrics import evaluate_pair

TIMING_NAME = "timing.json"
METRIC_NAMES = ("ssim", "psnr_db", "mse", "vif")
# 65535 / 255: exact integer ratio between the 16-bit and 8-bit scales.
EIGHT_BIT_SCALE = 257.0


@dataclass(frozen=True)
class DenoiseRun:
    method: str
    out_dir: Path
    n_images: int
    seconds_per_image: float
    params: dict


def _denoise_pixels(
    pixels: np.ndarray,
    method: str,
    cfar_params: CfarParams,
    gamma_params: GammaParams,
    dynamic_range_db: float,
) -> np.ndarray:
    if method == "gamma":
        return gamma_correct(SpectrumImage(pixels), gamma_params).pixels
    if method == "cfar":
        db = from_image(pixels, dynamic_range_db)
        mask = ca_cfar_2d(db, cfar_params)
        gated = np.where(mask, db, cfar_params.floor_db)
        unit = np.clip((gated + dynamic_range_db) / dynamic_range_db, 0.0, 1.0)
        plane = np.round(unit * PIXEL_MAX).astype(np.uint16)
        return np.repeat(plane[:, :, None], 3, axis=2)
    raise ValueError(f"unknown denoising method {method!r}")


def run_denoiser(
    manifest: DatasetManifest,
    method: str,
    out_dir: str | Path,
    cfar_params: CfarParams | None = None,
    gamma_params: GammaParams | None = None,
    external_dir: str | Path | None = None,
) -> DenoiseRun:
    """Produce one denoised image per test-split noisy image.

    `external` copies a ready-made image set (e.g. a learned model's
    output) into place, failing loudly with the list of missing entries.
    Wall-clock seconds per image cover the denoising computation itself.
    """
    if method not in ("cfar", "gamma", "external"):
        raise ValueError(f"unknown denoising method {method!r}")
    entries = manifest.test_entries
    if not entries:
        raise ValueError("manifest has no test entries")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfar_params = cfar_params or CfarParams(floor_db=-manifest.config.dynamic_range_db)
    gamma_params = gamma_params or GammaParams()

    if method == "external":
        if external_dir is None:
            raise ValueError("external method needs external_dir")
        external = Path(external_dir)
        missing = [e.entry_id for e in entries if not (external / f"{e.entry_id}.png").exists()]
        if missing:
            raise FileNotFoundError(
                f"external directory {external} is missing {len(missing)} entries: " + ", ".join(missing)
            )

    elapsed = 0.0
    for entry in entries:
        target = out / f"{entry.entry_id}.png"
        if method == "external":
            t0 = time.perf_counter()
            shutil.copyfile(Path(external_dir) / f"{entry.entry_id}.png", target)
            elapsed += time.perf_counter() - t0
            continue
        pixels = load_png(manifest.resolve(entry.noisy_path))
        t0 = time.perf_counter()
        denoised = _denoise_pixels(
            pixels, method, cfar_params, gamma_params, manifest.config.dynamic_range_db
        )
        elapsed += time.perf_counter() - t0
        save_png(denoised, target)

    params = asdict(cfar_params) if method == "cfar" else asdict(gamma_params) if method == "gamma" else {}
    run = DenoiseRun(method, out, len(entries), elapsed / len(entries), params)
    (out / TIMING_NAME).write_text(
        json.dumps(
            {
                "method": run.method,
                "n_images": run.n_images,
                "seconds_per_image": run.seconds_per_image,
                "params": run.params,
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return run


@dataclass
class ComparisonTable:
    """Per-method aggregate metric means over the test split."""

    rows: dict[str, dict[str, float]]
    per_subject: dict[str, dict[str, dict[str, float]]]
    runtime_s_per_image: dict[str, float | None]
    records: list[dict]
    data_range: float
    convention: str
    n_test_entries: int

    def to_text(self) -> str:
        lines = ["Model\tSSIM\tPSNR(dB)\tMSE\tVIF"]
        for method, row in self.rows.items():
            lines.append(
                f"{method}\t{row['ssim']:.4f}\t{row['psnr_db']:.2f}\t{row['mse']:.1f}\t{row['vif']:.4f}"
            )
        return "\n".join(lines) + "\n"

    def save(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "comparison.txt").write_text(self.to_text(), encoding="utf-8")
        summary = {
            "convention": self.convention,
            "data_range": self.data_range,
            "n_test_entries": self.n_test_entries,
            "rows": self.rows,
            "per_subject": self.per_subject,
            "runtime_s_per_image": self.runtime_s_per_image,
        }
        (out / "comparison.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
        with (out / "records.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(
                fh, fieldnames=["method", "entry_id", "subject_id", "snr_tag"] + list(METRIC_NAMES)
            )
            writer.writeheader()
            writer.writerows(self.records)


def _load_plane(path: Path, scale: float) -> np.ndarray:
    return load_png(path)[:, :, 0].astype(np.float64) / scale


def evaluate(
    manifest: DatasetManifest,
    denoised: dict[str, str | Path],
    convention: str = "8bit",
) -> ComparisonTable:
    """Score denoised image sets (plus the no-denoising baseline) vs clean.

    Synthetic data is perfectly paired: each denoised image is compared to
    the exact clean counterpart of its noisy source. convention picks the
    intensity scale metrics run on: "8bit" divides 16-bit pixels by 257
    (range 255), "16bit" keeps native units (range 65535).
    """
    if convention not in ("8bit", "16bit"):
        raise ValueError(f"convention must be 8bit or 16bit, got {convention!r}")
    scale = EIGHT_BIT_SCALE if convention == "8bit" else 1.0
    data_range = 255.0 if convention == "8bit" else float(PIXEL_MAX)
    entries = manifest.test_entries
    if not entries:
        raise ValueError("manifest has no test entries")

    sources: dict[str, Path | None] = {"noisy": None}
    for name, directory in denoised.items():
        directory = Path(directory)
        missing = [e.entry_id for e in entries if not (directory / f"{e.entry_id}.png").exists()]
        if missing:
            raise FileNotFoundError(
                f"denoised set {name!r} in {directory} is incomplete, missing: " + ", ".join(missing)
            )
        sources[name] = directory

    records: list[dict] = []
    rows: dict[str, dict[str, float]] = {}
    per_subject: dict[str, dict[str, dict[str, float]]] = {}
    runtime: dict[str, float | None] = {}
    for method, directory in sources.items():
        method_records = []
        for entry in entries:
            clean = _load_plane(manifest.resolve(entry.clean_path), scale)
            test_path = (
                manifest.resolve(entry.noisy_path) if directory is None else directory / f"{entry.entry_id}.png"
            )
            report = evaluate_pair(clean, _load_plane(test_path, scale), data_range)
            method_records.append(
                {
                    "method": method,
                    "entry_id": entry.entry_id,
                    "subject_id": entry.subject_id,
                    "snr_tag": entry.snr_tag,
                    "ssim": report.ssim,
                    "psnr_db": report.psnr_db,
                    "mse": report.mse,
                    "vif": report.vif,
                }
            )
        records.extend(method_records)
        rows[method] = {
            m: float(np.mean([r[m] for r in method_records])) for m in METRIC_NAMES
        }
        per_subject[method] = {}
        for subject in manifest.subjects("test"):
            subject_records = [r for r in method_records if r["subject_id"] == subject]
            per_subject[method][subject] = {
                m: float(np.mean([r[m] for r in subject_records])) for m in METRIC_NAMES
            }
        runtime[method] = None
        if directory is not None and (directory / TIMING_NAME).exists():
            timing = json.loads((directory / TIMING_NAME).read_text(encoding="utf-8"))
            runtime[method] = timing.get("seconds_per_image")
    return ComparisonTable(rows, per_subject, runtime, records, data_range, convention, len(entries))


@dataclass
class TuneResult:
    method: str
    per_subject: dict[str, CfarParams | GammaParams]
    per_subject_score: dict[str, float]
    best: CfarParams | GammaParams
    best_score: float

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "per_subject": {s: asdict(p) for s, p in self.per_subject.items()},
            "per_subject_score": self.per_subject_score,
            "best": asdict(self.best),
            "best_score": self.best_score,
        }


def tune_classical(
    manifest: DatasetManifest,
    method: str,
    grid: list[CfarParams] | list[GammaParams],
    slices_per_subject: int = 8,
    convention: str = "8bit",
) -> TuneResult:
    """Argmax-SSIM grid search per training subject.

    Tuning touches only the training split (the last few gaits of each
    train subject at the hardest configured SNR), so test subjects stay
    unseen. `best` is the grid point with the highest mean SSIM across all
    tuning pairs; apply it to the test split for an honest comparison.
    """
    if not grid:
        raise ValueError("parameter grid is empty")
    if method not in ("cfar", "gamma"):
        raise ValueError(f"tune supports cfar or gamma, got {method!r}")
    scale = EIGHT_BIT_SCALE if convention == "8bit" else 1.0
    data_range = 255.0 if convention == "8bit" else float(PIXEL_MAX)
    train = manifest.train_entries
    if not train:
        raise ValueError("manifest has no train entries")
    hardest = min(e.snr_db for e in train)
    dyn = manifest.config.dynamic_range_db

    tuning: dict[str, list[ManifestEntry]] = {}
    for subject in manifest.subjects("train"):
        candidates = sorted(
            (e for e in train if e.subject_id == subject and e.snr_db == hardest),
            key=lambda e: e.gait_index,
        )
        tuning[subject] = candidates[-slices_per_subject:]

    from .metrics import ssim as ssim_metric

    per_subject: dict[str, CfarParams | GammaParams] = {}
    per_subject_score: dict[str, float] = {}
    grid_totals = np.zeros(len(grid))
    n_pairs = 0
    for subject, subject_entries in tuning.items():
        scores = np.zeros(len(grid))
        for entry in subject_entries:
            clean = _load_plane(manifest.resolve(entry.clean_path), scale)
            pixels = load_png(manifest.resolve(entry.noisy_path))
            for gi, params in enumerate(grid):
                denoised = _denoise_pixels(
                    pixels,
                    method,
                    params if method == "cfar" else CfarParams(),
                    params if method == "gamma" else GammaParams(),
                    dyn,
                )
                scores[gi] += ssim_metric(clean, denoised[:, :, 0] / scale, data_range)
        grid_totals += scores
        n_pairs += len(subject_entries)
        best_idx = int(np.argmax(scores))
        per_subject[subject] = grid[best_idx]
        per_subject_score[subject] = float(scores[best_idx] / max(len(subject_entries), 1))
    overall_idx = int(np.argmax(grid_totals))
    return TuneResult(
        method,
        per_subject,
        per_subject_score,
        grid[overall_idx],
        float(grid_totals[overall_idx] / max(n_pairs, 1)),
    )
