#!/usr/bin/env python3
"""End-to-end desk-scale experiment: generate, tune, denoise, evaluate.

Produces the dataset, tunes both classical denoisers on the training
subjects, denoises the test split with the tuned parameters, and prints the
comparison table. Pass --external DIR to score an externally denoised image
set (e.g. a trained model's output) in the same table.
"""

import argparse
from pathlib import Path

from gaitspec.classical import CfarParams, GammaParams
from gaitspec.dataset import DatasetManifest, desk_scale_config, make_dataset
from gaitspec.pipeline import evaluate, run_denoiser, tune_classical


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="desk_run", help="working directory")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--external", default=None, help="directory of externally denoised <entry_id>.png")
    parser.add_argument("--external-name", default="cgan", help="table row name for the external set")
    return parser.parse_args()


def main():
    args = parse_args()
    root = Path(args.out)
    dataset_dir = root / "dataset"

    if (dataset_dir / "manifest.json").exists():
        manifest = DatasetManifest.load(dataset_dir / "manifest.json")
        print(f"reusing dataset at {dataset_dir}")
    else:
        print("generating desk-scale dataset (6 subjects x 30 s)...")
        manifest = make_dataset(desk_scale_config(seed=args.seed), dataset_dir)
    manifest.validate()
    floor = -manifest.config.dynamic_range_db

    print("tuning gamma on training subjects...")
    gamma_grid = [GammaParams(g) for g in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0)]
    gamma_result = tune_classical(manifest, "gamma", gamma_grid)
    print(f"  best gamma = {gamma_result.best.gamma} (tuning SSIM {gamma_result.best_score:.4f})")

    print("tuning CFAR on training subjects...")
    cfar_grid = [
        CfarParams(g, t, p, floor)
        for g in (2, 4, 8)
        for t in (4, 8)
        for p in (1e-1, 1e-2, 1e-3)
    ]
    cfar_result = tune_classical(manifest, "cfar", cfar_grid)
    best = cfar_result.best
    print(
        f"  best CFAR: guard={best.guard_cells} train={best.training_cells} "
        f"pfa={best.pfa:g} (tuning SSIM {cfar_result.best_score:.4f})"
    )

    print("denoising the test split...")
    gamma_run = run_denoiser(manifest, "gamma", root / "denoised" / "gamma", gamma_params=gamma_result.best)
    cfar_run = run_denoiser(manifest, "cfar", root / "denoised" / "cfar", cfar_params=cfar_result.best)
    print(
        f"  gamma {1000 * gamma_run.seconds_per_image:.1f} ms/image, "
        f"cfar {1000 * cfar_run.seconds_per_image:.1f} ms/image"
    )

    denoised = {"gamma": root / "denoised" / "gamma", "cfar": root / "denoised" / "cfar"}
    if args.external:
        run_denoiser(manifest, "external", root / "denoised" / args.external_name, external_dir=args.external)
        denoised[args.external_name] = root / "denoised" / args.external_name

    table = evaluate(manifest, denoised)
    table.save(root / "report")
    print()
    print(table.to_text())
    print(f"full report written to {root / 'report'}")


if __name__ == "__main__":
    main()
