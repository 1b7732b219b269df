"""Command-line front end: make-dataset, denoise, evaluate, tune, residual-stats."""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

import numpy as np
import yaml

from .classical import CfarParams, GammaParams
from .corruption import ResidualAccumulator
from .dataset import DatasetConfig, DatasetManifest, desk_scale_config, make_dataset
from .image import from_image, load_png
from .pipeline import evaluate, run_denoiser, tune_classical


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise SystemExit(f"config file {path} must contain a mapping")
    return data


def _dataset_config(args: argparse.Namespace) -> DatasetConfig:
    file_cfg = _load_config_file(args.config)
    base = desk_scale_config(args.seed if args.seed is not None else 7) if args.desk_scale else DatasetConfig()
    values = base.to_dict()
    for section in ("radar", "dataset", "spectrogram"):
        for key, value in file_cfg.get(section, {}).items():
            if key not in values:
                raise SystemExit(f"unknown config key {section}.{key}")
            values[key] = value
    if "profile" in file_cfg:
        values["base_profile"] = file_cfg["profile"]
    overrides = {
        "n_subjects": args.subjects,
        "seconds_per_subject": args.seconds,
        "train_subjects": args.train_subjects,
        "test_snr_db": args.test_snr,
        "seed": args.seed,
    }
    if args.snr is not None:
        overrides["snr_levels"] = _parse_floats(args.snr)
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    return DatasetConfig.from_dict(values)


def _cmd_make_dataset(args: argparse.Namespace) -> int:
    config = _dataset_config(args)
    manifest = make_dataset(config, args.out)
    manifest.validate()
    n_train = len(manifest.train_entries)
    n_test = len(manifest.test_entries)
    clean = len({e.clean_path for e in manifest.entries})
    print(
        f"wrote {clean} clean slices, {n_train} train pairs, {n_test} test pairs to {args.out} "
        f"(seed {config.seed}, SNR levels {list(config.snr_levels)}, test SNR {config.test_snr_db})"
    )
    return 0


def _pick(flag_value, file_section: dict, key: str, default):
    """Resolution order: explicit flag, config-file value, built-in default."""
    if flag_value is not None:
        return flag_value
    return file_section.get(key, default)


def _cmd_denoise(args: argparse.Namespace) -> int:
    manifest = DatasetManifest.load(args.manifest)
    section = _load_config_file(args.config).get("denoise", {})
    cfar = CfarParams(
        guard_cells=_pick(args.guard, section, "guard", 2),
        training_cells=_pick(args.train, section, "train", 4),
        pfa=_pick(args.pfa, section, "pfa", 1e-3),
        floor_db=-manifest.config.dynamic_range_db,
    )
    gamma = GammaParams(gamma=_pick(args.gamma, section, "gamma", 2.0))
    run = run_denoiser(
        manifest,
        args.method,
        args.out,
        cfar_params=cfar,
        gamma_params=gamma,
        external_dir=args.external_dir,
    )
    print(
        f"{run.method}: denoised {run.n_images} test images into {run.out_dir} "
        f"({1000 * run.seconds_per_image:.1f} ms/image)"
    )
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    manifest = DatasetManifest.load(args.manifest)
    section = _load_config_file(args.config).get("evaluate", {})
    denoised: dict[str, str] = dict(section.get("denoised", {}))
    for item in args.denoised or []:
        if "=" not in item:
            raise SystemExit(f"--denoised expects name=dir, got {item!r}")
        name, directory = item.split("=", 1)
        denoised[name] = directory
    table = evaluate(manifest, denoised, convention=_pick(args.data_range, section, "data_range", "8bit"))
    print(table.to_text(), end="")
    if args.out:
        table.save(args.out)
        print(f"wrote comparison table and records to {args.out}")
    return 0


def _cmd_tune(args: argparse.Namespace) -> int:
    manifest = DatasetManifest.load(args.manifest)
    section = _load_config_file(args.config).get("tune", {})
    floor = -manifest.config.dynamic_range_db
    if args.method == "gamma":
        gamma_grid = _pick(args.gamma_grid, section, "gamma_grid", "0.5,1,1.5,2,2.5,3,3.5,4,5")
        grid = [GammaParams(g) for g in _parse_floats(str(gamma_grid))]
    else:
        guard_grid = _pick(args.guard_grid, section, "guard_grid", "2,4,8")
        train_grid = _pick(args.train_grid, section, "train_grid", "4,8")
        pfa_grid = _pick(args.pfa_grid, section, "pfa_grid", "1e-1,1e-2,1e-3")
        grid = [
            CfarParams(guard_cells=g, training_cells=t, pfa=p, floor_db=floor)
            for g, t, p in itertools.product(
                _parse_ints(str(guard_grid)), _parse_ints(str(train_grid)), _parse_floats(str(pfa_grid))
            )
        ]
    result = tune_classical(
        manifest, args.method, grid, slices_per_subject=_pick(args.slices, section, "slices", 8)
    )
    payload = result.to_dict()
    print(json.dumps(payload, indent=2))
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return 0


def _cmd_residual_stats(args: argparse.Namespace) -> int:
    manifest = DatasetManifest.load(args.manifest)
    section = _load_config_file(args.config).get("residual_stats", {})
    snr = _pick(args.snr, section, "snr", None)
    split = _pick(args.split, section, "split", None)
    dyn = manifest.config.dynamic_range_db
    entries = [e for e in manifest.entries if snr is None or e.snr_db == snr]
    if split:
        entries = [e for e in entries if e.split == split]
    if not entries:
        raise SystemExit("no manifest entries match the requested SNR/split")
    acc = ResidualAccumulator(bins=_pick(args.bins, section, "bins", 181))
    for entry in entries:
        noisy_db = from_image(load_png(manifest.resolve(entry.noisy_path)), dyn)
        clean_db = from_image(load_png(manifest.resolve(entry.clean_path)), dyn)
        acc.add(noisy_db, clean_db)
    stats = acc.finalize()
    payload = {
        "n_pairs": len(entries),
        "pixel_count": stats.pixel_count,
        "mean_db": stats.mean_db,
        "std_db": stats.std_db,
        "skewness": stats.skewness,
        "excess_kurtosis": stats.excess_kurtosis,
        "bin_edges": stats.bin_edges.tolist(),
        "counts": stats.counts.tolist(),
    }
    print(
        f"residuals over {len(entries)} pairs: mean {stats.mean_db:.3f} dB, std {stats.std_db:.3f} dB, "
        f"skewness {stats.skewness:.4f}, excess kurtosis {stats.excess_kurtosis:.4f}"
    )
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        centers = (stats.bin_edges[:-1] + stats.bin_edges[1:]) / 2.0
        density = stats.counts / max(stats.pixel_count, 1) / np.diff(stats.bin_edges)
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(centers, density, width=np.diff(stats.bin_edges), color="tab:red", alpha=0.6)
        ax.set_xlabel("Power [dB]")
        ax.set_ylabel("Probability density")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote histogram plot to {args.plot}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaitspec",
        description="Synthesize, corrupt, denoise, and score walking-gait velocity spectrograms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-dataset", help="generate a paired clean/noisy image dataset")
    p.add_argument("--out", required=True, help="dataset root directory")
    p.add_argument("--config", help="YAML config (radar/dataset/spectrogram sections, optional profile)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--desk-scale", action="store_true", help="6 subjects x 30 s preset")
    p.add_argument("--subjects", type=int, default=None)
    p.add_argument("--seconds", type=float, default=None, help="recording seconds per subject")
    p.add_argument("--snr", default=None, help="comma-separated training SNR levels in dB")
    p.add_argument("--test-snr", type=float, default=None, help="SNR of the single test-split corruption")
    p.add_argument("--train-subjects", type=int, default=None)
    p.set_defaults(func=_cmd_make_dataset)

    p = sub.add_parser("denoise", help="denoise the test split with a classical or external method")
    p.add_argument("--manifest", required=True, help="path to manifest.json")
    p.add_argument("--method", required=True, choices=["cfar", "gamma", "external"])
    p.add_argument("--out", required=True, help="directory for denoised images")
    p.add_argument("--config", default=None, help="YAML with a denoise: section of default parameters")
    p.add_argument("--seed", type=int, default=None, help="unused; denoising is deterministic")
    p.add_argument("--guard", type=int, default=None, help="CFAR guard cells per axis (default 2)")
    p.add_argument("--train", type=int, default=None, help="CFAR training cells per axis (default 4)")
    p.add_argument("--pfa", type=float, default=None, help="CFAR false-alarm probability (default 1e-3)")
    p.add_argument("--gamma", type=float, default=None, help="gamma-correction exponent (default 2)")
    p.add_argument("--external-dir", default=None, help="directory of <entry_id>.png produced externally")
    p.set_defaults(func=_cmd_denoise)

    p = sub.add_parser("evaluate", help="score denoised sets against clean references")
    p.add_argument("--manifest", required=True)
    p.add_argument("--denoised", action="append", metavar="NAME=DIR", help="repeatable denoised set")
    p.add_argument("--out", default=None, help="directory for comparison table + records")
    p.add_argument("--config", default=None, help="YAML with an evaluate: section (denoised map, data_range)")
    p.add_argument("--seed", type=int, default=None, help="unused; evaluation is deterministic")
    p.add_argument("--data-range", choices=["8bit", "16bit"], default=None)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("tune", help="grid-search classical parameters on training subjects")
    p.add_argument("--manifest", required=True)
    p.add_argument("--method", required=True, choices=["cfar", "gamma"])
    p.add_argument("--out", default=None, help="JSON file for the tuning result")
    p.add_argument("--config", default=None, help="YAML with a tune: section (grids, slices)")
    p.add_argument("--seed", type=int, default=None, help="unused; tuning is deterministic")
    p.add_argument("--gamma-grid", default=None, help="comma list (default 0.5,1,...,5)")
    p.add_argument("--guard-grid", default=None, help="comma list (default 2,4,8)")
    p.add_argument("--train-grid", default=None, help="comma list (default 4,8)")
    p.add_argument("--pfa-grid", default=None, help="comma list (default 1e-1,1e-2,1e-3)")
    p.add_argument("--slices", type=int, default=None, help="tuning slices per training subject (default 8)")
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("residual-stats", help="distribution of noisy-minus-clean dB residuals")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None, help="JSON file for histogram + moments")
    p.add_argument("--config", default=None, help="YAML with a residual_stats: section (snr, split, bins)")
    p.add_argument("--seed", type=int, default=None, help="unused; stats are deterministic")
    p.add_argument("--snr", type=float, default=None, help="restrict to one SNR level")
    p.add_argument("--split", choices=["train", "test"], default=None)
    p.add_argument("--bins", type=int, default=None, help="histogram bins (default 181)")
    p.add_argument("--plot", default=None, help="optional histogram PNG path")
    p.set_defaults(func=_cmd_residual_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
