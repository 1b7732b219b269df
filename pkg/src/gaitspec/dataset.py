"""Paired clean/noisy dataset generation and the manifest that catalogs it.

Layout under the dataset root:

    clean/<subject>/<gait>_<orient>.png
    noisy/<snr>/<subject>/<gait>_<orient>.png
    manifest.json

Each manifest entry is one clean/noisy pair; train-split slices get one
noisy image per configured SNR level, test-split slices a single noisy
image at the test SNR (the stand-in for field-measured noisy data).
Everything is deterministic given the seed: per-slice noise streams are
derived from (seed, subject, gait, level) so generation order never
matters.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .corruption import NoiseSpec, add_awgn
from .gait import GaitProfile, profile_from_dict, subject_profile, synthesize_baseband
from .image import save_png, to_image
from .radar import RadarConfig
from .spectrogram import normalize_gait, segment_half_gaits, stft_spectrogram

MANIFEST_NAME = "manifest.json"


def snr_tag(snr_db: float) -> str:
    return f"snr{snr_db:g}"


def derive_seed(*parts: int) -> int:
    """Stable independent RNG seed from integer coordinates."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class DatasetConfig:
    n_subjects: int = 22
    seconds_per_subject: float = 180.0
    snr_levels: tuple[float, ...] = (10.0, 5.0, 0.0)
    test_snr_db: float = 0.0
    train_subjects: int = 15
    seed: int = 0
    speed_range: tuple[float, float] = (1.4, 1.6)
    half_gait_range: tuple[float, float] = (0.4, 0.6)
    window_len: int = 512
    hop: int = 16
    sigma_fraction: float = 0.4
    dynamic_range_db: float = 45.0
    image_size: int = 256
    carrier_frequency_hz: float = 25e9
    pulse_repetition_hz: float = 4e3
    base_profile: dict | None = None

    def __post_init__(self) -> None:
        if not 0 < self.train_subjects < self.n_subjects:
            raise ValueError(
                f"train_subjects must split the {self.n_subjects} subjects, got {self.train_subjects}"
            )
        if not self.snr_levels:
            raise ValueError("at least one training SNR level is required")

    @property
    def radar(self) -> RadarConfig:
        return RadarConfig(self.carrier_frequency_hz, self.pulse_repetition_hz)

    def profile_for_subject(self, subject_index: int) -> GaitProfile:
        base = profile_from_dict(self.base_profile) if self.base_profile else None
        return subject_profile(
            self.seed, subject_index, self.speed_range, self.half_gait_range, base=base
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetConfig":
        data = dict(data)
        for key in ("snr_levels", "speed_range", "half_gait_range"):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        return cls(**data)


def desk_scale_config(seed: int = 7) -> DatasetConfig:
    """Small deterministic preset: 6 subjects x 30 s, fixed 0.5 s half gaits."""
    return DatasetConfig(
        n_subjects=6,
        seconds_per_subject=30.0,
        train_subjects=4,
        half_gait_range=(0.5, 0.5),
        seed=seed,
    )


@dataclass(frozen=True)
class ManifestEntry:
    subject_id: str
    gait_index: int
    orientation: str
    snr_db: float
    snr_tag: str
    clean_path: str
    noisy_path: str
    split: str

    @property
    def entry_id(self) -> str:
        return f"{self.subject_id}_g{self.gait_index:04d}_{self.orientation}_{self.snr_tag}"


@dataclass
class DatasetManifest:
    config: DatasetConfig
    entries: list[ManifestEntry]
    root: Path | None = None

    @property
    def train_entries(self) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == "train"]

    @property
    def test_entries(self) -> list[ManifestEntry]:
        return [e for e in self.entries if e.split == "test"]

    def subjects(self, split: str | None = None) -> list[str]:
        seen = dict.fromkeys(e.subject_id for e in self.entries if split in (None, e.split))
        return list(seen)

    def resolve(self, relative: str) -> Path:
        if self.root is None:
            raise ValueError("manifest has no root directory; load it from disk or set .root")
        return self.root / relative

    def validate(self) -> None:
        """Check split hygiene and clean/noisy pairing invariants."""
        by_split: dict[str, set[str]] = {"train": set(), "test": set()}
        for e in self.entries:
            by_split[e.split].add(e.subject_id)
        overlap = by_split["train"] & by_split["test"]
        if overlap:
            raise ValueError(f"subjects in both splits: {sorted(overlap)}")
        per_clean: dict[str, set[float]] = {}
        for e in self.entries:
            per_clean.setdefault(e.clean_path, set()).add(e.snr_db)
            name = f"{e.gait_index:04d}_{e.orientation}.png"
            if e.clean_path != f"clean/{e.subject_id}/{name}":
                raise ValueError(f"entry {e.entry_id} clean path does not match its subject/gait/orientation")
            if e.noisy_path != f"noisy/{e.snr_tag}/{e.subject_id}/{name}":
                raise ValueError(f"entry {e.entry_id} noisy path does not match its subject/gait/orientation")
        want = set(self.config.snr_levels)
        for e in self.entries:
            if e.split == "train" and per_clean[e.clean_path] != want:
                raise ValueError(f"train slice {e.clean_path} does not carry SNR levels {sorted(want)}")

    def save(self, path: str | Path) -> None:
        payload = {
            "format_version": 1,
            "generation_config": self.config.to_dict(),
            "entries": [asdict(e) for e in self.entries],
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DatasetManifest":
        path = Path(path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        config = DatasetConfig.from_dict(payload["generation_config"])
        entries = [ManifestEntry(**e) for e in payload["entries"]]
        return cls(config, entries, root=path.parent)


def make_dataset(config: DatasetConfig, out_dir: str | Path) -> DatasetManifest:
    """Generate the full paired dataset under out_dir and write its manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    radar = config.radar
    entries: list[ManifestEntry] = []
    for sid in range(config.n_subjects):
        subject = f"subj{sid:02d}"
        split = "train" if sid < config.train_subjects else "test"
        profile = config.profile_for_subject(sid)
        signal = synthesize_baseband(
            profile, radar, config.seconds_per_subject, seed=derive_seed(config.seed, sid)
        )
        # STFT floor sits two dynamic ranges down so the per-slice clamp in
        # normalize_gait, not the global floor, defines the image background.
        spec = stft_spectrogram(
            signal,
            config.window_len,
            config.hop,
            config.sigma_fraction,
            -2.0 * config.dynamic_range_db,
            radar,
        )
        for sl in segment_half_gaits(spec, profile.half_gait_duration_s):
            clean = normalize_gait(sl.spectrogram, config.dynamic_range_db)
            name = f"{sl.index:04d}_{sl.orientation}.png"
            clean_rel = f"clean/{subject}/{name}"
            save_png(
                to_image(
                    clean,
                    config.dynamic_range_db,
                    config.image_size,
                    subject_id=subject,
                    gait_index=sl.index,
                    orientation=sl.orientation,
                ),
                out / clean_rel,
            )
            levels = config.snr_levels if split == "train" else (config.test_snr_db,)
            for k, snr_db in enumerate(levels):
                tag = snr_tag(snr_db)
                noise = NoiseSpec(snr_db, derive_seed(config.seed, sid, sl.index, k + 1))
                noisy = add_awgn(clean, noise, config.dynamic_range_db)
                noisy_rel = f"noisy/{tag}/{subject}/{name}"
                save_png(
                    to_image(
                        noisy,
                        config.dynamic_range_db,
                        config.image_size,
                        subject_id=subject,
                        gait_index=sl.index,
                        orientation=sl.orientation,
                        snr_tag=tag,
                    ),
                    out / noisy_rel,
                )
                entries.append(
                    ManifestEntry(subject, sl.index, sl.orientation, snr_db, tag, clean_rel, noisy_rel, split)
                )
    manifest = DatasetManifest(config, entries, root=out)
    manifest.save(out / MANIFEST_NAME)
    return manifest
