"""Point-scatterer model of a treadmill walker and complex baseband synthesis.

A walker is a superposition of limb scatterers. In the treadmill frame the
torso has zero bulk velocity; each limb contributes a half-sinusoid radial
velocity pulse during its swing window and rests during stance. Left/right
swings alternate every half gait, so the full pattern repeats with the gait
period (two half gaits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .radar import RadarConfig, max_velocity


@dataclass(frozen=True)
class Scatterer:
    """One reflecting body part.

    phase_rad places the start of the swing within the full gait cycle
    (2*pi = one full cycle, i.e. two half gaits); duty is the fraction of a
    half gait spent swinging.
    """

    name: str
    amplitude: float
    peak_velocity_m_s: float
    phase_rad: float = 0.0
    duty: float = 0.7

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if not 0.0 < self.duty <= 1.0:
            raise ValueError(f"duty must be in (0, 1], got {self.duty}")


@dataclass(frozen=True)
class GaitProfile:
    treadmill_speed_m_s: float = 1.5
    half_gait_duration_s: float = 0.5
    scatterers: tuple[Scatterer, ...] = ()
    phase_offset_rad: float = 0.0

    def __post_init__(self) -> None:
        if self.half_gait_duration_s <= 0:
            raise ValueError(f"half_gait_duration_s must be positive, got {self.half_gait_duration_s}")
        if not self.scatterers:
            raise ValueError("profile needs at least one scatterer (the torso)")

    @property
    def gait_period_s(self) -> float:
        return 2.0 * self.half_gait_duration_s


@dataclass(frozen=True)
class BasebandSignal:
    """Uniformly sampled complex radar return at the pulse repetition rate."""

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self) -> None:
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("baseband samples must all be finite")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz


def default_profile(treadmill_speed_m_s: float = 1.5, half_gait_duration_s: float = 0.5) -> GaitProfile:
    """Seven-scatterer walker: torso plus arm/upper-leg/foot pairs.

    Peak velocities scale with treadmill speed; the swinging-side leg and
    foot recede while the counter-swinging arm approaches, mirrored on the
    next half gait, which makes consecutive half gaits distinguishable.
    """
    v = treadmill_speed_m_s
    scatterers = (
        Scatterer("torso", amplitude=1.0, peak_velocity_m_s=0.0, phase_rad=0.0, duty=1.0),
        Scatterer("arm_left", amplitude=0.3, peak_velocity_m_s=-1.6 * v, phase_rad=0.0),
        Scatterer("arm_right", amplitude=0.3, peak_velocity_m_s=1.6 * v, phase_rad=math.pi),
        Scatterer("upper_leg_right", amplitude=0.4, peak_velocity_m_s=1.8 * v, phase_rad=0.0),
        Scatterer("upper_leg_left", amplitude=0.4, peak_velocity_m_s=-1.8 * v, phase_rad=math.pi),
        Scatterer("foot_right", amplitude=0.25, peak_velocity_m_s=2.8 * v, phase_rad=0.0),
        Scatterer("foot_left", amplitude=0.25, peak_velocity_m_s=-2.8 * v, phase_rad=math.pi),
    )
    return GaitProfile(v, half_gait_duration_s, scatterers)


def subject_profile(
    seed: int,
    subject_id: int,
    speed_range: tuple[float, float] = (1.4, 1.6),
    half_gait_range: tuple[float, float] = (0.4, 0.6),
    amplitude_jitter: float = 0.10,
    velocity_jitter: float = 0.15,
    base: GaitProfile | None = None,
) -> GaitProfile:
    """Deterministic per-subject variation of a walker profile.

    Draws treadmill speed and half-gait duration uniformly from the given
    ranges and jitters scatterer amplitudes / peak velocities, emulating a
    population of differently built walkers. With an explicit base profile
    its peak velocities are rescaled proportionally to the drawn speed.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, subject_id]))
    speed = rng.uniform(*speed_range)
    half_gait = rng.uniform(*half_gait_range)
    if base is None:
        base = default_profile(speed, half_gait)
    else:
        speed_scale = speed / base.treadmill_speed_m_s
        base = replace(
            base,
            treadmill_speed_m_s=speed,
            half_gait_duration_s=half_gait,
            scatterers=tuple(
                replace(s, peak_velocity_m_s=s.peak_velocity_m_s * speed_scale) for s in base.scatterers
            ),
        )
    jittered = tuple(
        replace(
            s,
            amplitude=s.amplitude * (1.0 + rng.uniform(-amplitude_jitter, amplitude_jitter)),
            peak_velocity_m_s=s.peak_velocity_m_s * (1.0 + rng.uniform(-velocity_jitter, velocity_jitter)),
        )
        for s in base.scatterers
    )
    return replace(base, scatterers=jittered, phase_offset_rad=rng.uniform(0.0, 2.0 * math.pi))


def profile_to_dict(profile: GaitProfile) -> dict:
    return {
        "treadmill_speed_m_s": profile.treadmill_speed_m_s,
        "half_gait_duration_s": profile.half_gait_duration_s,
        "phase_offset_rad": profile.phase_offset_rad,
        "scatterers": [
            {
                "name": s.name,
                "amplitude": s.amplitude,
                "peak_velocity_m_s": s.peak_velocity_m_s,
                "phase_rad": s.phase_rad,
                "duty": s.duty,
            }
            for s in profile.scatterers
        ],
    }


def profile_from_dict(data: dict) -> GaitProfile:
    scatterers = tuple(Scatterer(**s) for s in data.get("scatterers", ()))
    return GaitProfile(
        treadmill_speed_m_s=data.get("treadmill_speed_m_s", 1.5),
        half_gait_duration_s=data.get("half_gait_duration_s", 0.5),
        scatterers=scatterers,
        phase_offset_rad=data.get("phase_offset_rad", 0.0),
    )


def limb_velocity_profile(profile: GaitProfile, scatterer_index: int, t: np.ndarray | float) -> np.ndarray | float:
    """Instantaneous radial velocity of one scatterer at time(s) t.

    Half-sinusoid pulse of height peak_velocity during the swing window,
    zero during stance, periodic with the full gait period.
    """
    if not 0 <= scatterer_index < len(profile.scatterers):
        raise IndexError(f"scatterer index {scatterer_index} out of range")
    s = profile.scatterers[scatterer_index]
    t = np.asarray(t, dtype=np.float64)
    cycle = (t / profile.gait_period_s + profile.phase_offset_rad / (2.0 * math.pi)) % 1.0
    start = (s.phase_rad / (2.0 * math.pi)) % 1.0
    swing_frac = 0.5 * s.duty  # duty counts fractions of a half gait
    progress = ((cycle - start) % 1.0) / swing_frac
    v = np.where(progress < 1.0, s.peak_velocity_m_s * np.sin(np.pi * np.minimum(progress, 1.0)), 0.0)
    return v if v.ndim else float(v)


def baseband_from_velocities(
    velocities: np.ndarray,
    amplitudes: np.ndarray,
    config: RadarConfig,
    initial_phases: np.ndarray | None = None,
) -> BasebandSignal:
    """Superpose point scatterers with given radial velocity tracks.

    velocities has shape (n_scatterers, n_samples), sampled at F_p. The
    phase of each scatterer is (4*pi/lambda) * integral of v dt, accumulated
    with a trapezoidal rule (exact for the piecewise-sinusoidal tracks used
    here at this oversampling).
    """
    velocities = np.atleast_2d(np.asarray(velocities, dtype=np.float64))
    amplitudes = np.asarray(amplitudes, dtype=np.float64)
    if initial_phases is None:
        initial_phases = np.zeros(velocities.shape[0])
    v_lim = max_velocity(config)
    v_peak = np.max(np.abs(velocities), initial=0.0)
    if v_peak > v_lim:
        raise ValueError(
            f"scatterer velocity {v_peak:.3f} m/s exceeds the unambiguous limit {v_lim:.3f} m/s (aliasing)"
        )
    dt = 1.0 / config.pulse_repetition_hz
    displacement = cumulative_trapezoid(velocities, dx=dt, axis=1, initial=0.0)
    phase = (4.0 * math.pi / config.wavelength_m) * displacement + initial_phases[:, None]
    samples = np.sum(amplitudes[:, None] * np.exp(1j * phase), axis=0)
    return BasebandSignal(samples, config.pulse_repetition_hz)


def synthesize_baseband(
    profile: GaitProfile,
    config: RadarConfig,
    duration_s: float,
    seed: int = 0,
    phase_jitter: bool = True,
) -> BasebandSignal:
    """Complex baseband return of the whole walker over duration_s seconds.

    Deterministic given the seed; the seed only randomizes the per-scatterer
    initial RF phases (disabled entirely with phase_jitter=False).
    """
    if duration_s <= 0:
        raise ValueError(f"duration_s must be positive, got {duration_s}")
    n = round(duration_s * config.pulse_repetition_hz)
    t = np.arange(n) / config.pulse_repetition_hz
    velocities = np.stack([limb_velocity_profile(profile, i, t) for i in range(len(profile.scatterers))])
    amplitudes = np.array([s.amplitude for s in profile.scatterers])
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * math.pi, len(profile.scatterers)) if phase_jitter else None
    return baseband_from_velocities(velocities, amplitudes, config, phases)
