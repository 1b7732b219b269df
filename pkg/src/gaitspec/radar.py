"""CW radar parametrization and derived Doppler velocity limits."""

from __future__ import annotations

from dataclasses import dataclass

# Rounded constant so the derived limits land on round values
# (25 GHz / 4 kHz -> exactly 12 m/s unambiguous velocity).
SPEED_OF_LIGHT_M_S = 3.0e8


@dataclass(frozen=True)
class RadarConfig:
    """Continuous-wave radar operating point.

    The pulse repetition frequency doubles as the complex baseband sample
    rate, so it bounds the unambiguous Doppler span to +-F_p/2.
    """

    carrier_frequency_hz: float = 25e9
    pulse_repetition_hz: float = 4e3
    speed_of_light_m_s: float = SPEED_OF_LIGHT_M_S

    def __post_init__(self) -> None:
        if self.carrier_frequency_hz <= 0:
            raise ValueError(f"carrier frequency must be positive, got {self.carrier_frequency_hz}")
        if self.pulse_repetition_hz <= 0:
            raise ValueError(f"pulse repetition frequency must be positive, got {self.pulse_repetition_hz}")
        if self.speed_of_light_m_s <= 0:
            raise ValueError(f"speed of light must be positive, got {self.speed_of_light_m_s}")

    @property
    def wavelength_m(self) -> float:
        return self.speed_of_light_m_s / self.carrier_frequency_hz


def max_velocity(config: RadarConfig) -> float:
    """Unambiguous Doppler velocity (F_p / 2) * lambda / 2 in m/s."""
    return 0.5 * config.pulse_repetition_hz * config.wavelength_m / 2.0


def velocity_resolution(config: RadarConfig, window_len: int) -> float:
    """Velocity bin width (F_p / window_len) * lambda / 2 of a length-`window_len` DFT."""
    if window_len < 2:
        raise ValueError(f"window_len must be >= 2, got {window_len}")
    return config.pulse_repetition_hz / window_len * config.wavelength_m / 2.0
