"""Pulse and system configuration objects.

Conventions used throughout the package:

* hbar = 1, so every Hamiltonian entry is an angular frequency in rad/s.
* Rabi frequencies and detunings are angular frequencies (rad/s).  The
  config-file front end accepts ordinary frequencies and multiplies by 2*pi.
* Times are seconds.  The basis ordering is (|1>, |2>, |3>).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * np.pi

#: Advisory cutoff for the large-detuning validity flag: the adiabatic
#: elimination is considered trustworthy when detuning >= 20 * max peak.
LARGE_DETUNING_RATIO = 20.0


@dataclass(frozen=True)
class PulseConfig:
    """Gaussian Raman pulse-pair parameterization.

    The Stokes envelope peaks at ``T/2 - delay`` and the pump envelope at
    ``T/2 + delay`` (counterintuitive ordering), each with shape
    ``exp(-(t - center)^2 / width^2)``.

    Attributes
    ----------
    peak_pump, peak_stokes : float
        Pulse peak Rabi frequencies (rad/s).
    total_time : float
        Protocol duration T (s).
    width : float
        Gaussian width sigma (s).  Defaults to T/6.
    delay : float
        Half the peak-to-peak separation (s).  Defaults to T/10.
    laser_phase : float
        Locked phase difference between pump and Stokes lasers (rad).
    """

    peak_pump: float
    peak_stokes: float
    total_time: float
    width: float
    delay: float
    laser_phase: float = 0.0

    def __post_init__(self):
        failures = pulse_invariant_failures(
            self.peak_pump, self.peak_stokes, self.total_time, self.width, self.delay
        )
        if failures:
            raise ConfigError("; ".join(failures))

    @classmethod
    def from_total_time(
        cls,
        total_time: float,
        peak_pump: float,
        peak_stokes: float | None = None,
        laser_phase: float = 0.0,
    ) -> "PulseConfig":
        """Default construction: width = T/6 and delay = T/10."""
        if peak_stokes is None:
            peak_stokes = peak_pump
        return cls(
            peak_pump=peak_pump,
            peak_stokes=peak_stokes,
            total_time=total_time,
            width=total_time / 6.0,
            delay=total_time / 10.0,
            laser_phase=laser_phase,
        )

    def with_total_time(self, total_time: float) -> "PulseConfig":
        """Rescale the protocol duration, preserving width/T and delay/T."""
        scale = total_time / self.total_time
        return dataclasses.replace(
            self,
            total_time=total_time,
            width=self.width * scale,
            delay=self.delay * scale,
        )

    def scaled(self, amplitude: float) -> "PulseConfig":
        """Scale both pulse peaks by a common factor."""
        return dataclasses.replace(
            self,
            peak_pump=self.peak_pump * amplitude,
            peak_stokes=self.peak_stokes * amplitude,
        )

    @property
    def max_peak(self) -> float:
        return max(self.peak_pump, self.peak_stokes)


def pulse_invariant_failures(
    peak_pump: float,
    peak_stokes: float,
    total_time: float,
    width: float,
    delay: float,
) -> list[str]:
    """Return human-readable descriptions of violated pulse invariants."""
    failures = []
    if not peak_pump >= 0.0:
        failures.append("pump peak must be non-negative")
    if not peak_stokes >= 0.0:
        failures.append("Stokes peak must be non-negative")
    if not total_time > 0.0:
        failures.append("total time must be positive")
    if not 0.0 < width < total_time:
        failures.append("width must satisfy 0 < width < total_time")
    if not abs(delay) < total_time / 2.0:
        failures.append("delay must satisfy |delay| < total_time/2")
    return failures


@dataclass(frozen=True)
class SystemConfig:
    """Atomic and laser constants of the Raman system.

    Attributes
    ----------
    detuning : float
        Single-photon detuning Delta (rad/s), required positive.
    reference_rabi : float
        Reference peak Rabi frequency Omega_0 (rad/s).
    """

    detuning: float
    reference_rabi: float

    def __post_init__(self):
        if not self.detuning > 0.0:
            raise ConfigError("detuning must be positive")
        if not self.reference_rabi > 0.0:
            raise ConfigError("reference Rabi frequency must be positive")

    @classmethod
    def default(cls) -> "SystemConfig":
        """Detuning 2*pi*2.5 GHz and reference Rabi 2*pi*5 MHz."""
        return cls(detuning=TWO_PI * 2.5e9, reference_rabi=TWO_PI * 5e6)

    @property
    def pi_time(self) -> float:
        """Reference pi-pulse time T0 = 2*pi*Delta/Omega_0^2 (s)."""
        return TWO_PI * self.detuning / self.reference_rabi**2

    def t_pi(self, pulse: PulseConfig) -> float:
        """Generalized pi-pulse time 2*pi*Delta/(peak_pump*peak_stokes)."""
        if pulse.peak_pump <= 0.0 or pulse.peak_stokes <= 0.0:
            raise ConfigError("t_pi requires strictly positive pulse peaks")
        return TWO_PI * self.detuning / (pulse.peak_pump * pulse.peak_stokes)

    def large_detuning_ok(self, pulse: PulseConfig) -> bool:
        """Advisory flag: detuning >= 20 * max pulse peak."""
        return self.detuning >= LARGE_DETUNING_RATIO * pulse.max_peak


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_config: one (name, passed, detail) row per check
    plus the advisory large-detuning flag."""

    checks: tuple[tuple[str, bool, str], ...]
    large_detuning: bool

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def lines(self) -> list[str]:
        out = [
            f"[{'pass' if passed else 'FAIL'}] {name}: {detail}"
            for name, passed, detail in self.checks
        ]
        out.append(
            f"[info] large-detuning regime: {'yes' if self.large_detuning else 'no'}"
        )
        return out


def validate_config(pulse: PulseConfig, system: SystemConfig) -> ValidationReport:
    """Re-check every configuration invariant and report pass/fail per row.

    The report never raises; construction of the config objects already
    enforces the invariants, so this exists to document a configuration
    (e.g. for the ``validate`` CLI command) and to expose the advisory
    large-detuning flag, which is never blocking.
    """
    checks = [
        ("pump peak >= 0", pulse.peak_pump >= 0.0, f"{pulse.peak_pump:.6g} rad/s"),
        ("Stokes peak >= 0", pulse.peak_stokes >= 0.0, f"{pulse.peak_stokes:.6g} rad/s"),
        ("total time > 0", pulse.total_time > 0.0, f"{pulse.total_time:.6g} s"),
        (
            "0 < width < total time",
            0.0 < pulse.width < pulse.total_time,
            f"{pulse.width:.6g} s",
        ),
        (
            "|delay| < total time / 2",
            abs(pulse.delay) < pulse.total_time / 2.0,
            f"{pulse.delay:.6g} s",
        ),
        ("detuning > 0", system.detuning > 0.0, f"{system.detuning:.6g} rad/s"),
        (
            "reference Rabi > 0",
            system.reference_rabi > 0.0,
            f"{system.reference_rabi:.6g} rad/s",
        ),
    ]
    return ValidationReport(
        checks=tuple(checks), large_detuning=system.large_detuning_ok(pulse)
    )
