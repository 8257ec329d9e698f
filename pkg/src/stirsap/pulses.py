"""Raman pulse synthesis.

Builds the original Gaussian pulse pair, the counter-diabatic auxiliary
Rabi frequency, the effective two-photon parameters, and the reshaped
shortcut pulse pair that absorbs the counter-diabatic correction into the
pulse amplitudes.

All functions are vectorized over time.  The Gaussian envelopes are
analytic, so quantities may be evaluated at any real time; only
:func:`gaussian_pair` enforces the protocol window since it is the public
sampling entry point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PulseConfig, SystemConfig
from .errors import ContractError, DegeneratePulseError, DomainError, SingularityError

#: Default number of grid intervals for synthesized pulse tables.  Gaussian
#: features span width = T/6, so this resolves each width with >600 samples.
DEFAULT_GRID_SAMPLES = 4096

#: Default finite-difference step for the local phase derivative, as a
#: fraction of the pulse width.  Small enough that the five-point stencil
#: truncation is negligible, large enough to stay clear of round-off.
PHASE_FD_STEP_FRACTION = 1.0 / 16384.0

#: Relative change (against the derivative's scale on the grid) above which
#: a step-doubled phase-derivative estimate is flagged as suspect.
PHASE_REFINEMENT_RTOL = 1e-4


@dataclass(frozen=True)
class PulseSamplePair:
    """Pump/Stokes Rabi frequencies at one or more times.

    Fields are floats or equal-shape arrays; the derivatives are optional
    and only present when produced analytically.
    """

    t: np.ndarray
    omega_p: np.ndarray
    omega_s: np.ndarray
    d_omega_p: np.ndarray | None = None
    d_omega_s: np.ndarray | None = None

    @property
    def has_derivatives(self) -> bool:
        return self.d_omega_p is not None and self.d_omega_s is not None


@dataclass(frozen=True)
class EffectiveParams:
    """Effective two-level drive parameters on a time grid.

    delta_eff and omega_eff describe the adiabatically eliminated two-level
    drive, omega_a the counter-diabatic auxiliary Rabi frequency, phi the
    phase angle arctan(omega_a/omega_eff) with time derivative phi_dot, and
    the tilde quantities the reshaped (shortcut) drive:

        delta_eff_tilde = delta_eff + phi_dot
        omega_eff_tilde = sqrt(omega_eff**2 + omega_a**2)
    """

    delta_eff: np.ndarray
    omega_eff: np.ndarray
    omega_a: np.ndarray
    phi: np.ndarray
    phi_dot: np.ndarray
    delta_eff_tilde: np.ndarray
    omega_eff_tilde: np.ndarray


@dataclass(frozen=True)
class ShortcutTable:
    """Synthesized shortcut pulse table on a uniform time grid.

    ``suspect`` marks samples where the step-doubling check on phi_dot moved
    by more than PHASE_REFINEMENT_RTOL relative to the derivative scale.
    """

    times: np.ndarray
    omega_p: np.ndarray
    omega_s: np.ndarray
    params: EffectiveParams
    omega_p_tilde: np.ndarray
    omega_s_tilde: np.ndarray
    suspect: np.ndarray

    @property
    def peak(self) -> float:
        """Largest instantaneous Rabi frequency of the reshaped pair."""
        return float(max(self.omega_p_tilde.max(), self.omega_s_tilde.max()))


def _raw_pair(cfg: PulseConfig, t) -> tuple[np.ndarray, ...]:
    """Gaussian envelopes and their analytic derivatives, no window check."""
    t = np.asarray(t, dtype=float)
    xp = (t - cfg.total_time / 2.0 - cfg.delay) / cfg.width
    xs = (t - cfg.total_time / 2.0 + cfg.delay) / cfg.width
    omega_p = cfg.peak_pump * np.exp(-(xp**2))
    omega_s = cfg.peak_stokes * np.exp(-(xs**2))
    d_omega_p = omega_p * (-2.0 * xp / cfg.width)
    d_omega_s = omega_s * (-2.0 * xs / cfg.width)
    return omega_p, omega_s, d_omega_p, d_omega_s


def gaussian_pair(cfg: PulseConfig, t) -> PulseSamplePair:
    """Sample the original Gaussian pulse pair at time(s) ``t`` in [0, T].

    Returns the pair together with closed-form first derivatives.  Times
    outside the protocol window raise :class:`DomainError`.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > cfg.total_time):
        raise DomainError(
            f"time outside protocol window [0, {cfg.total_time:g}] s"
        )
    omega_p, omega_s, d_omega_p, d_omega_s = _raw_pair(cfg, t)
    return PulseSamplePair(t, omega_p, omega_s, d_omega_p, d_omega_s)


def counter_diabatic_rabi(pair: PulseSamplePair) -> np.ndarray:
    """Auxiliary Rabi frequency of the counter-diabatic drive.

        omega_a = 2 (dP/dt * S - P * dS/dt) / (P^2 + S^2)

    equal to twice the time derivative of the mixing angle arctan(P/S).
    The sign is kept; the result may be negative.
    """
    if not pair.has_derivatives:
        raise ContractError("pulse pair carries no derivatives")
    denom = pair.omega_p**2 + pair.omega_s**2
    if np.any(denom == 0.0):
        raise DegeneratePulseError("both pulses vanish; mixing angle undefined")
    return 2.0 * (pair.d_omega_p * pair.omega_s - pair.omega_p * pair.d_omega_s) / denom


def effective_params(
    pair: PulseSamplePair, system: SystemConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Effective detuning and Rabi frequency of the eliminated two-level system.

        delta_eff = (P^2 - S^2) / (4 Delta),  omega_eff = P S / (2 Delta)
    """
    delta_eff = (pair.omega_p**2 - pair.omega_s**2) / (4.0 * system.detuning)
    omega_eff = pair.omega_p * pair.omega_s / (2.0 * system.detuning)
    return delta_eff, omega_eff


def _five_point_derivative(values: np.ndarray, dt: float) -> np.ndarray:
    """Five-point finite-difference derivative on a uniform grid.

    Central stencil in the interior, one-sided five-point stencils at the
    two samples on each end.
    """
    n = len(values)
    if n < 5:
        raise ContractError("five-point derivative needs at least 5 samples")
    out = np.empty_like(values)
    out[2:-2] = (
        -values[4:] + 8.0 * values[3:-1] - 8.0 * values[1:-3] + values[:-4]
    ) / (12.0 * dt)
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    out[0] = c @ values[:5] / dt
    out[1] = c @ values[1:6] / dt
    out[-1] = -(c @ values[-1:-6:-1]) / dt
    out[-2] = -(c @ values[-2:-7:-1]) / dt
    return out


def phi_and_derivative(
    omega_eff: np.ndarray, omega_a: np.ndarray, times: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Phase angle phi = arctan(omega_a/omega_eff) and its time derivative.

    ``times`` must be a uniform grid.  phi_dot uses a five-point central
    stencil (one-sided at the ends).  A step-doubled estimate is compared
    against the primary one and samples whose estimate moves by more than
    PHASE_REFINEMENT_RTOL, relative to the largest derivative magnitude on
    the grid, are flagged in the returned boolean array.

    Raises :class:`SingularityError` if omega_eff vanishes at an interior
    sample, and :class:`ContractError` for non-uniform grids.
    """
    times = np.asarray(times, dtype=float)
    omega_eff = np.asarray(omega_eff, dtype=float)
    omega_a = np.asarray(omega_a, dtype=float)
    if len(times) < 9:
        raise ContractError("phase-derivative grid needs at least 9 samples")
    steps = np.diff(times)
    dt = steps[0]
    if not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
        raise ContractError("phase-derivative grid must be uniform")
    interior_zero = np.flatnonzero(omega_eff[1:-1] == 0.0)
    if interior_zero.size:
        t_bad = float(times[1:-1][interior_zero[0]])
        raise SingularityError(
            f"effective Rabi frequency vanishes at interior time {t_bad:g} s",
            time=t_bad,
        )

    phi = np.arctan2(omega_a, omega_eff)
    phi_dot = _five_point_derivative(phi, dt)

    # step-doubled estimate on strided samples where the wide stencil fits
    coarse = np.full_like(phi_dot, np.nan)
    coarse[4:-4] = (
        -phi[8:] + 8.0 * phi[6:-2] - 8.0 * phi[2:-6] + phi[:-8]
    ) / (24.0 * dt)
    scale = np.max(np.abs(phi_dot))
    suspect = np.zeros(len(times), dtype=bool)
    if scale > 0.0:
        have = ~np.isnan(coarse)
        suspect[have] = (
            np.abs(phi_dot[have] - coarse[have]) > PHASE_REFINEMENT_RTOL * scale
        )
    return phi, phi_dot, suspect


def shortcut_params(
    cfg: PulseConfig, system: SystemConfig, t, fd_step: float | None = None
) -> EffectiveParams:
    """Full effective-parameter bundle at arbitrary time(s).

    phi_dot is evaluated by a five-point central stencil applied to the
    closed-form phase profile with step ``fd_step`` (default: width/16384),
    so the result is smooth in ``t`` and needs no precomputed grid.  The
    Gaussian envelopes extend analytically outside [0, T].
    """
    t = np.asarray(t, dtype=float)
    if fd_step is None:
        fd_step = cfg.width * PHASE_FD_STEP_FRACTION

    def phi_at(x):
        omega_p, omega_s, d_omega_p, d_omega_s = _raw_pair(cfg, x)
        omega_eff = omega_p * omega_s / (2.0 * system.detuning)
        denom = omega_p**2 + omega_s**2
        omega_a = 2.0 * (d_omega_p * omega_s - omega_p * d_omega_s) / denom
        return np.arctan2(omega_a, omega_eff)

    omega_p, omega_s, d_omega_p, d_omega_s = _raw_pair(cfg, t)
    delta_eff = (omega_p**2 - omega_s**2) / (4.0 * system.detuning)
    omega_eff = omega_p * omega_s / (2.0 * system.detuning)
    omega_a = (
        2.0
        * (d_omega_p * omega_s - omega_p * d_omega_s)
        / (omega_p**2 + omega_s**2)
    )
    phi = np.arctan2(omega_a, omega_eff)
    h = fd_step
    phi_dot = (
        -phi_at(t + 2.0 * h) + 8.0 * phi_at(t + h) - 8.0 * phi_at(t - h) + phi_at(t - 2.0 * h)
    ) / (12.0 * h)
    delta_t = delta_eff + phi_dot
    omega_t = np.hypot(omega_eff, omega_a)
    return EffectiveParams(delta_eff, omega_eff, omega_a, phi, phi_dot, delta_t, omega_t)


def pulses_from_effective(
    delta_eff_tilde: np.ndarray, omega_eff_tilde: np.ndarray, system: SystemConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Invert the elimination relations for a target effective drive.

        P = sqrt(2 Delta (sqrt(d^2 + o^2) + d))
        S = sqrt(2 Delta (sqrt(d^2 + o^2) - d))

    Both radicands are non-negative for any real inputs, so the returned
    pulses are real and non-negative by construction.
    """
    root = np.hypot(delta_eff_tilde, omega_eff_tilde)
    two_delta = 2.0 * system.detuning
    omega_p = np.sqrt(two_delta * np.maximum(root + delta_eff_tilde, 0.0))
    omega_s = np.sqrt(two_delta * np.maximum(root - delta_eff_tilde, 0.0))
    return omega_p, omega_s


def stirsap_pulses(
    cfg: PulseConfig, system: SystemConfig, times: np.ndarray
) -> ShortcutTable:
    """Synthesize the reshaped shortcut pulse pair on a uniform grid.

    Starting from the Gaussian pair of ``cfg``, computes the counter-diabatic
    auxiliary field, the phase angle and its grid derivative, the modified
    effective parameters, and finally the reshaped pump/Stokes amplitudes.
    """
    times = np.asarray(times, dtype=float)
    pair = gaussian_pair(cfg, times)
    delta_eff, omega_eff = effective_params(pair, system)
    omega_a = counter_diabatic_rabi(pair)
    phi, phi_dot, suspect = phi_and_derivative(omega_eff, omega_a, times)
    delta_t = delta_eff + phi_dot
    omega_t = np.hypot(omega_eff, omega_a)
    params = EffectiveParams(
        delta_eff, omega_eff, omega_a, phi, phi_dot, delta_t, omega_t
    )
    omega_p_t, omega_s_t = pulses_from_effective(delta_t, omega_t, system)
    return ShortcutTable(
        times=times,
        omega_p=pair.omega_p,
        omega_s=pair.omega_s,
        params=params,
        omega_p_tilde=omega_p_t,
        omega_s_tilde=omega_s_t,
        suspect=suspect,
    )


def shortcut_pulse_pair(
    cfg: PulseConfig, system: SystemConfig, t, fd_step: float | None = None
) -> PulseSamplePair:
    """Reshaped pulse pair at arbitrary time(s), without derivatives.

    Used where the executed waveform itself is needed (e.g. replaying the
    shapes at a shifted separation).  Defined for all real ``t``.
    """
    params = shortcut_params(cfg, system, t, fd_step)
    omega_p, omega_s = pulses_from_effective(
        params.delta_eff_tilde, params.omega_eff_tilde, system
    )
    return PulseSamplePair(np.asarray(t, dtype=float), omega_p, omega_s)


def default_grid(cfg: PulseConfig, samples: int = DEFAULT_GRID_SAMPLES) -> np.ndarray:
    """Uniform synthesis grid over [0, T] with ``samples`` intervals."""
    return np.linspace(0.0, cfg.total_time, samples + 1)


def shortcut_peak(
    cfg: PulseConfig, system: SystemConfig, samples: int = DEFAULT_GRID_SAMPLES
) -> float:
    """Maximum instantaneous Rabi frequency of the reshaped pulse pair."""
    return stirsap_pulses(cfg, system, default_grid(cfg, samples)).peak
