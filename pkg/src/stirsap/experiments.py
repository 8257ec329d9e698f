"""Numerical campaigns: dynamics, sweeps, searches, cycles, Bloch tracks.

Every campaign is a pure function of its configuration (no randomness
anywhere); sweep points and search probes are independent simulations and
may be distributed over a thread pool without changing the output order.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import TWO_PI, PulseConfig, SystemConfig
from .dynamics import (
    HamiltonianKind,
    Trajectory,
    effective_drive_hamiltonian,
    effective_fields,
    hamiltonian_of_time,
    propagate,
    transfer_efficiency,
    two_level_matrices,
)
from .errors import ContractError, SearchError
from .pulses import shortcut_params, shortcut_peak, shortcut_pulse_pair

DEFAULT_FIDELITY_TARGET = 0.994

#: Default peak grid for the speedup analysis, in units of the reference
#: Rabi frequency.  Dense near the optimum of the time difference; the
#: lowest point sits slightly above 1 because the reshaped-pulse peak
#: approaches the reference Rabi frequency only asymptotically as T grows.
DEFAULT_SPEEDUP_PEAKS = (
    1.02, 1.05, 1.08, 1.11, 1.14, 1.17, 1.20, 1.25, 1.30,
    1.40, 1.60, 1.80, 2.00, 2.50, 3.00, 3.50, 4.00,
)

#: Default operation times (units of the reference pi time) for the
#: required-peak comparison, covering the strongly non-adiabatic regime.
DEFAULT_PEAK_SWEEP_TIMES = (1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0)

#: Default operation times (units of the reference pi time) for the
#: efficiency-versus-time sweep.
DEFAULT_TIME_SWEEP = (2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0, 25.0)

DEFAULT_TRAJECTORY_SAMPLES = 1025


class Protocol(str, Enum):
    STIRAP = "stirap"
    STIRSAP = "stirsap"
    RESONANT_PI = "resonant_pi"


@dataclass(frozen=True)
class SweepResult:
    """One efficiency curve over a parameter grid."""

    parameter_name: str
    parameter_values: np.ndarray
    efficiencies: np.ndarray
    protocol: Protocol
    config: dict

    def __post_init__(self):
        object.__setattr__(
            self, "efficiencies", np.clip(self.efficiencies, 0.0, 1.0)
        )


@dataclass(frozen=True)
class SpeedupReport:
    """Equal-peak comparison of the adiabatic and shortcut operation times.

    ``t_adiabatic`` and ``t_shortcut`` are the minimal operation times (s)
    at which each protocol reaches ``fidelity_target`` with maximum Rabi
    frequency equal to the corresponding entry of ``peaks`` (rad/s).
    """

    peaks: np.ndarray
    t_adiabatic: np.ndarray
    t_shortcut: np.ndarray
    fidelity_target: float

    @property
    def ratio(self) -> np.ndarray:
        return self.t_adiabatic / self.t_shortcut

    @property
    def difference(self) -> np.ndarray:
        return self.t_adiabatic - self.t_shortcut


@dataclass(frozen=True)
class RobustnessSpec:
    """One robustness axis with its sampled values.

    Values are normalized per axis: amplitude scale factors for
    ``amplitude``, separation ratios (executed delay over nominal delay)
    for ``delay``, and detuning offsets in rad/s for ``detuning``.
    """

    axis: str
    values: np.ndarray | None = None
    samples: int = 41
    adapt_shapes: bool = False
    protocols: tuple[Protocol, ...] = ()

    def __post_init__(self):
        if self.axis not in ("amplitude", "delay", "detuning"):
            raise ContractError(f"unknown robustness axis {self.axis!r}")
        if self.adapt_shapes and self.axis != "delay":
            raise ContractError("adapt_shapes applies to the delay axis only")
        if self.values is None:
            defaults = {
                "amplitude": np.linspace(0.8, 1.2, self.samples),
                "delay": np.linspace(0.8, 1.2, self.samples),
                "detuning": np.linspace(-TWO_PI * 40e6, TWO_PI * 40e6, self.samples),
            }
            object.__setattr__(self, "values", defaults[self.axis])
        else:
            object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if not self.protocols:
            default_protocols = {
                "amplitude": (Protocol.STIRSAP, Protocol.RESONANT_PI),
                "delay": (Protocol.STIRSAP,),
                "detuning": (Protocol.STIRSAP,),
            }
            object.__setattr__(self, "protocols", default_protocols[self.axis])


@dataclass(frozen=True)
class BlochComparison:
    """Spin-polarization tracks under the three Hamiltonians plus the
    effective-field tracks of the bare and phase-modulated drives."""

    times: np.ndarray
    bare: Trajectory
    total: Trajectory
    rotated: Trajectory
    b0_unit: np.ndarray
    b0_magnitude: np.ndarray
    b_unit: np.ndarray
    b_magnitude: np.ndarray
    gamma: np.ndarray


def config_snapshot(cfg: PulseConfig, system: SystemConfig, **extra) -> dict:
    snap = {**dataclasses.asdict(cfg), **dataclasses.asdict(system)}
    snap.update(extra)
    return snap


def _parallel_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _protocol_hamiltonian(protocol: Protocol, cfg: PulseConfig, system: SystemConfig):
    """H(t) sampler for the effective two-level dynamics of a protocol."""
    if protocol is Protocol.STIRAP:
        return hamiltonian_of_time(HamiltonianKind.EFFECTIVE_H0, cfg, system)
    if protocol is Protocol.STIRSAP:

        def sampler(ts: np.ndarray) -> np.ndarray:
            params = shortcut_params(cfg, system, ts)
            return two_level_matrices(
                HamiltonianKind.EFFECTIVE_H0,
                dataclasses.replace(
                    params,
                    delta_eff=params.delta_eff_tilde,
                    omega_eff=params.omega_eff_tilde,
                ),
                cfg.laser_phase,
            )

        return sampler
    raise ContractError(f"no drive defined for protocol {protocol}")


def run_dynamics(
    protocol: Protocol,
    total_time: float,
    cfg: PulseConfig,
    system: SystemConfig,
    samples: int = DEFAULT_TRAJECTORY_SAMPLES,
    refine_tol: float = 1e-8,
) -> Trajectory:
    """Effective two-level transfer dynamics from |1> under a protocol.

    The pulse shapes are rescaled to ``total_time`` preserving the width
    and delay ratios of ``cfg``; the shortcut protocol recomputes its
    reshaped pulses for the new duration.
    """
    protocol = Protocol(protocol)
    scaled = cfg.with_total_time(total_time)
    grid = np.linspace(0.0, total_time, samples)
    sampler = _protocol_hamiltonian(protocol, scaled, system)
    psi0 = np.array([1.0, 0.0], dtype=complex)
    return propagate(sampler, psi0, grid, refine_tol=refine_tol)


def efficiency_vs_time(
    protocol: Protocol,
    total_times: np.ndarray,
    cfg: PulseConfig,
    system: SystemConfig,
    threads: int = 1,
    samples: int = 257,
) -> SweepResult:
    """Transfer efficiency for each operation time in ``total_times``."""
    protocol = Protocol(protocol)
    total_times = np.asarray(total_times, dtype=float)

    def one(total_time: float) -> float:
        traj = run_dynamics(protocol, total_time, cfg, system, samples=samples)
        return transfer_efficiency(traj)

    effs = np.array(_parallel_map(one, total_times, threads))
    return SweepResult(
        parameter_name="total_time",
        parameter_values=total_times,
        efficiencies=effs,
        protocol=protocol,
        config=config_snapshot(cfg, system),
    )


def _scan_then_bisect(predicate, lo, hi, scan_step, resolution):
    """Smallest x in [lo, hi] with predicate(x) true, to within resolution.

    A coarse upward scan brackets the first crossing (the efficiency curves
    are not monotone everywhere), then bisection sharpens it.
    """
    x = lo
    prev = None
    while x <= hi * (1.0 + 1e-12):
        if predicate(x):
            if prev is None:
                return x
            a, b = prev, x
            while b - a > resolution:
                mid = 0.5 * (a + b)
                if predicate(mid):
                    b = mid
                else:
                    a = mid
            return 0.5 * (a + b)
        prev = x
        x += scan_step
    raise SearchError(
        f"target not reached anywhere in [{lo:g}, {hi:g}] (scan step {scan_step:g})"
    )


def required_peak(
    protocol: Protocol,
    total_time: float,
    fidelity_target: float,
    cfg: PulseConfig,
    system: SystemConfig,
    samples: int = 257,
) -> float:
    """Minimal maximum Rabi frequency reaching ``fidelity_target`` at ``total_time``.

    For the adiabatic protocol both Gaussian peaks scale together and the
    executed peak is the scale itself.  For the shortcut protocol the peak
    is the largest instantaneous value of the reshaped pair (which the
    protocol needs regardless of the base amplitude), so the search finds
    the smallest ceiling under which the reshaped protocol fits while
    meeting the fidelity target.  Resolution is 1e-3 of the reference Rabi
    frequency; peaks above 100x the reference raise :class:`SearchError`.
    """
    protocol = Protocol(protocol)
    if not 0.0 <= fidelity_target < 1.0:
        raise ContractError("fidelity target must lie in [0, 1)")
    w0 = system.reference_rabi
    scaled = cfg.with_total_time(total_time)

    if protocol is Protocol.STIRAP:

        def predicate(x: float) -> bool:
            trial = scaled.scaled(x / scaled.max_peak)
            traj = run_dynamics(
                Protocol.STIRAP, total_time, trial, system, samples=samples
            )
            return transfer_efficiency(traj) >= fidelity_target

    elif protocol is Protocol.STIRSAP:
        reshaped_peak = shortcut_peak(scaled, system)
        eff = transfer_efficiency(
            run_dynamics(Protocol.STIRSAP, total_time, scaled, system, samples=samples)
        )

        def predicate(x: float) -> bool:
            return reshaped_peak <= x and eff >= fidelity_target

    else:
        raise ContractError(f"no peak search defined for protocol {protocol}")

    return _scan_then_bisect(
        predicate, lo=0.1 * w0, hi=100.0 * w0, scan_step=0.1 * w0, resolution=1e-3 * w0
    )


def minimal_time(
    protocol: Protocol,
    peak: float,
    fidelity_target: float,
    cfg: PulseConfig,
    system: SystemConfig,
    samples: int = 257,
) -> float:
    """Minimal operation time reaching ``fidelity_target`` at equal maximum
    Rabi frequency ``peak``.

    Times are searched to a resolution of 1e-3 reference pi times.  The
    adiabatic protocol scans upward in units of its own generalized pi time
    (the efficiency oscillates, so the first crossing is bracketed before
    bisecting); the shortcut protocol's reshaped peak decreases
    monotonically with T, so its feasibility boundary is bisected directly.
    """
    protocol = Protocol(protocol)
    t0 = system.pi_time
    resolution = 1e-3 * t0

    if protocol is Protocol.STIRAP:
        trial = cfg.scaled(peak / cfg.max_peak)
        t_pi = system.t_pi(trial)

        def predicate(total_time: float) -> bool:
            traj = run_dynamics(
                Protocol.STIRAP, total_time, trial, system, samples=samples
            )
            return transfer_efficiency(traj) >= fidelity_target

        return _scan_then_bisect(
            predicate, lo=t_pi, hi=60.0 * t_pi, scan_step=0.5 * t_pi,
            resolution=resolution,
        )

    if protocol is Protocol.STIRSAP:

        def predicate(total_time: float) -> bool:
            scaled = cfg.with_total_time(total_time)
            if shortcut_peak(scaled, system) > peak:
                return False
            traj = run_dynamics(
                Protocol.STIRSAP, total_time, scaled, system, samples=samples
            )
            return transfer_efficiency(traj) >= fidelity_target

        hi = 0.5 * t0
        while not predicate(hi):
            hi *= 2.0
            if hi > 512.0 * t0:
                raise SearchError(
                    f"shortcut protocol does not fit under peak {peak:g} rad/s"
                )
        lo = 0.01 * t0
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            if predicate(mid):
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    raise ContractError(f"no time search defined for protocol {protocol}")


def speedup_analysis(
    peaks: np.ndarray | None,
    fidelity_target: float,
    cfg: PulseConfig,
    system: SystemConfig,
    threads: int = 1,
    samples: int = 257,
) -> SpeedupReport:
    """Equal-peak operation-time comparison over a grid of maximum Rabi
    frequencies (defaults to DEFAULT_SPEEDUP_PEAKS times the reference)."""
    if peaks is None:
        peaks = np.array(DEFAULT_SPEEDUP_PEAKS) * system.reference_rabi
    peaks = np.asarray(peaks, dtype=float)

    def one(peak: float) -> tuple[float, float]:
        t_ap = minimal_time(
            Protocol.STIRAP, peak, fidelity_target, cfg, system, samples=samples
        )
        t_sa = minimal_time(
            Protocol.STIRSAP, peak, fidelity_target, cfg, system, samples=samples
        )
        return t_ap, t_sa

    results = _parallel_map(one, peaks, threads)
    t_ap = np.array([r[0] for r in results])
    t_sa = np.array([r[1] for r in results])
    return SpeedupReport(
        peaks=peaks, t_adiabatic=t_ap, t_shortcut=t_sa, fidelity_target=fidelity_target
    )


def _resonant_pi_efficiency(scale: float, system: SystemConfig, samples: int) -> float:
    """Propagated constant resonant drive of pulse area ``scale`` * pi."""
    omega = system.reference_rabi**2 / (2.0 * system.detuning)
    duration = np.pi / omega
    grid = np.linspace(0.0, duration, samples)
    sampler = effective_drive_hamiltonian(
        lambda ts: np.zeros_like(ts), lambda ts: np.full_like(ts, scale * omega)
    )
    traj = propagate(sampler, np.array([1.0, 0.0], dtype=complex), grid)
    return transfer_efficiency(traj)


def robustness_sweep(
    spec: RobustnessSpec,
    cfg: PulseConfig,
    system: SystemConfig,
    threads: int = 1,
    samples: int = 257,
) -> list[SweepResult]:
    """Transfer efficiencies of the shortcut protocol under one imperfection axis.

    amplitude
        Executed pulse amplitudes are scaled by each value while the nominal
        shapes define the protocol; a resonant pi-pulse reference (area =
        value * pi) is included when requested.
    delay
        The reshaped waveforms computed for the nominal separation are
        replayed with the pump/Stokes envelopes shifted to the executed
        separation (``adapt_shapes=False``), or recomputed from scratch for
        each executed separation (``adapt_shapes=True``).
    detuning
        Pulse shapes stay locked to the nominal detuning while the
        propagation uses the offset detuning.
    """
    grid = np.linspace(0.0, cfg.total_time, samples)
    psi0 = np.array([1.0, 0.0], dtype=complex)
    results = []

    if spec.axis == "amplitude":

        def stirsap_eff(eps: float) -> float:
            sampler = effective_drive_hamiltonian(
                lambda ts, e=eps: e**2 * shortcut_params(cfg, system, ts).delta_eff_tilde,
                lambda ts, e=eps: e**2 * shortcut_params(cfg, system, ts).omega_eff_tilde,
                cfg.laser_phase,
            )
            return transfer_efficiency(propagate(sampler, psi0, grid))

        for protocol in spec.protocols:
            if protocol is Protocol.STIRSAP:
                effs = np.array(_parallel_map(stirsap_eff, spec.values, threads))
            elif protocol is Protocol.RESONANT_PI:
                effs = np.array(
                    _parallel_map(
                        lambda e: _resonant_pi_efficiency(e, system, samples),
                        spec.values,
                        threads,
                    )
                )
            else:
                raise ContractError(f"{protocol} not supported on the amplitude axis")
            results.append(
                SweepResult(
                    "amplitude_scale", spec.values, effs, protocol,
                    config_snapshot(cfg, system, axis=spec.axis),
                )
            )
        return results

    if spec.axis == "delay":

        def delayed_eff(ratio: float) -> float:
            if spec.adapt_shapes:
                adapted = dataclasses.replace(cfg, delay=ratio * cfg.delay)
                sampler = _protocol_hamiltonian(Protocol.STIRSAP, adapted, system)
            else:
                shift = (ratio - 1.0) * cfg.delay

                def sampler(ts: np.ndarray, s=shift) -> np.ndarray:
                    pump = shortcut_pulse_pair(cfg, system, ts - s).omega_p
                    stokes = shortcut_pulse_pair(cfg, system, ts + s).omega_s
                    d_eff = (pump**2 - stokes**2) / (4.0 * system.detuning)
                    o_eff = pump * stokes / (2.0 * system.detuning)
                    m = np.zeros((len(ts), 2, 2), dtype=complex)
                    m[:, 0, 0] = -0.5 * d_eff
                    m[:, 1, 1] = 0.5 * d_eff
                    m[:, 0, 1] = -0.5 * o_eff * np.exp(1j * cfg.laser_phase)
                    m[:, 1, 0] = np.conj(m[:, 0, 1])
                    return m

            return transfer_efficiency(propagate(sampler, psi0, grid))

        effs = np.array(_parallel_map(delayed_eff, spec.values, threads))
        results.append(
            SweepResult(
                "delay_scale", spec.values, effs, Protocol.STIRSAP,
                config_snapshot(
                    cfg, system, axis=spec.axis, adapt_shapes=spec.adapt_shapes
                ),
            )
        )
        return results

    # detuning axis: locked shapes, offset propagation detuning
    def detuned_eff(offset: float) -> float:
        actual = system.detuning + offset

        def sampler(ts: np.ndarray) -> np.ndarray:
            p = shortcut_pulse_pair(cfg, system, ts)
            d_eff = (p.omega_p**2 - p.omega_s**2) / (4.0 * actual)
            o_eff = p.omega_p * p.omega_s / (2.0 * actual)
            m = np.zeros((len(ts), 2, 2), dtype=complex)
            m[:, 0, 0] = -0.5 * d_eff
            m[:, 1, 1] = 0.5 * d_eff
            m[:, 0, 1] = -0.5 * o_eff * np.exp(1j * cfg.laser_phase)
            m[:, 1, 0] = np.conj(m[:, 0, 1])
            return m

        return transfer_efficiency(propagate(sampler, psi0, grid))

    effs = np.array(_parallel_map(detuned_eff, spec.values, threads))
    results.append(
        SweepResult(
            "detuning_offset", spec.values, effs, Protocol.STIRSAP,
            config_snapshot(cfg, system, axis=spec.axis),
        )
    )
    return results


def multi_cycle(
    initial: np.ndarray,
    cycles: int,
    cfg: PulseConfig,
    system: SystemConfig,
    samples: int = 257,
    refine_tol: float = 1e-8,
) -> np.ndarray:
    """Apply the shortcut pulse sequence repeatedly; per-cycle populations.

    The same pulse order is used on every cycle (both dressed passages
    transfer coherently, so one sequence acts like a population swap).
    Returns an array of shape (cycles, 2) with (P1, P2) after each cycle.
    """
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (2,):
        raise ContractError("multi-cycle operates on 2-level states")
    if cycles < 1:
        raise ContractError("cycle count must be >= 1")
    grid = np.linspace(0.0, cfg.total_time, samples)
    sampler = _protocol_hamiltonian(Protocol.STIRSAP, cfg, system)
    history = np.empty((cycles, 2))
    for k in range(cycles):
        traj = propagate(sampler, psi, grid, refine_tol=refine_tol)
        psi = traj.states[-1]
        history[k] = np.abs(psi) ** 2
    return history


def bloch_comparison(
    cfg: PulseConfig,
    system: SystemConfig,
    samples: int = 801,
    refine_tol: float = 1e-8,
) -> BlochComparison:
    """Propagate |1> under the bare, phase-modulated, and frame-rotated
    drives built from the same Gaussian pair, with the field tracks of the
    bare and phase-modulated Hamiltonians."""
    grid = np.linspace(0.0, cfg.total_time, samples)
    psi0 = np.array([1.0, 0.0], dtype=complex)
    trajs = {}
    for name, kind in (
        ("bare", HamiltonianKind.EFFECTIVE_H0),
        ("total", HamiltonianKind.TOTAL_H),
        ("rotated", HamiltonianKind.TILDE_H),
    ):
        sampler = hamiltonian_of_time(kind, cfg, system)
        trajs[name] = propagate(sampler, psi0, grid, refine_tol=refine_tol)

    params = shortcut_params(cfg, system, grid)
    b0_unit, b0_mag = effective_fields(
        two_level_matrices(HamiltonianKind.EFFECTIVE_H0, params, cfg.laser_phase)
    )
    b_unit, b_mag = effective_fields(
        two_level_matrices(HamiltonianKind.TOTAL_H, params, cfg.laser_phase)
    )
    return BlochComparison(
        times=grid,
        bare=trajs["bare"],
        total=trajs["total"],
        rotated=trajs["rotated"],
        b0_unit=b0_unit,
        b0_magnitude=b0_mag,
        b_unit=b_unit,
        b_magnitude=b_mag,
        gamma=params.phi + cfg.laser_phase,
    )
