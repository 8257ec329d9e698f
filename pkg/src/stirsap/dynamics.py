"""Hamiltonian construction and Schrodinger propagation.

Five Hamiltonians are supported (hbar = 1, basis |1>, |2>[, |3>]):

* LAMBDA3          three-level Raman Hamiltonian,
                   (1/2) [[0, 0, P e^{i phiL}], [0, 0, S], [c.c., c.c., 2 Delta]]
* EFFECTIVE_H0     eliminated two-level drive,
                   -(1/2) [[d, o e^{i phiL}], [o e^{-i phiL}, -d]]
* COUNTER_DIABATIC auxiliary drive, (1/2) [[0, a e^{i phi_a}], [c.c., 0]]
                   with phi_a = phiL + pi/2
* TOTAL_H          effective drive plus counter-diabatic term written with a
                   single phase-modulated coupling e^{-i gamma}, gamma = phi + phiL
* TILDE_H          frame-rotated total Hamiltonian, real matrix with the
                   modified detuning d + dphi/dt and Rabi sqrt(o^2 + a^2)

Propagation advances the state with the exact unitary of the
midpoint-sampled Hamiltonian on each substep (closed-form for 2x2 and for
the three-level Raman structure, Hermitian eigendecomposition otherwise)
and halves the substep size until the final populations converge.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .config import PulseConfig, SystemConfig
from .errors import ContractError, DegeneratePulseError, IntegrationError
from .pulses import (
    EffectiveParams,
    PulseSamplePair,
    _raw_pair,
    shortcut_params,
)

#: Substeps processed per vectorized block during propagation (memory cap).
_BLOCK_SUBSTEPS = 1 << 20


class HamiltonianKind(Enum):
    LAMBDA3 = "lambda3"
    EFFECTIVE_H0 = "effective_h0"
    COUNTER_DIABATIC = "counter_diabatic"
    TOTAL_H = "total_h"
    TILDE_H = "tilde_h"


@dataclass(frozen=True)
class HamiltonianSample:
    """Hermitian matrix (angular-frequency units) at one time."""

    time: float
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 3):
            raise ContractError("Hamiltonian must be a 2x2 or 3x3 matrix")
        scale = max(np.abs(m).max(), 1.0)
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=1e-12 * scale):
            raise ContractError("Hamiltonian sample is not Hermitian")


@dataclass(frozen=True)
class DressedBasis:
    """Instantaneous dressed states of the three-level Raman Hamiltonian."""

    dark: np.ndarray
    bright1: np.ndarray
    bright2: np.ndarray
    mixing_angle: float


@dataclass(frozen=True)
class Trajectory:
    """Time grid with normalized states.

    ``states`` has shape (n_times, dim).  Populations are |amplitude|^2;
    for two-level trajectories ``bloch`` gives the spin polarizations.
    """

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ContractError("times and states lengths differ")
        if np.any(np.diff(self.times) <= 0.0):
            raise ContractError("trajectory times must be strictly increasing")
        norms = np.linalg.norm(self.states, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ContractError("trajectory states are not normalized")

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    @property
    def final_populations(self) -> np.ndarray:
        return np.abs(self.states[-1]) ** 2

    @property
    def bloch(self) -> np.ndarray:
        if self.dim != 2:
            raise ContractError("Bloch vectors are defined for 2-level states only")
        return spin_polarizations(self.states)


@dataclass(frozen=True)
class EffectiveField:
    """Pauli decomposition of a 2x2 Hamiltonian as a magnetic field."""

    unit: np.ndarray
    magnitude: float
    direction_defined: bool


def build_hamiltonian(
    kind: HamiltonianKind,
    pair: PulseSamplePair,
    system: SystemConfig,
    phi_L: float = 0.0,
    phi_dot: float | None = None,
) -> HamiltonianSample:
    """Build one Hamiltonian sample from a (scalar-time) pulse sample.

    The pair must carry derivatives for the kinds that need the auxiliary
    field; TILDE_H additionally requires ``phi_dot``.
    """
    t = float(np.asarray(pair.t))
    omega_p = float(np.asarray(pair.omega_p))
    omega_s = float(np.asarray(pair.omega_s))
    delta = system.detuning

    if kind is HamiltonianKind.LAMBDA3:
        coupling = omega_p * np.exp(1j * phi_L)
        m = 0.5 * np.array(
            [
                [0.0, 0.0, coupling],
                [0.0, 0.0, omega_s],
                [np.conj(coupling), omega_s, 2.0 * delta],
            ],
            dtype=complex,
        )
        return HamiltonianSample(t, m)

    d_eff = (omega_p**2 - omega_s**2) / (4.0 * delta)
    o_eff = omega_p * omega_s / (2.0 * delta)

    if kind is HamiltonianKind.EFFECTIVE_H0:
        m = -0.5 * np.array(
            [
                [d_eff, o_eff * np.exp(1j * phi_L)],
                [o_eff * np.exp(-1j * phi_L), -d_eff],
            ],
            dtype=complex,
        )
        return HamiltonianSample(t, m)

    if not pair.has_derivatives:
        raise ContractError(f"{kind.value} requires pulse derivatives")
    d_p = float(np.asarray(pair.d_omega_p))
    d_s = float(np.asarray(pair.d_omega_s))
    denom = omega_p**2 + omega_s**2
    if denom == 0.0:
        raise DegeneratePulseError("both pulses vanish; auxiliary field undefined")
    omega_a = 2.0 * (d_p * omega_s - omega_p * d_s) / denom

    if kind is HamiltonianKind.COUNTER_DIABATIC:
        phi_a = phi_L + np.pi / 2.0
        m = 0.5 * np.array(
            [
                [0.0, omega_a * np.exp(1j * phi_a)],
                [omega_a * np.exp(-1j * phi_a), 0.0],
            ],
            dtype=complex,
        )
        return HamiltonianSample(t, m)

    if kind is HamiltonianKind.TOTAL_H:
        gamma = np.arctan2(omega_a, o_eff) + phi_L
        o_mod = np.hypot(o_eff, omega_a)
        m = -0.5 * np.array(
            [
                [d_eff, o_mod * np.exp(-1j * gamma)],
                [o_mod * np.exp(1j * gamma), -d_eff],
            ],
            dtype=complex,
        )
        return HamiltonianSample(t, m)

    if kind is HamiltonianKind.TILDE_H:
        if phi_dot is None:
            raise ContractError("tilde_h requires phi_dot")
        d_mod = d_eff + phi_dot
        o_mod = np.hypot(o_eff, omega_a)
        m = -0.5 * np.array([[d_mod, o_mod], [o_mod, -d_mod]], dtype=complex)
        return HamiltonianSample(t, m)

    raise ContractError(f"unknown Hamiltonian kind {kind!r}")


def hamiltonian_of_time(
    kind: HamiltonianKind, cfg: PulseConfig, system: SystemConfig
) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized H(t) sampler for a kind driven by the Gaussian pair of ``cfg``.

    Returns a callable mapping a time array of shape (n,) to a stacked
    matrix array of shape (n, d, d), suitable for :func:`propagate`.
    """
    phi_L = cfg.laser_phase

    if kind is HamiltonianKind.LAMBDA3:

        def sampler(ts: np.ndarray) -> np.ndarray:
            omega_p, omega_s, _, _ = _raw_pair(cfg, ts)
            return lambda3_matrices(omega_p, omega_s, system.detuning, phi_L)

        return sampler

    def sampler(ts: np.ndarray) -> np.ndarray:
        params = shortcut_params(cfg, system, ts)
        return two_level_matrices(kind, params, phi_L)

    return sampler


def lambda3_matrices(
    omega_p: np.ndarray, omega_s: np.ndarray, detuning: float, phi_L: float = 0.0
) -> np.ndarray:
    """Stacked three-level Raman matrices for pulse sample arrays."""
    n = len(omega_p)
    m = np.zeros((n, 3, 3), dtype=complex)
    coupling = 0.5 * omega_p * np.exp(1j * phi_L)
    m[:, 0, 2] = coupling
    m[:, 2, 0] = np.conj(coupling)
    m[:, 1, 2] = 0.5 * omega_s
    m[:, 2, 1] = 0.5 * omega_s
    m[:, 2, 2] = detuning
    return m


def two_level_matrices(
    kind: HamiltonianKind, params: EffectiveParams, phi_L: float = 0.0
) -> np.ndarray:
    """Stacked two-level matrices of the requested kind from parameter arrays."""
    d = np.asarray(params.delta_eff, dtype=float)
    n = len(np.atleast_1d(d))
    m = np.zeros((n, 2, 2), dtype=complex)
    if kind is HamiltonianKind.EFFECTIVE_H0:
        diag, coupling = params.delta_eff, params.omega_eff * np.exp(1j * phi_L)
    elif kind is HamiltonianKind.COUNTER_DIABATIC:
        phase = np.exp(1j * (phi_L + np.pi / 2.0))
        m[:, 0, 1] = 0.5 * params.omega_a * phase
        m[:, 1, 0] = np.conj(m[:, 0, 1])
        return m
    elif kind is HamiltonianKind.TOTAL_H:
        gamma = params.phi + phi_L
        diag = params.delta_eff
        coupling = params.omega_eff_tilde * np.exp(-1j * gamma)
    elif kind is HamiltonianKind.TILDE_H:
        diag, coupling = params.delta_eff_tilde, params.omega_eff_tilde
    else:
        raise ContractError(f"{kind.value} is not a two-level kind")
    m[:, 0, 0] = -0.5 * diag
    m[:, 1, 1] = 0.5 * diag
    m[:, 0, 1] = -0.5 * coupling
    m[:, 1, 0] = np.conj(m[:, 0, 1])
    return m


def effective_drive_hamiltonian(
    delta_eff_fn: Callable[[np.ndarray], np.ndarray],
    omega_eff_fn: Callable[[np.ndarray], np.ndarray],
    phi_L: float = 0.0,
) -> Callable[[np.ndarray], np.ndarray]:
    """H(t) sampler for an arbitrary effective two-level drive."""

    def sampler(ts: np.ndarray) -> np.ndarray:
        d = np.asarray(delta_eff_fn(ts), dtype=float)
        o = np.asarray(omega_eff_fn(ts), dtype=float)
        m = np.zeros((len(ts), 2, 2), dtype=complex)
        m[:, 0, 0] = -0.5 * d
        m[:, 1, 1] = 0.5 * d
        m[:, 0, 1] = -0.5 * o * np.exp(1j * phi_L)
        m[:, 1, 0] = np.conj(m[:, 0, 1])
        return m

    return sampler


def dressed_basis(pair: PulseSamplePair, phi_L: float = 0.0) -> DressedBasis:
    """Dark and bright states of the three-level Raman Hamiltonian.

    theta = arctan(P/S); the dark state is cos(theta)|1> - sin(theta)
    e^{-i phiL}|2>, exactly orthogonal to the first bright state.
    """
    omega_p = float(np.asarray(pair.omega_p))
    omega_s = float(np.asarray(pair.omega_s))
    if omega_p == 0.0 and omega_s == 0.0:
        raise DegeneratePulseError("both pulses vanish; dressed basis undefined")
    theta = np.arctan2(omega_p, omega_s)
    phase = np.exp(1j * phi_L)
    dark = np.array([np.cos(theta), -np.sin(theta) * np.conj(phase), 0.0], dtype=complex)
    bright1 = np.array([np.sin(theta) * phase, np.cos(theta), 0.0], dtype=complex)
    bright2 = np.array([0.0, 0.0, 1.0], dtype=complex)
    return DressedBasis(dark, bright1, bright2, float(theta))


# ---------------------------------------------------------------------------
# exact per-step unitaries


def pauli_exponential(h: np.ndarray, dt: np.ndarray) -> np.ndarray:
    """exp(-i H dt) for stacked 2x2 Hermitian matrices, closed form.

    Decomposes H = a0 I + a . sigma and uses
    exp(-i H dt) = e^{-i a0 dt} (cos|a|dt - i sin|a|dt (a_hat . sigma)),
    with sin|a|dt/|a| evaluated through sinc so a = 0 is exact.
    """
    a0 = 0.5 * (h[..., 0, 0] + h[..., 1, 1]).real
    ax = h[..., 0, 1].real
    ay = -h[..., 0, 1].imag
    az = 0.5 * (h[..., 0, 0] - h[..., 1, 1]).real
    a = np.sqrt(ax**2 + ay**2 + az**2)
    theta = a * dt
    cos = np.cos(theta)
    sin_over_a = dt * np.sinc(theta / np.pi)
    u = np.empty(h.shape, dtype=complex)
    u[..., 0, 0] = cos - 1j * sin_over_a * az
    u[..., 1, 1] = cos + 1j * sin_over_a * az
    u[..., 0, 1] = -1j * sin_over_a * (ax - 1j * ay)
    u[..., 1, 0] = -1j * sin_over_a * (ax + 1j * ay)
    u *= np.exp(-1j * a0 * dt)[..., None, None]
    return u


def _lambda_exponential(h: np.ndarray, dt: np.ndarray) -> np.ndarray:
    """exp(-i H dt) for stacked three-level Raman matrices.

    The dark state decouples exactly, so the problem reduces to the 2x2
    bright/excited block, solved in closed form.  Exact for the Raman
    structure (zero 1-1, 2-2 and 1-2 entries) at any step size.
    """
    a = 2.0 * h[:, 0, 2]
    b = 2.0 * h[:, 1, 2]
    delta = h[:, 2, 2].real
    w_r = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
    safe = np.where(w_r > 0.0, w_r, 1.0)
    # dark (d1,d2,0), bright (b1,b2,0); at w_r = 0 the couplings vanish and
    # any orthonormal choice is exact
    d1 = np.where(w_r > 0.0, np.conj(b) / safe, 1.0)
    d2 = np.where(w_r > 0.0, -np.conj(a) / safe, 0.0)
    b1 = np.where(w_r > 0.0, a / safe, 0.0)
    b2 = np.where(w_r > 0.0, b / safe, 1.0)

    # bright/excited block [[0, w_r/2], [w_r/2, delta]]
    a0 = 0.5 * delta
    az = -0.5 * delta
    ax = 0.5 * w_r
    mag = np.hypot(ax, az)
    theta = mag * dt
    cos = np.cos(theta)
    sin_over = dt * np.sinc(theta / np.pi)
    phase = np.exp(-1j * a0 * dt)
    u11 = (cos - 1j * sin_over * az) * phase
    u22 = (cos + 1j * sin_over * az) * phase
    u12 = -1j * sin_over * ax * phase

    u = np.empty((h.shape[0], 3, 3), dtype=complex)
    u[:, 0, 0] = d1 * np.conj(d1) + u11 * b1 * np.conj(b1)
    u[:, 0, 1] = d1 * np.conj(d2) + u11 * b1 * np.conj(b2)
    u[:, 1, 0] = d2 * np.conj(d1) + u11 * b2 * np.conj(b1)
    u[:, 1, 1] = d2 * np.conj(d2) + u11 * b2 * np.conj(b2)
    u[:, 0, 2] = u12 * b1
    u[:, 1, 2] = u12 * b2
    u[:, 2, 0] = u12 * np.conj(b1)
    u[:, 2, 1] = u12 * np.conj(b2)
    u[:, 2, 2] = u22
    return u


def _eigh_exponential(h: np.ndarray, dt: np.ndarray) -> np.ndarray:
    """exp(-i H dt) via batched Hermitian eigendecomposition (generic 3x3)."""
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * dt[:, None])
    return np.einsum("nij,nj,nkj->nik", v, phases, v.conj())


def _step_unitaries(h: np.ndarray, dt: np.ndarray) -> np.ndarray:
    if h.shape[-1] == 2:
        return pauli_exponential(h, dt)
    raman_structure = (
        np.all(h[:, 0, 0] == 0.0)
        and np.all(h[:, 1, 1] == 0.0)
        and np.all(h[:, 0, 1] == 0.0)
    )
    if raman_structure:
        return _lambda_exponential(h, dt)
    return _eigh_exponential(h, dt)


def _reduce_product(u: np.ndarray) -> np.ndarray:
    """Ordered product u[-1] @ ... @ u[0] by pairwise tree reduction."""
    while u.shape[0] > 1:
        if u.shape[0] % 2:
            tail = u[-1]
            u = u[1::2] @ u[0::2]
            u[-1] = tail @ u[-1]
        else:
            u = u[1::2] @ u[0::2]
    return u[0]


def propagate(
    hamiltonian: Callable[[np.ndarray], np.ndarray],
    psi0: np.ndarray,
    times: np.ndarray,
    refine_tol: float = 1e-8,
    max_levels: int = 20,
    initial_substeps: int = 1,
) -> Trajectory:
    """Propagate the Schrodinger equation, returning states on ``times``.

    Each grid interval is split into substeps advanced by the exact
    exponential of the midpoint-sampled Hamiltonian.  The substep count is
    doubled until the final-state populations move by less than
    ``refine_tol`` between refinements; exceeding ``max_levels`` raises
    :class:`IntegrationError` carrying the last residual.

    Parameters
    ----------
    hamiltonian : callable
        Maps a time array (n,) to stacked Hermitian matrices (n, d, d).
    psi0 : ndarray
        Normalized initial state of dimension 2 or 3.
    times : ndarray
        Strictly increasing output grid.
    """
    times = np.asarray(times, dtype=float)
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ContractError("initial state is not normalized")
    if len(times) < 2 or np.any(np.diff(times) <= 0.0):
        raise ContractError("times must be strictly increasing with >= 2 samples")

    intervals = len(times) - 1
    widths = np.diff(times)
    prev_final = None
    residual = np.inf
    for level in range(max_levels):
        m = initial_substeps << level
        states = np.empty((intervals + 1, len(psi0)), dtype=complex)
        states[0] = psi0
        # process intervals in blocks to bound the batched-matrix memory
        per_block = max(1, _BLOCK_SUBSTEPS // m)
        offsets = (np.arange(m) + 0.5) / m
        for start in range(0, intervals, per_block):
            stop = min(start + per_block, intervals)
            dts = widths[start:stop] / m
            mids = (
                times[start:stop, None] + offsets[None, :] * widths[start:stop, None]
            ).ravel()
            h = hamiltonian(mids)
            u = _step_unitaries(h, np.repeat(dts, m))
            u = u.reshape(stop - start, m, *u.shape[1:])
            psi = states[start]
            for k in range(stop - start):
                psi = _reduce_product(u[k]) @ psi
                states[start + k + 1] = psi
        final = np.abs(states[-1]) ** 2
        if prev_final is not None:
            residual = float(np.max(np.abs(final - prev_final)))
            if residual < refine_tol:
                return Trajectory(times=times, states=states)
        prev_final = final
    raise IntegrationError(
        f"propagation did not converge below {refine_tol:g} within "
        f"{max_levels} refinement levels (residual {residual:g})",
        residual=residual,
    )


def gauge_transform(traj: Trajectory, gamma: np.ndarray) -> Trajectory:
    """Apply the diagonal frame rotation diag(e^{-i g/2}, e^{+i g/2}).

    ``gamma`` must match the trajectory grid sample-for-sample.  Populations
    are unchanged by construction.
    """
    gamma = np.asarray(gamma, dtype=float)
    if traj.dim != 2:
        raise ContractError("gauge transform is defined for 2-level trajectories")
    if gamma.shape != traj.times.shape:
        raise ContractError("gamma grid does not match the trajectory grid")
    states = np.empty_like(traj.states)
    states[:, 0] = np.exp(-1j * gamma / 2.0) * traj.states[:, 0]
    states[:, 1] = np.exp(+1j * gamma / 2.0) * traj.states[:, 1]
    return Trajectory(times=traj.times, states=states)


def spin_polarization(state: np.ndarray) -> np.ndarray:
    """Pauli expectation values (<sx>, <sy>, <sz>) of a two-level state."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (2,):
        raise ContractError("spin polarization requires a single 2-level state")
    cross = np.conj(state[0]) * state[1]
    return np.array(
        [2.0 * cross.real, 2.0 * cross.imag, abs(state[0]) ** 2 - abs(state[1]) ** 2]
    )


def spin_polarizations(states: np.ndarray) -> np.ndarray:
    """Vectorized spin polarizations for an (n, 2) state array."""
    states = np.asarray(states, dtype=complex)
    if states.ndim != 2 or states.shape[1] != 2:
        raise ContractError("spin polarizations require (n, 2) states")
    cross = np.conj(states[:, 0]) * states[:, 1]
    return np.stack(
        [
            2.0 * cross.real,
            2.0 * cross.imag,
            np.abs(states[:, 0]) ** 2 - np.abs(states[:, 1]) ** 2,
        ],
        axis=1,
    )


def effective_field(matrix: np.ndarray) -> EffectiveField:
    """Magnetic-field decomposition of a 2x2 Hamiltonian, H = (1/2) B . sigma.

        Bx = H12 + H21,  By = i (H12 - H21),  Bz = H11 - H22

    A zero matrix yields zero magnitude with the direction flagged undefined.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ContractError("effective field requires a 2x2 matrix")
    bx = (m[0, 1] + m[1, 0]).real
    by = (1j * (m[0, 1] - m[1, 0])).real
    bz = (m[0, 0] - m[1, 1]).real
    vec = np.array([bx, by, bz])
    mag = float(np.linalg.norm(vec))
    if mag == 0.0:
        return EffectiveField(np.zeros(3), 0.0, False)
    return EffectiveField(vec / mag, mag, True)


def effective_fields(matrices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized field decomposition: unit vectors (n, 3) and magnitudes (n,)."""
    bx = (matrices[:, 0, 1] + matrices[:, 1, 0]).real
    by = (1j * (matrices[:, 0, 1] - matrices[:, 1, 0])).real
    bz = (matrices[:, 0, 0] - matrices[:, 1, 1]).real
    vec = np.stack([bx, by, bz], axis=1)
    mag = np.linalg.norm(vec, axis=1)
    unit = vec / np.where(mag > 0.0, mag, 1.0)[:, None]
    return unit, mag


def transfer_efficiency(traj: Trajectory, target: int = 1) -> float:
    """Final population of the target basis state, clamped to [0, 1]."""
    value = float(traj.final_populations[target])
    return min(max(value, 0.0), 1.0)
