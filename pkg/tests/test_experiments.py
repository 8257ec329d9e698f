import numpy as np
import pytest

from stirsap import (
    ContractError,
    Protocol,
    RobustnessSpec,
    bloch_comparison,
    efficiency_vs_time,
    minimal_time,
    multi_cycle,
    required_peak,
    robustness_sweep,
    run_dynamics,
    speedup_analysis,
    transfer_efficiency,
)


def angles_between(tracks, reference):
    dots = np.clip(np.sum(tracks * reference, axis=1), -1.0, 1.0)
    return np.arccos(dots)


class TestRunDynamics:
    def test_stirap_regression(self, pulse, system):
        traj = run_dynamics(Protocol.STIRAP, pulse.total_time, pulse, system)
        assert transfer_efficiency(traj) == pytest.approx(0.338864, abs=5e-4)

    def test_stirsap_near_unity(self, pulse, system):
        traj = run_dynamics(Protocol.STIRSAP, pulse.total_time, pulse, system)
        assert transfer_efficiency(traj) >= 0.999

    def test_string_protocol_accepted(self, pulse, system):
        traj = run_dynamics("stirsap", pulse.total_time, pulse, system, samples=257)
        assert transfer_efficiency(traj) >= 0.999


class TestEfficiencyVsTime:
    def test_shortcut_curve_is_flat(self, pulse, system):
        times = np.array([2.0, 4.0, 8.0, 16.0, 25.0]) * system.pi_time
        sweep = efficiency_vs_time(Protocol.STIRSAP, times, pulse, system, threads=2)
        assert np.all(sweep.efficiencies >= 0.999)

    def test_adiabatic_curve_rises_in_fast_regime(self, pulse, system):
        times = np.array([2.0, 4.0, 6.0, 8.0, 10.0]) * system.pi_time
        sweep = efficiency_vs_time(Protocol.STIRAP, times, pulse, system, threads=2)
        assert np.all(np.diff(sweep.efficiencies) > 0.0)

    def test_efficiencies_clamped(self, pulse, system):
        times = np.array([2.0, 4.0]) * system.pi_time
        sweep = efficiency_vs_time(Protocol.STIRSAP, times, pulse, system)
        assert np.all(sweep.efficiencies <= 1.0)
        assert np.all(sweep.efficiencies >= 0.0)


class TestRequiredPeak:
    def test_shortcut_peak_at_reference_time(self, pulse, system):
        peak = required_peak(
            Protocol.STIRSAP, 4.0 * system.pi_time, 0.994, pulse, system
        )
        assert peak / system.reference_rabi == pytest.approx(1.145, abs=0.01)

    def test_adiabatic_peak_at_reference_time(self, pulse, system):
        peak = required_peak(
            Protocol.STIRAP, 4.0 * system.pi_time, 0.994, pulse, system
        )
        assert peak / system.reference_rabi == pytest.approx(2.536, abs=0.01)

    def test_zero_target_returns_scan_edge(self, pulse, system):
        peak = required_peak(Protocol.STIRAP, 4.0 * system.pi_time, 0.0, pulse, system)
        assert peak == pytest.approx(0.1 * system.reference_rabi)

    def test_invalid_target_rejected(self, pulse, system):
        with pytest.raises(ContractError):
            required_peak(Protocol.STIRAP, 4.0 * system.pi_time, 1.0, pulse, system)


class TestSpeedup:
    def test_minimal_time_at_reference_peak(self, pulse, system):
        t_ap = minimal_time(
            Protocol.STIRAP, system.reference_rabi, 0.994, pulse, system
        )
        assert t_ap / system.pi_time == pytest.approx(25.72, abs=0.05)

    def test_small_grid_invariants(self, pulse, system):
        peaks = np.array([1.05, 1.14, 2.0]) * system.reference_rabi
        report = speedup_analysis(peaks, 0.994, pulse, system, threads=3)
        assert np.all(report.t_adiabatic >= report.t_shortcut)
        assert np.all(np.diff(report.ratio) > 0.0)
        assert report.ratio[-1] == pytest.approx(5.55, abs=0.1)


class TestRobustness:
    def test_resonant_pi_reference_matches_rabi_formula(self, pulse, system):
        eps = np.linspace(0.8, 1.2, 9)
        spec = RobustnessSpec(
            axis="amplitude", values=eps, protocols=(Protocol.RESONANT_PI,)
        )
        result = robustness_sweep(spec, pulse, system)[0]
        assert np.allclose(
            result.efficiencies, np.sin(eps * np.pi / 2.0) ** 2, atol=1e-6
        )

    def test_amplitude_window(self, pulse, system):
        eps = np.array([0.95, 0.975, 1.0, 1.025, 1.05])
        spec = RobustnessSpec(
            axis="amplitude", values=eps, protocols=(Protocol.STIRSAP,)
        )
        result = robustness_sweep(spec, pulse, system, threads=2)[0]
        assert np.all(result.efficiencies >= 0.98)

    def test_longer_protocol_dominates(self, pulse, system):
        eps = np.array([0.85, 0.9, 1.1, 1.15])
        spec = RobustnessSpec(
            axis="amplitude", values=eps, protocols=(Protocol.STIRSAP,)
        )
        short = robustness_sweep(spec, pulse, system, threads=2)[0]
        longer = robustness_sweep(
            spec, pulse.with_total_time(2.5 * pulse.total_time), system, threads=2
        )[0]
        assert np.all(longer.efficiencies >= short.efficiencies - 1e-3)

    def test_delay_fixed_shapes_dip(self, pulse, system):
        ratios = np.linspace(0.8, 1.2, 9)
        spec = RobustnessSpec(axis="delay", values=ratios)
        result = robustness_sweep(spec, pulse, system, threads=2)[0]
        assert np.all(result.efficiencies >= 0.88)
        assert 0.88 <= result.efficiencies.min() <= 0.93

    def test_delay_adapted_shapes_recover(self, pulse, system):
        ratios = np.linspace(0.8, 1.2, 5)
        spec = RobustnessSpec(axis="delay", values=ratios, adapt_shapes=True)
        result = robustness_sweep(spec, pulse, system, threads=2)[0]
        assert np.all(result.efficiencies >= 0.999)

    def test_detuning_axis_is_flat(self, pulse, system):
        offsets = np.linspace(-2.0 * np.pi * 1e6, 2.0 * np.pi * 1e6, 9)
        spec = RobustnessSpec(axis="detuning", values=offsets)
        result = robustness_sweep(spec, pulse, system, threads=2)[0]
        assert result.efficiencies.max() - result.efficiencies.min() < 0.01

    def test_invalid_specs_rejected(self):
        with pytest.raises(ContractError):
            RobustnessSpec(axis="phase")
        with pytest.raises(ContractError):
            RobustnessSpec(axis="amplitude", adapt_shapes=True)

    def test_default_values_per_axis(self):
        assert RobustnessSpec(axis="amplitude").values[0] == pytest.approx(0.8)
        assert RobustnessSpec(axis="delay").values[-1] == pytest.approx(1.2)
        assert RobustnessSpec(axis="detuning").values[-1] == pytest.approx(
            2.0 * np.pi * 40e6
        )


class TestMultiCycle:
    def test_population_swap_once(self, pulse, system):
        initial = np.array([np.sqrt(0.3), np.exp(0.7j) * np.sqrt(0.7)], complex)
        history = multi_cycle(initial, 1, pulse, system)
        assert history[0, 0] == pytest.approx(0.7, abs=0.005)
        assert history[0, 1] == pytest.approx(0.3, abs=0.005)

    def test_two_cycles_restore_populations(self, pulse, system, ground):
        history = multi_cycle(ground, 2, pulse, system)
        assert history[-1, 0] >= 0.99

    def test_five_cycles_from_ground(self, pulse, system, ground):
        history = multi_cycle(ground, 5, pulse, system)
        assert history.shape == (5, 2)
        assert history[-1, 1] >= 0.995

    def test_rejects_bad_inputs(self, pulse, system, ground):
        with pytest.raises(ContractError):
            multi_cycle(np.array([1.0, 0.0, 0.0], complex), 1, pulse, system)
        with pytest.raises(ContractError):
            multi_cycle(ground, 0, pulse, system)


@pytest.fixture(scope="module")
def comparison(pulse, system):
    return bloch_comparison(pulse, system, samples=401)


class TestBlochComparison:
    def test_bare_field_runs_pole_to_pole(self, comparison):
        assert comparison.b0_unit[0, 2] > 0.99
        assert comparison.b0_unit[-1, 2] < -0.99

    def test_total_track_follows_bare_field(self, comparison):
        angles = angles_between(comparison.total.bloch, comparison.b0_unit)
        assert angles.max() < 0.02

    def test_bare_track_departs(self, comparison):
        angles = angles_between(comparison.bare.bloch, comparison.b0_unit)
        assert angles.max() > 0.3

    def test_rotated_track_matches_after_frame_undo(self, comparison):
        bloch = comparison.rotated.bloch
        gamma = comparison.gamma
        cos, sin = np.cos(gamma), np.sin(gamma)
        pulled_back = np.stack(
            [
                cos * bloch[:, 0] - sin * bloch[:, 1],
                sin * bloch[:, 0] + cos * bloch[:, 1],
                bloch[:, 2],
            ],
            axis=1,
        )
        angles = angles_between(pulled_back, comparison.b0_unit)
        assert angles.max() < 0.02

    def test_rotated_track_azimuth_offset_is_frame_angle(self, comparison):
        # in the rotated frame the track is tilted out of the bare-field
        # plane by the frame angle itself
        angles = angles_between(comparison.rotated.bloch, comparison.b0_unit)
        mid = len(angles) // 2
        assert angles[mid] == pytest.approx(abs(comparison.gamma[mid]), abs=0.02)

    def test_population_equivalence(self, comparison):
        diff = np.abs(comparison.total.populations - comparison.rotated.populations)
        assert diff.max() < 1e-6

    def test_field_magnitudes_positive(self, comparison):
        assert np.all(comparison.b0_magnitude > 0.0)
        assert np.all(comparison.b_magnitude > 0.0)
