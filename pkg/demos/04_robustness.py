"""Robustness of the shortcut against control imperfections.

Three imperfection axes, mirroring what drifts in a real Raman setup:
amplitude miscalibration (compared against the amplitude-sensitive
resonant pi pulse), pulse-separation timing errors (with and without
recomputing the shapes), and single-photon detuning offsets with the
shapes locked to the nominal detuning.
"""

from pathlib import Path

import numpy as np

from stirsap import Protocol, PulseConfig, RobustnessSpec, SystemConfig, robustness_sweep
from stirsap.io import write_csv

OUT = Path(__file__).parent / "output"

system = SystemConfig.default()
pulse = PulseConfig.from_total_time(4.0 * system.pi_time, system.reference_rabi)
points = 21

amp = RobustnessSpec(axis="amplitude", samples=points)
short_curve, resonant = robustness_sweep(amp, pulse, system, threads=4)
long_curve = robustness_sweep(
    RobustnessSpec(axis="amplitude", samples=points, protocols=(Protocol.STIRSAP,)),
    pulse.with_total_time(2.5 * pulse.total_time), system, threads=4,
)[0]
write_csv(
    OUT / "robustness_amplitude.csv",
    ["amplitude_scale", "stirsap_0p4ms", "stirsap_1ms", "resonant_pi"],
    [amp.values, short_curve.efficiencies, long_curve.efficiencies, resonant.efficiencies],
)

fixed = robustness_sweep(
    RobustnessSpec(axis="delay", samples=points), pulse, system, threads=4
)[0]
adapted = robustness_sweep(
    RobustnessSpec(axis="delay", samples=points, adapt_shapes=True),
    pulse, system, threads=4,
)[0]
write_csv(
    OUT / "robustness_delay.csv",
    ["delay_scale", "fixed_shapes", "adapted_shapes"],
    [fixed.parameter_values, fixed.efficiencies, adapted.efficiencies],
)

detuning = robustness_sweep(
    RobustnessSpec(axis="detuning", samples=points), pulse, system, threads=4
)[0]
write_csv(
    OUT / "robustness_detuning.csv",
    ["detuning_offset", "efficiency"],
    [detuning.parameter_values, detuning.efficiencies],
)

print(f"amplitude +/-5% window minimum : {short_curve.efficiencies[8:13].min():.4f}")
print(f"fixed-shape delay minimum      : {fixed.efficiencies.min():.4f}")
print(f"adapted-shape delay minimum    : {adapted.efficiencies.min():.6f}")
print(f"detuning spread over +/-40 MHz : "
      f"{detuning.efficiencies.max() - detuning.efficiencies.min():.2e}")
print(f"wrote three CSV files under {OUT}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, axes = plt.subplots(1, 3, figsize=(13, 4))
axes[0].plot(amp.values, short_curve.efficiencies, "b--", label="shortcut, 0.4 ms")
axes[0].plot(amp.values, long_curve.efficiencies, "r-", label="shortcut, 1 ms")
axes[0].plot(amp.values, resonant.efficiencies, "g-.", label="resonant pi")
axes[0].set_xlabel("amplitude scale")
axes[0].set_ylabel("transfer efficiency")
axes[0].legend()
axes[1].plot(fixed.parameter_values, fixed.efficiencies, "b--", label="fixed shapes")
axes[1].plot(adapted.parameter_values, adapted.efficiencies, "r-", label="adapted shapes")
axes[1].set_xlabel("separation scale")
axes[1].legend()
axes[2].plot(detuning.parameter_values / (2 * np.pi * 1e6), detuning.efficiencies, "r-")
axes[2].set_xlabel("detuning offset (MHz)")
axes[2].set_ylim(0.9, 1.001)
fig.tight_layout()
fig.savefig(OUT / "robustness.png", dpi=150)
print(f"wrote {OUT / 'robustness.png'}")
