"""Command-line front end.

Each subcommand runs one campaign and writes a CSV result plus a JSON
metadata file (config snapshot, tolerances, wall time, run manifest) into
the output directory.  Exit codes: 0 success, 1 domain/config error,
2 usage error.  All runs are deterministic; identical invocations produce
byte-identical CSV files.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import experiments as xp
from .config import PulseConfig, SystemConfig, validate_config
from .dynamics import effective_fields, transfer_efficiency
from .errors import StirsapError
from .io import (
    OUTPUT_DIR_ENV,
    TOOL_VERSION,
    RunManifest,
    _parse_number,
    _TIME_SUFFIXES,
    parse_config,
    trajectory_columns,
    write_csv,
    write_metadata,
)
from .pulses import default_grid, stirsap_pulses

COMMANDS = (
    "dynamics",
    "sweep-time",
    "sweep-amplitude",
    "sweep-delay",
    "sweep-detuning",
    "peaks",
    "speedup",
    "cycles",
    "bloch",
    "pulses",
    "validate",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stirsap",
        description="Raman pulse engineering and transfer-dynamics campaigns",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="config file path")
        p.add_argument("--out", default=None, help=f"output directory (default ${OUTPUT_DIR_ENV} or .)")
        p.add_argument("--quiet", action="store_true", help="suppress diagnostics")
        p.add_argument("--verbose", action="store_true", help="extra diagnostics")
        p.add_argument("--threads", type=int, default=None, help="worker pool cap")

    p = sub.add_parser("dynamics", help="single transfer-dynamics trajectory")
    common(p)
    p.add_argument("--protocol", choices=["stirap", "stirsap"], default="stirap")
    p.add_argument("--total-time", default=None, help="operation time, e.g. 0.4ms")
    p.add_argument("--samples", type=int, default=None)

    p = sub.add_parser("sweep-time", help="efficiency versus operation time")
    common(p)
    p.add_argument("--points", type=int, default=None, help="geometric grid size over [2,25] pi times")

    p = sub.add_parser("sweep-amplitude", help="efficiency versus amplitude scale")
    common(p)
    p.add_argument("--points", type=int, default=41)

    p = sub.add_parser("sweep-delay", help="efficiency versus pulse separation")
    common(p)
    p.add_argument("--points", type=int, default=41)

    p = sub.add_parser("sweep-detuning", help="efficiency versus detuning offset")
    common(p)
    p.add_argument("--points", type=int, default=41)

    p = sub.add_parser("peaks", help="required peak Rabi frequency versus time")
    common(p)
    p.add_argument("--times", default=None, help="comma list in reference pi times")
    p.add_argument("--fidelity-target", type=float, default=None)

    p = sub.add_parser("speedup", help="equal-peak operation-time comparison")
    common(p)
    p.add_argument("--peaks", default=None, help="comma list in reference Rabi units")
    p.add_argument("--fidelity-target", type=float, default=None)

    p = sub.add_parser("cycles", help="repeated shortcut passes")
    common(p)
    p.add_argument("--cycles", type=int, default=5)
    p.add_argument("--total-time", default=None)

    p = sub.add_parser("bloch", help="spin-polarization and field tracks")
    common(p)
    p.add_argument("--total-time", default=None)
    p.add_argument("--samples", type=int, default=801)

    p = sub.add_parser("pulses", help="pulse-shape table")
    common(p)
    p.add_argument("--protocol", choices=["stirap", "stirsap"], default="stirsap")
    p.add_argument("--total-time", default=None)
    p.add_argument("--samples", type=int, default=None)

    p = sub.add_parser("validate", help="check a configuration")
    common(p)
    return parser


def _load(args) -> tuple[PulseConfig, SystemConfig, dict]:
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
    else:
        text = ""
    pulse, system, options = parse_config(text)
    if getattr(args, "total_time", None):
        pulse = pulse.with_total_time(_parse_number(args.total_time, _TIME_SUFFIXES))
    if getattr(args, "samples", None):
        options["samples"] = args.samples
    if args.threads is not None:
        options["threads"] = args.threads
    return pulse, system, options


def _overrides(args) -> tuple[tuple[str, str], ...]:
    skip = {"command", "config", "out", "quiet", "verbose"}
    pairs = []
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None or value is False:
            continue
        pairs.append((key, str(value)))
    return tuple(pairs)


def _out_dir(args) -> Path:
    import os

    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def dispatch(argv: list[str]) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    started = time.perf_counter()
    try:
        pulse, system, options = _load(args)
        out = _out_dir(args)
        manifest = RunManifest(
            command=args.command,
            config_path=args.config or "",
            overrides=_overrides(args),
            output_dir=str(out),
            tool_version=TOOL_VERSION,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )
        summary, files, extra_meta = _run_command(args, pulse, system, options, out)
        wall = time.perf_counter() - started
        if files:
            meta = {
                "command": args.command,
                "config": xp.config_snapshot(pulse, system, **options),
                "manifest": dataclasses.asdict(manifest),
                "wall_time_s": wall,
                "csv_files": [f.name for f in files],
                **extra_meta,
            }
            meta_path = out / f"{args.command}.json"
            write_metadata(meta_path, meta)
            files = files + [meta_path]
        print(summary)
        if not args.quiet:
            for f in files:
                print(f"wrote {f}", file=sys.stderr)
        if args.verbose:
            print(f"wall time: {wall:.3f} s", file=sys.stderr)
        return 0
    except StirsapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _run_command(args, pulse, system, options, out: Path):
    threads = options["threads"]
    samples = options["samples"]
    t0 = system.pi_time
    name = args.command
    files: list[Path] = []
    extra: dict = {"tolerances": {"refine_tol": 1e-8, "samples": samples}}

    if name == "validate":
        report = validate_config(pulse, system)
        for line in report.lines():
            print(line)
        return ("configuration valid" if report.ok else "configuration invalid"), [], {}

    if name == "dynamics":
        protocol = xp.Protocol(args.protocol)
        grid_samples = args.samples if args.samples else 1025
        traj = xp.run_dynamics(
            protocol, pulse.total_time, pulse, system, samples=grid_samples
        )
        header, columns = trajectory_columns(traj)
        # unit vector of the executed drive's effective field
        sampler = xp._protocol_hamiltonian(protocol, pulse, system)
        unit, _ = effective_fields(sampler(traj.times))
        header += ["bx_hat", "by_hat", "bz_hat"]
        columns += [unit[:, 0], unit[:, 1], unit[:, 2]]
        path = out / "dynamics.csv"
        write_csv(path, header, columns)
        files.append(path)
        eff = transfer_efficiency(traj)
        return f"final P2 = {eff:.6f} ({protocol.value}, T = {pulse.total_time:g} s)", files, extra

    if name == "sweep-time":
        if args.points:
            times = np.geomspace(2.0, 25.0, args.points) * t0
        else:
            times = np.array(xp.DEFAULT_TIME_SWEEP) * t0
        curves = {
            p.value: xp.efficiency_vs_time(p, times, pulse, system, threads, samples)
            for p in (xp.Protocol.STIRAP, xp.Protocol.STIRSAP)
        }
        path = out / "sweep_time.csv"
        write_csv(
            path,
            ["total_time", "efficiency_stirap", "efficiency_stirsap"],
            [times, curves["stirap"].efficiencies, curves["stirsap"].efficiencies],
        )
        files.append(path)
        return f"swept {len(times)} operation times", files, extra

    if name == "sweep-amplitude":
        spec = xp.RobustnessSpec(axis="amplitude", samples=args.points)
        short = xp.robustness_sweep(spec, pulse, system, threads, samples)
        longer = xp.robustness_sweep(
            xp.RobustnessSpec(
                axis="amplitude", samples=args.points, protocols=(xp.Protocol.STIRSAP,)
            ),
            pulse.with_total_time(2.5 * pulse.total_time),
            system,
            threads,
            samples,
        )
        path = out / "sweep_amplitude.csv"
        write_csv(
            path,
            [
                "amplitude_scale",
                "efficiency_stirsap",
                "efficiency_stirsap_long",
                "efficiency_resonant_pi",
            ],
            [
                spec.values,
                short[0].efficiencies,
                longer[0].efficiencies,
                short[1].efficiencies,
            ],
        )
        files.append(path)
        return f"swept {len(spec.values)} amplitude scales", files, extra

    if name == "sweep-delay":
        fixed = xp.robustness_sweep(
            xp.RobustnessSpec(axis="delay", samples=args.points),
            pulse, system, threads, samples,
        )[0]
        adapted = xp.robustness_sweep(
            xp.RobustnessSpec(axis="delay", samples=args.points, adapt_shapes=True),
            pulse, system, threads, samples,
        )[0]
        path = out / "sweep_delay.csv"
        write_csv(
            path,
            ["delay_scale", "efficiency_fixed_shapes", "efficiency_adapted_shapes"],
            [fixed.parameter_values, fixed.efficiencies, adapted.efficiencies],
        )
        files.append(path)
        return f"swept {len(fixed.parameter_values)} separation scales", files, extra

    if name == "sweep-detuning":
        result = xp.robustness_sweep(
            xp.RobustnessSpec(axis="detuning", samples=args.points),
            pulse, system, threads, samples,
        )[0]
        path = out / "sweep_detuning.csv"
        write_csv(
            path,
            ["detuning_offset", "efficiency_stirsap"],
            [result.parameter_values, result.efficiencies],
        )
        files.append(path)
        return f"swept {len(result.parameter_values)} detuning offsets", files, extra

    if name == "peaks":
        target = args.fidelity_target or options["fidelity_target"]
        if args.times:
            multiples = np.array([float(x) for x in args.times.split(",")])
        else:
            multiples = np.array(xp.DEFAULT_PEAK_SWEEP_TIMES)
        times = multiples * t0

        def one(total_time):
            ap = xp.required_peak(
                xp.Protocol.STIRAP, total_time, target, pulse, system, samples
            )
            sa = xp.required_peak(
                xp.Protocol.STIRSAP, total_time, target, pulse, system, samples
            )
            return ap, sa

        results = xp._parallel_map(one, times, threads)
        path = out / "peaks.csv"
        write_csv(
            path,
            ["total_time", "peak_stirap", "peak_stirsap"],
            [times, np.array([r[0] for r in results]), np.array([r[1] for r in results])],
        )
        files.append(path)
        extra["tolerances"]["fidelity_target"] = target
        return f"computed required peaks at {len(times)} operation times", files, extra

    if name == "speedup":
        target = args.fidelity_target or options["fidelity_target"]
        peaks = None
        if args.peaks:
            peaks = np.array([float(x) for x in args.peaks.split(",")]) * system.reference_rabi
        report = xp.speedup_analysis(peaks, target, pulse, system, threads, samples)
        path = out / "speedup.csv"
        write_csv(
            path,
            ["peak", "t_adiabatic", "t_shortcut", "ratio", "difference"],
            [report.peaks, report.t_adiabatic, report.t_shortcut, report.ratio, report.difference],
        )
        files.append(path)
        extra["tolerances"]["fidelity_target"] = target
        plateau = report.ratio[-1]
        return f"speedup ratio at largest peak: {plateau:.3f}", files, extra

    if name == "cycles":
        ground = xp.multi_cycle(np.array([1.0, 0.0], complex), args.cycles, pulse, system, samples)
        superpos = np.array([np.sqrt(0.3), np.exp(0.7j) * np.sqrt(0.7)], complex)
        mixed = xp.multi_cycle(superpos, args.cycles, pulse, system, samples)
        path = out / "cycles.csv"
        idx = np.arange(1, args.cycles + 1)
        write_csv(
            path,
            ["cycle", "p1_from_ground", "p2_from_ground", "p1_from_superposition", "p2_from_superposition"],
            [idx, ground[:, 0], ground[:, 1], mixed[:, 0], mixed[:, 1]],
        )
        files.append(path)
        return f"final P2 after {args.cycles} cycles from |1>: {ground[-1, 1]:.6f}", files, extra

    if name == "bloch":
        comparison = xp.bloch_comparison(pulse, system, samples=args.samples)
        path = out / "bloch.csv"
        header = ["t"]
        columns = [comparison.times]
        for tag, traj in (
            ("bare", comparison.bare),
            ("total", comparison.total),
            ("rotated", comparison.rotated),
        ):
            bloch = traj.bloch
            header += [f"nx_{tag}", f"ny_{tag}", f"nz_{tag}"]
            columns += [bloch[:, 0], bloch[:, 1], bloch[:, 2]]
        header += ["b0x_hat", "b0y_hat", "b0z_hat", "bx_hat", "by_hat", "bz_hat"]
        columns += [comparison.b0_unit[:, i] for i in range(3)]
        columns += [comparison.b_unit[:, i] for i in range(3)]
        write_csv(path, header, columns)
        files.append(path)
        return "computed spin-polarization and field tracks", files, extra

    if name == "pulses":
        grid = default_grid(pulse, samples if args.samples else 4096)
        table = stirsap_pulses(pulse, system, grid)
        path = out / "pulses.csv"
        write_csv(
            path,
            ["t", "omega_p", "omega_s", "omega_a", "omega_p_tilde", "omega_s_tilde"],
            [
                table.times,
                table.omega_p,
                table.omega_s,
                table.params.omega_a,
                table.omega_p_tilde,
                table.omega_s_tilde,
            ],
        )
        files.append(path)
        extra["protocol"] = args.protocol
        return f"peak reshaped Rabi frequency: {table.peak:.6g} rad/s", files, extra

    raise AssertionError(f"unhandled command {name}")


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
