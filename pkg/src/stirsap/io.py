"""Config-file parsing, run manifests, and CSV/JSON serialization.

Config grammar: one ``key = value`` assignment per line, ``#`` starts a
comment, blank lines ignored.  Frequency-valued keys accept the suffixes
``GHz``/``MHz``/``kHz``/``Hz`` and are entered as ordinary frequencies
(multiplied by 2*pi internally); time-valued keys accept ``ms``/``us``/``s``.
Unsuffixed numbers are base SI units (Hz or s).

CSV files are written atomically (write-then-rename) with a header row and
full round-trip float precision, so identical runs produce byte-identical
output.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import TWO_PI, PulseConfig, SystemConfig
from .errors import ParseError

TOOL_VERSION = "0.1.0"

_FREQ_SUFFIXES = {"ghz": 1e9, "mhz": 1e6, "khz": 1e3, "hz": 1.0}
_TIME_SUFFIXES = {"ms": 1e-3, "us": 1e-6, "s": 1.0}

#: Keys holding angular frequencies, entered as ordinary frequencies.
FREQUENCY_KEYS = ("detuning", "reference_rabi", "peak_pump", "peak_stokes")
#: Keys holding times in seconds.
TIME_KEYS = ("total_time", "width", "delay")
#: Remaining recognized keys and their converters.
PLAIN_KEYS = {
    "laser_phase": float,
    "fidelity_target": float,
    "samples": int,
    "threads": int,
}

DEFAULT_OPTIONS = {"fidelity_target": 0.994, "samples": 257, "threads": 1}

#: Environment variable supplying the default output directory.
OUTPUT_DIR_ENV = "STIRSAP_OUT"


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record for one CLI invocation.

    All computations are deterministic and seedless, so re-running a
    command with an identical manifest reproduces its CSV output
    byte-for-byte.
    """

    command: str
    config_path: str
    overrides: tuple[tuple[str, str], ...]
    output_dir: str
    tool_version: str
    timestamp: str
    seedless: bool = True

    def to_json(self) -> str:
        payload = dataclasses.asdict(self)
        payload["overrides"] = [list(pair) for pair in self.overrides]
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        payload = json.loads(text)
        payload["overrides"] = tuple(tuple(pair) for pair in payload["overrides"])
        return cls(**payload)


def _parse_number(raw: str, suffixes: dict[str, float]) -> float:
    token = raw.strip().lower().replace(" ", "")
    for suffix, mult in sorted(suffixes.items(), key=lambda kv: -len(kv[0])):
        if token.endswith(suffix):
            return float(token[: -len(suffix)]) * mult
    return float(token)


def parse_config(text: str) -> tuple[PulseConfig, SystemConfig, dict]:
    """Parse key/value config text into validated configuration objects.

    Missing keys take the reference defaults (detuning 2.5 GHz, reference
    Rabi 5 MHz, total time 0.4 ms, width T/6, delay T/10, zero laser
    phase).  Width and delay are re-derived from the total time unless set
    explicitly.  Unknown keys, malformed numbers, and invariant violations
    raise :class:`ParseError` with the offending line number.
    """
    values: dict[str, float] = {}
    lines_seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", line=lineno)
        key, _, raw = stripped.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        try:
            if key in FREQUENCY_KEYS:
                values[key] = TWO_PI * _parse_number(raw, _FREQ_SUFFIXES)
            elif key in TIME_KEYS:
                values[key] = _parse_number(raw, _TIME_SUFFIXES)
            elif key in PLAIN_KEYS:
                values[key] = PLAIN_KEYS[key](raw)
            else:
                raise ParseError(f"unknown key {key!r}", line=lineno)
        except ParseError:
            raise
        except ValueError:
            raise ParseError(f"malformed number {raw!r} for {key!r}", line=lineno)
        lines_seen[key] = lineno

    system_defaults = SystemConfig.default()
    detuning = values.get("detuning", system_defaults.detuning)
    reference = values.get("reference_rabi", system_defaults.reference_rabi)
    total_time = values.get("total_time", 0.4e-3)
    width = values.get("width", total_time / 6.0)
    delay = values.get("delay", total_time / 10.0)
    try:
        system = SystemConfig(detuning=detuning, reference_rabi=reference)
        pulse = PulseConfig(
            peak_pump=values.get("peak_pump", reference),
            peak_stokes=values.get("peak_stokes", reference),
            total_time=total_time,
            width=width,
            delay=delay,
            laser_phase=values.get("laser_phase", 0.0),
        )
    except ParseError:
        raise
    except Exception as exc:  # invariant violation: cite the likeliest line
        line = None
        for key in ("width", "delay", "total_time", "detuning", "reference_rabi"):
            if key in lines_seen:
                line = lines_seen[key]
                break
        raise ParseError(str(exc), line=line) from exc

    options = dict(DEFAULT_OPTIONS)
    for key in PLAIN_KEYS:
        if key in values and key != "laser_phase":
            options[key] = values[key]
    return pulse, system, options


def _format(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _atomic_write(path: Path, data: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    """Write named columns as CSV with round-trip float formatting."""
    if len(header) != len(columns):
        raise ValueError("header and column counts differ")
    rows = zip(*columns)
    body = "\n".join(",".join(_format(v) for v in row) for row in rows)
    _atomic_write(Path(path), ",".join(header) + "\n" + body + "\n")


def write_metadata(path: Path, payload: dict) -> None:
    """Write campaign metadata (config snapshot, tolerances, diagnostics)."""

    def default(obj):
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, (np.floating, np.integer)):
            return obj.item()
        if dataclasses.is_dataclass(obj):
            return dataclasses.asdict(obj)
        return str(obj)

    _atomic_write(Path(path), json.dumps(payload, indent=2, sort_keys=True, default=default) + "\n")


def trajectory_columns(traj, include_bloch: bool = True):
    """Header and columns for a trajectory CSV (t, populations, Bloch)."""
    header = ["t"] + [f"p{i + 1}" for i in range(traj.dim)]
    columns = [traj.times] + [traj.populations[:, i] for i in range(traj.dim)]
    if include_bloch and traj.dim == 2:
        bloch = traj.bloch
        header += ["nx", "ny", "nz"]
        columns += [bloch[:, 0], bloch[:, 1], bloch[:, 2]]
    return header, columns
