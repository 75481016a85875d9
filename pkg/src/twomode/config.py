"""Run configuration: INI-style config file with CLI flag overrides.

One human-readable key=value document drives every run; command-line flags
mirror the config keys exactly and take precedence.  The resolved
configuration has a canonical dump whose hash is embedded in output files,
so identical configs are guaranteed to mean identical runs.
"""

from __future__ import annotations

import configparser
import hashlib
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .model import ModelParams

SWEEPABLE = ("omega", "w", "g", "lambda", "nu_prime", "t")


class ConfigError(ValueError):
    """Malformed configuration file or flag value."""


@dataclass(frozen=True)
class SweepSpec:
    param: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.param not in SWEEPABLE:
            raise ConfigError(
                f"sweep parameter {self.param!r} not in {', '.join(SWEEPABLE)}"
            )
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ConfigError("sweep bounds must be finite")
        if self.points < 2:
            raise ConfigError(f"sweep needs at least 2 points, got {self.points}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    cutoff: int | None = None  # None = auto
    sweep: SweepSpec | None = None
    time_max: float | None = None
    time_points: int = 200
    jobs: int = 1
    out: str | None = None
    fmt: str = "csv"
    with_fock_oracle: bool = False
    report: str | None = None
    entropy_unit: str = "nats"

    def canonical_dump(self) -> str:
        m = self.model
        items = {
            "model.omega": repr(m.omega),
            "model.w": repr(m.w),
            "model.g": repr(m.g),
            "model.lambda": repr(m.lam),
            "model.nu-prime": repr(m.nu_prime),
            "run.cutoff": "auto" if self.cutoff is None else str(self.cutoff),
            "run.time-max": "" if self.time_max is None else repr(self.time_max),
            "run.time-points": str(self.time_points),
            "run.entropy-unit": self.entropy_unit,
            "run.with-fock-oracle": str(self.with_fock_oracle).lower(),
            "sweep": ""
            if self.sweep is None
            else f"{self.sweep.param}:{self.sweep.start!r}:{self.sweep.stop!r}:{self.sweep.points}",
            "output.format": self.fmt,
        }
        return "\n".join(f"{k}={v}" for k, v in sorted(items.items()))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_dump().encode()).hexdigest()[:16]


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: not a number") from exc


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: not an integer") from exc


def parse_sweep_flag(raw: str) -> SweepSpec:
    """Parse 'name:start:stop:points'."""
    parts = raw.split(":")
    if len(parts) != 4:
        raise ConfigError(f"--sweep needs name:start:stop:points, got {raw!r}")
    name, start, stop, points = parts
    try:
        return SweepSpec(name, float(start), float(stop), int(points))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"--sweep {raw!r}: {exc}") from exc


_MODEL_KEYS = {"omega", "w", "g", "lambda", "nu-prime"}
_RUN_KEYS = {"cutoff", "jobs", "time-max", "time-points", "entropy-unit"}
_SWEEP_KEYS = {"param", "start", "stop", "points"}
_OUTPUT_KEYS = {"out", "format", "report", "with-fock-oracle"}


def load_config_file(path: str) -> dict:
    """Read an INI config into a flat {section.key: raw string} map."""
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc
    known = {
        "model": _MODEL_KEYS,
        "run": _RUN_KEYS,
        "sweep": _SWEEP_KEYS,
        "output": _OUTPUT_KEYS,
    }
    flat: dict[str, str] = {}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"unknown config section [{section}] in {path}")
        for key, value in parser.items(section):
            if key not in known[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}] of {path}")
            flat[f"{section}.{key}"] = value
    return flat


def default_jobs() -> int:
    env = os.environ.get("TWOMODE_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"TWOMODE_JOBS = {env!r}: not an integer") from exc
    return os.cpu_count() or 1


def resolve_config(file_values: dict, flag_values: dict) -> RunConfig:
    """Merge config-file values and CLI flags (flags win) into a RunConfig."""

    def pick(section_key: str, flag_key: str):
        if flag_values.get(flag_key) is not None:
            return flag_values[flag_key]
        return file_values.get(section_key)

    def num(section_key: str, flag_key: str, default: float) -> float:
        raw = pick(section_key, flag_key)
        if raw is None:
            return default
        if isinstance(raw, str):
            return _parse_float(*section_key.split("."), raw)
        return float(raw)

    try:
        model = ModelParams(
            omega=num("model.omega", "omega", 1.0),
            w=num("model.w", "w", 0.0),
            g=num("model.g", "g", 0.01),
            lam=num("model.lambda", "lambda", 0.0),
            nu_prime=num("model.nu-prime", "nu_prime", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    cutoff_raw = pick("run.cutoff", "cutoff")
    cutoff: int | None
    if cutoff_raw is None or str(cutoff_raw) == "auto":
        cutoff = None
    else:
        cutoff = _parse_int("run", "cutoff", str(cutoff_raw))
        if cutoff < 0:
            raise ConfigError(f"cutoff must be >= 0, got {cutoff}")

    sweep: SweepSpec | None = None
    if flag_values.get("sweep") is not None:
        sweep = parse_sweep_flag(flag_values["sweep"])
    elif any(k.startswith("sweep.") for k in file_values):
        missing = [k for k in _SWEEP_KEYS if f"sweep.{k}" not in file_values]
        if missing:
            raise ConfigError(f"[sweep] section missing keys: {', '.join(missing)}")
        sweep = SweepSpec(
            file_values["sweep.param"],
            _parse_float("sweep", "start", file_values["sweep.start"]),
            _parse_float("sweep", "stop", file_values["sweep.stop"]),
            _parse_int("sweep", "points", file_values["sweep.points"]),
        )

    time_max_raw = pick("run.time-max", "time_max")
    time_max = None if time_max_raw is None else (
        _parse_float("run", "time-max", str(time_max_raw))
        if isinstance(time_max_raw, str)
        else float(time_max_raw)
    )
    time_points = int(num("run.time-points", "time_points", 200))
    if time_points < 2:
        raise ConfigError(f"time-points must be >= 2, got {time_points}")

    jobs_raw = pick("run.jobs", "jobs")
    if jobs_raw is None:
        jobs = default_jobs()
    else:
        jobs = _parse_int("run", "jobs", str(jobs_raw))
        if jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {jobs}")

    fmt = str(pick("output.format", "format") or "csv")
    if fmt != "csv":
        raise ConfigError(f"unsupported output format {fmt!r} (only csv)")

    unit = str(pick("run.entropy-unit", "entropy_unit") or "nats")
    if unit not in ("nats", "bits"):
        raise ConfigError(f"entropy-unit must be nats or bits, got {unit!r}")

    oracle_raw = pick("output.with-fock-oracle", "with_fock_oracle")
    if isinstance(oracle_raw, str):
        with_oracle = oracle_raw.strip().lower() in ("1", "true", "yes", "on")
    else:
        with_oracle = bool(oracle_raw)

    return RunConfig(
        model=model,
        cutoff=cutoff,
        sweep=sweep,
        time_max=time_max,
        time_points=time_points,
        jobs=jobs,
        out=pick("output.out", "out"),
        fmt=fmt,
        with_fock_oracle=with_oracle,
        report=pick("output.report", "report"),
        entropy_unit=unit,
    )
