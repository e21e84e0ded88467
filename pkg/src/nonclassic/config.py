"""Run configuration: TOML parsing, validation, and cutoff resolution.

A run file is TOML with the following shape (all blocks optional, defaults
shown in the README):

    process = "five_wave_mixing"        # preset name, or a table:
    # [process]
    # m = 3
    # n = 2
    # omega1 = 1.0
    # omega2 = 1.5

    g = 1e-3
    alpha_sq = 1.0
    l_max = 3
    modes = ["A", "B"]
    seed = 2024
    cutoffs = "auto"                    # or [cutoffs] max_a / max_b
    [times]
    start = 0.125
    stop = 1.0
    count = 4
    spacing = "log"                     # or "linear"
    [outputs]
    csv = "run.csv"
    summary = "summary.txt"
    plot = "plot.gp"                    # optional gnuplot script

Every resolved value is echoed into the output headers so a run is fully
reproducible from its own artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .fock import FockCutoffs, Mode, suggested_pump_cutoff
from .processes import PRESETS, ProcessSpec


class ConfigError(ValueError):
    """The run configuration is malformed; maps to CLI exit code 2."""


@dataclass(frozen=True)
class TimeGrid:
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("times.start and times.stop must be finite")
        if self.start < 0:
            raise ConfigError("times.start must be >= 0")
        if self.count < 1:
            raise ConfigError("times.count must be >= 1")
        if self.count > 1 and self.stop <= self.start:
            raise ConfigError("times.stop must exceed times.start")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"times.spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and self.start <= 0:
            raise ConfigError("log spacing needs times.start > 0")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one CLI run (cutoffs may still be 'auto')."""

    process_name: str  # preset name or "custom"
    explicit_process: tuple[int, int, float, float] | None  # (m, n, omega1, omega2)
    g: float
    alpha_sq: float
    times: TimeGrid
    cutoffs: FockCutoffs | None  # None means auto
    l_max: int = 3
    modes: tuple[Mode, ...] = (Mode.A, Mode.B)
    seed: int = 2024
    out_csv: str = "run.csv"
    out_summary: str = "summary.txt"
    out_plot: str | None = None

    def spec(self) -> ProcessSpec:
        if self.explicit_process is not None:
            m, n, omega1, omega2 = self.explicit_process
            return ProcessSpec(omega1=omega1, omega2=omega2, g=self.g, m=m, n=n, name="custom")
        return PRESETS[self.process_name](self.g)

    def resolved_cutoffs(self, spec: ProcessSpec | None = None) -> FockCutoffs:
        """Explicit cutoffs, or the auto heuristic.

        Auto gives the pump enough room for the coherent tail plus one
        exchange of headroom, and the signal room for a handful of
        conversions: max_a = ceil(lam + 10 sqrt(lam) + 15) + m and
        max_b = 4n + 10 (the signal starts in vacuum and fills in steps
        of n).
        """
        if self.cutoffs is not None:
            return self.cutoffs
        spec = spec or self.spec()
        max_a = suggested_pump_cutoff(self.alpha_sq) + spec.m
        max_b = 4 * spec.n + 10
        return FockCutoffs(max_a=max_a, max_b=max_b)

    def metadata_lines(self, spec: ProcessSpec, cutoffs: FockCutoffs) -> list[str]:
        """Fully resolved config as sorted key = value lines for headers."""
        items = {
            "alpha_sq": repr(self.alpha_sq),
            "cutoffs.max_a": cutoffs.max_a,
            "cutoffs.max_b": cutoffs.max_b,
            "g": repr(self.g),
            "l_max": self.l_max,
            "modes": "".join(m.value for m in self.modes),
            "process.m": spec.m,
            "process.n": spec.n,
            "process.name": spec.name,
            "process.omega1": repr(spec.omega1),
            "process.omega2": repr(spec.omega2),
            "seed": self.seed,
            "times.count": self.times.count,
            "times.spacing": self.times.spacing,
            "times.start": repr(self.times.start),
            "times.stop": repr(self.times.stop),
        }
        return [f"{k} = {v}" for k, v in sorted(items.items())]


_DEFAULTS = {
    "process": "five_wave_mixing",
    "g": 1e-3,
    "alpha_sq": 1.0,
    "l_max": 3,
    "modes": ["A", "B"],
    "seed": 2024,
    "cutoffs": "auto",
    "times": {"start": 0.125, "stop": 1.0, "count": 4, "spacing": "log"},
    "outputs": {"csv": "run.csv", "summary": "summary.txt"},
}


def _as_float(raw: dict, key: str) -> float:
    try:
        value = float(raw[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key} must be a number, got {raw[key]!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {value}")
    return value


def load_raw_config(path: str | Path | None) -> dict:
    """Read a TOML run file (or start from defaults when path is None)."""
    raw = {k: (dict(v) if isinstance(v, dict) else v) for k, v in _DEFAULTS.items()}
    if path is None:
        return raw
    try:
        with open(path, "rb") as fh:
            user = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
    for key, value in user.items():
        if key not in raw and key != "process":
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(value, dict) and isinstance(raw.get(key), dict):
            raw[key] = {**raw[key], **value}
        else:
            raw[key] = value
    return raw


def build_config(raw: dict) -> RunConfig:
    """Validate a raw mapping into a RunConfig; raises ConfigError."""
    process = raw.get("process", "five_wave_mixing")
    explicit: tuple[int, int, float, float] | None = None
    if isinstance(process, str):
        if process not in PRESETS:
            raise ConfigError(
                f"unknown process preset {process!r}; available: {sorted(PRESETS)}"
            )
        name = process
    elif isinstance(process, dict):
        missing = {"m", "n", "omega1", "omega2"} - set(process)
        if missing:
            raise ConfigError(f"explicit process table missing keys: {sorted(missing)}")
        try:
            explicit = (
                int(process["m"]),
                int(process["n"]),
                float(process["omega1"]),
                float(process["omega2"]),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"explicit process table is malformed: {exc}") from exc
        name = "custom"
    else:
        raise ConfigError("process must be a preset name or a table")

    g = _as_float(raw, "g")
    alpha_sq = _as_float(raw, "alpha_sq")
    if g < 0 or alpha_sq < 0:
        raise ConfigError("g and alpha_sq must be >= 0")

    times_raw = raw.get("times", {})
    if not isinstance(times_raw, dict):
        raise ConfigError("times must be a table with start/stop/count/spacing")
    try:
        times = TimeGrid(
            start=float(times_raw.get("start", 0.125)),
            stop=float(times_raw.get("stop", 1.0)),
            count=int(times_raw.get("count", 4)),
            spacing=str(times_raw.get("spacing", "log")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"times table is malformed: {exc}") from exc

    cut_raw = raw.get("cutoffs", "auto")
    if cut_raw == "auto":
        cutoffs = None
    elif isinstance(cut_raw, dict):
        try:
            cutoffs = FockCutoffs(int(cut_raw["max_a"]), int(cut_raw["max_b"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"cutoffs table is malformed: {exc}") from exc
    else:
        raise ConfigError("cutoffs must be 'auto' or a table with max_a/max_b")

    l_max = int(raw.get("l_max", 3))
    if not 1 <= l_max <= 7:
        raise ConfigError(f"l_max must lie in 1..7, got {l_max}")

    modes_raw = raw.get("modes", ["A", "B"])
    try:
        modes = tuple(Mode(m) for m in modes_raw)
    except ValueError as exc:
        raise ConfigError(f"modes must be a subset of ['A', 'B']: {exc}") from exc
    if not modes:
        raise ConfigError("modes must not be empty")

    outputs = raw.get("outputs", {})
    if not isinstance(outputs, dict):
        raise ConfigError("outputs must be a table")

    return RunConfig(
        process_name=name,
        explicit_process=explicit,
        g=g,
        alpha_sq=alpha_sq,
        times=times,
        cutoffs=cutoffs,
        l_max=l_max,
        modes=modes,
        seed=int(raw.get("seed", 2024)),
        out_csv=str(outputs.get("csv", "run.csv")),
        out_summary=str(outputs.get("summary", "summary.txt")),
        out_plot=str(outputs["plot"]) if "plot" in outputs else None,
    )
