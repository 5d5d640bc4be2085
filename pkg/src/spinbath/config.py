"""Run configuration and CSV output.

A RunConfig carries everything a subcommand needs: physics and bath
parameters at friendly boundary units (mT, Hz, microseconds), figure grid
definitions, and execution settings.  Values come from built-in defaults,
optionally overridden by an INI file, optionally overridden again by
command-line flags (flag > file > default).

CSV files open with '#'-prefixed metadata lines echoing the full config,
the seed, and the package version, so any output file documents the run
that produced it and can be reproduced byte-identically.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass

from .bath import BathConfig, default_species
from .constants import DEFAULT_G_PAR, DEFAULT_G_PERP_RATIO, TWO_PI
from .engine import Model
from .physics import ElectronParams
from .sequences import INTERMEDIATE_MODES

BACKENDS = ("semiclassical", "exact")


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one CLI run (boundary units, not SI)."""

    # [run]
    seed: int = 1234
    shots: int = 20000
    workers: int = 1
    backend: str = "semiclassical"
    out: str | None = None

    # [physics]
    b_ext_mt: float = 200.0
    g_par: float = DEFAULT_G_PAR
    g_perp_ratio: float = DEFAULT_G_PERP_RATIO
    knight_rms_hz: float = 8000.0

    # [bath]
    macro_spins_per_species: int = 32
    rms_transverse_mt: float = 0.3
    rms_longitudinal_mt: float = 2.0
    frequency_spread: float = 1.0e-3
    knight_weight_distribution: str = "exponential-envelope"

    # [fig1d]  echo sweep
    fig1d_tau_min_us: float = 0.1
    fig1d_tau_max_us: float = 8.1
    fig1d_points: int = 81

    # [fig1e]  covariance vs delay, several tau_echo traces
    fig1e_tau_echo_traces_us: tuple[float, ...] = (2.0, 2.73, 3.42, 6.84)
    fig1e_delay_min_us: float = 6.9
    fig1e_delay_max_us: float = 10.4
    fig1e_points: int = 71

    # [fig2b]  covariance vs delay per intermediate mode
    fig2b_tau_echo_us: float = 2.0
    fig2b_delay_min_us: float = 17.6
    fig2b_delay_max_us: float = 19.3
    fig2b_points: int = 35
    fig2b_modes: tuple[str, ...] = ("lock_singlet", "updown", "updown_pi")
    fig2b_pulse_angle_error_rms: float = 1.0

    # [fig2]  amplitude sweeps (fig2c calibration, fig2d covariance)
    fig2_tau_echo_us: float = 2.734
    fig2_tau_delay_us: float = 22.3
    fig2_amp_min: float = 0.0
    fig2_amp_max: float = 4.4
    fig2_points: int = 45

    # [verify]
    verify_shots: int = 100_000

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.verify_shots < 1:
            raise ValueError("verify_shots must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}; "
                             f"valid backends: {', '.join(BACKENDS)}")
        for name in ("fig1d_points", "fig1e_points", "fig2b_points",
                     "fig2_points"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.fig1e_tau_echo_traces_us:
            raise ValueError("fig1e needs at least one tau_echo trace")
        if not self.fig2b_modes:
            raise ValueError("fig2b needs at least one mode")
        for mode in self.fig2b_modes:
            if mode not in INTERMEDIATE_MODES:
                raise ValueError(
                    f"unknown mode {mode!r}; valid modes: "
                    f"{', '.join(INTERMEDIATE_MODES)}")

    def model(self) -> Model:
        """Semiclassical model in SI units."""
        species = default_species(
            rms_transverse_total=self.rms_transverse_mt * 1e-3,
            rms_longitudinal_total=self.rms_longitudinal_mt * 1e-3,
            frequency_spread=self.frequency_spread)
        bath = BathConfig(
            species=species, b_ext=self.b_ext_mt * 1e-3,
            macro_spins_per_species=self.macro_spins_per_species,
            knight_rms=TWO_PI * self.knight_rms_hz,
            knight_weight_distribution=self.knight_weight_distribution)
        electron = ElectronParams(g_par=self.g_par,
                                  g_perp_ratio=self.g_perp_ratio,
                                  b_ext=self.b_ext_mt * 1e-3)
        return Model(electron=electron, bath=bath)

    def grid(self, lo: float, hi: float, points: int) -> list[float]:
        if points == 1:
            return [lo]
        step = (hi - lo) / (points - 1)
        return [lo + i * step for i in range(points)]


# INI section for every RunConfig field; fig-prefixed fields drop the
# prefix inside their section ([fig1d] tau_min_us = 0.1).
_SECTION = {"seed": "run", "shots": "run", "workers": "run",
            "backend": "run", "out": "run",
            "b_ext_mt": "physics", "g_par": "physics",
            "g_perp_ratio": "physics", "knight_rms_hz": "physics",
            "macro_spins_per_species": "bath", "rms_transverse_mt": "bath",
            "rms_longitudinal_mt": "bath", "frequency_spread": "bath",
            "knight_weight_distribution": "bath",
            "verify_shots": "verify"}


def _section_key(field_name: str) -> tuple[str, str]:
    if field_name in _SECTION:
        key = field_name
        if field_name == "verify_shots":
            key = "shots"
        return _SECTION[field_name], key
    prefix, _, rest = field_name.partition("_")
    return prefix, rest


def _parse_value(text: str, fld: dataclasses.Field):
    text = text.strip()
    if fld.type in ("int", int):
        return int(text)
    if fld.type in ("float", float):
        return float(text)
    if fld.type.startswith("tuple[float"):
        return tuple(float(p) for p in text.split(",") if p.strip())
    if fld.type.startswith("tuple[str"):
        return tuple(p.strip() for p in text.split(",") if p.strip())
    if fld.type.startswith("str | None"):
        return text or None
    return text


def load_config(path: str | None = None, **overrides) -> RunConfig:
    """Build a RunConfig from defaults, an optional INI file, and keyword
    overrides (in increasing precedence).  Unknown file keys are errors."""
    values: dict = {}
    if path is not None:
        parser = configparser.ConfigParser()
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
        lookup = {_section_key(f.name): f for f in
                  dataclasses.fields(RunConfig)}
        for section in parser.sections():
            for key, text in parser.items(section):
                fld = lookup.get((section, key))
                if fld is None:
                    raise ValueError(
                        f"unknown config key [{section}] {key}")
                values[fld.name] = _parse_value(text, fld)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def config_header(config: RunConfig, command: str,
                  version: str) -> list[str]:
    """Metadata lines ('#'-prefixed) echoing the full run provenance.

    Worker count and output path are omitted: neither affects the numbers,
    and the same run must produce byte-identical files regardless of them.
    """
    lines = [f"# spinbath {version}", f"# command = {command}"]
    for f in dataclasses.fields(RunConfig):
        if f.name in ("workers", "out"):
            continue
        section, key = _section_key(f.name)
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            value = ", ".join(str(v) for v in value)
        lines.append(f"# [{section}] {key} = {value}")
    return lines


def format_cell(value) -> str:
    """Stable, round-trippable cell text ('.' decimal, no locale)."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            raise ValueError("NaN in CSV output")
        return repr(value)
    return str(value)


def write_csv(fh, header_lines: list[str], columns: list[str],
              rows: list[tuple]) -> None:
    """Comma-separated, LF endings, metadata lines first."""
    for line in header_lines:
        fh.write(line + "\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        if len(row) != len(columns):
            raise ValueError("row length does not match columns")
        fh.write(",".join(format_cell(v) for v in row) + "\n")
