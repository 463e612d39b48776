"""Run configuration: INI-style ``key = value`` files with sections.

Example::

    [potential]
    kind = morse
    V1 = 8
    V2 = 8
    alpha = 1

    [channel]
    ell = 0

    [thermo]
    t_min = 0.01
    t_max = 100
    points = 200
    spacing = log
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from morse_thermo.optics import FieldSpec
from morse_thermo.spectrum import GridSpec, PotentialKind, PotentialSpec, cusp_map
from morse_thermo.thermo import ThermoMethod


class ConfigError(ValueError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line


@dataclass(frozen=True)
class SweepSpec:
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("sweep needs at least one point")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.points > 1 and not self.stop > self.start:
            raise ValueError(f"sweep needs max > min, got [{self.start}, {self.stop}]")
        if self.spacing == "log" and self.start <= 0:
            raise ValueError("log spacing needs a positive minimum")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class OpticsConfig:
    field: FieldSpec = field(default_factory=FieldSpec)
    lower: int = 0
    upper: int = 1
    # None means "centre the sweep on the transition"
    sweep: SweepSpec | None = None


@dataclass(frozen=True)
class RunConfig:
    potential: PotentialSpec
    ell: int = 0
    grid: GridSpec = field(default_factory=GridSpec)
    t_sweep: SweepSpec = field(default_factory=lambda: SweepSpec(0.01, 100.0, 200, "log"))
    method: ThermoMethod = ThermoMethod.DISCRETE
    high_t_approx: bool = False
    n_particles: int = 1
    optics: OpticsConfig = field(default_factory=OpticsConfig)
    source: str | None = None


_KNOWN = {
    "potential": {"kind", "v1", "v2", "alpha", "r_e", "mu", "hbar", "k_b", "v0", "a_tilde"},
    "channel": {"ell"},
    "grid": {"z_min", "z_max", "points"},
    "thermo": {"t_min", "t_max", "points", "spacing", "method", "high_t_approx", "n_particles"},
    "optics": {"omega_min", "omega_max", "points", "spacing", "rho_s", "n_r", "intensity",
               "gamma0", "e_static", "e_charge", "c_light", "lower", "upper"},
}


def _line_index(text: str) -> dict[tuple[str, str], int]:
    """Map (section, key) to the 1-based line where the key is set."""
    index: dict[tuple[str, str], int] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"^\[([^\]]+)\]$", line)
        if m:
            section = m.group(1).strip().lower()
            index[(section, "")] = lineno
            continue
        m = re.match(r"^([^=:#;\s][^=:]*?)\s*[=:]", line)
        if m and section is not None:
            index[(section, m.group(1).strip().lower())] = lineno
    return index


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, lines: dict, path: str | None):
        self.parser = parser
        self.lines = lines
        self.path = path

    def error(self, section: str, key: str, message: str) -> ConfigError:
        line = self.lines.get((section, key), self.lines.get((section, "")))
        return ConfigError(f"[{section}] {key}: {message}" if key else f"[{section}] {message}",
                           self.path, line)

    def has(self, section: str, key: str) -> bool:
        return self.parser.has_option(section, key)

    def get(self, section, key, convert, default=None, check=None, why=""):
        if not self.has(section, key):
            return default
        raw = self.parser.get(section, key)
        try:
            value = convert(raw)
        except ValueError as exc:
            raise self.error(section, key, f"cannot parse {raw!r}: {exc}") from None
        if isinstance(value, float) and not math.isfinite(value):
            raise self.error(section, key, f"value must be finite, got {raw!r}")
        if check is not None and not check(value):
            raise self.error(section, key, f"{why} (got {raw!r})")
        return value


def _bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _int(raw: str) -> int:
    value = float(raw)
    if not value.is_integer():
        raise ValueError("expected an integer")
    return int(value)


def _positive(v):
    return v > 0


def parse_config(text: str, path: str | None = None) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str.lower
    try:
        parser.read_string(text, source=path or "<config>")
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError(str(exc).splitlines()[0], path, line) from None
    lines = _line_index(text)
    r = _Reader(parser, lines, path)

    for section in parser.sections():
        name = section.lower()
        if name not in _KNOWN:
            raise r.error(name, "", f"unknown section [{section}]")
        for key in parser.options(section):
            if key not in _KNOWN[name]:
                raise r.error(name, key, "unknown key")
    if not parser.has_section("potential"):
        raise ConfigError("missing [potential] section", path)

    p = "potential"
    kind = r.get(p, "kind", lambda s: PotentialKind(s.strip().lower()),
                 default=PotentialKind.GENERALIZED_MORSE)
    units = dict(
        r_e=r.get(p, "r_e", float, 1.0, _positive, "must be positive"),
        mu=r.get(p, "mu", float, 1.0, _positive, "must be positive"),
        hbar=r.get(p, "hbar", float, 1.0, _positive, "must be positive"),
        k_B=r.get(p, "k_b", float, 1.0, _positive, "must be positive"),
    )
    if kind is PotentialKind.CUSP:
        for key in ("v0", "a_tilde"):
            if not r.has(p, key):
                raise r.error(p, key, "required for kind = cusp")
        V0 = r.get(p, "v0", float)
        A_tilde = r.get(p, "a_tilde", float, check=_positive, why="must be positive")
        potential = cusp_map(V0, A_tilde, PotentialSpec(V1=1.0, V2=0.0, alpha=1.0, **units))
    else:
        for key in ("v1", "v2", "alpha"):
            if not r.has(p, key):
                raise r.error(p, key, "required for kind = morse")
        V1 = r.get(p, "v1", float, check=_positive, why="must be positive for the Morse potential")
        V2 = r.get(p, "v2", float)
        alpha = r.get(p, "alpha", float, check=_positive, why="must be positive")
        potential = PotentialSpec(V1=V1, V2=V2, alpha=alpha, **units)

    ell = r.get("channel", "ell", _int, 0, lambda v: v >= 0, "must be a non-negative integer")

    g = "grid"
    z_min = r.get(g, "z_min", float, -6.0)
    z_max = r.get(g, "z_max", float, 30.0)
    points = r.get(g, "points", _int, 8001, lambda v: v >= 3, "needs at least 3 points")
    if not z_max > z_min:
        raise r.error(g, "z_max", f"must exceed z_min={z_min}")
    grid = GridSpec(z_min, z_max, points)

    t = "thermo"
    spacing = r.get(t, "spacing", str.strip, "log", lambda v: v in ("linear", "log"),
                    "must be 'linear' or 'log'")
    t_min = r.get(t, "t_min", float, 0.01, _positive, "temperatures must be positive")
    t_max = r.get(t, "t_max", float, 100.0, _positive, "temperatures must be positive")
    t_points = r.get(t, "points", _int, 200, _positive, "must be positive")
    if t_points > 1 and not t_max > t_min:
        raise r.error(t, "t_max", f"must exceed t_min={t_min}")
    method = r.get(t, "method", lambda s: ThermoMethod(s.strip().lower()), ThermoMethod.DISCRETE)
    high_t = r.get(t, "high_t_approx", _bool, False)
    n_particles = r.get(t, "n_particles", _int, 1, _positive, "must be a positive integer")

    o = "optics"
    field_kwargs = {}
    for key, attr, check, why in (
        ("rho_s", "rho_s", _positive, "must be positive"),
        ("n_r", "n_r", lambda v: v >= 1, "must be >= 1"),
        ("intensity", "intensity", lambda v: v >= 0, "must be >= 0"),
        ("gamma0", "gamma0", _positive, "must be positive"),
        ("e_static", "E_static", lambda v: v >= 0, "must be >= 0"),
        ("e_charge", "e_charge", _positive, "must be positive"),
        ("c_light", "c_light", _positive, "must be positive"),
    ):
        value = r.get(o, key, float, None, check, why)
        if value is not None:
            field_kwargs[attr] = value
    field_spec = FieldSpec(hbar=units["hbar"], **field_kwargs)
    lower = r.get(o, "lower", _int, 0, lambda v: v >= 0, "must be >= 0")
    upper = r.get(o, "upper", _int, 1, lambda v: v >= 0, "must be >= 0")
    if upper == lower:
        raise r.error(o, "upper", "must differ from lower")
    sweep = None
    if r.has(o, "omega_min") or r.has(o, "omega_max"):
        if not (r.has(o, "omega_min") and r.has(o, "omega_max")):
            raise r.error(o, "omega_max" if r.has(o, "omega_min") else "omega_min",
                          "omega_min and omega_max must be given together")
        try:
            sweep = SweepSpec(
                r.get(o, "omega_min", float),
                r.get(o, "omega_max", float),
                r.get(o, "points", _int, 2001, _positive, "must be positive"),
                r.get(o, "spacing", str.strip, "linear"),
            )
        except ValueError as exc:
            raise r.error(o, "omega_min", str(exc)) from None

    return RunConfig(
        potential=potential,
        ell=ell,
        grid=grid,
        t_sweep=SweepSpec(t_min, t_max, t_points, spacing),
        method=method,
        high_t_approx=high_t,
        n_particles=n_particles,
        optics=OpticsConfig(field=field_spec, lower=lower, upper=upper, sweep=sweep),
        source=path,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", str(path)) from None
    return parse_config(text, str(path))
