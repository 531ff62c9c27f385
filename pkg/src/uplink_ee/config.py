"""Run configuration: INI-style files with defaults for every field.

Sections: [propagation], [hardware], [scenario], [output].  Watt-valued
hardware fields are converted to Joule/symbol with the symbol time at
load, and the reference propagation loss is given in dB.  An absent file
or section falls back to the built-in defaults, so a bare SINR target on
the command line is a complete configuration.

Note on the per-antenna circuit energy default: 0.2 W reproduces every
reported operating point of the reference numerical study; see README.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from .model import HardwareModel, ParameterError, PropagationModel


class ConfigError(ValueError):
    """Malformed configuration file or field."""


DEFAULTS = {
    "propagation": {
        "alpha": "3.76",
        "omega_db": "130",
        "noise": "1e-20",
        "block_len": "400",
        "symbol_time": "5e-8",
    },
    "hardware": {
        "eta": "0.39",
        "c0_watt": "10",
        "c1_watt": "0.1",
        "d0_watt": "0.2",
        "d1_joule_per_symbol": "1.56e-10",
    },
    "scenario": {
        "gamma": "3",
        "m": "",
        "k": "",
        "beta": "",
        "rho": "",
        "lambda": "",
        "lambda_grid": "0.1:100:20:log",
        "mu": "",
        "mu_grid": "1e2:1e5:7:log",
        "m_grid": "10:200:39:lin",
        "k_grid": "1:20:20:lin",
        "m_max": "512",
        "start_m": "20",
        "start_k": "1",
        "realization_count": "100000",
        "window_radius": "",
        "seed": "42",
    },
    "output": {
        "csv": "",
        "precision": "6",
    },
}


@dataclass
class RunConfig:
    propagation: PropagationModel
    hardware: HardwareModel
    symbol_time: float
    scenario: dict = field(default_factory=dict)
    csv_path: str = ""
    precision: int = 6
    defaulted: list = field(default_factory=list)   # keys that fell back to defaults


def parse_grid(spec: str) -> list:
    """Grid specs: 'start:stop:count[:log|lin]' or a comma list."""
    spec = spec.strip()
    if not spec:
        raise ConfigError("empty grid specification")
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError(f"bad grid spec {spec!r}: want start:stop:count[:log|lin]")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad grid spec {spec!r}: {exc}") from exc
        mode = parts[3] if len(parts) == 4 else "lin"
        if count < 1:
            raise ConfigError(f"bad grid spec {spec!r}: count must be positive")
        if count == 1:
            return [start]
        if mode == "log":
            if start <= 0 or stop <= 0:
                raise ConfigError(f"log grid needs positive endpoints: {spec!r}")
            lo, hi = math.log(start), math.log(stop)
            return [math.exp(lo + (hi - lo) * i / (count - 1)) for i in range(count)]
        if mode == "lin":
            return [start + (stop - start) * i / (count - 1) for i in range(count)]
        raise ConfigError(f"bad grid mode {mode!r} in {spec!r}")
    try:
        return [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad grid list {spec!r}: {exc}") from exc


def _float(section, key, raw) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not numeric") from exc


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Read a config file (or pure defaults) into a RunConfig.

    `overrides` maps 'section.key' to string values, applied last (used
    for command-line flags like --gamma and --seed).
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",))
    present = set()
    if path:
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"config parse error: {exc}") from exc
        for sec in parser.sections():
            if sec not in DEFAULTS:
                raise ConfigError(f"unknown config section [{sec}]")
            for key in parser[sec]:
                if key not in DEFAULTS[sec]:
                    raise ConfigError(f"unknown key {key!r} in section [{sec}]")
                present.add(f"{sec}.{key}")

    values = {sec: dict(defaults) for sec, defaults in DEFAULTS.items()}
    for sec in parser.sections():
        values[sec].update(parser[sec])
    for dotted, val in (overrides or {}).items():
        sec, key = dotted.split(".", 1)
        values[sec][key] = str(val)
        present.add(dotted)

    defaulted = [
        f"{sec}.{key}"
        for sec, defaults in DEFAULTS.items()
        for key in defaults
        if f"{sec}.{key}" not in present and defaults[key] != ""
    ]

    p = values["propagation"]
    tau = _float("propagation", "symbol_time", p["symbol_time"])
    if tau <= 0:
        raise ConfigError("symbol_time must be positive")
    try:
        prop = PropagationModel(
            alpha=_float("propagation", "alpha", p["alpha"]),
            omega=10 ** (_float("propagation", "omega_db", p["omega_db"]) / 10),
            noise=_float("propagation", "noise", p["noise"]),
            block_len=int(_float("propagation", "block_len", p["block_len"])),
        )
        h = values["hardware"]
        hw = HardwareModel(
            eta=_float("hardware", "eta", h["eta"]),
            c0=_float("hardware", "c0_watt", h["c0_watt"]) * tau,
            c1=_float("hardware", "c1_watt", h["c1_watt"]) * tau,
            d0=_float("hardware", "d0_watt", h["d0_watt"]) * tau,
            d1=_float("hardware", "d1_joule_per_symbol", h["d1_joule_per_symbol"]),
        )
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc

    out = values["output"]
    return RunConfig(
        propagation=prop,
        hardware=hw,
        symbol_time=tau,
        scenario=dict(values["scenario"]),
        csv_path=out["csv"],
        precision=int(_float("output", "precision", out["precision"])),
        defaulted=sorted(defaulted),
    )


def scenario_float(cfg: RunConfig, key: str, fallback: float | None = None) -> float | None:
    raw = cfg.scenario.get(key, "")
    if raw == "":
        return fallback
    if raw.strip().lower() in ("inf", "infinity"):
        return math.inf
    return _float("scenario", key, raw)
