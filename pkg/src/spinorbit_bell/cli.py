"""Command-line front end.

Usage:
    spinorbit-bell chsh|noise-scan|mode-pattern|verify --config run.yaml
        [--output PATH] [--format csv|json]

The config is a YAML document; unknown keys are rejected so that typos in
physics parameters fail loudly. Angles accept radian numbers or pi-rational
literals such as ``pi/8`` or ``3pi/4``.

Exit codes: 0 success, 2 config error, 3 truncation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from dataclasses import dataclass

import numpy as np
import yaml

from . import analysis, modes, states, verify
from .apparatus import ChshSettings, DEFAULT_CHSH_SETTINGS
from .errors import ConfigError, SimulationError, TruncationError
from .partitions import BellModeLabel
from .states import Family, StateSpec

SCHEMA_VERSION = 1

_MODES = ("chsh", "noise-scan", "mode-pattern", "verify")

_PI_LITERAL = re.compile(
    r"^\s*(-)?\s*(\d+(?:\.\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$"
)


def parse_angle(value, field: str) -> float:
    """Radians from a number or a pi-rational literal like '3pi/8'."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        m = _PI_LITERAL.match(value)
        if m:
            sign = -1.0 if m.group(1) else 1.0
            num = float(m.group(2)) if m.group(2) else 1.0
            den = float(m.group(3)) if m.group(3) else 1.0
            return sign * num * math.pi / den
        try:
            return float(value)
        except ValueError:
            raise ConfigError(field, f"cannot parse angle {value!r}") from None
    raise ConfigError(field, f"expected an angle, got {type(value).__name__}")


def _parse_complex(value, field: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            raise ConfigError(field, f"cannot parse complex {value!r}") from None
    raise ConfigError(field, "expected a number or a [re, im] pair")


def _require_mapping(doc, field: str) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError(field, "expected a mapping")
    return doc


def _reject_unknown(doc: dict, allowed: set[str], field: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(
            f"{field}.{sorted(unknown)[0]}", "unknown key (strict mode)"
        )


@dataclass(frozen=True)
class ScanGrid:
    alphas: tuple[float, ...]
    betas: tuple[float, ...]


@dataclass(frozen=True)
class PatternSpec:
    label: BellModeLabel
    extent: float
    resolution: int


@dataclass(frozen=True)
class RunConfig:
    mode: str
    state: StateSpec | None
    chsh_settings: ChshSettings
    scan_grid: ScanGrid | None
    pattern: PatternSpec | None
    output: str | None
    format: str


_STATE_KEYS = {
    "family",
    "n",
    "p",
    "u",
    "reflectivity",
    "phi",
    "phase_points",
    "zeta",
    "epsilon",
}


def _parse_state(doc, field: str = "state") -> StateSpec:
    doc = _require_mapping(doc, field)
    _reject_unknown(doc, _STATE_KEYS, field)
    if "family" not in doc:
        raise ConfigError(f"{field}.family", "missing required key")
    try:
        family = Family(doc["family"])
    except ValueError:
        names = ", ".join(f.value for f in Family)
        raise ConfigError(
            f"{field}.family", f"unknown family {doc['family']!r}; one of: {names}"
        ) from None
    kwargs = {}
    if "n" in doc:
        if not isinstance(doc["n"], int) or isinstance(doc["n"], bool) or doc["n"] < 0:
            raise ConfigError(f"{field}.n", "expected a nonnegative integer")
        kwargs["n"] = doc["n"]
    if "p" in doc:
        p = doc["p"]
        if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0 <= p <= 1:
            raise ConfigError(f"{field}.p", f"expected a real in [0, 1], got {p!r}")
        kwargs["p"] = float(p)
    if "u" in doc:
        kwargs["u"] = _parse_complex(doc["u"], f"{field}.u")
    if "reflectivity" in doc:
        r = doc["reflectivity"]
        if not isinstance(r, (int, float)) or isinstance(r, bool) or not 0 <= r <= 1:
            raise ConfigError(f"{field}.reflectivity", f"expected a real in [0, 1], got {r!r}")
        kwargs["reflectivity"] = float(r)
    if "phi" in doc:
        kwargs["phi"] = parse_angle(doc["phi"], f"{field}.phi")
    if "phase_points" in doc:
        k = doc["phase_points"]
        if not isinstance(k, int) or isinstance(k, bool) or k < 5:
            raise ConfigError(f"{field}.phase_points", "expected an integer >= 5")
        kwargs["phase_points"] = k
    if "zeta" in doc:
        kwargs["zeta"] = _parse_complex(doc["zeta"], f"{field}.zeta")
    if "epsilon" in doc:
        eps = doc["epsilon"]
        if not isinstance(eps, (int, float)) or isinstance(eps, bool) or not 0 < eps <= 1e-3:
            raise ConfigError(f"{field}.epsilon", "expected a real in (0, 1e-3]")
        kwargs["epsilon"] = float(eps)
    try:
        return StateSpec(family, **kwargs)
    except SimulationError as exc:
        raise ConfigError(field, str(exc)) from None


def _parse_chsh_settings(doc) -> ChshSettings:
    doc = _require_mapping(doc, "chsh_settings")
    keys = {"alpha", "alpha_prime", "beta", "beta_prime"}
    _reject_unknown(doc, keys, "chsh_settings")
    missing = keys - set(doc)
    if missing:
        raise ConfigError(f"chsh_settings.{sorted(missing)[0]}", "missing required key")
    return ChshSettings(
        parse_angle(doc["alpha"], "chsh_settings.alpha"),
        parse_angle(doc["alpha_prime"], "chsh_settings.alpha_prime"),
        parse_angle(doc["beta"], "chsh_settings.beta"),
        parse_angle(doc["beta_prime"], "chsh_settings.beta_prime"),
    )


def _parse_axis(doc, field: str) -> tuple[float, ...]:
    doc = _require_mapping(doc, field)
    _reject_unknown(doc, {"start", "stop", "points"}, field)
    for key in ("start", "stop", "points"):
        if key not in doc:
            raise ConfigError(f"{field}.{key}", "missing required key")
    points = doc["points"]
    if not isinstance(points, int) or isinstance(points, bool) or points < 1:
        raise ConfigError(f"{field}.points", "expected a positive integer")
    start = parse_angle(doc["start"], f"{field}.start")
    stop = parse_angle(doc["stop"], f"{field}.stop")
    if points == 1:
        return (start,)
    return tuple(np.linspace(start, stop, points))


def _parse_scan_grid(doc) -> ScanGrid:
    doc = _require_mapping(doc, "scan_grid")
    _reject_unknown(doc, {"alpha", "beta"}, "scan_grid")
    for key in ("alpha", "beta"):
        if key not in doc:
            raise ConfigError(f"scan_grid.{key}", "missing required key")
    return ScanGrid(
        _parse_axis(doc["alpha"], "scan_grid.alpha"),
        _parse_axis(doc["beta"], "scan_grid.beta"),
    )


def _parse_pattern(doc) -> PatternSpec:
    doc = _require_mapping(doc, "pattern")
    _reject_unknown(doc, {"label", "extent", "resolution"}, "pattern")
    if "label" not in doc:
        raise ConfigError("pattern.label", "missing required key")
    try:
        label = BellModeLabel(doc["label"])
    except ValueError:
        names = ", ".join(l.value for l in BellModeLabel)
        raise ConfigError(
            "pattern.label", f"unknown label {doc['label']!r}; one of: {names}"
        ) from None
    extent = doc.get("extent", 2.0)
    if not isinstance(extent, (int, float)) or isinstance(extent, bool) or extent <= 0:
        raise ConfigError("pattern.extent", "expected a positive real")
    resolution = doc.get("resolution", 21)
    if not isinstance(resolution, int) or isinstance(resolution, bool) or resolution <= 0:
        raise ConfigError("pattern.resolution", "expected a positive integer")
    return PatternSpec(label, float(extent), resolution)


def parse_config(text: str, mode: str) -> RunConfig:
    """Parse and validate a YAML run configuration for the given mode."""
    if mode not in _MODES:
        raise ConfigError("mode", f"unknown mode {mode!r}")
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"not valid YAML: {exc}") from None
    if doc is None:
        doc = {}
    doc = _require_mapping(doc, "config")
    allowed = {"state", "chsh_settings", "scan_grid", "pattern", "output", "format"}
    _reject_unknown(doc, allowed, "config")

    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output", "expected a path string")
    fmt = doc.get("format", "json" if mode == "chsh" else "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("format", f"expected 'csv' or 'json', got {fmt!r}")

    state = None
    if mode in ("chsh", "noise-scan"):
        if "state" not in doc:
            raise ConfigError("state", "missing required key")
        state = _parse_state(doc["state"])
    elif "state" in doc:
        state = _parse_state(doc["state"])

    chsh_settings = DEFAULT_CHSH_SETTINGS
    if "chsh_settings" in doc:
        chsh_settings = _parse_chsh_settings(doc["chsh_settings"])

    scan_grid = None
    if mode == "noise-scan":
        if "scan_grid" not in doc:
            raise ConfigError("scan_grid", "missing required key")
        scan_grid = _parse_scan_grid(doc["scan_grid"])

    pattern = None
    if mode == "mode-pattern":
        if "pattern" not in doc:
            raise ConfigError("pattern", "missing required key")
        pattern = _parse_pattern(doc["pattern"])

    return RunConfig(mode, state, chsh_settings, scan_grid, pattern, output, fmt)


def _chsh_document(config: RunConfig) -> dict:
    ensemble = states.build(config.state)
    result = analysis.s_parameter(ensemble, config.chsh_settings)
    return {
        "schema_version": SCHEMA_VERSION,
        "state_family": config.state.family.value,
        "settings": {
            "alpha": result.settings.alpha,
            "alpha_prime": result.settings.alpha_prime,
            "beta": result.settings.beta,
            "beta_prime": result.settings.beta_prime,
        },
        "s_value": result.s_value,
        "points": [
            {
                "alpha": pt.settings.alpha,
                "beta": pt.settings.beta,
                "mean_m": pt.mean_m,
                "var_m": pt.var_m,
                "itot": pt.itot,
                "squeezing_ratio": pt.squeezing_ratio,
            }
            for pt in result.points
        ],
    }


def run(config: RunConfig, stdout=None) -> str:
    """Execute a run and return the rendered output document."""
    if config.mode == "chsh":
        doc = _chsh_document(config)
        if config.format == "json":
            return json.dumps(doc, indent=2) + "\n"
        buf = io.StringIO()
        buf.write("alpha,beta,mean_m,var_m,itot,squeezing_ratio\n")
        for pt in doc["points"]:
            buf.write(
                ",".join(
                    f"{pt[k]:.12g}"
                    for k in ("alpha", "beta", "mean_m", "var_m", "itot", "squeezing_ratio")
                )
                + "\n"
            )
        buf.write(f"# s_value,{doc['s_value']:.12g}\n")
        return buf.getvalue()

    if config.mode == "noise-scan":
        ensemble = states.build(config.state)
        points = analysis.settings_scan(
            ensemble, config.scan_grid.alphas, config.scan_grid.betas
        )
        if config.format == "json":
            return (
                json.dumps(
                    {
                        "schema_version": SCHEMA_VERSION,
                        "points": [
                            {
                                "alpha": pt.settings.alpha,
                                "beta": pt.settings.beta,
                                "mean_m": pt.mean_m,
                                "var_m": pt.var_m,
                                "itot": pt.itot,
                            }
                            for pt in points
                        ],
                    },
                    indent=2,
                )
                + "\n"
            )
        buf = io.StringIO()
        analysis.write_scan_csv(points, buf)
        return buf.getvalue()

    if config.mode == "mode-pattern":
        rows = modes.sample_polarization_grid(
            config.pattern.label, config.pattern.extent, config.pattern.resolution
        )
        buf = io.StringIO()
        modes.write_grid_csv(rows, buf)
        return buf.getvalue()

    if config.mode == "verify":
        return verify.format_report(verify.run_verification())

    raise ConfigError("mode", f"unknown mode {config.mode!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spinorbit-bell",
        description="Spin-orbit Bell measurement simulator",
    )
    parser.add_argument("mode", choices=_MODES)
    parser.add_argument("--config", help="YAML run configuration")
    parser.add_argument("--output", help="output path (overrides config)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            try:
                with open(args.config, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"error: cannot read config: {exc}", file=sys.stderr)
                return 4
        elif args.mode == "verify":
            text = ""
        else:
            print("error: --config is required for this mode", file=sys.stderr)
            return 2
        config = parse_config(text, args.mode)
        if args.output is not None:
            config = RunConfig(
                config.mode,
                config.state,
                config.chsh_settings,
                config.scan_grid,
                config.pattern,
                args.output,
                config.format,
            )
        if args.format is not None:
            config = RunConfig(
                config.mode,
                config.state,
                config.chsh_settings,
                config.scan_grid,
                config.pattern,
                config.output,
                args.format,
            )
        rendered = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TruncationError as exc:
        print(f"truncation error: {exc}", file=sys.stderr)
        return 3
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if config.output:
        try:
            with open(config.output, "w", encoding="utf-8") as fh:
                fh.write(rendered)
        except OSError as exc:
            print(f"i/o error: {exc}", file=sys.stderr)
            return 4
    else:
        sys.stdout.write(rendered)

    if config.mode == "verify" and "FAIL" in rendered:
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
