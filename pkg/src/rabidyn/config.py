"""Scenario configuration: flat ``key = value`` files.

Lines are ``key = value`` with ``#`` comments and blank lines ignored.
Dotted keys group related settings (``kernel.type``, ``eps.0``).  Parsing
is strict on physics parameters: a missing or mis-typed ``dt``, order,
lag, weight or initial state is a named error, never a silent default.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .core import DomainError
from .delay import (
    BlendWeights,
    DiracKernel,
    ErlangKernel,
    ExponentialKernel,
    Kernel,
    UniformKernel,
)

__all__ = ["ConfigError", "ScenarioConfig", "parse_config", "load_config"]

SYSTEMS = (
    "classical",
    "metriplectic-first",
    "metriplectic-second",
    "literal38",
    "literal10",
    "delay",
    "delay-revised",
    "fractional",
    "fractional-delay",
)

_DELAY_SYSTEMS = ("delay", "delay-revised", "fractional-delay")
_FRACTIONAL_SYSTEMS = ("fractional", "fractional-delay")

MONITOR_NAMES = ("h1", "c1", "h3")


class ConfigError(ValueError):
    """Raised for any malformed, missing or unknown configuration entry."""


@dataclass(frozen=True)
class ScenarioConfig:
    system: str
    dt: float
    t_end: float
    x0: Optional[tuple] = None
    m: Optional[float] = None
    alpha: Optional[float] = None
    kernel: Optional[Kernel] = None
    weights: Optional[BlendWeights] = None
    mode: str = "constructed"
    monitors: tuple = ()
    seed: int = 0
    output_path: Optional[str] = None
    output_format: str = "csv"
    figure: bool = False
    figure_pair: tuple = (2, 3)
    region: Optional[tuple] = None


def _parse_lines(text: str) -> dict:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def _take_float(entries: dict, key: str, required: bool = False) -> Optional[float]:
    if key not in entries:
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return None
    raw = entries.pop(key)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected a real number, got {raw!r}") from None


def _take_int(entries: dict, key: str, default: Optional[int] = None) -> Optional[int]:
    if key not in entries:
        return default
    raw = entries.pop(key)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from None


def _take_triple(entries: dict, key: str, required: bool = False) -> Optional[tuple]:
    if key not in entries:
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return None
    raw = entries.pop(key)
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"key {key!r}: expected three comma-separated numbers, got {raw!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ConfigError(f"key {key!r}: expected three comma-separated numbers, got {raw!r}") from None


def _take_weights(entries: dict, prefix: str) -> tuple:
    vals = []
    for i in range(4):
        key = f"{prefix}.{i}"
        if key not in entries:
            raise ConfigError(f"missing required key {key!r}")
        raw = entries.pop(key)
        try:
            vals.append(float(raw))
        except ValueError:
            raise ConfigError(f"key {key!r}: expected a real number, got {raw!r}") from None
    return tuple(vals)


def _take_kernel(entries: dict) -> Kernel:
    if "kernel.type" not in entries:
        raise ConfigError("missing required key 'kernel.type'")
    ktype = entries.pop("kernel.type")
    if ktype == "uniform":
        a = _take_float(entries, "kernel.a", required=True)
        tau = _take_float(entries, "kernel.tau", required=True)
        try:
            return UniformKernel(a=a, tau=tau)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    if ktype in ("exponential", "erlang"):
        alpha = _take_float(entries, "kernel.alpha", required=True)
        cls = ExponentialKernel if ktype == "exponential" else ErlangKernel
        try:
            return cls(alpha=alpha)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    if ktype == "dirac":
        tau = _take_float(entries, "kernel.tau", required=True)
        try:
            return DiracKernel(tau=tau)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    raise ConfigError(
        f"key 'kernel.type': unknown kernel {ktype!r}; "
        "expected uniform, exponential, erlang or dirac"
    )


def parse_config(text: str) -> ScenarioConfig:
    entries = _parse_lines(text)

    if "system" not in entries:
        raise ConfigError("missing required key 'system'")
    system = entries.pop("system")
    if system not in SYSTEMS:
        raise ConfigError(f"key 'system': unknown system {system!r}; expected one of {', '.join(SYSTEMS)}")

    dt = _take_float(entries, "dt", required=True)
    if dt <= 0:
        raise ConfigError("key 'dt': must be positive")
    t_end = _take_float(entries, "t_end", required=True)
    if t_end <= 0:
        raise ConfigError("key 't_end': must be positive")

    x0 = _take_triple(entries, "x0")
    m = _take_float(entries, "m")

    alpha = None
    if system in _FRACTIONAL_SYSTEMS:
        alpha = _take_float(entries, "alpha", required=True)
        if not 0.0 < alpha <= 1.0:
            raise ConfigError(f"key 'alpha': order must lie in (0, 1], got {alpha}")
    elif "alpha" in entries:
        raise ConfigError(f"key 'alpha' is only meaningful for fractional systems, not {system!r}")

    kernel = None
    weights = None
    if system in _DELAY_SYSTEMS:
        if system == "fractional-delay":
            tau = _take_float(entries, "tau", required=True)
            try:
                kernel = DiracKernel(tau=tau)
            except DomainError as exc:
                raise ConfigError(str(exc)) from None
        else:
            kernel = _take_kernel(entries)
        try:
            weights = BlendWeights(eps=_take_weights(entries, "eps"), delta=_take_weights(entries, "delta"))
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    else:
        for key in list(entries):
            if key.startswith(("kernel.", "eps.", "delta.")) or key == "tau":
                raise ConfigError(f"key {key!r} is only meaningful for delayed systems, not {system!r}")

    mode = entries.pop("mode", "constructed")
    if mode not in ("constructed", "literal"):
        raise ConfigError(f"key 'mode': expected constructed or literal, got {mode!r}")

    monitors: tuple = ()
    if "monitors" in entries:
        raw = entries.pop("monitors")
        names = tuple(p.strip() for p in raw.split(",") if p.strip())
        for name in names:
            if name not in MONITOR_NAMES:
                raise ConfigError(
                    f"key 'monitors': unknown monitor {name!r}; expected from {', '.join(MONITOR_NAMES)}"
                )
        monitors = names

    seed = _take_int(entries, "seed", default=0)
    output_path = entries.pop("output.path", None)
    output_format = entries.pop("output.format", "csv")
    if output_format not in ("csv", "json"):
        raise ConfigError(f"key 'output.format': expected csv or json, got {output_format!r}")

    figure = False
    if "figure" in entries:
        raw = entries.pop("figure")
        if raw not in ("true", "false"):
            raise ConfigError(f"key 'figure': expected true or false, got {raw!r}")
        figure = raw == "true"
    figure_pair = (2, 3)
    if "figure.pair" in entries:
        raw = entries.pop("figure.pair")
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 2 or not all(p in ("1", "2", "3") for p in parts) or parts[0] == parts[1]:
            raise ConfigError(f"key 'figure.pair': expected two distinct indices from 1,2,3, got {raw!r}")
        figure_pair = (int(parts[0]), int(parts[1]))

    region = None
    if any(k.startswith("region.") for k in entries):
        vals = {}
        for part in ("re_min", "re_max", "im_min", "im_max"):
            vals[part] = _take_float(entries, f"region.{part}", required=True)
        region = (vals["re_min"], vals["re_max"], vals["im_min"], vals["im_max"])

    if entries:
        raise ConfigError(f"unknown key {sorted(entries)[0]!r}")

    return ScenarioConfig(
        system=system,
        dt=dt,
        t_end=t_end,
        x0=x0,
        m=m,
        alpha=alpha,
        kernel=kernel,
        weights=weights,
        mode=mode,
        monitors=monitors,
        seed=seed,
        output_path=output_path,
        output_format=output_format,
        figure=figure,
        figure_pair=figure_pair,
        region=region,
    )


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    return parse_config(text)
