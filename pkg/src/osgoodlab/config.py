"""Scenario files: sectioned ``key = value`` text read with :mod:`configparser`.

Every field is validated when the file is loaded, so a bad scenario fails
with the offending section and key before any computation starts.  See the
README for the full schema.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .grid import FreqGrid
from .modulus import Modulus, parse_modulus
from .operator import Constant, OperatorSpec, parse_profile

__all__ = ["ConfigError", "ScenarioConfig", "load_config", "parse_config", "scenario_path",
           "SCENARIOS"]

SCENARIOS = ("constant.cfg", "cusp_osgood.cfg", "lacunary.cfg")


class ConfigError(ValueError):
    """Malformed or out-of-range scenario field; the message names section and key."""


def _floats(text):
    return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]


@dataclass
class GridBlock:
    xi_max: float
    modes: int
    time_nodes: int

    def frequency_grid(self):
        """``modes`` unit-weight points ``(j + 1/2) xi_max/(modes/2)`` symmetric about 0."""
        h = self.xi_max / (self.modes / 2)
        return FreqGrid.points((np.arange(self.modes) - self.modes / 2 + 0.5) * h)


@dataclass
class DataBlock:
    spectrum: str
    width: float
    seed: int
    ensemble: int
    D: float | None
    scale: float

    def profile(self, r):
        """Terminal amplitude envelope as a function of ``|xi|``."""
        if self.spectrum == "flat":
            return np.ones_like(r)
        if self.spectrum == "gaussian":
            return np.exp(-0.5 * (r / self.width) ** 2)
        return (1.0 + r * r) ** (-self.width / 2)


@dataclass
class EstimateBlock:
    T1: float
    T2: float
    tau: float | None
    nu: float
    eps: float
    tol: float
    y_list: list


@dataclass
class LogLogBlock:
    T2: float
    lam: float
    q: float
    u0_sq: list
    zeta: list
    rho: list
    y: list


@dataclass
class ScenarioConfig:
    name: str
    spec: OperatorSpec
    grid: GridBlock
    data: DataBlock
    estimate: EstimateBlock
    loglog: LogLogBlock
    raw: dict = field(default_factory=dict, repr=False)


class _Reader:
    def __init__(self, cp):
        self.cp = cp

    def get(self, sec, key, conv=str, default=None, check=None, why=""):
        if not self.cp.has_option(sec, key):
            if default is None:
                raise ConfigError(f"[{sec}] {key}: missing")
            return default
        text = self.cp.get(sec, key)
        try:
            val = conv(text)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"[{sec}] {key} = {text!r}: {exc}") from None
        if check is not None and not check(val):
            raise ConfigError(f"[{sec}] {key} = {text!r}: {why}")
        return val


def parse_config(text, name="<string>"):
    """Parse scenario text into a validated :class:`ScenarioConfig`."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=name)
    except configparser.Error as exc:
        raise ConfigError(f"{name}: {exc}") from None
    for sec in ("operator", "grid", "data", "estimate"):
        if not cp.has_section(sec):
            raise ConfigError(f"{name}: missing section [{sec}]")
    r = _Reader(cp)
    pos = lambda x: x > 0
    n = r.get("operator", "n", int, 1, lambda v: v == 1,
              "scenario files describe one space dimension")
    T = r.get("operator", "T", float, 1.0, pos, "must be > 0")
    kA = r.get("operator", "kA", float, 1.0, lambda v: 0 < v <= 1, "must lie in (0, 1]")
    kB = r.get("operator", "kB", float, 0.0, lambda v: v >= 0, "must be >= 0")
    kC = r.get("operator", "kC", float, 0.0, lambda v: v >= 0, "must be >= 0")
    omega = r.get("operator", "modulus", parse_modulus, Modulus.lipschitz())
    a = r.get("operator", "a", parse_profile, Constant(1.0))
    b = r.get("operator", "b", parse_profile, Constant(0.0))
    c = r.get("operator", "c", parse_profile, Constant(0.0))
    label = r.get("operator", "label", str, name)
    try:
        spec = OperatorSpec(n, T, [[a]], [b], c, kA, kB, kC, omega, label=label)
    except ValueError as exc:
        raise ConfigError(f"[operator]: {exc}") from None

    grid = GridBlock(r.get("grid", "xi_max", float, 8.0, pos, "must be > 0"),
                     r.get("grid", "modes", int, 16, lambda v: v >= 2 and v % 2 == 0,
                           "must be an even number >= 2"),
                     r.get("grid", "time_nodes", int, 101, lambda v: v >= 5, "must be >= 5"))

    spectrum = r.get("data", "spectrum", str, "flat",
                     lambda v: v in ("flat", "gaussian", "power"), "flat, gaussian or power")
    D_text = r.get("data", "D", str, "auto")
    if D_text.strip() == "auto":
        D = None
    else:
        try:
            D = float(D_text)
        except ValueError:
            raise ConfigError(f"[data] D = {D_text!r}: a number or 'auto'") from None
        if not D > 0:
            raise ConfigError(f"[data] D = {D_text!r}: must be > 0")
    data = DataBlock(spectrum,
                     r.get("data", "width", float, 1.0, pos, "must be > 0"),
                     r.get("data", "seed", int, 0, lambda v: 0 <= v < 2 ** 64, "must be a u64"),
                     r.get("data", "ensemble", int, 20, lambda v: v >= 1, "must be >= 1"),
                     D,
                     r.get("data", "scale", float, 1.05, lambda v: v >= 1, "must be >= 1"))

    T1 = r.get("estimate", "T1", float, 0.01, lambda v: 0 < v < T, f"must lie in (0, {T})")
    T2 = r.get("estimate", "T2", float, 0.5, lambda v: 0 < v < T, f"must lie in (0, {T})")
    tau_text = r.get("estimate", "tau", str, "auto")
    tau = None if tau_text.strip() == "auto" else r.get("estimate", "tau", float, None, pos, "must be > 0")
    est = EstimateBlock(T1, T2, tau,
                        r.get("estimate", "nu", float, 1.0, pos, "must be > 0"),
                        r.get("estimate", "eps", float, 2.0, lambda v: v > 1, "must exceed 1"),
                        r.get("estimate", "tol", float, 1e-8, lambda v: v >= 0, "must be >= 0"),
                        r.get("estimate", "y_list", _floats, [10.0 ** -k for k in range(2, 11)],
                              lambda v: all(x > 0 for x in v), "entries must be > 0"))

    ll = "loglog"
    if not cp.has_section(ll):
        cp.add_section(ll)
    loglog = LogLogBlock(
        r.get(ll, "T2", float, 0.5, lambda v: 0 < v < T, f"must lie in (0, {T})"),
        r.get(ll, "lam", float, 0.15, pos, "must be > 0"),
        r.get(ll, "q", float, 1.0, pos, "must be > 0"),
        r.get(ll, "u0_sq", _floats, [1e-2, 1e-4, 1e-6, 1e-8, 1e-10],
              lambda v: all(0 < x < 1 for x in v), "entries must lie in (0, 1)"),
        r.get(ll, "zeta", _floats, [10.0 ** k for k in range(1, 7)],
              lambda v: all(x >= 2 for x in v), "entries must be >= 2"),
        r.get(ll, "rho", _floats, [math.exp(math.e - 1), 10.0, 1e2, 1e4, 1e6],
              lambda v: all(x >= math.exp(math.e - 1) * (1 - 1e-15) for x in v),
              "entries must be >= e^(e-1)"),
        r.get(ll, "y", _floats, [1.0, 0.5, 0.2, 0.1],
              lambda v: all(0 < x <= 1 for x in v), "entries must lie in (0, 1]"))
    raw = {s: dict(cp.items(s)) for s in cp.sections()}
    return ScenarioConfig(name, spec, grid, data, est, loglog, raw)


def scenario_path(name):
    """Path of a shipped scenario file such as ``constant.cfg``."""
    return resources.files("osgoodlab") / "scenarios" / name


def load_config(path):
    """Read a scenario file; a bare shipped name like ``constant.cfg`` also works."""
    import os
    p = str(path)
    if not os.path.exists(p) and os.path.basename(p) == p and p in SCENARIOS:
        p = str(scenario_path(p))
    try:
        with open(p, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, name=os.path.basename(p))
