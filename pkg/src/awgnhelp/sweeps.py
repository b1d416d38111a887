"""Parameter sweeps over named bound/oracle series, and their CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ct, energy, oracle, power
from .core import AwgnHelpError, ConfigError

__version__ = "0.1.0"


class GridError(ConfigError):
    pass


class UnknownSeries(ConfigError):
    pass


@dataclass(frozen=True)
class Grid:
    min: float
    max: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.points < 2:
            raise GridError("a grid needs at least two points")
        if not self.min < self.max:
            raise GridError(f"grid needs min < max, got {self.min}:{self.max}")
        if self.scale not in ("linear", "log"):
            raise GridError(f"unknown grid scale {self.scale!r}")
        if self.scale == "log" and self.min <= 0:
            raise GridError("log grid requires min > 0")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Parse ``min:max:points[:log|:linear]``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise GridError(f"grid must look like min:max:points[:log], got {text!r}")
        try:
            lo, hi, pts = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise GridError(f"bad grid {text!r}: {exc}") from None
        return cls(lo, hi, pts, parts[3] if len(parts) == 4 else "linear")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.min), math.log10(self.max), self.points)
        return np.linspace(self.min, self.max, self.points)

    def __str__(self) -> str:
        s = f"{self.min!r}:{self.max!r}:{self.points}"
        return s + ":log" if self.scale == "log" else s


def _pp(p) -> power.PowerParams:
    return power.PowerParams(S=p["S"], Rh=p.get("Rh", 0.0), alpha=p.get("alpha", 1.0), d=int(p.get("d", 1)))


def _ctp(p) -> ct.CTParams:
    return ct.CTParams(C0c=p["C0c"], Rhc=p.get("Rhc", 0.0), alpha=p.get("alpha", 1.0))


def _vec(op):
    return lambda p: power.vector_wrap(_pp(p), op)


# Each series maps a parameter record to a float or ExponentValue.
SERIES: dict[str, Callable[[dict], object]] = {
    # power-limited, per channel use
    "c0": lambda p: power.capacity_c0(p["S"]),
    "dpt": _vec(power.dpt_exponent),
    "zz-tx": _vec(power.converse_exponent_tx),
    "zz-rx": _vec(power.converse_exponent_rx),
    "achievable": _vec(power.achievable_exponent),
    "achievable-rc": _vec(lambda q: power.achievable_exponent(q, "random-coding")),
    "achievable-ex": _vec(lambda q: power.achievable_exponent(q, "expurgated")),
    "very-noisy": _vec(power.very_noisy_exponent),
    "sphere-packing": lambda p: power.sphere_packing(p["R"], _pp(p)),
    "weak-sphere-packing": lambda p: power.weak_sphere_packing(p["R"], _pp(p)),
    "random-coding": lambda p: power.random_coding_exponent(p["R"], p["S"]),
    "expurgated": lambda p: power.expurgated_exponent(p["R"], p["S"]),
    # energy-limited
    "ppm-pe": lambda p: energy.ppm_pe_bound(p["L"], p["gamma"]),
    "ppm-mpae": lambda p: energy.ppm_mpae_bound(p["alpha"], p["gamma"]),
    "fixed-rate-pe": lambda p: energy.fixed_rate_pe_bound(p["L"], p["gamma"], int(p["n"]), p["Rh"]),
    "fixed-rate-mpae": lambda p: energy.fixed_rate_mpae_bound(p["alpha"], p["gamma"], int(p["n"]), p["Rh"]).at(int(p["n"])),
    "cribbed-pe": lambda p: energy.cribbed_tx_pe_bound(p["L"], p["gamma"], p["Lh"]),
    "cribbed-mpae": lambda p: energy.cribbed_tx_mpae_bound(p["alpha"], p["gamma"], p["Lh"]),
    "side-channel-mpae": lambda p: energy.side_channel_mpae_bound(p["alpha"], p["gamma"], p["Lh"]),
    "two-sided-pe": lambda p: energy.two_sided_pe_bound(p["L"], p["gamma"], p["Lh"]),
    "two-sided-mpae": lambda p: energy.two_sided_mpae_bound(p["alpha"], p["gamma"], p["Lh"]),
    "hybrid-mpae": lambda p: energy.hybrid_mpae_bound(p["alpha"], p["gamma"], p["Lh"]).exponent,
    # exact PPM error probabilities
    "ppm-pe-exact": lambda p: oracle.ppm_pe_exact(int(p["M"]), p["gamma"]),
    "cribbed-pe-exact": lambda p: oracle.cribbed_tx_pe_exact(oracle.PPMSpec(int(p["M"]), int(p["Mh"]), p["gamma"])),
    "two-sided-pe-exact": lambda p: oracle.two_sided_pe_exact(oracle.PPMSpec(int(p["M"]), int(p["Mh"]), p["gamma"])),
    # continuous time, per second
    "ct-ee-oblivious": lambda p: ct.ct_ee_oblivious(p["Rc"], _ctp(p)),
    "ct-ee-no-help": lambda p: ct.ct_ee_no_help(p["Rc"], p["C0c"]),
    "ct-ee-cribbed": lambda p: ct.ct_cribbed_ee(p["Rc"], _ctp(p)),
    "ct-cribbed-capacity": lambda p: ct.ct_cribbed_capacity_lb(p["C0c"], p.get("Rhc", 0.0)),
    "ct-oblivious-achievable": lambda p: ct.ct_mpae_oblivious(_ctp(p)).achievable,
    "ct-oblivious-converse": lambda p: ct.ct_mpae_oblivious(_ctp(p)).converse,
    "ct-cribbed-mpae": lambda p: ct.ct_cribbed_mpae(_ctp(p)),
    "ct-two-sided-mpae": lambda p: ct.ct_two_sided_mpae(_ctp(p)),
}


@dataclass(frozen=True)
class Family:
    axis: str
    grid: Grid
    fixed: dict
    series: tuple[str, ...]


FAMILIES: dict[str, Family] = {
    "fig-power-vs-S": Family("S", Grid(1e-2, 1e2, 200, "log"), {"Rh": 1.0, "alpha": 2.0},
                             ("dpt", "zz-tx", "zz-rx", "achievable")),
    "fig-power-vs-alpha": Family("alpha", Grid(0.05, 4.0, 160), {"S": 0.1, "Rh": 1.0},
                                 ("dpt", "zz-tx", "zz-rx", "achievable")),
    "fig-ct-ee": Family("Rc", Grid(0.0, 4.0, 200), {"C0c": 1.0, "Rhc": 1.0},
                        ("ct-ee-oblivious", "ct-ee-no-help", "ct-ee-cribbed")),
    "fig-ct-dist-vs-C0": Family("C0c", Grid(1e-2, 1e2, 200, "log"), {"Rhc": 1.0, "alpha": 2.0},
                                ("ct-oblivious-achievable", "ct-oblivious-converse",
                                 "ct-cribbed-mpae", "ct-two-sided-mpae")),
    "fig-ct-dist-vs-alpha": Family("alpha", Grid(0.05, 4.0, 160), {"C0c": 1.0, "Rhc": 1.0},
                                   ("ct-oblivious-achievable", "ct-oblivious-converse",
                                    "ct-cribbed-mpae", "ct-two-sided-mpae")),
}


@dataclass
class SweepSpec:
    family: str
    axis: str | None = None
    grid: Grid | None = None
    fixed: dict = field(default_factory=dict)
    series: tuple[str, ...] = ()

    def resolved(self) -> "SweepSpec":
        """Fill unset fields from the family defaults."""
        if self.family == "custom":
            if not self.axis or self.grid is None or not self.series:
                raise ConfigError("custom sweeps need --axis, --grid and --series")
            spec = SweepSpec("custom", self.axis, self.grid, dict(self.fixed), tuple(self.series))
        elif self.family in FAMILIES:
            fam = FAMILIES[self.family]
            fixed = dict(fam.fixed)
            fixed.update(self.fixed)
            spec = SweepSpec(self.family, self.axis or fam.axis, self.grid or fam.grid, fixed,
                             tuple(self.series) or fam.series)
        else:
            raise ConfigError(f"unknown sweep family {self.family!r}; choose from "
                              f"{sorted(FAMILIES) + ['custom']}")
        unknown = [s for s in spec.series if s not in SERIES]
        if unknown:
            raise UnknownSeries(f"unknown series {unknown}; known: {sorted(SERIES)}")
        return spec


@dataclass
class CurveTable:
    header: list[str]
    rows: list[list[float]]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.header)
        if any(len(r) != width for r in self.rows):
            raise ConfigError("curve table must be rectangular")

    def column(self, name: str) -> list[float]:
        i = self.header.index(name)
        return [r[i] for r in self.rows]


def evaluate(name: str, params: dict) -> float:
    try:
        return float(SERIES[name](params))
    except KeyError as exc:
        raise ConfigError(f"series {name!r} needs parameter {exc.args[0]!r}") from None


def run_sweep(spec: SweepSpec) -> CurveTable:
    spec = spec.resolved()
    rows = []
    for x in spec.grid.values():
        params = dict(spec.fixed)
        params[spec.axis] = float(x)
        rows.append([float(x)] + [evaluate(s, params) for s in spec.series])
    meta = {
        "family": spec.family,
        "axis": spec.axis,
        "grid": str(spec.grid),
        "fixed": ",".join(f"{k}={v!r}" for k, v in sorted(spec.fixed.items())),
        "series": ",".join(spec.series),
        "version": __version__,
    }
    return CurveTable([spec.axis, *spec.series], rows, meta)


def format_value(v: float) -> str:
    if v == math.inf:
        return "inf"
    return "%.12g" % v


def write_csv(table: CurveTable, stream) -> None:
    for k, v in table.metadata.items():
        stream.write(f"# {k}: {v}\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(table.header)
    for r in table.rows:
        w.writerow([format_value(v) for v in r])


def csv_text(table: CurveTable) -> str:
    buf = io.StringIO()
    write_csv(table, buf)
    return buf.getvalue()


def read_csv(stream) -> CurveTable:
    meta: dict[str, str] = {}
    body = []
    for line in stream:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    reader = csv.reader(body)
    try:
        header = next(reader)
    except StopIteration:
        raise AwgnHelpError("CSV file has no header row") from None
    rows = [[float(v) for v in r] for r in reader]
    return CurveTable(header, rows, meta)
