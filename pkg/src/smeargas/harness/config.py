"""Scenario configuration.

Grammar
-------
One ``key = value`` pair per line. Keys are dotted (``section.name``).
Blank lines and lines starting with ``#`` are ignored, as is anything after
`` #`` on a value line. Vectors are comma-separated. Every key is optional
and falls back to the default listed in :data:`DEFAULTS`; unknown keys and
repeated keys are errors.

The defaults describe water vapor at 1 Pa (1e-2 mbar) and 296 K, seen by
square detectors with half-sides from 1 to 100 um. The cloud is a thin slab
(2 mm x 2 mm x 0.1 nm, about 1e5 particles) halfway between source and
detector. Transmittances of stacked slabs multiply, so a slab stands in for
a longer path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from smeargas.errors import ConfigError, DomainError
from smeargas.gascloud import Box, CloudSpec, GasSpecies, mean_free_time
from smeargas.geometry import Disk, Rect, SetupGeometry, Square
from smeargas.scattering import ScatterParams
from smeargas.transmittance import Method
from smeargas.wavepacket import SpreadMode, WavePacketSpec, expected_sigma

DEFAULTS = {
    "species.name": "water",
    "species.mass_kg": "2.99e-26",
    "species.cross_section_m2": "1e-18",
    "species.sigma0_m": "1e-10",
    "cloud.pressure_pa": "1.0",
    "cloud.temperature_k": "296.0",
    "cloud.box_min_m": "-1e-3, -1e-3, 0.05",
    "cloud.box_max_m": "1e-3, 1e-3, 0.0500000001",
    "cloud.max_particles": "100000000",
    "cloud.t_bar_s": "",
    "cloud.sigma_m": "",
    "setup.source_m": "0, 0, 0",
    "setup.detector_m": "0, 0, 0.1",
    "setup.edge_direction": "1, 0, 0",
    "detector.shape": "square",
    "detector.size_m": "1e-5",
    "detector.aspect_ratio": "",
    "model.g": "1e-3",
    "model.spread_mode": "at-mean-time",
    "model.method": "exact-square",
    "model.quad_tol": "1e-10",
    "run.seed": "0",
    "sweep.sizes_m": "1e-6, 2e-6, 5e-6, 1e-5, 2e-5, 5e-5, 1e-4",
    "sweep.repeats": "8",
    "ratio.small_m": "1e-6",
    "ratio.large_m": "1e-4",
    "ratio.repeats": "32",
}


def _float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(text) if text.strip().lstrip("+-").isdigit() else int(value)


def _vec(text, n=None):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    values = tuple(_float(p) for p in parts)
    if n is not None and len(values) != n:
        raise ValueError(f"expected {n} comma-separated numbers, got {len(values)}")
    return values


def _optional_float(text):
    return None if text.strip() == "" else _float(text)


_CONVERTERS = {
    "species.name": str.strip,
    "species.mass_kg": _float,
    "species.cross_section_m2": _float,
    "species.sigma0_m": _float,
    "cloud.pressure_pa": _float,
    "cloud.temperature_k": _float,
    "cloud.box_min_m": lambda t: _vec(t, 3),
    "cloud.box_max_m": lambda t: _vec(t, 3),
    "cloud.max_particles": _int,
    "cloud.t_bar_s": _optional_float,
    "cloud.sigma_m": _optional_float,
    "setup.source_m": lambda t: _vec(t, 3),
    "setup.detector_m": lambda t: _vec(t, 3),
    "setup.edge_direction": lambda t: _vec(t, 3),
    "detector.shape": lambda t: t.strip().lower(),
    "detector.size_m": _float,
    "detector.aspect_ratio": _optional_float,
    "model.g": _float,
    "model.spread_mode": lambda t: SpreadMode(t.strip().lower()),
    "model.method": lambda t: Method(t.strip().lower()),
    "model.quad_tol": _float,
    "run.seed": _int,
    "sweep.sizes_m": _vec,
    "sweep.repeats": _int,
    "ratio.small_m": _float,
    "ratio.large_m": _float,
    "ratio.repeats": _int,
}


def make_shape(kind, size, aspect_ratio=None):
    """Detector shape whose circumscribed half-side is ``size``.

    For rectangles ``aspect_ratio`` is ``half_y / half_x``.
    """
    if kind == "square":
        return Square(size)
    if kind == "disk":
        return Disk(size)
    if kind == "rect":
        a = 1.0 if aspect_ratio is None else aspect_ratio
        if not a > 0:
            raise DomainError("aspect_ratio must be > 0")
        return Rect(size, size * a) if a <= 1 else Rect(size / a, size)
    raise DomainError(f"unknown detector shape {kind!r} (expected square, disk or rect)")


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    species: GasSpecies
    pressure: float
    temperature: float
    box: Box
    max_particles: int
    t_bar_override: float | None
    sigma_override: float | None
    setup: SetupGeometry
    g: float
    spread_mode: SpreadMode
    method: Method
    quad_tol: float
    seed: int
    sweep_sizes: tuple
    sweep_repeats: int
    ratio_small: float
    ratio_large: float
    ratio_repeats: int
    values: dict

    def cloud_spec(self, seed=None):
        return CloudSpec(self.species, self.pressure, self.temperature, self.box,
                         self.seed if seed is None else seed, self.max_particles)

    def t_bar(self):
        if self.t_bar_override is not None:
            return self.t_bar_override
        return mean_free_time(self.species, self.pressure, self.temperature)

    def sigma(self):
        """Effective packet width: the explicit override, else spread over ``t_bar``."""
        if self.sigma_override is not None:
            return self.sigma_override
        packet = WavePacketSpec(self.species.mass, self.species.sigma0)
        return expected_sigma(packet, self.t_bar(), self.spread_mode)

    def scatter_params(self):
        return ScatterParams(self.g, self.sigma())

    def setup_for_size(self, size):
        return self.setup.with_shape(self.setup.shape.scaled_to(size))

    def replace(self, **overrides):
        """New config with some raw key values replaced (same validation as loading)."""
        values = dict(self.values)
        for key, text in overrides.items():
            if key not in DEFAULTS:
                raise ConfigError("unknown key", key=key)
            values[key] = text
        return _build(values, {})


def parse_config(text: str) -> ScenarioConfig:
    raw = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if " #" in stripped:
            stripped = stripped.split(" #", 1)[0].rstrip()
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise ConfigError("unknown key", line=lineno, key=key)
        if key in raw:
            raise ConfigError(f"duplicate key (first set on line {lines[key]})", line=lineno, key=key)
        raw[key] = value.strip()
        lines[key] = lineno
    values = dict(DEFAULTS)
    values.update(raw)
    return _build(values, lines)


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def default_config() -> ScenarioConfig:
    return parse_config("")


def _build(values, lines):
    conv = {}
    for key, text in values.items():
        try:
            conv[key] = _CONVERTERS[key](text)
        except ValueError as exc:
            raise ConfigError(str(exc), line=lines.get(key), key=key) from exc

    def fail(key, message):
        return ConfigError(message, line=lines.get(key), key=key)

    if conv["cloud.t_bar_s"] is not None and conv["cloud.sigma_m"] is not None:
        raise fail("cloud.sigma_m", "set at most one of cloud.t_bar_s and cloud.sigma_m")
    if conv["detector.aspect_ratio"] is not None and conv["detector.shape"] != "rect":
        raise fail("detector.aspect_ratio", "only valid for detector.shape = rect")
    sizes = conv["sweep.sizes_m"]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise fail("sweep.sizes_m", "sizes must be non-empty and strictly increasing")
    for key in ("sweep.repeats", "ratio.repeats"):
        if conv[key] < 1:
            raise fail(key, "must be >= 1")
    if conv["ratio.small_m"] > conv["ratio.large_m"]:
        raise fail("ratio.small_m", "must not exceed ratio.large_m")
    for key in ("cloud.t_bar_s", "cloud.sigma_m"):
        if conv[key] is not None and not conv[key] > 0:
            raise fail(key, "must be > 0")
    if not 0.0 <= conv["model.g"] <= 1.0:
        raise fail("model.g", "must lie in [0, 1]")
    if not conv["model.quad_tol"] > 0:
        raise fail("model.quad_tol", "must be > 0")
    if not 0 <= conv["run.seed"] < 2 ** 64:
        raise fail("run.seed", "must be an unsigned 64-bit integer")

    current = "species.mass_kg"
    try:
        species = GasSpecies(conv["species.name"], conv["species.mass_kg"],
                             conv["species.cross_section_m2"], conv["species.sigma0_m"])
        current = "cloud.box_min_m"
        box = Box(conv["cloud.box_min_m"], conv["cloud.box_max_m"])
        current = "detector.size_m"
        shape = make_shape(conv["detector.shape"], conv["detector.size_m"],
                           conv["detector.aspect_ratio"])
        current = "setup.detector_m"
        setup = SetupGeometry(conv["setup.source_m"], conv["setup.detector_m"], shape,
                              conv["setup.edge_direction"])
        current = "cloud.pressure_pa"
        cfg = ScenarioConfig(
            species=species,
            pressure=conv["cloud.pressure_pa"],
            temperature=conv["cloud.temperature_k"],
            box=box,
            max_particles=conv["cloud.max_particles"],
            t_bar_override=conv["cloud.t_bar_s"],
            sigma_override=conv["cloud.sigma_m"],
            setup=setup,
            g=conv["model.g"],
            spread_mode=conv["model.spread_mode"],
            method=conv["model.method"],
            quad_tol=conv["model.quad_tol"],
            seed=conv["run.seed"],
            sweep_sizes=tuple(sizes),
            sweep_repeats=conv["sweep.repeats"],
            ratio_small=conv["ratio.small_m"],
            ratio_large=conv["ratio.large_m"],
            ratio_repeats=conv["ratio.repeats"],
            values=dict(values),
        )
        cfg.cloud_spec()
        if cfg.t_bar_override is None and cfg.sigma_override is None:
            cfg.t_bar()
    except DomainError as exc:
        raise fail(current, str(exc)) from exc
    return cfg
