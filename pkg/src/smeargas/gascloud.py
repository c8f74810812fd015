"""Gas species, kinetic-theory helpers and seeded cloud sampling.

Particle positions are drawn i.i.d. uniform in an axis-aligned box with
numpy's ``Generator(PCG64(seed))``. The particle count is the rounded
ideal-gas expectation ``round(n * V)``, not a Poisson draw, so a given seed
always reproduces the same cloud bit for bit.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from smeargas.errors import CloudTooLargeError, DomainError

#: Boltzmann constant (SI exact), J/K.
K_B = 1.380649e-23

RNG_ALGORITHM = "numpy.random.PCG64"
DEFAULT_MAX_PARTICLES = 100_000_000


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class GasSpecies:
    """Species constants.

    ``sigma0`` is the packet width right after a collision. It is a model
    input; no physical default is claimed.
    """

    name: str
    mass: float
    collision_cross_section: float
    sigma0: float

    def __post_init__(self):
        _positive("mass", self.mass)
        _positive("collision_cross_section", self.collision_cross_section)
        _positive("sigma0", self.sigma0)


WATER = GasSpecies(name="water", mass=2.99e-26, collision_cross_section=1e-18, sigma0=1e-10)


def number_density(pressure: float, temperature: float) -> float:
    """Ideal-gas number density ``p / (k_B T)`` in 1/m^3."""
    _positive("pressure", pressure)
    _positive("temperature", temperature)
    return pressure / (K_B * temperature)


def mean_speed(mass: float, temperature: float) -> float:
    """Maxwell-Boltzmann mean speed ``sqrt(8 k_B T / (pi m))``."""
    _positive("mass", mass)
    _positive("temperature", temperature)
    return math.sqrt(8.0 * K_B * temperature / (math.pi * mass))


def mean_free_time(species: GasSpecies, pressure: float, temperature: float) -> float:
    """Mean time between collisions, ``1 / (sqrt2 n sigma_c v_mean)``."""
    n = number_density(pressure, temperature)
    v = mean_speed(species.mass, temperature)
    t_bar = 1.0 / (math.sqrt(2.0) * n * species.collision_cross_section * v)
    if not (t_bar > 0 and math.isfinite(t_bar)):
        raise DomainError(f"mean free time is not positive and finite: {t_bar!r}")
    return t_bar


@dataclass(frozen=True, eq=False)
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float)
        hi = np.array(self.hi, dtype=float)
        if lo.shape != (3,) or hi.shape != (3,):
            raise DomainError("box corners must be 3-vectors")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise DomainError("box corners must be finite")
        if not np.all(hi > lo):
            raise DomainError("box must have positive extent on every axis")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def volume(self):
        return float(np.prod(self.hi - self.lo))

    def contains(self, points):
        p = np.asarray(points, dtype=float)
        return np.all((p >= self.lo) & (p <= self.hi), axis=-1)


@dataclass(frozen=True)
class CloudSpec:
    species: GasSpecies
    pressure: float
    temperature: float
    box: Box
    seed: int = 0
    max_particles: int = DEFAULT_MAX_PARTICLES

    def __post_init__(self):
        _positive("pressure", self.pressure)
        _positive("temperature", self.temperature)
        if not 0 <= int(self.seed) < 2 ** 64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")

    @property
    def expected_count(self):
        return number_density(self.pressure, self.temperature) * self.box.volume


@dataclass(frozen=True, eq=False)
class GasCloud:
    """Immutable set of particle positions, shape (N, 3), plus the species and ``t_bar``."""

    positions: np.ndarray
    species: GasSpecies
    t_bar: float
    seed: int | None = None
    box: Box | None = field(default=None, repr=False)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float).reshape(-1, 3)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    def __len__(self):
        return self.positions.shape[0]

    @property
    def n_particles(self):
        return self.positions.shape[0]

    def digest(self):
        """Short SHA-256 of the little-endian position bytes; identifies a cloud in output files."""
        data = np.ascontiguousarray(self.positions, dtype="<f8").tobytes()
        return hashlib.sha256(data).hexdigest()[:16]

    def subset(self, index):
        return GasCloud(self.positions[index], self.species, self.t_bar, self.seed, self.box)

    def union(self, other: "GasCloud"):
        return GasCloud(np.vstack([self.positions, other.positions]),
                        self.species, self.t_bar, None, None)


def sample_cloud(spec: CloudSpec) -> GasCloud:
    """Draw ``round(n V)`` particle positions uniformly inside ``spec.box``."""
    expected = spec.expected_count
    if not math.isfinite(expected) or expected > spec.max_particles:
        raise CloudTooLargeError(
            f"cloud of {expected:.4g} particles exceeds the cap of {spec.max_particles:g}"
        )
    n = int(round(expected))
    rng = np.random.Generator(np.random.PCG64(int(spec.seed)))
    lo, hi = spec.box.lo, spec.box.hi
    u = rng.random((n, 3))
    pos = np.clip(lo + (hi - lo) * u, lo, hi)
    t_bar = mean_free_time(spec.species, spec.pressure, spec.temperature)
    return GasCloud(pos, spec.species, t_bar, int(spec.seed), spec.box)
