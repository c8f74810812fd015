"""Detector shapes, the source-detector axis and the detectability tunnel.

The tunnel is modeled as a straight prism: the detector cross-section swept
from the (point) source to the detector plane, which is perpendicular to the
axis. Transverse coordinates use a right-handed basis ``(e1, e2, axis)``
whose ``e1`` is aligned with the detector's first edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from smeargas.errors import DomainError


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class Square:
    half_side: float

    def __post_init__(self):
        _positive("half_side", self.half_side)

    def contains(self, ox, oy):
        return (np.abs(ox) <= self.half_side) & (np.abs(oy) <= self.half_side)

    def scaled_to(self, size):
        return Square(size)


@dataclass(frozen=True)
class Disk:
    radius: float

    def __post_init__(self):
        _positive("radius", self.radius)

    def contains(self, ox, oy):
        return np.hypot(ox, oy) <= self.radius

    def scaled_to(self, size):
        return Disk(size)


@dataclass(frozen=True)
class Rect:
    half_x: float
    half_y: float

    def __post_init__(self):
        _positive("half_x", self.half_x)
        _positive("half_y", self.half_y)

    def contains(self, ox, oy):
        return (np.abs(ox) <= self.half_x) & (np.abs(oy) <= self.half_y)

    def scaled_to(self, size):
        """Same aspect ratio, circumscribed half-side ``size``."""
        k = size / max(self.half_x, self.half_y)
        return Rect(self.half_x * k, self.half_y * k)


DetectorShape = Union[Square, Disk, Rect]


def circumscribed_half_side(shape: DetectorShape) -> float:
    """Half the side of the smallest axis-aligned square containing the detector."""
    if isinstance(shape, Square):
        return shape.half_side
    if isinstance(shape, Disk):
        return shape.radius
    if isinstance(shape, Rect):
        return max(shape.half_x, shape.half_y)
    raise DomainError(f"unknown detector shape {shape!r}")


def _unit(v, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be a finite 3-vector")
    n = np.linalg.norm(v)
    if n == 0:
        raise DomainError(f"{name} must be non-zero")
    return v / n


def _edge_basis(axis, edge_hint):
    """Right-handed transverse basis (e1, e2) with e1 along the projected edge hint."""
    candidates = [edge_hint] if edge_hint is not None else []
    candidates += [np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])]
    for c in candidates:
        c = np.asarray(c, dtype=float)
        proj = c - np.dot(c, axis) * axis
        n = np.linalg.norm(proj)
        if n > 1e-9 * max(np.linalg.norm(c), 1.0):
            e1 = proj / n
            e2 = np.cross(axis, e1)
            return e1, e2 / np.linalg.norm(e2)
    raise DomainError("cannot build a transverse basis")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class SetupGeometry:
    """Point source, detector center and detector shape.

    ``edge_direction`` orients the detector edges (its projection onto the
    detector plane becomes ``e1``). By default the global x axis is
    projected, falling back to y when the axis is parallel to x.
    """

    source: np.ndarray
    detector_center: np.ndarray
    shape: DetectorShape
    edge_direction: np.ndarray | None = None
    axis: np.ndarray = field(init=False, repr=False)
    e1: np.ndarray = field(init=False, repr=False)
    e2: np.ndarray = field(init=False, repr=False)
    distance: float = field(init=False, repr=False)

    def __post_init__(self):
        src = np.asarray(self.source, dtype=float)
        det = np.asarray(self.detector_center, dtype=float)
        if src.shape != (3,) or det.shape != (3,):
            raise DomainError("source and detector_center must be 3-vectors")
        if not (np.all(np.isfinite(src)) and np.all(np.isfinite(det))):
            raise DomainError("source and detector_center must be finite")
        d = det - src
        dist = float(np.linalg.norm(d))
        if dist == 0:
            raise DomainError("source and detector_center coincide")
        circumscribed_half_side(self.shape)
        axis = d / dist
        hint = None if self.edge_direction is None else _unit(self.edge_direction, "edge_direction")
        e1, e2 = _edge_basis(axis, hint)
        for name, value in (("source", src), ("detector_center", det), ("axis", axis),
                            ("e1", e1), ("e2", e2), ("distance", dist)):
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def r_t(self):
        return circumscribed_half_side(self.shape)

    def with_shape(self, shape):
        return SetupGeometry(self.source, self.detector_center, shape, self.edge_direction)


def transverse_offset(setup: SetupGeometry, position):
    """Decompose position(s) into ``(ox, oy, o, z)`` relative to the source-detector axis.

    ``z`` is measured along the axis from the source, ``(ox, oy)`` along the
    detector edges and ``o = hypot(ox, oy)``. ``position`` may be a 3-vector
    or an array of shape (N, 3); the outputs follow its leading shape.
    """
    p = np.asarray(position, dtype=float)
    rel = p - setup.source
    z = rel @ setup.axis
    ox = rel @ setup.e1
    oy = rel @ setup.e2
    o = np.hypot(ox, oy)
    if p.ndim == 1:
        return float(ox), float(oy), float(o), float(z)
    return ox, oy, o, z


@dataclass(frozen=True, eq=False)
class DetectabilityTunnel:
    """Straight prism with the detector's cross-section along the source-detector axis."""

    cross_section: DetectorShape
    axis_origin: np.ndarray
    axis_direction: np.ndarray
    length: float
    setup: SetupGeometry = field(repr=False)

    def contains(self, position):
        """Membership test; points on the boundary count as inside."""
        ox, oy, _, z = transverse_offset(self.setup, position)
        inside = (z >= 0) & (z <= self.length) & self.cross_section.contains(ox, oy)
        if np.ndim(inside) == 0:
            return bool(inside)
        return inside

    @property
    def volume(self):
        s = self.cross_section
        if isinstance(s, Disk):
            area = math.pi * s.radius ** 2
        elif isinstance(s, Square):
            area = 4.0 * s.half_side ** 2
        else:
            area = 4.0 * s.half_x * s.half_y
        return area * self.length


def tunnel_of(setup: SetupGeometry) -> DetectabilityTunnel:
    return DetectabilityTunnel(
        cross_section=setup.shape,
        axis_origin=setup.source,
        axis_direction=setup.axis,
        length=setup.distance,
        setup=setup,
    )
