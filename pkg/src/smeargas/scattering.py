"""Per-particle scattering probabilities.

A particle scatters a detectable photon with probability ``G`` times the
mass of its packet inside the detectability tunnel. Along the axis the
packet is taken to lie fully inside the tunnel, so only the transverse
Gaussian mass matters.

Three evaluations are provided:

``p_scatter_eq3``
    the square-window bound using only the scalar axis distance ``o``,
    ``G * F(o)**2``;
``p_scatter_exact_square``
    the exact square-detector value ``G * F(ox) * F(oy)``;
``p_scatter_quadrature``
    adaptive 2-D quadrature over the actual detector cross-section.

``F`` is :func:`smeargas.wavepacket.gaussian_mass_1d` with the detector
half-side as window half-width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from smeargas.errors import DomainError
from smeargas.geometry import Disk, Rect, SetupGeometry, Square, transverse_offset
from smeargas.quadrature import integrate_2d
from smeargas.wavepacket import gaussian_mass_1d

DEFAULT_QUAD_TOL = 1e-10

# Gaussian mass beyond this many sigmas is below the smallest double.
_REACH = 40.0
_BREAKS = (1.0, 2.0, 4.0, 8.0, 16.0)


@dataclass(frozen=True)
class ScatterParams:
    """Probability scale ``G`` and effective packet width ``sigma`` (m)."""

    g_coefficient: float
    sigma: float

    def __post_init__(self):
        if not (0.0 <= self.g_coefficient <= 1.0):
            raise DomainError(f"g_coefficient must lie in [0, 1], got {self.g_coefficient!r}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be positive and finite, got {self.sigma!r}")


def _check_half_side(r_t):
    if np.any(~(np.asarray(r_t, dtype=float) > 0)):
        raise DomainError("r_T must be > 0")


def p_scatter_eq3(params: ScatterParams, o, r_t):
    """Scattering probability from the scalar axis distance ``o``.

    Evaluates ``(G/4) * [erf((o - r)/(sqrt2 sigma)) - erf((o + r)/(sqrt2 sigma))]**2``.
    The bracket equals ``-2 F(o)``, so the value is computed as ``G * F(o)**2``,
    which avoids cancellation when ``o`` is far outside the window.
    """
    _check_half_side(r_t)
    o = np.asarray(o, dtype=float)
    if np.any(~(o >= 0)):
        raise DomainError("o must be >= 0")
    f = gaussian_mass_1d(o, r_t, params.sigma)
    return params.g_coefficient * f * f


def p_scatter_exact_square(params: ScatterParams, ox, oy, r_t):
    """Exact scattering probability for a square detector of half-side ``r_t``."""
    _check_half_side(r_t)
    fx = gaussian_mass_1d(ox, r_t, params.sigma)
    fy = gaussian_mass_1d(oy, r_t, params.sigma)
    return params.g_coefficient * fx * fy


def _axis_breaks(center, lo, hi):
    pts = [center]
    for k in _BREAKS:
        pts.extend((center - k, center + k))
    return [p for p in pts if lo < p < hi]


def _rect_mass(hx, hy, ox, oy, sigma, tol):
    # coordinates in units of sigma, origin at the packet center
    x_lo, x_hi = (-hx - ox) / sigma, (hx - ox) / sigma
    y_lo, y_hi = (-hy - oy) / sigma, (hy - oy) / sigma
    x_lo, x_hi = max(x_lo, -_REACH), min(x_hi, _REACH)
    y_lo, y_hi = max(y_lo, -_REACH), min(y_hi, _REACH)
    if x_lo >= x_hi or y_lo >= y_hi:
        return 0.0

    def density(x, y):
        return np.exp(-0.5 * (x * x + y * y)) / (2.0 * math.pi)

    value, _ = integrate_2d(
        density, (x_lo, x_hi), (y_lo, y_hi), tol,
        x_points=_axis_breaks(0.0, x_lo, x_hi),
        y_points=_axis_breaks(0.0, y_lo, y_hi),
    )
    return value


def _disk_mass(radius, ox, oy, sigma, tol):
    # polar coordinates about the disk center, angle measured from the packet direction
    d = math.hypot(ox, oy) / sigma
    rho_max = radius / sigma
    rho_lo = max(0.0, d - _REACH)
    rho_hi = min(rho_max, d + _REACH)
    if rho_lo >= rho_hi:
        return 0.0
    psi_max = math.pi if d <= _REACH else math.asin(_REACH / d)

    def density(rho, psi):
        dx = rho * np.cos(psi) - d
        dy = rho * np.sin(psi)
        return rho * np.exp(-0.5 * (dx * dx + dy * dy)) / (2.0 * math.pi)

    psi_pts = []
    if d > 0:
        psi_pts = [0.0] + [s * k / d for k in _BREAKS for s in (-1.0, 1.0)]
        psi_pts = [p for p in psi_pts if -psi_max < p < psi_max]
    value, _ = integrate_2d(
        density, (rho_lo, rho_hi), (-psi_max, psi_max), tol,
        x_points=_axis_breaks(d, rho_lo, rho_hi),
        y_points=psi_pts,
    )
    return value


def detector_mass(shape, ox, oy, sigma, tol=DEFAULT_QUAD_TOL):
    """Quadrature of the transverse Gaussian density over a detector cross-section.

    ``(ox, oy)`` is the packet center in the detector's edge-aligned frame.
    Squares and rectangles are integrated on their own box, disks in polar
    coordinates, so the integrand is smooth on every domain.
    """
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    if not sigma > 0:
        raise DomainError("sigma must be > 0")
    if isinstance(shape, Square):
        m = _rect_mass(shape.half_side, shape.half_side, ox, oy, sigma, tol)
    elif isinstance(shape, Rect):
        m = _rect_mass(shape.half_x, shape.half_y, ox, oy, sigma, tol)
    elif isinstance(shape, Disk):
        m = _disk_mass(shape.radius, ox, oy, sigma, tol)
    else:
        raise DomainError(f"unknown detector shape {shape!r}")
    return min(max(m, 0.0), 1.0)


def p_scatter_quadrature(params: ScatterParams, setup: SetupGeometry, particle_position,
                         tol=DEFAULT_QUAD_TOL):
    """Scattering probability by adaptive quadrature over the detector cross-section.

    The result is accurate to absolute tolerance ``tol`` (the packet mass is
    integrated to ``tol / G``). Raises :class:`~smeargas.errors.QuadratureError`
    if the refinement budget runs out.
    """
    ox, oy, _, _ = transverse_offset(setup, particle_position)
    g = params.g_coefficient
    if g == 0.0:
        return 0.0
    return g * detector_mass(setup.shape, ox, oy, params.sigma, tol / g)
