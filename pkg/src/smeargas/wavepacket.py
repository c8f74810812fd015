"""Free-particle Gaussian wave packets.

Only the position density ``|psi|^2`` is represented: an isotropic Gaussian
with per-axis standard deviation ``sigma(t)``. For a minimum-uncertainty
packet of initial width ``sigma0`` the width grows as::

    sigma(t) = sigma0 * sqrt(1 + (hbar * t / (2 * m * sigma0**2))**2)

erf/erfc come from ``scipy.special`` (Cephes rational approximations,
absolute error well below 1e-14 over the real line).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, erfc

from smeargas.errors import DomainError
from smeargas.quadrature import integrate_1d

#: Reduced Planck constant (CODATA 2018, exact-by-definition digits), J s.
HBAR = 1.054571817e-34

_SQRT2 = math.sqrt(2.0)


class SpreadMode(enum.Enum):
    """How the effective width at the mean free time is defined."""

    AT_MEAN_TIME = "at-mean-time"
    EXPECTED_OVER_EXPONENTIAL = "expected-over-exponential"


@dataclass(frozen=True)
class WavePacketSpec:
    """Initial state of a free Gaussian packet.

    Attributes
    ----------
    mass : float
        Particle mass (kg).
    sigma0 : float
        Per-axis standard deviation of ``|psi|^2`` at ``t = 0`` (m).
    hbar : float
        Reduced Planck constant (J s).
    """

    mass: float
    sigma0: float
    hbar: float = HBAR

    def __post_init__(self):
        for name in ("mass", "sigma0", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    @property
    def spreading_rate(self):
        """``hbar / (2 m sigma0^2)`` in 1/s; the packet doubles its variance after ``1/rate``."""
        return self.hbar / (2.0 * self.mass * self.sigma0 ** 2)

    def density(self, r, t):
        """``|psi(r, t)|^2`` for positions ``r`` of shape (..., 3) relative to the packet center."""
        s = sigma_spread(self, t)
        r = np.asarray(r, dtype=float)
        r2 = np.sum(r * r, axis=-1)
        return np.exp(-0.5 * r2 / s ** 2) / ((2.0 * math.pi) ** 1.5 * s ** 3)


def sigma_spread(spec: WavePacketSpec, t: float) -> float:
    """Per-axis width of the free packet after time ``t`` (s)."""
    if not t >= 0 or not math.isfinite(t):
        raise DomainError(f"time must be finite and >= 0, got {t!r}")
    return spec.sigma0 * math.hypot(1.0, spec.spreading_rate * t)


def expected_sigma(spec: WavePacketSpec, t_bar: float,
                   mode: SpreadMode = SpreadMode.AT_MEAN_TIME) -> float:
    """Effective packet width for gas particles with mean free time ``t_bar``.

    ``AT_MEAN_TIME`` evaluates ``sigma(t_bar)``. ``EXPECTED_OVER_EXPONENTIAL``
    averages ``sigma(t)`` over exponentially distributed free times with mean
    ``t_bar``. That integral is taken in ``x = t / t_bar`` and mapped to
    ``u in [0, 1)`` by ``x = u / (1 - u)``, then integrated adaptively to a
    relative error of 1e-9.
    """
    if not (t_bar > 0 and math.isfinite(t_bar)):
        raise DomainError(f"t_bar must be positive and finite, got {t_bar!r}")
    mode = SpreadMode(mode)
    if mode is SpreadMode.AT_MEAN_TIME:
        return sigma_spread(spec, t_bar)

    a = spec.spreading_rate * t_bar

    def integrand(u):
        u = np.minimum(u, 1.0 - 1e-16)
        x = u / (1.0 - u)
        jac = 1.0 / (1.0 - u) ** 2
        return np.hypot(1.0, a * x) * np.exp(-x) * jac

    # breakpoints near x = 1/a (onset of linear growth) and in the tail
    pts = [0.5]
    if a > 0:
        x_knee = 1.0 / a
        pts.append(x_knee / (1.0 + x_knee))
    pts.extend(x / (1.0 + x) for x in (5.0, 20.0, 50.0))
    value, _ = integrate_1d(integrand, 0.0, 1.0, abs_tol=0.0, rel_tol=1e-10, points=pts)
    return max(spec.sigma0 * value, spec.sigma0)


def gaussian_mass_1d(center_offset, half_width, sigma):
    """Mass of a 1-D Gaussian inside a window.

    Returns ``0.5 * [erf((u + r)/(sqrt(2) sigma)) - erf((u - r)/(sqrt(2) sigma))]``
    where ``u`` is the distance from the packet center to the window center and
    ``r`` the window half-width. Evaluated with ``|u|`` so the result is exactly
    even in ``u``. Windows starting more than half a unit (in ``sqrt2 sigma``)
    past the center switch to the ``erfc`` form, whose terms are then the
    smaller ones, so tail masses keep full relative precision.

    Accepts scalars or numpy arrays (broadcast).
    """
    u = np.abs(np.asarray(center_offset, dtype=float))
    r = np.asarray(half_width, dtype=float)
    s = np.asarray(sigma, dtype=float)
    if np.any(~(s > 0)):
        raise DomainError("sigma must be > 0")
    if np.any(~(r >= 0)):
        raise DomainError("half_width must be >= 0")
    scale = _SQRT2 * s
    with np.errstate(invalid="ignore"):
        hi = (u + r) / scale
        lo = (u - r) / scale
        inner = 0.5 * (erf(hi) - erf(lo))
        outer = 0.5 * (erfc(lo) - erfc(hi))
    # infinite window: erf(inf) - erf(-inf) is fine, inf - inf is not
    mass = np.where(lo > 0.5, outer, inner)
    mass = np.where(np.isinf(r), 1.0, mass)
    mass = np.clip(mass, 0.0, 1.0)
    if mass.ndim == 0:
        return float(mass)
    return mass
