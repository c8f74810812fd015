"""N-particle transmittance.

Scattering events of different particles are independent, so the cloud
transmittance is ``prod(1 - p_n)``. The product is accumulated in log space
with ``math.fsum``, which is correctly rounded and therefore independent of
particle order. A transmittance below the smallest normal double is
reported as 0 with ``underflow=True``.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

import numpy as np

from smeargas.errors import DomainError, QuadratureError
from smeargas.gascloud import GasCloud
from smeargas.geometry import SetupGeometry, circumscribed_half_side, transverse_offset, tunnel_of
from smeargas.scattering import (
    DEFAULT_QUAD_TOL,
    ScatterParams,
    p_scatter_eq3,
    p_scatter_exact_square,
    p_scatter_quadrature,
)


class Method(enum.Enum):
    EQ3 = "eq3"
    EXACT_SQUARE = "exact-square"
    QUADRATURE = "quadrature"
    CLASSICAL = "classical"


@dataclass(frozen=True, eq=False)
class TransmittanceResult:
    tr: float
    per_particle_p: np.ndarray
    method: Method
    n_particles: int
    n_inside_tunnel: int
    log_tr: float
    underflow: bool = False


def _survival(p, method, n_inside):
    p = np.asarray(p, dtype=float)
    p.setflags(write=False)
    with np.errstate(divide="ignore"):
        logs = np.log1p(-p)
    log_tr = math.fsum(logs.tolist()) if p.size else 0.0
    tr = math.exp(log_tr) if log_tr > -math.inf else 0.0
    underflow = False
    if math.isfinite(log_tr) and tr < sys.float_info.min:
        tr, underflow = 0.0, True
    return TransmittanceResult(
        tr=tr,
        per_particle_p=p,
        method=method,
        n_particles=int(p.size),
        n_inside_tunnel=int(n_inside),
        log_tr=log_tr,
        underflow=underflow,
    )


def _count_inside(cloud, setup):
    if len(cloud) == 0:
        return 0
    return int(np.count_nonzero(tunnel_of(setup).contains(cloud.positions)))


def transmittance(cloud: GasCloud, setup: SetupGeometry, params: ScatterParams,
                  method: Method = Method.EXACT_SQUARE, tol: float = DEFAULT_QUAD_TOL):
    """Transmittance of ``cloud`` for the given detector setup.

    ``params.sigma`` must already hold the effective packet width. ``EQ3`` and
    ``EXACT_SQUARE`` use the circumscribed half-side of the detector;
    ``QUADRATURE`` integrates over the actual cross-section to absolute
    tolerance ``tol`` per particle. ``CLASSICAL`` delegates to
    :func:`classical_transmittance`.
    """
    method = Method(method)
    if method is Method.CLASSICAL:
        return classical_transmittance(cloud, setup, params.g_coefficient)
    n_inside = _count_inside(cloud, setup)
    r_t = circumscribed_half_side(setup.shape)
    if len(cloud) == 0:
        return _survival(np.empty(0), method, 0)
    ox, oy, o, _ = transverse_offset(setup, cloud.positions)
    if method is Method.EQ3:
        p = p_scatter_eq3(params, o, r_t)
    elif method is Method.EXACT_SQUARE:
        p = p_scatter_exact_square(params, ox, oy, r_t)
    else:
        p = np.empty(len(cloud))
        for i, pos in enumerate(cloud.positions):
            try:
                p[i] = p_scatter_quadrature(params, setup, pos, tol)
            except QuadratureError as exc:
                raise QuadratureError(f"particle {i}: {exc}") from exc
    return _survival(p, method, n_inside)


def transmittance_bound(cloud: GasCloud, setup: SetupGeometry, params: ScatterParams,
                        r_t: float | None = None):
    """Square-window bound on the transmittance from scalar axis distances.

    ``r_t`` defaults to the circumscribed half-side of ``setup.shape``.
    """
    if r_t is None:
        r_t = circumscribed_half_side(setup.shape)
    if not r_t > 0:
        raise DomainError("r_T must be > 0")
    n_inside = _count_inside(cloud, setup)
    if len(cloud) == 0:
        return _survival(np.empty(0), Method.EQ3, 0)
    _, _, o, _ = transverse_offset(setup, cloud.positions)
    return _survival(p_scatter_eq3(params, o, r_t), Method.EQ3, n_inside)


def classical_transmittance(cloud: GasCloud, setup: SetupGeometry, g: float):
    """Local-particle baseline: ``(1 - g)**N_in`` over particles inside the tunnel.

    Particles exactly on the tunnel boundary count as inside.
    """
    if not 0.0 <= g <= 1.0:
        raise DomainError(f"g must lie in [0, 1], got {g!r}")
    if len(cloud) == 0:
        return _survival(np.empty(0), Method.CLASSICAL, 0)
    inside = tunnel_of(setup).contains(cloud.positions)
    p = np.where(inside, g, 0.0)
    return _survival(p, Method.CLASSICAL, int(np.count_nonzero(inside)))
