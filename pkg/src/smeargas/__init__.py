"""
smeargas: optical transmittance of ultra-diluted ("smeared") gas.

Each gas particle is a free Gaussian wave packet whose width grows during
its mean free time. A photon travelling from source to detector is lost if
it scatters inside the detectability tunnel, the straight prism spanned by
the detector cross-section. The per-particle scattering probability is the
packet mass inside that tunnel, and the cloud transmittance is the product
of the per-particle survival probabilities.

Modules
-------
wavepacket
    Free-particle spreading law and Gaussian mass helpers.
geometry
    Detector shapes, the source-detector axis and the tunnel.
scattering
    Per-particle scattering probabilities (closed forms and quadrature).
gascloud
    Ideal-gas and kinetic-theory helpers, seeded cloud sampling.
transmittance
    N-particle transmittance and the classical local-particle baseline.
harness
    Config loading, detector-size sweeps, paired-detector ratio runs, CSV.
"""

from smeargas.errors import (
    CloudTooLargeError,
    ConfigError,
    DomainError,
    NumericError,
    QuadratureError,
    RatioUndefinedError,
)
from smeargas.wavepacket import (
    HBAR,
    SpreadMode,
    WavePacketSpec,
    expected_sigma,
    gaussian_mass_1d,
    sigma_spread,
)
from smeargas.geometry import (
    DetectabilityTunnel,
    Disk,
    Rect,
    SetupGeometry,
    Square,
    circumscribed_half_side,
    transverse_offset,
    tunnel_of,
)
from smeargas.scattering import (
    ScatterParams,
    p_scatter_eq3,
    p_scatter_exact_square,
    p_scatter_quadrature,
)
from smeargas.gascloud import (
    K_B,
    WATER,
    Box,
    CloudSpec,
    GasCloud,
    GasSpecies,
    mean_free_time,
    number_density,
    sample_cloud,
)
from smeargas.transmittance import (
    Method,
    TransmittanceResult,
    classical_transmittance,
    transmittance,
    transmittance_bound,
)

__version__ = "0.1.0"

__all__ = [
    "CloudTooLargeError",
    "ConfigError",
    "DomainError",
    "NumericError",
    "QuadratureError",
    "RatioUndefinedError",
    "HBAR",
    "SpreadMode",
    "WavePacketSpec",
    "expected_sigma",
    "gaussian_mass_1d",
    "sigma_spread",
    "DetectabilityTunnel",
    "Disk",
    "Rect",
    "SetupGeometry",
    "Square",
    "circumscribed_half_side",
    "transverse_offset",
    "tunnel_of",
    "ScatterParams",
    "p_scatter_eq3",
    "p_scatter_exact_square",
    "p_scatter_quadrature",
    "K_B",
    "WATER",
    "Box",
    "CloudSpec",
    "GasCloud",
    "GasSpecies",
    "mean_free_time",
    "number_density",
    "sample_cloud",
    "Method",
    "TransmittanceResult",
    "classical_transmittance",
    "transmittance",
    "transmittance_bound",
]
