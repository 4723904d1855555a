"""CMC surfaces and isoperimetry in 3-dimensional Sasakian space forms."""

from ._core import (
    __version__,
    clifford,
    compare_rp3,
    cut_constant,
    geodesic,
    match_rho,
    pansu_area,
    pansu_area_closed,
    pansu_volume,
    pansu_volume_closed,
    pansu_volume_ode,
    q_limit_circle,
    stability,
    surface,
    vertical_jacobi,
)

__all__ = [
    "__version__",
    "clifford",
    "compare_rp3",
    "cut_constant",
    "geodesic",
    "match_rho",
    "pansu_area",
    "pansu_area_closed",
    "pansu_volume",
    "pansu_volume_closed",
    "pansu_volume_ode",
    "q_limit_circle",
    "stability",
    "surface",
    "vertical_jacobi",
]
