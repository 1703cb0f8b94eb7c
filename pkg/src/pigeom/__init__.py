"""Exact arithmetic for pi-derivations, arithmetic connections and arithmetic ODEs.

Rings: F_{p^m} (base_field), W = W_K(F_{p^m}) (witt_base), R_pi = W[pi]/(pi^e - p)
(ram_ring), truncated jets T (series_ring) and matrices over them (matrix_ring).
Geometry: Levi-Civita and Chern connections (connections), geodesics and parallel
transport (geodesics), delta-polynomials (delta_poly), the jet group (jet_group)
and cross-ramification checks (overconv).
"""

from .base_field import FieldCtx, FqElem
from .connections import (
    ConnectionData,
    JetMode,
    Metric,
    PointwiseMode,
    TorsionSymbol,
    chern,
    christoffel_second,
    levi_civita,
    levi_civita_for,
)
from .delta_poly import DeltaPoly, e_P, eval_delta_poly, witt_coords
from .errors import (
    ConfigError,
    DegenerateError,
    HypothesisError,
    NotAUnitError,
    NotDivisibleError,
    PigeomError,
    PrecisionError,
)
from .geodesics import Curve, GeodesicCtx, geodesic, ode_solve, parallel_transport
from .jet_group import JetPoint, jet_inv, jet_mul
from .matrix_ring import Mat
from .ram_ring import RamCtx, RpiElem, Word, rpi_delta, rpi_phi
from .series_ring import SeriesCtx, SeriesElem
from .witt_base import BaseCtx, WElem, w_delta, w_frobenius, w_teichmueller

__version__ = "0.1.0"

__all__ = [
    "FieldCtx", "FqElem", "BaseCtx", "WElem", "RamCtx", "RpiElem", "Word",
    "SeriesCtx", "SeriesElem", "Mat", "Metric", "TorsionSymbol", "ConnectionData",
    "PointwiseMode", "JetMode", "levi_civita", "levi_civita_for", "chern",
    "christoffel_second", "GeodesicCtx", "Curve", "ode_solve", "geodesic",
    "parallel_transport", "DeltaPoly", "eval_delta_poly", "e_P", "witt_coords",
    "JetPoint", "jet_mul", "jet_inv", "w_delta", "w_frobenius", "w_teichmueller",
    "rpi_delta", "rpi_phi", "PigeomError", "ConfigError", "PrecisionError",
    "NotAUnitError", "NotDivisibleError", "HypothesisError", "DegenerateError",
]
