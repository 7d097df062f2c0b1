"""Gaussian measure and perimeter of convex planar sets."""
from .errors import (BracketError, DomainError, GaussIsoError, InvalidCClass, InvalidPolygon,
                     NonFinite, StalledError)
from .gauss_core import (ConvexPolygon, Point, QuadratureConfig, gauss_integral,
                         polygon_gaussian_measure, polygon_gaussian_perimeter,
                         segment_gaussian_length)
from .special import AlphaBeta, I_func, Phi_func, f_implicit, u_func, v_func
from .shapes import CClassSet, QuadT, quad_perimeter, regular_ngon
from .verify import verify_all

__version__ = "0.1.0"
