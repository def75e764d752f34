"""Dirichlet functors, polynomial functors and bundles over finite sets."""
from .bundle import (Bundle, BundleMap, ContraBundleMap, SliceObject, compose_maps,
                     factor_vertical_cartesian, is_cartesian)
from .errors import DirichletError, EnumerationCapExceeded, ValidationError
from .finset import FinFunction, FinSet
from .functor import NatTransform, dir_eval, dir_eval_map, poly_eval, poly_eval_map
from .series import CardinalitySeries, eval_series, series_of

__version__ = "0.1.0"
