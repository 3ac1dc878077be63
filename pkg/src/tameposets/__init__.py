"""Finite posets, their realisations, tame functors and Betti diagrams over prime fields."""

from ._kernels import BACKEND
from .errors import *  # noqa: F401,F403
from .homalg import (
    NatTransformation,
    VectFunctor,
    betti_koszul,
    betti_koszul_diagram,
    betti_resolution,
    colimit,
    colimit_below,
    free_functor,
    koszul_complex,
    minimal_cover,
    minimal_resolution,
)
from .pipeline import PipelineConfig, pipeline_run
from .poset import MonotoneMap, Poset, dim, is_consistent, is_distributive, is_upper_semilattice, par_dim
from .realisation import GridSpec, RealPoint, build_grid, real_dim, real_leq
from .transfer import NEG_INF, TameFunctor, grid_transfer, kan_extend_general, kan_extend_hom, tame_betti, transfer

__version__ = "0.1.0"
