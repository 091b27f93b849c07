"""Exact chain-level operators, amenable diffusion and l1-seminorms on finite Delta-complexes."""
from __future__ import annotations

from .chains import AffineSimplex, BaryPoint, Chain, EdgeSelector, alt, boundary, l1_norm, permute, restricted_norm
from .complex import DeltaComplex, parse_rational, simplex_boundary, simplicial, standard_simplex
from .diffusion import diffuse_chain, folner_measure, gromov_diffuse, multi_orbit_diffuse, orbit_sums, push
from .gluing import GluingMap, connected_sum, glue_complexes, glue_cycles, subadditivity_pipeline, tree_common_vertex
from .groups import FiniteGroup, FreeAbelianGroup, Measure, convolve
from .joins import EquatorialModel, beta, eta, join
from .patterns import ZPattern, count_noedge_subdivided
from .seminorm import ClassSpec, fundamental_cycle, l1_seminorm, verify_certificate
from .subdivision import barycentric, chain_homotopy_to_identity, local_barycentric, partial_boundary

__all__ = [
    "AffineSimplex", "BaryPoint", "Chain", "ClassSpec", "DeltaComplex", "EdgeSelector", "EquatorialModel",
    "FiniteGroup", "FreeAbelianGroup", "GluingMap", "Measure", "ZPattern", "alt", "barycentric", "beta", "boundary",
    "chain_homotopy_to_identity", "connected_sum", "convolve", "count_noedge_subdivided", "diffuse_chain", "eta",
    "folner_measure", "fundamental_cycle", "glue_complexes", "glue_cycles", "gromov_diffuse", "join", "l1_norm",
    "l1_seminorm", "local_barycentric", "multi_orbit_diffuse", "orbit_sums", "parse_rational", "partial_boundary",
    "permute", "push", "restricted_norm", "simplex_boundary", "simplicial", "standard_simplex",
    "subadditivity_pipeline", "tree_common_vertex", "verify_certificate",
]
