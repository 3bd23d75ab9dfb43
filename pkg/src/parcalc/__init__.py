"""Exact computations with partition complexes, layer tables and diagrams
of rational chain complexes."""

from .chaincx import ChainComplex, ChainMap, betti
from .exactla import RatMatrix, rank
from .partitions import SetPartition, build_ek, classify_map, excess, parse_partition
from .ptower import (
    collapse_check,
    connectivity,
    layer_table,
    reduced_layer_table,
    t_homology,
)

__version__ = "0.1.0"

__all__ = [
    "ChainComplex",
    "ChainMap",
    "RatMatrix",
    "SetPartition",
    "betti",
    "build_ek",
    "classify_map",
    "collapse_check",
    "connectivity",
    "excess",
    "layer_table",
    "parse_partition",
    "rank",
    "reduced_layer_table",
    "t_homology",
]
