"""Diagrams of chain complexes, homotopy limits, and operad-derived categories."""

from .category import CategoryError, FiniteCategory, Functor
from .diagram import (
    ChainDiagram,
    DiagramError,
    DiagramMap,
    SplitData,
    SplitVerdict,
    ZigZag,
    diagram_from_spec,
    diagram_sum,
    diagram_to_spec,
    dumps,
    formality_zigzag,
    holim,
    holim_negative_betti,
    holim_splitting_check,
    holim_total,
    homology_diagram,
    restrict,
    restrict_split,
    split_from_spec,
    split_to_spec,
)
from .generate import (
    GeneratedSplit,
    corrupt_split,
    random_poset_shape,
    random_split_diagram,
)
from .operads import (
    AssociativeOperad,
    CommutativeOperad,
    ConfigurationModule,
    LinearCategory,
    OperadAsModule,
    OperadError,
    TruncatedGerstenhaber,
    enriched_category_of,
    h0_splitting_check,
    module_as_functor,
)

__all__ = [
    "AssociativeOperad",
    "CategoryError",
    "ChainDiagram",
    "CommutativeOperad",
    "ConfigurationModule",
    "DiagramError",
    "DiagramMap",
    "FiniteCategory",
    "Functor",
    "GeneratedSplit",
    "LinearCategory",
    "OperadAsModule",
    "OperadError",
    "SplitData",
    "SplitVerdict",
    "TruncatedGerstenhaber",
    "ZigZag",
    "corrupt_split",
    "diagram_from_spec",
    "diagram_sum",
    "diagram_to_spec",
    "dumps",
    "enriched_category_of",
    "formality_zigzag",
    "h0_splitting_check",
    "holim",
    "holim_negative_betti",
    "holim_splitting_check",
    "holim_total",
    "homology_diagram",
    "module_as_functor",
    "random_poset_shape",
    "random_split_diagram",
    "restrict",
    "restrict_split",
    "split_from_spec",
    "split_to_spec",
]
