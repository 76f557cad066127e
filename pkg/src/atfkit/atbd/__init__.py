"""Almost toric base diagrams and their operations."""

from .analysis import Profile, canonicalize, equivalent, is_triangular, profile
from .diagram import (
    ATBD,
    DELZANT,
    Cut,
    DiagramError,
    Kind,
    Side,
    corner_defect,
    edge_distances,
    is_monotone,
    make_diagram,
    monotone_distance,
    validate,
)
from .io import dumps, from_dict, loads, read, to_dict, write
from .operations import (
    ROTATE_QUARTER,
    almost_toric_blowup,
    mutate,
    mutate_indexed,
    mutate_word,
    nodal_slide,
    nodal_trade,
    place_nodes_canonically,
    rescale,
    toric_blowup,
    transfer_cut,
    transfer_cut_indexed,
    transform,
)
from .triangular import TriangularSpec, build_triangular, triangular_for

__all__ = [
    "ATBD", "Cut", "DELZANT", "DiagramError", "Kind", "Profile", "ROTATE_QUARTER", "Side",
    "TriangularSpec", "almost_toric_blowup", "build_triangular", "canonicalize", "corner_defect",
    "dumps", "edge_distances", "equivalent", "from_dict", "is_monotone", "is_triangular", "loads",
    "make_diagram", "monotone_distance", "mutate", "mutate_indexed", "mutate_word", "nodal_slide",
    "nodal_trade", "place_nodes_canonically", "profile", "read", "rescale", "to_dict",
    "toric_blowup", "transfer_cut", "transfer_cut_indexed", "transform", "triangular_for",
    "validate", "write",
]
