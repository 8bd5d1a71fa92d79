"""Polyhedral object recognition from 2-D line drawings by graph indexing.

Views and scenes become weighted graphs (edge weights encode local
junction appearance), graphs are decomposed into overlapping
neighborhood subgraphs, each subgraph is characterized exactly by the
integer coefficients of the second immanantal polynomial of its
Laplacian, and recognition is hash lookup plus voting over
characteristic views.
"""

from .decompose import (
    Subgraph,
    SubgraphSet,
    complexity_measure,
    is_relevant,
    p_neighborhood_subgraphs,
)
from .errors import (
    DatabaseFormatError,
    GraphError,
    ParseError,
    PolyindexError,
    SizeLimitError,
)
from .graphs import (
    Laplacian,
    WeightedGraph,
    connected_components,
    degree_profile,
    format_graph,
    induced_subgraph,
    laplacian,
    parse_graphs,
    permute,
)
from .indexdb import (
    BuildReport,
    CharacteristicView,
    DbParams,
    ModelDatabase,
    ModelObject,
    RecognitionResult,
    StoredGraph,
    VoteTally,
    build_database,
    load_database,
    lookup,
    recognize,
    save_database,
)
from .linedraw import (
    CATALOGUE,
    EdgeAppearance,
    EndpointShape,
    Junction,
    JunctionType,
    LineDrawing,
    Segment,
    catalogue_size,
    classify_junction,
    edge_appearance,
    format_line_drawing,
    parse_line_drawing,
    split_image_graph,
)
from .signatures import (
    CharPolySignature,
    GraphSignature,
    char_signature,
    d2_oracle,
    d2_signature,
    diff,
)
from .smallgraphs import (
    CollisionReport,
    are_isomorphic,
    canonical_key,
    collision_study,
    enumerate_graphs,
)

__version__ = "0.1.0"

__all__ = [
    "BuildReport",
    "CATALOGUE",
    "CharPolySignature",
    "CharacteristicView",
    "CollisionReport",
    "DatabaseFormatError",
    "DbParams",
    "EdgeAppearance",
    "EndpointShape",
    "GraphError",
    "GraphSignature",
    "Junction",
    "JunctionType",
    "Laplacian",
    "LineDrawing",
    "ModelDatabase",
    "ModelObject",
    "ParseError",
    "PolyindexError",
    "RecognitionResult",
    "Segment",
    "SizeLimitError",
    "StoredGraph",
    "Subgraph",
    "SubgraphSet",
    "VoteTally",
    "WeightedGraph",
    "are_isomorphic",
    "build_database",
    "canonical_key",
    "catalogue_size",
    "char_signature",
    "classify_junction",
    "collision_study",
    "complexity_measure",
    "connected_components",
    "d2_oracle",
    "d2_signature",
    "degree_profile",
    "diff",
    "edge_appearance",
    "format_graph",
    "format_line_drawing",
    "induced_subgraph",
    "is_relevant",
    "laplacian",
    "load_database",
    "lookup",
    "p_neighborhood_subgraphs",
    "parse_graphs",
    "parse_line_drawing",
    "permute",
    "recognize",
    "save_database",
    "split_image_graph",
]
