"""Iterated Z/2-homology covers of finite multigraphs.

Build covers whose fibers are subsets of the non-tree edges, equip them with
wall structures and the wall metric, stack them into a tower over the
figure-eight graph, and check the metric geometry (separation, admissible
lifts, exact wall embeddings, negative-type kernels) either exhaustively at
small scale or lazily at scales where the cover is never materialized.
"""

from __future__ import annotations

from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    NotTwoConnectedError,
    UnsupportedOnImplicitError,
)
from .multigraph import (
    Infinite,
    MultiGraph,
    Path,
    SpanningData,
    bfs_distance,
    bfs_distances,
    diameter,
    empty_path,
    from_edge_list_text,
    girth,
    is_connected,
    is_two_connected,
    new_multigraph,
    spanning_from_tree_edges,
    spanning_tree,
    spanning_tree_avoiding,
    to_edge_list_text,
)
from .covering import (
    CoveringGraph,
    FiniteGroup,
    build_cover,
    cayley_graph,
    check_transitivity,
    collapse_clouds,
    composite_covering_ok,
    composite_deck_transformations,
    deck_transformation,
    fiber_hex,
    find_labeled_isomorphism,
    finite_group,
    generates,
    is_cover_automorphism,
    lift_path,
    lift_walk,
    trivial_group,
    verify_covering,
    z2_cover,
    z2_power_group,
)
from .walls import (
    ExceedsCap,
    WallStructure,
    admissible_distance,
    admissible_distances_from,
    canonical_admissible_path,
    in_positive_half,
    is_admissible,
    parity_hex,
    parity_vector,
    point_mask,
    separates,
    shortest_admissible_path,
    wall_distance,
    wall_structure,
)
from .tower import (
    BoxSpace,
    LevelStats,
    TowerLevel,
    box_distance,
    build_tower,
    figure_eight,
    girth_growth_report,
    implicit_graph_distance,
    implicit_wall_distance,
    level_stats,
    manifest_text,
)
from .embedding import (
    KernelProbe,
    KernelReport,
    WallEmbedding,
    corrupt_embedding,
    embedding_check,
    kernel_value,
    negative_type_suite,
    wall_embedding,
    worker_count,
)

__all__ = [
    "Infinite",
    "MultiGraph",
    "Path",
    "SpanningData",
    "CoveringGraph",
    "FiniteGroup",
    "InvalidInputError",
    "NotTwoConnectedError",
    "UnsupportedOnImplicitError",
    "InternalConsistencyError",
    "new_multigraph",
    "from_edge_list_text",
    "to_edge_list_text",
    "empty_path",
    "is_connected",
    "is_two_connected",
    "girth",
    "diameter",
    "bfs_distance",
    "bfs_distances",
    "spanning_tree",
    "spanning_tree_avoiding",
    "spanning_from_tree_edges",
    "finite_group",
    "trivial_group",
    "z2_power_group",
    "generates",
    "fiber_hex",
    "build_cover",
    "z2_cover",
    "lift_path",
    "lift_walk",
    "verify_covering",
    "deck_transformation",
    "is_cover_automorphism",
    "check_transitivity",
    "composite_covering_ok",
    "composite_deck_transformations",
    "find_labeled_isomorphism",
    "cayley_graph",
    "collapse_clouds",
    "ExceedsCap",
    "WallStructure",
    "wall_structure",
    "parity_vector",
    "parity_hex",
    "point_mask",
    "wall_distance",
    "separates",
    "in_positive_half",
    "canonical_admissible_path",
    "is_admissible",
    "shortest_admissible_path",
    "admissible_distance",
    "admissible_distances_from",
    "TowerLevel",
    "LevelStats",
    "BoxSpace",
    "figure_eight",
    "build_tower",
    "level_stats",
    "box_distance",
    "implicit_wall_distance",
    "implicit_graph_distance",
    "girth_growth_report",
    "manifest_text",
    "WallEmbedding",
    "KernelProbe",
    "KernelReport",
    "wall_embedding",
    "corrupt_embedding",
    "embedding_check",
    "kernel_value",
    "negative_type_suite",
    "worker_count",
]
