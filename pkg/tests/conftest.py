"""Shared fixtures: the figure-eight base, the hexagon-with-chord example
graph, and session-scoped towers (tests only read them, never mutate)."""

from __future__ import annotations

import pytest

from boxcover import (
    MultiGraph,
    SpanningData,
    build_tower,
    figure_eight,
    new_multigraph,
    spanning_from_tree_edges,
)

# Hexagon with one chord: vertices x=0, y=1, v=2, w=3, z=4, u=5.  The chord g
# joins w and z; removing the tree edges leaves f = {x,u} and g = {w,z}.
HEX_CHORD_EDGES = ((0, 1), (1, 4), (1, 2), (4, 5), (2, 3), (0, 5), (3, 4))
HEX_CHORD_TREE = frozenset({0, 1, 2, 3, 4})


@pytest.fixture
def fig8() -> MultiGraph:
    return figure_eight()


@pytest.fixture
def hex_chord() -> tuple[MultiGraph, SpanningData]:
    g = new_multigraph(6, HEX_CHORD_EDGES)
    return g, spanning_from_tree_edges(g, HEX_CHORD_TREE)


@pytest.fixture(scope="session")
def tower():
    return build_tower(4)


@pytest.fixture(scope="session")
def shadow_tower():
    # Same three levels as build_tower(3) but with the third forced implicit,
    # so implicit answers can be checked against an explicit twin.
    return build_tower(3, explicit_cap=4)
