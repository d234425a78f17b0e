"""The iterated Z/2-homology tower over the figure eight, and its box space.

Level 0 is the figure eight; each later level is the Z/2-homology cover of
its predecessor.  Levels stay explicit (materialized graph, cached stats)
while the vertex count fits under ``explicit_cap`` and become implicit
beyond: an implicit level stores only its predecessor's graph and spanning
data, addresses vertices as (predecessor vertex id, fiber bitmask), and
answers metric queries through the parity and admissible-path engines —
level 3 has 128 * 2^129 vertices and is never materialized.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

from .covering import CoveringGraph, z2_cover
from .errors import InvalidInputError, InternalConsistencyError, UnsupportedOnImplicitError
from .multigraph import (
    MultiGraph,
    SpanningData,
    bfs_distance,
    bfs_distances,
    girth,
    new_multigraph,
    spanning_tree,
    to_edge_list_text,
)
from .walls import (
    ExceedsCap,
    WallStructure,
    admissible_distance,
    point_mask,
    wall_structure,
)


def figure_eight() -> MultiGraph:
    """One vertex, two self-loops a (edge 0) and b (edge 1)."""
    return new_multigraph(1, ((0, 0), (0, 0)))


@dataclass(frozen=True)
class TowerLevel:
    """One floor of the tower.

    Explicit levels carry their graph (and, for index >= 1, the covering of
    the previous level); implicit levels carry only the predecessor data that
    the lazy engines need.  Counts are exact integers at any scale.
    """

    index: int
    kind: str  # "explicit" or "implicit"
    vertex_count: int
    edge_count: int
    fiber_width: int  # |S| of the level below; 0 at level 0
    graph: MultiGraph | None = None
    cover: CoveringGraph | None = None
    parent_graph: MultiGraph | None = None
    parent_spanning: SpanningData | None = None

    @property
    def is_explicit(self) -> bool:
        return self.kind == "explicit"

    def _need_explicit(self) -> MultiGraph:
        if not self.is_explicit:
            raise UnsupportedOnImplicitError(
                f"level {self.index} is implicit ({self.vertex_count} vertices); "
                "only lazy point queries are supported"
            )
        return self.graph

    @cached_property
    def spanning(self) -> SpanningData:
        """This level's own spanning data — the fiber chart of the next level."""
        return spanning_tree(self._need_explicit())

    @cached_property
    def girth_value(self) -> int:
        return girth(self._need_explicit())

    @cached_property
    def diameter_value(self) -> int:
        g = self._need_explicit()
        return max(max(bfs_distances(g, v)) for v in range(g.vertex_count))

    @cached_property
    def point_masks(self) -> tuple[int, ...]:
        """Basepoint parity masks of every vertex (explicit levels >= 1)."""
        self._need_explicit()
        if self.cover is None:
            return (0,) * self.vertex_count
        c = self.cover
        return tuple(
            point_mask(c.base, c.spanning, c.vertex_coord(vid))
            for vid in range(self.vertex_count)
        )

    @cached_property
    def wall_diameter(self) -> int:
        """Largest d_W between vertices of this level (0 at level 0)."""
        masks = self.point_masks
        return max(
            ((masks[i] ^ masks[j]).bit_count() for i in range(len(masks)) for j in range(i)),
            default=0,
        )

    @cached_property
    def walls(self) -> WallStructure:
        self._need_explicit()
        if self.cover is None:
            raise InvalidInputError("level 0 is a base graph, not a cover; it has no walls")
        return wall_structure(self.cover)


def build_tower(levels: int, explicit_cap: int = 10_000) -> tuple[TowerLevel, ...]:
    """Build ``levels`` floors X_0 .. X_{levels-1}.

    A level is explicit while its vertex count is at most ``explicit_cap``
    and implicit beyond; with the default cap, levels 0-2 (1, 4, 128
    vertices) are explicit and level 3 is implicit with fiber width 129.
    """
    if levels < 1:
        raise InvalidInputError("a tower needs at least one level")
    if explicit_cap < 1:
        raise InvalidInputError("explicit_cap must be >= 1")
    base = figure_eight()
    floors = [
        TowerLevel(
            index=0,
            kind="explicit",
            vertex_count=base.vertex_count,
            edge_count=base.edge_count,
            fiber_width=0,
            graph=base,
        )
    ]
    for n in range(1, levels):
        prev = floors[-1]
        width = prev.edge_count - prev.vertex_count + 1
        if width > 4096:
            # Beyond this the *counts* stop being representable integers
            # (the next width alone is ~2^width bits).
            raise InvalidInputError(
                f"level {n} would have fiber width {width}; "
                "its vertex count is no longer a representable integer"
            )
        v_count = prev.vertex_count << width
        e_count = prev.edge_count << width
        if prev.is_explicit and v_count <= explicit_cap:
            cover = z2_cover(prev.graph, prev.spanning)
            floors.append(
                TowerLevel(
                    index=n,
                    kind="explicit",
                    vertex_count=v_count,
                    edge_count=e_count,
                    fiber_width=width,
                    graph=cover.total,
                    cover=cover,
                    parent_graph=prev.graph,
                    parent_spanning=cover.spanning,
                )
            )
        else:
            floors.append(
                TowerLevel(
                    index=n,
                    kind="implicit",
                    vertex_count=v_count,
                    edge_count=e_count,
                    fiber_width=width,
                    parent_graph=prev.graph if prev.is_explicit else None,
                    parent_spanning=prev.spanning if prev.is_explicit else None,
                )
            )
    return tuple(floors)


@dataclass(frozen=True)
class LevelStats:
    index: int
    vertex_count: int
    edge_count: int
    girth: int
    diameter: int
    wall_diameter: int
    max_ball_sizes: tuple[int, ...]  # radius 0 .. diameter


def level_stats(level: TowerLevel) -> LevelStats:
    """Exhaustively computed scale diagnostics of one explicit level."""
    g = level._need_explicit()
    diam = level.diameter_value
    profile = [0] * (diam + 1)
    for v in range(g.vertex_count):
        dist = bfs_distances(g, v)
        counts = [0] * (diam + 1)
        for d in dist:
            counts[d] += 1
        running = 0
        for r in range(diam + 1):
            running += counts[r]
            profile[r] = max(profile[r], running)
    return LevelStats(
        index=level.index,
        vertex_count=level.vertex_count,
        edge_count=level.edge_count,
        girth=level.girth_value,
        diameter=diam,
        wall_diameter=level.wall_diameter,
        max_ball_sizes=tuple(profile),
    )


@dataclass(frozen=True)
class BoxSpace:
    """The coarse disjoint union of the tower's levels under one metric.

    Within a level, distance is the graph metric or the wall metric per the
    selector; across levels m != n it is diam(X_m) + diam(X_n) + m + n with
    diameters taken in the selected metric.
    """

    levels: tuple[TowerLevel, ...]
    metric: str = "graph"

    def __post_init__(self) -> None:
        if self.metric not in ("graph", "wall"):
            raise InvalidInputError(f"unknown metric selector {self.metric!r}")

    def _level(self, m: int) -> TowerLevel:
        if not 0 <= m < len(self.levels):
            raise InvalidInputError(f"level {m} out of range")
        level = self.levels[m]
        if not level.is_explicit:
            raise UnsupportedOnImplicitError(
                f"box-space distances need diam(X_{m}), which is not computable "
                "on an implicit level"
            )
        return level

    @cached_property
    def _graph_distance_rows(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return {}

    def _graph_distance(self, level: TowerLevel, u: int, v: int) -> int:
        key = (level.index, u)
        rows = self._graph_distance_rows
        if key not in rows:
            rows[key] = tuple(bfs_distances(level.graph, u))
        return rows[key][v]

    def level_diameter(self, m: int) -> int:
        level = self._level(m)
        return level.diameter_value if self.metric == "graph" else level.wall_diameter

    def distance(self, p: tuple[int, int], q: tuple[int, int]) -> int:
        (m, u), (n, v) = p, q
        lm, ln = self._level(m), self._level(n)
        if not 0 <= u < lm.vertex_count:
            raise InvalidInputError(f"vertex {u} out of range at level {m}")
        if not 0 <= v < ln.vertex_count:
            raise InvalidInputError(f"vertex {v} out of range at level {n}")
        if m != n:
            return self.level_diameter(m) + self.level_diameter(n) + m + n
        if self.metric == "graph":
            return self._graph_distance(lm, u, v)
        masks = lm.point_masks
        return (masks[u] ^ masks[v]).bit_count()


def box_distance(space: BoxSpace, p: tuple[int, int], q: tuple[int, int]) -> int:
    """Distance in the coarse union between points (level, vertex id)."""
    return space.distance(p, q)


def _lazy_level(tower) -> TowerLevel:
    for level in tower:
        if not level.is_explicit:
            if level.parent_graph is None or level.parent_spanning is None:
                raise UnsupportedOnImplicitError(
                    f"implicit level {level.index} has an implicit predecessor; "
                    "no engine data is available"
                )
            return level
    raise InvalidInputError("tower has no implicit level")


def implicit_wall_distance(tower, x, y) -> int:
    """Exact d_W between implicit-level points (predecessor vertex, fiber).

    Runs on predecessor data only; at level 3 the fibers are 129-bit masks
    and the query is still O(|E(X_2)|)ish.
    """
    level = _lazy_level(tower)
    masks = (
        point_mask(level.parent_graph, level.parent_spanning, x),
        point_mask(level.parent_graph, level.parent_spanning, y),
    )
    return (masks[0] ^ masks[1]).bit_count()


def implicit_graph_distance(tower, x, y, radius_cap: int = 12):
    """Exact graph distance between implicit-level points when it is at most
    ``radius_cap``, else ``ExceedsCap``; state growth is about 4^r."""
    level = _lazy_level(tower)
    return admissible_distance(level.parent_graph, level.parent_spanning, x, y, radius_cap)


def _ball_is_tree(g: MultiGraph, center: int, radius: int) -> bool:
    """Whether the ball of the given radius is a tree.

    The ball subgraph is the union of all paths of length <= radius from the
    center: vertices at distance <= radius, and edges whose nearer endpoint
    is at distance <= radius - 1.  Balls are connected, so tree-ness is the
    edge count check.
    """
    dist = bfs_distances(g, center)
    ball_vertices = sum(1 for d in dist if 0 <= d <= radius)
    ball_edges = 0
    for u, v in g.edges:
        if min(dist[u], dist[v]) <= radius - 1:
            ball_edges += 1
    return ball_edges == ball_vertices - 1


def girth_growth_report(tower) -> tuple[tuple[int, int], ...]:
    """Girths of the explicit levels, with growth and tree-ball verification.

    Checks girth strictly increases along consecutive explicit levels and
    that every ball of radius floor((girth-1)/2) is a tree; failures raise
    InternalConsistencyError since they cannot happen on a valid tower.
    """
    rows = []
    previous = None
    for level in tower:
        if not level.is_explicit:
            break
        g = level.girth_value
        rows.append((level.index, g))
        if previous is not None and g <= previous:
            raise InternalConsistencyError(
                f"girth failed to grow: level {level.index} has girth {g} <= {previous}"
            )
        previous = g
        radius = (g - 1) // 2
        for v in range(level.graph.vertex_count):
            if not _ball_is_tree(level.graph, v, radius):
                raise InternalConsistencyError(
                    f"ball of radius {radius} at vertex {v} of level {level.index} is not a tree"
                )
    return tuple(rows)


def _edge_list_sha256(g: MultiGraph) -> str:
    return hashlib.sha256(to_edge_list_text(g).encode("utf-8")).hexdigest()


def manifest_text(tower, explicit_cap: int = 10_000) -> str:
    """The reproducibility anchor: one stanza per level, stable across runs.

    When the tower ends in an explicit level whose successor would exceed
    the cap, a stanza for that never-to-be-materialized implicit successor
    is appended — its counts and fiber width are exact.
    """
    lines = ["boxcover tower manifest", f"levels: {len(tower)}", f"explicit_cap: {explicit_cap}"]

    def implicit_stanza(index: int, v_count: int, e_count: int, width: int,
                        parent: TowerLevel | None) -> None:
        lines.append("")
        lines.append(f"level: {index}")
        lines.append("kind: implicit")
        lines.append(f"vertices: {v_count}")
        lines.append(f"edges: {e_count}")
        lines.append(f"fiber_width: {width}")
        if parent is not None:
            order = " ".join(str(e) for e in parent.spanning.s_edges)
            lines.append(f"fiber_order: level-{parent.index} S-edges ascending: {order}")

    for level in tower:
        if level.is_explicit:
            lines.append("")
            lines.append(f"level: {level.index}")
            lines.append("kind: explicit")
            lines.append(f"vertices: {level.vertex_count}")
            lines.append(f"edges: {level.edge_count}")
            lines.append(f"girth: {level.girth_value}")
            lines.append(f"diameter: {level.diameter_value}")
            tree = " ".join(str(e) for e in sorted(level.spanning.tree_edges)) or "-"
            lines.append(f"tree_edges: {tree}")
            lines.append(f"s_edges: {' '.join(str(e) for e in level.spanning.s_edges)}")
            lines.append(f"edge_list_sha256: {_edge_list_sha256(level.graph)}")
        else:
            parent = None
            if level.parent_graph is not None:
                parent = tower[level.index - 1]
            implicit_stanza(level.index, level.vertex_count, level.edge_count,
                            level.fiber_width, parent)
    last = tower[-1]
    if last.is_explicit:
        width = last.edge_count - last.vertex_count + 1
        v_next = last.vertex_count << width
        if v_next > explicit_cap:
            implicit_stanza(last.index + 1, v_next, last.edge_count << width, width, last)
    return "\n".join(lines) + "\n"
