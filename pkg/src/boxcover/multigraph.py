"""Finite unoriented multigraphs: self-loops and parallel edges are first-class.

Vertices are dense integer ids ``0..vertex_count-1``; edges are dense integer
ids ``0..len(edges)-1`` in construction order.  Adjacency entries carry a
``forward`` flag telling whether the edge is traversed in stored endpoint
order, which is what lets a self-loop be walked in either direction.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidInputError, NotTwoConnectedError

Infinite = math.inf


@dataclass(frozen=True)
class MultiGraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise InvalidInputError(f"vertex_count must be >= 0, got {self.vertex_count}")
        for eid, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InvalidInputError(f"edge {eid} endpoints ({u},{v}) out of range")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int, bool], ...], ...]:
        """Per vertex: (edge id, other endpoint, forward) in ascending edge id.

        A self-loop contributes two entries at its vertex, one per traversal
        direction; a non-loop edge contributes one entry at each endpoint.
        """
        adj: list[list[tuple[int, int, bool]]] = [[] for _ in range(self.vertex_count)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((eid, v, True))
            adj[v].append((eid, u, False))
        return tuple(tuple(entries) for entries in adj)

    def endpoints(self, eid: int) -> tuple[int, int]:
        if not 0 <= eid < len(self.edges):
            raise InvalidInputError(f"edge id {eid} out of range")
        return self.edges[eid]

    def is_self_loop(self, eid: int) -> bool:
        u, v = self.endpoints(eid)
        return u == v

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class Path:
    """Alternating vertex/edge walk; ``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1]``."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.edges) + 1:
            raise InvalidInputError("path needs exactly one more vertex than edges")

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def is_loop(self) -> bool:
        return self.length > 0 and self.start == self.end

    def valid_in(self, g: MultiGraph) -> bool:
        if any(not 0 <= v < g.vertex_count for v in self.vertices):
            return False
        for i, eid in enumerate(self.edges):
            if not 0 <= eid < g.edge_count:
                return False
            u, v = g.endpoints(eid)
            if {u, v} != {self.vertices[i], self.vertices[i + 1]}:
                return False
        return True


def empty_path(v: int) -> Path:
    return Path((v,), ())


@dataclass(frozen=True)
class SpanningData:
    """A spanning tree plus the oriented complement that indexes the fiber bits.

    ``s_edges`` is ascending by edge id and fixes the bit order of fiber
    labels everywhere downstream.  ``orientation[i]`` is the (tail, head) of
    ``s_edges[i]``; tail is the smaller endpoint (stored order for a self-loop).
    """

    tree_edges: frozenset[int]
    s_edges: tuple[int, ...]
    orientation: tuple[tuple[int, int], ...]
    parent_vertex: tuple[int, ...]
    parent_edge: tuple[int, ...]
    root: int = 0

    @cached_property
    def s_index(self) -> dict[int, int]:
        return {eid: i for i, eid in enumerate(self.s_edges)}

    @cached_property
    def depth(self) -> tuple[int, ...]:
        depths = [-1] * len(self.parent_vertex)
        for v in range(len(self.parent_vertex)):
            chain = []
            x = v
            while depths[x] < 0 and x != self.root:
                chain.append(x)
                x = self.parent_vertex[x]
            base = 0 if x == self.root else depths[x]
            for x in reversed(chain):
                base += 1
                depths[x] = base
        depths[self.root] = 0
        return tuple(depths)

    def tree_path(self, u: int, v: int) -> Path:
        """The unique simple path from u to v inside the spanning tree."""
        up_v, up_e = [u], []
        down_v, down_e = [v], []
        a, b = u, v
        da, db = self.depth[a], self.depth[b]
        while da > db:
            up_e.append(self.parent_edge[a])
            a = self.parent_vertex[a]
            up_v.append(a)
            da -= 1
        while db > da:
            down_e.append(self.parent_edge[b])
            b = self.parent_vertex[b]
            down_v.append(b)
            db -= 1
        while a != b:
            up_e.append(self.parent_edge[a])
            a = self.parent_vertex[a]
            up_v.append(a)
            down_e.append(self.parent_edge[b])
            b = self.parent_vertex[b]
            down_v.append(b)
        vertices = up_v + down_v[-2::-1]
        edges = up_e + down_e[::-1]
        return Path(tuple(vertices), tuple(edges))

    def s_tail_head(self, eid: int) -> tuple[int, int]:
        return self.orientation[self.s_index[eid]]


def new_multigraph(vertex_count: int, endpoints) -> MultiGraph:
    """Build a validated multigraph; edge ids follow the input order."""
    return MultiGraph(vertex_count, tuple((int(u), int(v)) for u, v in endpoints))


def _bfs_levels(g: MultiGraph, root: int, skip_edges: frozenset[int] = frozenset()) -> list[int]:
    """Distances from root, -1 when unreachable; skip_edges are ignored entirely."""
    dist = [-1] * g.vertex_count
    dist[root] = 0
    queue = deque([root])
    adj = g.adjacency
    while queue:
        x = queue.popleft()
        dx = dist[x]
        for eid, y, _ in adj[x]:
            if eid in skip_edges or dist[y] >= 0:
                continue
            dist[y] = dx + 1
            queue.append(y)
    return dist


def is_connected(g: MultiGraph) -> bool:
    if g.vertex_count <= 1:
        return True
    return all(d >= 0 for d in _bfs_levels(g, 0))


def is_two_connected(g: MultiGraph) -> bool:
    """True iff deleting any single edge (one parallel copy) leaves g connected."""
    if not is_connected(g):
        raise InvalidInputError("2-connectivity is only defined here for connected graphs")
    for eid in range(g.edge_count):
        if g.is_self_loop(eid):
            continue
        if any(d < 0 for d in _bfs_levels(g, 0, frozenset((eid,)))):
            return False
    return True


def girth(g: MultiGraph):
    """Length of a shortest simple loop: 1 for a self-loop, 2 for a parallel
    pair, ``Infinite`` for a forest.

    Every simple loop through edge e decomposes as e plus a shortest simple
    path between its endpoints avoiding e, so the minimum over edges of
    (distance avoiding e) + 1 is exact.
    """
    best = Infinite
    for eid, (u, v) in enumerate(g.edges):
        if u == v:
            return 1
        d = _bfs_levels(g, u, frozenset((eid,)))[v]
        if d >= 0 and d + 1 < best:
            best = d + 1
    return best


def _bfs_tree(g: MultiGraph, root: int, skip_edges: frozenset[int] = frozenset()):
    """Deterministic BFS tree: FIFO queue, incident edges scanned in ascending id."""
    parent_vertex = [-1] * g.vertex_count
    parent_edge = [-1] * g.vertex_count
    seen = [False] * g.vertex_count
    seen[root] = True
    queue = deque([root])
    tree: set[int] = set()
    while queue:
        x = queue.popleft()
        for eid, y, _ in g.adjacency[x]:
            if eid in skip_edges or seen[y]:
                continue
            seen[y] = True
            parent_vertex[y] = x
            parent_edge[y] = eid
            tree.add(eid)
            queue.append(y)
    return tree, parent_vertex, parent_edge, all(seen)


def _spanning_from(g: MultiGraph, tree: set[int], parent_vertex, parent_edge, root: int) -> SpanningData:
    s_edges = tuple(eid for eid in range(g.edge_count) if eid not in tree)
    orientation = []
    for eid in s_edges:
        u, v = g.endpoints(eid)
        orientation.append((u, v) if u <= v else (v, u))
    return SpanningData(
        tree_edges=frozenset(tree),
        s_edges=s_edges,
        orientation=tuple(orientation),
        parent_vertex=tuple(parent_vertex),
        parent_edge=tuple(parent_edge),
        root=root,
    )


def spanning_tree(g: MultiGraph) -> SpanningData:
    """BFS spanning tree rooted at vertex 0, ties broken by smallest edge id."""
    tree, pv, pe, spanning = _bfs_tree(g, 0)
    if not spanning:
        raise InvalidInputError("spanning tree requires a connected graph")
    return _spanning_from(g, tree, pv, pe, 0)


def spanning_tree_avoiding(g: MultiGraph, eid: int) -> SpanningData:
    """Spanning tree of g avoiding one chosen edge, which therefore lands in S."""
    if not 0 <= eid < g.edge_count:
        raise InvalidInputError(f"edge id {eid} out of range")
    tree, pv, pe, spanning = _bfs_tree(g, 0, frozenset((eid,)))
    if not spanning:
        raise NotTwoConnectedError(f"removing edge {eid} disconnects the graph")
    return _spanning_from(g, tree, pv, pe, 0)


def spanning_from_tree_edges(g: MultiGraph, tree_edge_ids) -> SpanningData:
    """Spanning data for an explicitly chosen tree (validated)."""
    tree = set(int(e) for e in tree_edge_ids)
    if len(tree) != g.vertex_count - 1:
        raise InvalidInputError("a spanning tree needs exactly |V|-1 edges")
    if any(g.is_self_loop(e) for e in tree):
        raise InvalidInputError("a tree cannot contain a self-loop")
    sub, pv, pe, _ = _bfs_tree(g, 0, frozenset(e for e in range(g.edge_count) if e not in tree))
    if sub != tree:
        raise InvalidInputError("given edges do not form a spanning tree")
    return _spanning_from(g, tree, pv, pe, 0)


def bfs_distance(g: MultiGraph, u: int, v: int) -> int | None:
    """Shortest path length between u and v; None when unreachable."""
    if not (0 <= u < g.vertex_count and 0 <= v < g.vertex_count):
        raise InvalidInputError("vertex id out of range")
    d = _bfs_levels(g, u)[v]
    return d if d >= 0 else None


def bfs_distances(g: MultiGraph, u: int) -> list[int]:
    """Distances from u to every vertex, -1 when unreachable."""
    return _bfs_levels(g, u)


def diameter(g: MultiGraph) -> int:
    if g.vertex_count == 0:
        raise InvalidInputError("diameter of the empty graph is undefined")
    best = 0
    for u in range(g.vertex_count):
        dist = _bfs_levels(g, u)
        if any(d < 0 for d in dist):
            raise InvalidInputError("diameter requires a connected graph")
        best = max(best, max(dist))
    return best


def from_edge_list_text(text: str) -> MultiGraph:
    """Parse the plain-text edge list format: first line "V E", then E lines "u v"."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise InvalidInputError("empty edge list document")
    try:
        v_count, e_count = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise InvalidInputError(f"bad header line {lines[0]!r}") from exc
    if len(lines) - 1 != e_count:
        raise InvalidInputError(f"header promises {e_count} edges, found {len(lines) - 1}")
    endpoints = []
    for ln in lines[1:]:
        try:
            u, v = (int(tok) for tok in ln.split())
        except ValueError as exc:
            raise InvalidInputError(f"bad edge line {ln!r}") from exc
        endpoints.append((u, v))
    return new_multigraph(v_count, endpoints)


def to_edge_list_text(g: MultiGraph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
