"""Wall structures and the wall metric on Z/2-homology covers.

A wall is the preimage of one base edge; removing it splits the cover into
exactly two half-spaces (this needs the base to be 2-connected), and the wall
metric d_W counts the walls separating two vertices.

Everything scalable in this module works on *points* ``(base vertex id,
fiber bitmask)`` against base-graph data only, never on a materialized cover:
the parity vector of a pair — which base edges appear an odd number of times
in any admissible path between them — has a closed form

    pv(x, y) = R(x0) ^ R(y0) ^ XOR of fundamental-cycle masks over tau_x ^ tau_y

where R(v) is the bitmask of tree edges on the root-to-v path.  Its popcount
is d_W.  The explicit half-space route (delete a wall, label components) is
kept as the independent oracle for cross-checks at desk scale.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .covering import CoveringGraph
from .errors import InternalConsistencyError, InvalidInputError, NotTwoConnectedError
from .multigraph import (
    MultiGraph,
    Path,
    SpanningData,
    _bfs_levels,
    empty_path,
    is_connected,
    is_two_connected,
)

Point = tuple[int, int]


class _ExceedsCapType:
    """Singleton outcome of a capped search that found nothing within range."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ExceedsCap"

    def __bool__(self) -> bool:
        return False


ExceedsCap = _ExceedsCapType()


def _check_point(base: MultiGraph, spanning: SpanningData, p) -> Point:
    v, tau = p
    if not 0 <= v < base.vertex_count:
        raise InvalidInputError(f"base vertex {v} out of range")
    if not 0 <= tau < (1 << len(spanning.s_edges)):
        raise InvalidInputError(
            f"fiber bitmask {tau:#x} does not fit width {len(spanning.s_edges)}"
        )
    return (v, tau)


@lru_cache(maxsize=None)
def _parity_masks(base: MultiGraph, spanning: SpanningData):
    """Per-vertex root-path masks and per-S-edge fundamental-cycle masks.

    Both are bitmasks over base edge ids.
    """
    root_path = [0] * base.vertex_count
    by_depth = sorted(range(base.vertex_count), key=spanning.depth.__getitem__)
    for v in by_depth:
        if v == spanning.root:
            continue
        root_path[v] = root_path[spanning.parent_vertex[v]] ^ (1 << spanning.parent_edge[v])
    cycles = []
    for i, e in enumerate(spanning.s_edges):
        tail, head = spanning.orientation[i]
        cycles.append(root_path[tail] ^ root_path[head] ^ (1 << e))
    return tuple(root_path), tuple(cycles)


def parity_vector(base: MultiGraph, spanning: SpanningData, x, y) -> int:
    """Bitmask over base edges: bit e = parity of e's multiplicity in any
    (x,y)-admissible path.  O(|tau_x ^ tau_y|) after cached setup."""
    (x0, tx) = _check_point(base, spanning, x)
    (y0, ty) = _check_point(base, spanning, y)
    root_path, cycles = _parity_masks(base, spanning)
    pv = root_path[x0] ^ root_path[y0]
    diff = tx ^ ty
    while diff:
        low = diff & -diff
        pv ^= cycles[low.bit_length() - 1]
        diff ^= low
    return pv


def point_mask(base: MultiGraph, spanning: SpanningData, x) -> int:
    """Parity vector from the basepoint (root, 0) to x.

    Masks factor the pairwise parity vector: pv(x, y) = mask(x) ^ mask(y),
    so bulk d_W computations reduce to XOR + popcount of cached masks.
    """
    (x0, tx) = _check_point(base, spanning, x)
    root_path, cycles = _parity_masks(base, spanning)
    mask = root_path[x0]
    while tx:
        low = tx & -tx
        mask ^= cycles[low.bit_length() - 1]
        tx ^= low
    return mask


def parity_hex(base: MultiGraph, pv: int) -> str:
    """Fixed-width lowercase hex of a parity vector (bit e = base edge e)."""
    nibbles = max(1, (base.edge_count + 3) // 4)
    return format(pv, f"0{nibbles}x")


def wall_distance(base: MultiGraph, spanning: SpanningData, x, y) -> int:
    """Number of walls separating x and y: the parity vector's popcount."""
    return parity_vector(base, spanning, x, y).bit_count()


def separates(base: MultiGraph, spanning: SpanningData, e: int, x, y) -> bool:
    """Whether the wall over base edge e separates the pair."""
    if not 0 <= e < base.edge_count:
        raise InvalidInputError(f"base edge {e} out of range")
    return bool((parity_vector(base, spanning, x, y) >> e) & 1)


def in_positive_half(base: MultiGraph, spanning: SpanningData, e: int, x) -> bool:
    """Predicate form of half-space membership: the positive side of wall e is
    the side of the basepoint (root, 0), i.e. parity bit e equals 0."""
    return not separates(base, spanning, e, (spanning.root, 0), x)


def _extend(vertices: list[int], edges: list[int], leg: Path) -> None:
    vertices.extend(leg.vertices[1:])
    edges.extend(leg.edges)


def canonical_admissible_path(base: MultiGraph, spanning: SpanningData, x, y) -> Path:
    """The deterministic admissible path: tree path x0 -> y0, then for each
    S-edge s in tau_x ^ tau_y (ascending) a loop from y0 through s.

    Tree legs contribute no S-edges, so condition (ii) holds by construction;
    loops are anchored at y0 so any S-edge order yields the same parities —
    ascending order is purely for determinism.
    """
    (x0, tx) = _check_point(base, spanning, x)
    (y0, ty) = _check_point(base, spanning, y)
    trunk = spanning.tree_path(x0, y0)
    vertices = list(trunk.vertices)
    edges = list(trunk.edges)
    diff = tx ^ ty
    for i in range(len(spanning.s_edges)):
        if not (diff >> i) & 1:
            continue
        e = spanning.s_edges[i]
        tail, head = spanning.orientation[i]
        _extend(vertices, edges, spanning.tree_path(y0, tail))
        vertices.append(head)
        edges.append(e)
        _extend(vertices, edges, spanning.tree_path(head, y0))
    return Path(tuple(vertices), tuple(edges))


def is_admissible(base: MultiGraph, spanning: SpanningData, p: Path, x, y) -> bool:
    """Conditions (i) endpoints x0 -> y0 and (ii) S-edge parities equal the
    indicator of tau_x ^ tau_y."""
    if not p.valid_in(base):
        raise InvalidInputError("path is not a valid walk in the base graph")
    (x0, tx) = _check_point(base, spanning, x)
    (y0, ty) = _check_point(base, spanning, y)
    if p.start != x0 or p.end != y0:
        return False
    acc = 0
    s_index = spanning.s_index
    for e in p.edges:
        i = s_index.get(e)
        if i is not None:
            acc ^= 1 << i
    return acc == tx ^ ty


def _state_bfs(base: MultiGraph, spanning: SpanningData, start: Point,
               radius_cap: int, target: Point | None, want_parents: bool):
    """BFS over states (vertex, fiber); crossing an S-edge flips its bit.

    Returns (distance map, parent map, target found).  Never expands past the
    cap — the state space is V * 2^{|S|} and must stay unexplored at scale.
    """
    if radius_cap < 0:
        raise InvalidInputError("radius_cap must be >= 0")
    s_index = spanning.s_index
    adj = base.adjacency
    dist: dict[Point, int] = {start: 0}
    parents: dict[Point, tuple[Point, int]] = {}
    if target is not None and target == start:
        return dist, parents, True
    queue = deque([start])
    while queue:
        state = queue.popleft()
        d = dist[state]
        if d == radius_cap:
            continue
        v, tau = state
        for eid, w, _ in adj[v]:
            i = s_index.get(eid)
            nxt = (w, tau if i is None else tau ^ (1 << i))
            if nxt in dist:
                continue
            dist[nxt] = d + 1
            if want_parents:
                parents[nxt] = (state, eid)
            if nxt == target:
                return dist, parents, True
            queue.append(nxt)
    return dist, parents, target is None


def shortest_admissible_path(base: MultiGraph, spanning: SpanningData, x, y, radius_cap: int):
    """A minimum-length (x,y)-admissible path, or ``ExceedsCap`` if none has
    length <= radius_cap.  Its length equals the cover graph distance."""
    start = _check_point(base, spanning, x)
    target = _check_point(base, spanning, y)
    if start == target:
        return empty_path(start[0])
    dist, parents, found = _state_bfs(base, spanning, start, radius_cap, target, True)
    if not found:
        return ExceedsCap
    vertices = [target[0]]
    edges: list[int] = []
    state = target
    while state != start:
        state, eid = parents[state]
        edges.append(eid)
        vertices.append(state[0])
    return Path(tuple(reversed(vertices)), tuple(reversed(edges)))


def admissible_distance(base: MultiGraph, spanning: SpanningData, x, y, radius_cap: int):
    """Length of the shortest admissible path, or ``ExceedsCap``."""
    start = _check_point(base, spanning, x)
    target = _check_point(base, spanning, y)
    dist, _, found = _state_bfs(base, spanning, start, radius_cap, target, False)
    return dist[target] if found else ExceedsCap


def admissible_distances_from(base: MultiGraph, spanning: SpanningData, x, radius_cap: int) -> dict[Point, int]:
    """All admissible-path distances from x up to the cap, keyed by point.

    Only sane at desk scale: the full state space is V * 2^{|S|}.
    """
    start = _check_point(base, spanning, x)
    dist, _, _ = _state_bfs(base, spanning, start, radius_cap, None, False)
    return dist


@dataclass(frozen=True)
class WallStructure:
    """Walls of an explicit Z/2 cover with verified two-sided half-spaces.

    ``positive[e]`` is the vertex set of the component of (cover minus wall e)
    containing the basepoint (root, 0); construction fails rather than store
    an unverified split.
    """

    cover: CoveringGraph
    basepoint: int
    positive: tuple[frozenset[int], ...]

    @property
    def wall_count(self) -> int:
        return len(self.positive)

    def wall_edges(self, e: int) -> tuple[int, ...]:
        """Cover edge ids of the wall over base edge e."""
        n = self.cover.fiber_count
        if not 0 <= e < self.cover.base.edge_count:
            raise InvalidInputError(f"base edge {e} out of range")
        return tuple(range(e * n, (e + 1) * n))

    @property
    def walls(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.wall_edges(e) for e in range(self.wall_count))

    def half_spaces(self, e: int) -> tuple[frozenset[int], frozenset[int]]:
        pos = self.positive[e]
        neg = frozenset(v for v in range(self.cover.total.vertex_count) if v not in pos)
        return pos, neg

    def in_positive(self, e: int, vid: int) -> bool:
        return vid in self.positive[e]

    def separates_pair(self, e: int, xid: int, yid: int) -> bool:
        return (xid in self.positive[e]) != (yid in self.positive[e])

    def separation_count(self, xid: int, yid: int) -> int:
        """d_W by brute half-space membership — the oracle route."""
        return sum(1 for pos in self.positive if (xid in pos) != (yid in pos))

    def csv_text(self) -> str:
        lines = ["wall,base_edge,size,positive_size,negative_size"]
        total_v = self.cover.total.vertex_count
        n = self.cover.fiber_count
        for e, pos in enumerate(self.positive):
            lines.append(f"{e},{e},{n},{len(pos)},{total_v - len(pos)}")
        return "\n".join(lines) + "\n"


def wall_structure(cover: CoveringGraph) -> WallStructure:
    """Build and verify the wall structure of an explicit Z/2 cover.

    Raises NotTwoConnectedError when the base is not a valid pairing (a
    bridge or disconnection makes some wall fail to split in two), and
    InternalConsistencyError if a wall of a valid input misbehaves — which
    must never happen.
    """
    if cover.kind != "z2":
        raise InvalidInputError("wall structures are defined for Z/2 covers")
    base = cover.base
    if not is_connected(base) or not is_two_connected(base):
        raise NotTwoConnectedError("base is not 2-connected, so (cover, base) is not a Z/2-pair")
    total = cover.total
    n = cover.fiber_count
    basepoint = cover.vertex_id(cover.spanning.root, 0)
    positive = []
    for e in range(base.edge_count):
        skip = frozenset(range(e * n, (e + 1) * n))
        dist = _bfs_levels(total, basepoint, skip)
        inside = frozenset(v for v, d in enumerate(dist) if d >= 0)
        if len(inside) == total.vertex_count:
            raise InternalConsistencyError(f"wall over base edge {e} does not separate the cover")
        seed = next(v for v, d in enumerate(dist) if d < 0)
        other = _bfs_levels(total, seed, skip)
        outside = sum(1 for d in other if d >= 0)
        if len(inside) + outside != total.vertex_count:
            raise InternalConsistencyError(
                f"wall over base edge {e} splits the cover into more than two components"
            )
        positive.append(inside)
    return WallStructure(cover=cover, basepoint=basepoint, positive=tuple(positive))
