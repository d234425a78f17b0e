"""Covering graphs of finite multigraphs.

Given a base graph, a spanning tree T, and the oriented complement S, a
surjection of the free group on S onto a finite group K yields a cover with
vertex set V(base) x K.  The mod-2 homology specialization takes K to be the
power set of S acting by symmetric difference; fibers are then plain integer
bitmasks (bit i <-> i-th S-edge in ascending edge-id order).

Cover ids are dense and lexicographic: vertex (v, k) gets id v*|K| + k and
edge (e, k) gets id e*|K| + k, so projections are a single integer division.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidInputError
from .multigraph import (
    MultiGraph,
    Path,
    SpanningData,
    is_connected,
    spanning_tree,
)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as an explicit multiplication table over 0..order-1."""

    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    identity: int

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        inv = [-1] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a][b] == self.identity:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverse[a]


def finite_group(table, names=None) -> FiniteGroup:
    """Validate a multiplication table (identity, inverses, associativity)."""
    tab = tuple(tuple(int(x) for x in row) for row in table)
    n = len(tab)
    if any(len(row) != n for row in tab):
        raise InvalidInputError("multiplication table must be square")
    if any(not 0 <= x < n for row in tab for x in row):
        raise InvalidInputError("table entries must be element indices")
    identity = None
    for e in range(n):
        if all(tab[e][x] == x and tab[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise InvalidInputError("table has no identity element")
    for a in range(n):
        if all(tab[a][b] != identity for b in range(n)):
            raise InvalidInputError(f"element {a} has no inverse")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if tab[tab[a][b]][c] != tab[a][tab[b][c]]:
                    raise InvalidInputError("table is not associative")
    if names is None:
        names = tuple(str(i) for i in range(n))
    else:
        names = tuple(str(x) for x in names)
        if len(names) != n:
            raise InvalidInputError("need one name per element")
    return FiniteGroup(tab, names, identity)


def z2_power_group(n: int) -> FiniteGroup:
    """(Z/2)^n with elements as bitmasks and XOR as the operation."""
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    order = 1 << n
    table = tuple(tuple(a ^ b for b in range(order)) for a in range(order))
    names = tuple("(" + ",".join(str((k >> i) & 1) for i in range(n)) + ")" for k in range(order))
    return FiniteGroup(table, names, 0)


def trivial_group() -> FiniteGroup:
    return FiniteGroup(((0,),), ("e",), 0)


def generates(group: FiniteGroup, elements) -> bool:
    """True iff the given elements generate the whole group."""
    reached = {group.identity}
    frontier = deque(reached)
    gens = list(elements)
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = group.mul(g, x)
            if y not in reached:
                reached.add(y)
                frontier.append(y)
    return len(reached) == group.order


def fiber_hex(width_bits: int, fiber: int) -> str:
    """Fixed-width lowercase hex of a fiber bitmask (bit i = i-th S-edge)."""
    nibbles = max(1, (width_bits + 3) // 4)
    return format(fiber, f"0{nibbles}x")


@dataclass(frozen=True)
class CoveringGraph:
    base: MultiGraph
    spanning: SpanningData
    total: MultiGraph
    fiber_count: int
    kind: str  # "z2" or "general"
    group: FiniteGroup | None = None
    images: tuple[int, ...] | None = None  # aligned with spanning.s_edges
    connected: bool = True

    @property
    def fiber_width(self) -> int:
        """Bit width of Z/2 fibers (number of S-edges)."""
        return len(self.spanning.s_edges)

    def vertex_id(self, v: int, k: int) -> int:
        if not (0 <= v < self.base.vertex_count and 0 <= k < self.fiber_count):
            raise InvalidInputError(f"cover vertex ({v},{k}) out of range")
        return v * self.fiber_count + k

    def vertex_coord(self, vid: int) -> tuple[int, int]:
        if not 0 <= vid < self.total.vertex_count:
            raise InvalidInputError(f"cover vertex id {vid} out of range")
        return divmod(vid, self.fiber_count)

    def edge_id(self, e: int, k: int) -> int:
        if not (0 <= e < self.base.edge_count and 0 <= k < self.fiber_count):
            raise InvalidInputError(f"cover edge ({e},{k}) out of range")
        return e * self.fiber_count + k

    def edge_coord(self, eid: int) -> tuple[int, int]:
        if not 0 <= eid < self.total.edge_count:
            raise InvalidInputError(f"cover edge id {eid} out of range")
        return divmod(eid, self.fiber_count)

    def project_vertex(self, vid: int) -> int:
        return self.vertex_coord(vid)[0]

    def project_edge(self, eid: int) -> int:
        return self.edge_coord(eid)[0]

    def cloud(self, k: int) -> tuple[int, ...]:
        """All cover vertices with fiber label k."""
        if not 0 <= k < self.fiber_count:
            raise InvalidInputError(f"fiber label {k} out of range")
        return tuple(v * self.fiber_count + k for v in range(self.base.vertex_count))

    def fiber_name(self, k: int) -> str:
        if self.kind == "z2":
            return fiber_hex(self.fiber_width, k)
        return self.group.names[k]

    def fiber_action(self, eid: int, k: int, forward: bool = True) -> int:
        """Fiber label after crossing S-edge ``eid`` (tail->head when forward)."""
        if eid not in self.spanning.s_index:
            raise InvalidInputError(f"edge {eid} is not an S-edge")
        i = self.spanning.s_index[eid]
        if self.kind == "z2":
            return k ^ (1 << i)
        img = self.images[i] if forward else self.group.inv(self.images[i])
        return self.group.mul(img, k)


def _assemble_cover(base: MultiGraph, spanning: SpanningData, fiber_count: int,
                    act, kind: str, group=None, images=None) -> CoveringGraph:
    tree = spanning.tree_edges
    endpoints: list[tuple[int, int]] = []
    for e, (x, y) in enumerate(base.edges):
        if e in tree:
            for k in range(fiber_count):
                endpoints.append((x * fiber_count + k, y * fiber_count + k))
        else:
            tail, head = spanning.s_tail_head(e)
            for k in range(fiber_count):
                endpoints.append((tail * fiber_count + k, head * fiber_count + act(e, k)))
    total = MultiGraph(base.vertex_count * fiber_count, tuple(endpoints))
    return CoveringGraph(
        base=base,
        spanning=spanning,
        total=total,
        fiber_count=fiber_count,
        kind=kind,
        group=group,
        images=images,
        connected=is_connected(total),
    )


def build_cover(base: MultiGraph, spanning: SpanningData, group: FiniteGroup, images) -> CoveringGraph:
    """Cover of ``base`` for the homomorphism sending S-edge e to ``images[e]``.

    ``images`` maps S-edge ids to element indices of ``group``.  The total
    graph is connected iff the images generate the group; the outcome is
    recorded on the ``connected`` field.
    """
    if not is_connected(base):
        raise InvalidInputError("covering construction requires a connected base")
    img_list = []
    for e in spanning.s_edges:
        if e not in images:
            raise InvalidInputError(f"missing group image for S-edge {e}")
        k = images[e]
        if not 0 <= k < group.order:
            raise InvalidInputError(f"image {k} for S-edge {e} out of range")
        img_list.append(k)
    img = tuple(img_list)

    def act(e: int, k: int) -> int:
        return group.mul(img[spanning.s_index[e]], k)

    return _assemble_cover(base, spanning, group.order, act, "general", group, img)


def z2_cover(base: MultiGraph, spanning: SpanningData | None = None) -> CoveringGraph:
    """The mod-2 homology cover: fibers are subsets of S acted on by XOR."""
    if not is_connected(base):
        raise InvalidInputError("covering construction requires a connected base")
    if spanning is None:
        spanning = spanning_tree(base)
    width = len(spanning.s_edges)
    s_index = spanning.s_index

    def act(e: int, k: int) -> int:
        return k ^ (1 << s_index[e])

    return _assemble_cover(base, spanning, 1 << width, act, "z2")


def lift_path(cover: CoveringGraph, p: Path, start: int) -> Path:
    """Unique lift of a base path starting at the given cover vertex.

    A self-loop step is traversed tail->head; use :func:`lift_walk` when the
    traversal direction of self-loops matters.
    """
    if not p.valid_in(cover.base):
        raise InvalidInputError("path is not valid in the base graph")
    if cover.project_vertex(start) != p.start:
        raise InvalidInputError("start vertex does not lie over the path origin")
    _, k = cover.vertex_coord(start)
    n = cover.fiber_count
    vertices = [start]
    edges = []
    s_set = cover.spanning.s_index
    for i, e in enumerate(p.edges):
        frm, to = p.vertices[i], p.vertices[i + 1]
        if e not in s_set:
            edges.append(e * n + k)
        else:
            tail, head = cover.spanning.s_tail_head(e)
            if frm == to or frm == tail:
                edges.append(e * n + k)
                k = cover.fiber_action(e, k, forward=True)
            else:
                k_prev = cover.fiber_action(e, k, forward=False)
                edges.append(e * n + k_prev)
                k = k_prev
        vertices.append(to * n + k)
    return Path(tuple(vertices), tuple(edges))


def lift_walk(cover: CoveringGraph, start: int, steps) -> Path:
    """Lift of a directed edge walk; each step is (edge id, forward flag).

    ``forward`` means the edge is traversed in stored endpoint order, which
    disambiguates the two directions around a self-loop.
    """
    v, k = cover.vertex_coord(start)
    n = cover.fiber_count
    vertices = [start]
    edges = []
    s_set = cover.spanning.s_index
    for e, forward in steps:
        u, w = cover.base.endpoints(e)
        frm, to = (u, w) if forward else (w, u)
        if frm != v:
            raise InvalidInputError(f"step edge {e} does not leave vertex {v}")
        if e not in s_set:
            edges.append(e * n + k)
        else:
            tail, _ = cover.spanning.s_tail_head(e)
            tailward = forward if u == w else (frm == tail)
            if tailward:
                edges.append(e * n + k)
                k = cover.fiber_action(e, k, forward=True)
            else:
                k_prev = cover.fiber_action(e, k, forward=False)
                edges.append(e * n + k_prev)
                k = k_prev
        v = to
        vertices.append(v * n + k)
    return Path(tuple(vertices), tuple(edges))


def _star(g: MultiGraph, v: int) -> list[int]:
    return sorted(e for e, _, _ in g.adjacency[v])


def verify_covering(cover: CoveringGraph) -> bool:
    """Certify the construction: counts, fiberwise incidence, star bijections."""
    base, total, n = cover.base, cover.total, cover.fiber_count
    if total.vertex_count != base.vertex_count * n:
        return False
    if total.edge_count != base.edge_count * n:
        return False
    for eid, (p, q) in enumerate(total.edges):
        e = eid // n
        x, y = base.endpoints(e)
        if Counter((p // n, q // n)) != Counter((x, y)):
            return False
    base_stars = [_star(base, v) for v in range(base.vertex_count)]
    for vid in range(total.vertex_count):
        projected = sorted(e // n for e, _, _ in total.adjacency[vid])
        if projected != base_stars[vid // n]:
            return False
    return True


def deck_transformation(cover: CoveringGraph, k) -> tuple[int, ...]:
    """Vertex permutation (v, m) -> (v, k*m); XOR by k in the Z/2 case."""
    n = cover.fiber_count
    if not 0 <= k < n:
        raise InvalidInputError(f"deck label {k} out of range")
    if cover.kind == "z2":
        return tuple(v * n + (m ^ k) for v in range(cover.base.vertex_count) for m in range(n))
    return tuple(
        v * n + cover.group.mul(k, m)
        for v in range(cover.base.vertex_count)
        for m in range(n)
    )


def is_cover_automorphism(cover: CoveringGraph, perm) -> bool:
    """True iff perm is a graph automorphism commuting with the projection."""
    total, n = cover.total, cover.fiber_count
    if sorted(perm) != list(range(total.vertex_count)):
        return False
    if any(perm[vid] // n != vid // n for vid in range(total.vertex_count)):
        return False
    per_base: dict[int, Counter] = {}
    per_base_mapped: dict[int, Counter] = {}
    for eid, (p, q) in enumerate(total.edges):
        e = eid // n
        a, b = perm[p], perm[q]
        per_base.setdefault(e, Counter())[(min(p, q), max(p, q))] += 1
        per_base_mapped.setdefault(e, Counter())[(min(a, b), max(a, b))] += 1
    return per_base == per_base_mapped


def find_labeled_isomorphism(
    g1: MultiGraph,
    labels1,
    g2: MultiGraph,
    labels2,
    root: int,
    root_image: int,
    vertex_labels1=None,
    vertex_labels2=None,
) -> list[int] | None:
    """Backtracking search for an edge-label-preserving isomorphism g1 -> g2
    sending ``root`` to ``root_image``; returns the vertex map or None.

    Labels are per-edge (e.g. projected base edge ids), so the result commutes
    with the labelling; optional vertex labels constrain vertex images too.
    """
    nv, ne = g1.vertex_count, g1.edge_count
    if g2.vertex_count != nv or g2.edge_count != ne:
        return None
    if vertex_labels1 is not None and vertex_labels1[root] != vertex_labels2[root_image]:
        return None
    vmap = [-1] * nv
    vmap_used = [False] * nv
    emap = [-1] * ne
    emap_used = [False] * ne

    def assign_vertex(u: int, u2: int, undo: list) -> bool:
        if vmap[u] != -1:
            return vmap[u] == u2
        if vmap_used[u2]:
            return False
        if vertex_labels1 is not None and vertex_labels1[u] != vertex_labels2[u2]:
            return False
        vmap[u] = u2
        vmap_used[u2] = True
        undo.append(("v", u, u2))
        return True

    def undo_all(undo: list) -> None:
        for kind, a, b in reversed(undo):
            if kind == "v":
                vmap[a] = -1
                vmap_used[b] = False
            else:
                emap[a] = -1
                emap_used[b] = False

    def match_vertex(order: list[int], idx: int) -> bool:
        if idx == len(order):
            return True
        u = order[idx]
        u2 = vmap[u]
        ends1 = g1.adjacency[u]
        ends2 = g2.adjacency[u2]
        if len(ends1) != len(ends2):
            return False
        used2 = [False] * len(ends2)

        def match_end(i: int) -> bool:
            if i == len(ends1):
                return match_vertex(order, idx + 1)
            e1, w1, _ = ends1[i]
            for j, (e2, w2, _) in enumerate(ends2):
                if used2[j] or labels1[e1] != labels2[e2]:
                    continue
                if emap[e1] != -1:
                    if emap[e1] != e2:
                        continue
                elif emap_used[e2]:
                    continue
                undo: list = []
                if emap[e1] == -1:
                    emap[e1] = e2
                    emap_used[e2] = True
                    undo.append(("e", e1, e2))
                new_vertex = vmap[w1] == -1
                if not assign_vertex(w1, w2, undo):
                    undo_all(undo)
                    continue
                used2[j] = True
                if new_vertex:
                    order.append(w1)
                if match_end(i + 1):
                    return True
                if new_vertex:
                    order.pop()
                used2[j] = False
                undo_all(undo)
            return False

        return match_end(0)

    start_undo: list = []
    if not assign_vertex(root, root_image, start_undo):
        return None
    if match_vertex([root], 0) and all(x != -1 for x in vmap):
        return list(vmap)
    return None


def composite_covering_ok(base: MultiGraph, mid: CoveringGraph, top: CoveringGraph) -> bool:
    """Check that projecting top -> mid -> base is itself a covering of base."""
    if mid.base is not base and mid.base != base:
        return False
    if top.base != mid.total:
        return False
    fiber = mid.fiber_count * top.fiber_count
    if top.total.vertex_count != base.vertex_count * fiber:
        return False
    if top.total.edge_count != base.edge_count * fiber:
        return False
    base_stars = [_star(base, v) for v in range(base.vertex_count)]

    def comp_v(vid: int) -> int:
        return mid.project_vertex(top.project_vertex(vid))

    def comp_e(eid: int) -> int:
        return mid.project_edge(top.project_edge(eid))

    for eid, (p, q) in enumerate(top.total.edges):
        x, y = base.endpoints(comp_e(eid))
        if Counter((comp_v(p), comp_v(q))) != Counter((x, y)):
            return False
    for vid in range(top.total.vertex_count):
        projected = sorted(comp_e(e) for e, _, _ in top.total.adjacency[vid])
        if projected != base_stars[comp_v(vid)]:
            return False
    return True


def composite_deck_transformations(base: MultiGraph, mid: CoveringGraph, top: CoveringGraph):
    """All automorphisms of the top graph commuting with the composite
    projection, found by backtracking; one search per fiber vertex."""
    def comp_v(vid: int) -> int:
        return mid.project_vertex(top.project_vertex(vid))

    def comp_e(eid: int) -> int:
        return mid.project_edge(top.project_edge(eid))

    g = top.total
    elabels = [comp_e(e) for e in range(g.edge_count)]
    vlabels = [comp_v(v) for v in range(g.vertex_count)]
    basepoint = 0
    fiber = [v for v in range(g.vertex_count) if vlabels[v] == vlabels[basepoint]]
    decks = []
    for target in fiber:
        perm = find_labeled_isomorphism(g, elabels, g, elabels, basepoint, target, vlabels, vlabels)
        if perm is not None:
            decks.append(tuple(perm))
    return fiber, decks


def check_transitivity(base: MultiGraph) -> bool:
    """Verify that two stacked Z/2 covers compose to a covering of the base
    whose deck group acts freely and transitively on a fiber.

    Intended for the figure-eight base (fiber size 128); any small connected
    base works.
    """
    mid = z2_cover(base)
    top = z2_cover(mid.total)
    if not composite_covering_ok(base, mid, top):
        return False
    fiber, decks = composite_deck_transformations(base, mid, top)
    if len(decks) != len(fiber):
        return False
    if len(set(decks)) != len(decks):
        return False
    identity = tuple(range(top.total.vertex_count))
    for perm in decks:
        if perm != identity and any(perm[v] == v for v in range(len(perm))):
            return False
    return True


def cayley_graph(group: FiniteGroup, generators) -> MultiGraph:
    """Undirected Cayley multigraph: one edge (k, g*k) per generator per element."""
    endpoints = []
    for g in generators:
        if not 0 <= g < group.order:
            raise InvalidInputError(f"generator index {g} out of range")
        for k in range(group.order):
            endpoints.append((k, group.mul(g, k)))
    return MultiGraph(group.order, tuple(endpoints))


def collapse_clouds(cover: CoveringGraph) -> MultiGraph:
    """Contract each cloud to a point, keeping only the S-type edges.

    The result is the Cayley graph of the deck group on the generator multiset
    given by the S-edge images.
    """
    n = cover.fiber_count
    endpoints = []
    for e in cover.spanning.s_edges:
        for k in range(n):
            endpoints.append((k, cover.fiber_action(e, k, forward=True)))
    return MultiGraph(n, tuple(endpoints))
