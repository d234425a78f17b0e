"""Finite groups, cover assembly, lifting, decks, and composite coverings."""

from __future__ import annotations

from dataclasses import replace

import pytest

from boxcover import (
    InvalidInputError,
    Path,
    build_cover,
    cayley_graph,
    check_transitivity,
    collapse_clouds,
    composite_covering_ok,
    deck_transformation,
    diameter,
    fiber_hex,
    find_labeled_isomorphism,
    finite_group,
    generates,
    girth,
    is_cover_automorphism,
    lift_path,
    lift_walk,
    new_multigraph,
    spanning_tree_avoiding,
    trivial_group,
    verify_covering,
    z2_cover,
    z2_power_group,
)
from oracles import all_directed_walks

Z3_TABLE = ((0, 1, 2), (1, 2, 0), (2, 0, 1))

# Latin square with identity 0 and two-sided inverses that fails
# associativity: (1*1)*2 = 2 but 1*(1*2) = 4.
NONASSOC_TABLE = (
    (0, 1, 2, 3, 4),
    (1, 0, 3, 4, 2),
    (2, 3, 4, 0, 1),
    (3, 4, 1, 2, 0),
    (4, 2, 0, 1, 3),
)


def test_finite_group_accepts_z3():
    g = finite_group(Z3_TABLE, names=("e", "a", "b"))
    assert g.order == 3 and g.identity == 0
    assert g.mul(1, 2) == 0 and g.inv(1) == 2
    assert g.names == ("e", "a", "b")


def test_finite_group_validation():
    with pytest.raises(InvalidInputError):
        finite_group(((0, 1), (1,)))  # ragged
    with pytest.raises(InvalidInputError):
        finite_group(((0, 5), (1, 0)))  # entry out of range
    with pytest.raises(InvalidInputError):
        finite_group(((0, 0), (0, 0)))  # no identity
    with pytest.raises(InvalidInputError):
        finite_group(NONASSOC_TABLE)
    with pytest.raises(InvalidInputError):
        finite_group(Z3_TABLE, names=("e", "a"))  # wrong name count


def test_z2_power_group():
    g = z2_power_group(3)
    assert g.order == 8 and g.identity == 0
    for a in range(8):
        for b in range(8):
            assert g.mul(a, b) == a ^ b
        assert g.inv(a) == a
    assert g.names[1] == "(1,0,0)" and g.names[6] == "(0,1,1)"
    assert generates(g, (1, 2, 4))
    assert not generates(g, (3, 5))  # closure is {0,3,5,6}
    assert trivial_group().order == 1
    with pytest.raises(InvalidInputError):
        z2_power_group(-1)


def test_fiber_hex():
    assert fiber_hex(1, 0) == "0"
    assert fiber_hex(2, 3) == "3"
    assert fiber_hex(5, 17) == "11"
    assert fiber_hex(8, 255) == "ff"
    assert fiber_hex(129, 1) == "0" * 32 + "1"
    assert len(fiber_hex(129, (1 << 129) - 1)) == 33


def test_z2_cover_of_figure_eight(fig8):
    cover = z2_cover(fig8)
    assert cover.kind == "z2"
    assert cover.fiber_count == 4 and cover.fiber_width == 2
    assert cover.total.vertex_count == 4 and cover.total.edge_count == 8
    assert cover.connected
    assert verify_covering(cover)
    # The cover is a four-cycle with every edge doubled.
    pairs = sorted(tuple(sorted(e)) for e in cover.total.edges)
    assert pairs == [(0, 1), (0, 1), (0, 2), (0, 2), (1, 3), (1, 3), (2, 3), (2, 3)]
    assert girth(cover.total) == 2
    assert diameter(cover.total) == 2


def test_cover_coordinates(fig8):
    cover = z2_cover(fig8)
    for v in range(cover.base.vertex_count):
        for k in range(cover.fiber_count):
            vid = cover.vertex_id(v, k)
            assert cover.vertex_coord(vid) == (v, k)
            assert cover.project_vertex(vid) == v
    assert cover.cloud(2) == (2,)
    assert cover.fiber_name(2) == "2"
    assert cover.edge_coord(cover.edge_id(1, 3)) == (1, 3)
    assert cover.project_edge(7) == 1
    with pytest.raises(InvalidInputError):
        cover.vertex_id(0, 9)
    with pytest.raises(InvalidInputError):
        cover.cloud(4)
    with pytest.raises(InvalidInputError):
        cover.fiber_action(99, 0)


def test_z2_cover_equals_explicit_power_group_cover(hex_chord):
    g, sp = hex_chord
    canonical = z2_cover(g, sp)
    explicit = build_cover(g, sp, z2_power_group(2), {5: 1, 6: 2})
    assert canonical.total == explicit.total
    assert canonical.total.vertex_count == 24 and canonical.total.edge_count == 28
    assert verify_covering(canonical) and verify_covering(explicit)
    assert canonical.connected and explicit.connected
    assert explicit.fiber_name(2) == "(0,1)"
    assert canonical.fiber_name(2) == "2"


def test_cover_connected_iff_images_generate(fig8, hex_chord):
    g, sp = hex_chord
    k4 = z2_power_group(2)
    # Images {1, 1} only generate the subgroup {0, 1}: two components.
    partial = build_cover(g, sp, k4, {5: 1, 6: 1})
    assert verify_covering(partial)
    assert not partial.connected
    assert not generates(k4, (1, 1))
    # A Z/3 cover of the figure eight from one generating image.
    z3 = finite_group(Z3_TABLE)
    from boxcover import spanning_tree

    tri = build_cover(fig8, spanning_tree(fig8), z3, {0: 1, 1: 0})
    assert tri.total.vertex_count == 3 and tri.total.edge_count == 6
    assert verify_covering(tri) and tri.connected


def test_build_cover_validation(fig8, hex_chord):
    g, sp = hex_chord
    k4 = z2_power_group(2)
    with pytest.raises(InvalidInputError):
        build_cover(g, sp, k4, {5: 1})  # missing image for S-edge 6
    with pytest.raises(InvalidInputError):
        build_cover(g, sp, k4, {5: 1, 6: 7})  # image out of range
    from boxcover import spanning_tree

    two = new_multigraph(2, ((0, 0), (1, 1)))
    with pytest.raises(InvalidInputError):
        z2_cover(two)  # disconnected base


def test_lift_path_hexagon_loop(hex_chord):
    g, sp = hex_chord
    cover = z2_cover(g, sp)
    # The loop around the hexagon's right half crosses the chord (edge 6)
    # once, so its lift moves from fiber 0 to fiber {edge 6} = 2.
    loop = Path(vertices=(0, 1, 2, 3, 4, 1, 0), edges=(0, 2, 4, 6, 1, 0))
    lifted = lift_path(cover, loop, cover.vertex_id(0, 0))
    assert lifted.vertices == (0, 4, 8, 12, 18, 6, 2)
    assert lifted.valid_in(cover.total)
    assert cover.vertex_coord(lifted.end) == (0, 2)
    assert [cover.project_edge(e) for e in lifted.edges] == list(loop.edges)
    # Tree-only paths stay inside one fiber.
    tree_lift = lift_path(cover, sp.tree_path(0, 3), cover.vertex_id(0, 3))
    assert all(cover.vertex_coord(v)[1] == 3 for v in tree_lift.vertices)
    with pytest.raises(InvalidInputError):
        lift_path(cover, loop, cover.vertex_id(1, 0))  # start projects wrongly
    with pytest.raises(InvalidInputError):
        lift_path(cover, Path(vertices=(0, 3), edges=(0,)), 0)  # invalid base path


def test_lift_walk_self_loop_directions(fig8):
    cover = z2_cover(fig8)
    fwd = lift_walk(cover, 0, ((0, True),))
    back = lift_walk(cover, 0, ((0, False),))
    # Both directions around the first loop reach fiber 1, through the two
    # different lifted edges.
    assert fwd.vertices == (0, 1) and back.vertices == (0, 1)
    assert fwd.edges != back.edges
    both = lift_walk(cover, 0, ((0, True), (1, True)))
    assert cover.vertex_coord(both.end) == (0, 3)
    with pytest.raises(InvalidInputError):
        lift_walk(cover, 0, ((7, True),))


def test_unique_walk_lifting_is_bijective(fig8):
    # Degree is 4 upstairs and downstairs, so both sides have 4**3 directed
    # walks of length 3; projecting after lifting recovers the base walk,
    # hence lifting is a bijection onto the cover walks at the start vertex.
    cover = z2_cover(fig8)
    length = 3
    base_walks = all_directed_walks(fig8, 0, length)
    assert len(base_walks) == 4**length
    lifted = set()
    for _, steps in base_walks:
        lift = lift_walk(cover, 0, steps)
        assert [cover.project_edge(e) for e in lift.edges] == [e for e, _ in steps]
        lifted.add(lift.vertices)
    cover_walks = {v for v, _ in all_directed_walks(cover.total, 0, length)}
    assert lifted == cover_walks


def test_verify_covering_negative_controls(fig8):
    cover = z2_cover(fig8)
    edges = list(cover.total.edges)
    # Swapping endpoints between fibers of *different* base edges breaks the
    # star bijection.  (Swapping within one base edge's fibers would merely
    # give another valid cover, which verify_covering rightly accepts.)
    a, b = edges[0], edges[4]
    edges[0], edges[4] = (a[0], b[1]), (b[0], a[1])
    broken = replace(cover, total=new_multigraph(cover.total.vertex_count, edges))
    assert not verify_covering(broken)
    shrunk = replace(cover, total=new_multigraph(cover.total.vertex_count, cover.total.edges[:-1]))
    assert not verify_covering(shrunk)


def test_deck_transformations_form_xor_group(hex_chord):
    g, sp = hex_chord
    cover = z2_cover(g, sp)
    n = cover.fiber_count
    decks = [deck_transformation(cover, k) for k in range(n)]
    assert decks[0] == tuple(range(cover.total.vertex_count))
    for k, perm in enumerate(decks):
        assert is_cover_automorphism(cover, perm)
        if k != 0:
            assert all(perm[v] != v for v in range(len(perm)))  # free action
    for a in range(n):
        for b in range(n):
            composed = tuple(decks[a][decks[b][v]] for v in range(len(decks[0])))
            assert composed == decks[a ^ b]
    # Transitive on the fiber over vertex 0.
    assert {perm[cover.vertex_id(0, 0)] for perm in decks} == set(
        cover.vertex_id(0, k) for k in range(n)
    )
    with pytest.raises(InvalidInputError):
        deck_transformation(cover, n)


def test_is_cover_automorphism_rejects_bad_maps(fig8):
    cover = z2_cover(fig8)
    ident = list(range(cover.total.vertex_count))
    assert not is_cover_automorphism(cover, ident[:-1])  # not a permutation
    swapped = ident[:]
    swapped[0], swapped[1] = 1, 0  # fiber swap at one vertex only
    assert not is_cover_automorphism(cover, swapped)


def test_composite_covering(fig8):
    mid = z2_cover(fig8)
    top = z2_cover(mid.total)
    assert composite_covering_ok(fig8, mid, top)
    assert not composite_covering_ok(fig8, mid, z2_cover(fig8))  # wrong stack
    assert check_transitivity(fig8)


def test_cover_isomorphism_type_is_tree_independent(hex_chord):
    # The mod-2 cover is determined by the base graph alone: covers built
    # from different spanning trees are isomorphic over the base.
    g, sp = hex_chord
    c1 = z2_cover(g, sp)
    c2 = z2_cover(g, spanning_tree_avoiding(g, 0))
    assert c1.total.edges != c2.total.edges  # genuinely different builds
    n = c1.fiber_count
    labels1 = [c1.project_edge(e) for e in range(c1.total.edge_count)]
    labels2 = [c2.project_edge(e) for e in range(c2.total.edge_count)]
    vlabels1 = [c1.project_vertex(v) for v in range(c1.total.vertex_count)]
    vlabels2 = [c2.project_vertex(v) for v in range(c2.total.vertex_count)]
    hits = []
    for k in range(n):
        perm = find_labeled_isomorphism(
            c1.total, labels1, c2.total, labels2,
            c1.vertex_id(0, 0), c2.vertex_id(0, k), vlabels1, vlabels2,
        )
        if perm is not None:
            hits.append(perm)
            assert sorted(perm) == list(range(c1.total.vertex_count))
            assert all(
                vlabels2[perm[v]] == vlabels1[v]
                for v in range(c1.total.vertex_count)
            )
    assert hits, "no projection-compatible isomorphism found"


def test_collapse_clouds_is_cayley_graph(fig8, hex_chord):
    g, sp = hex_chord
    for cover, width in ((z2_cover(fig8), 2), (z2_cover(g, sp), 2)):
        gens = [1 << i for i in range(width)]
        assert collapse_clouds(cover) == cayley_graph(z2_power_group(width), gens)
    with pytest.raises(InvalidInputError):
        cayley_graph(z2_power_group(2), [9])
