"""Verification suites and report/figure rendering for the CLI.

Each suite re-establishes one family of structural claims on the standard
tower — exhaustively where the level is materialized, by seeded sampling
where it is not — and reports deterministic text (no timings, no platform
detail), so identical flags and seed always produce byte-identical output.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, replace

from .covering import (
    cayley_graph,
    check_transitivity,
    collapse_clouds,
    deck_transformation,
    is_cover_automorphism,
    verify_covering,
    z2_cover,
    z2_power_group,
)
from .embedding import corrupt_embedding, embedding_check, negative_type_suite, wall_embedding
from .errors import InvalidInputError, NotTwoConnectedError
from .multigraph import Path, bfs_distances, new_multigraph
from .tower import (
    BoxSpace,
    TowerLevel,
    build_tower,
    girth_growth_report,
    implicit_graph_distance,
    implicit_wall_distance,
    level_stats,
)
from .walls import (
    ExceedsCap,
    admissible_distances_from,
    canonical_admissible_path,
    is_admissible,
    shortest_admissible_path,
    wall_distance,
    wall_structure,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    details: tuple[str, ...]

    def lines(self) -> list[str]:
        out = [f"suite {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        out.extend(f"  {d}" for d in self.details)
        return out


def _pairs(count: int):
    for i in range(count):
        for j in range(i + 1):
            yield i, j


def suite_sizes(tower, seed: int) -> SuiteResult:
    expect = ((1, 2), (4, 8), (128, 256))
    ok = len(tower) >= 4
    for n, (v, e) in enumerate(expect):
        ok = ok and tower[n].is_explicit and (tower[n].vertex_count, tower[n].edge_count) == (v, e)
    ok = ok and not tower[3].is_explicit and tower[3].fiber_width == 129
    for n in range(1, len(tower)):
        prev = tower[n - 1]
        width = prev.edge_count - prev.vertex_count + 1
        ok = ok and tower[n].vertex_count == prev.vertex_count << width
        ok = ok and tower[n].edge_count == prev.edge_count << width
    degrees_ok = all(
        all(lv.graph.degree(v) == 4 for v in range(lv.graph.vertex_count))
        for lv in tower
        if lv.is_explicit
    )
    return SuiteResult(
        "sizes",
        ok and degrees_ok,
        (
            "levels 0-2 sizes 1/4/128 vertices, 2/8/256 edges; level 3 implicit, fiber width 129",
            f"size recurrence |V_n| = |V_n-1| * 2^(|E|-|V|+1) holds on {len(tower)} levels; "
            f"all explicit levels 4-regular: {'yes' if degrees_ok else 'NO'}",
        ),
    )


def suite_covering(tower, seed: int) -> SuiteResult:
    checks = []
    for n in (1, 2):
        checks.append(verify_covering(tower[n].cover))
    cover2 = tower[2].cover
    n2 = cover2.fiber_count
    bad_edges = list(cover2.total.edges)
    p, q = bad_edges[17]
    bad_edges[17] = (p, (q // n2) * n2 + ((q % n2) ^ 1))
    corrupted = replace(cover2, total=new_multigraph(cover2.total.vertex_count, bad_edges))
    checks.append(not verify_covering(corrupted))
    deck_ok = True
    for level in (tower[1], tower[2]):
        cov = level.cover
        perms = [deck_transformation(cov, k) for k in range(cov.fiber_count)]
        deck_ok = deck_ok and all(is_cover_automorphism(cov, perm) for perm in perms)
        deck_ok = deck_ok and len(set(perms)) == cov.fiber_count
        fiber = [cov.vertex_id(0, m) for m in range(cov.fiber_count)]
        images = {perms[k][fiber[0]] for k in range(cov.fiber_count)}
        deck_ok = deck_ok and images == set(fiber)  # transitive on the fiber
        for k in range(1, cov.fiber_count):  # free: no fixed vertex
            deck_ok = deck_ok and all(perms[k][v] != v for v in fiber)
    checks.append(deck_ok)
    cayley_ok = True
    for level in (tower[1], tower[2]):
        cov = level.cover
        width = cov.fiber_width
        expected = cayley_graph(z2_power_group(width), [1 << i for i in range(width)])
        cayley_ok = cayley_ok and collapse_clouds(cov) == expected
    checks.append(cayley_ok)
    return SuiteResult(
        "covering",
        all(checks),
        (
            "verify_covering holds on levels 1-2 and rejects a rewired edge",
            f"deck groups (4 and 32 maps) are automorphisms acting freely and transitively: "
            f"{'yes' if deck_ok else 'NO'}",
            f"cloud collapse equals the Cayley graph of (Z/2)^s: {'yes' if cayley_ok else 'NO'}",
        ),
    )


def suite_transitivity(tower, seed: int) -> SuiteResult:
    ok = check_transitivity(tower[0].graph)
    return SuiteResult(
        "transitivity",
        ok,
        ("composite two-step cover of the figure eight has a deck group acting freely "
         "and transitively on its 128-point fiber",),
    )


def suite_walls(tower, seed: int) -> SuiteResult:
    details = []
    ok = True
    for n in (1, 2):
        ws = wall_structure(tower[n].cover)  # construction re-verifies 2-component splits
        total_edges = tower[n].edge_count
        sizes = [len(w) for w in ws.walls]
        covered = sorted(eid for wall in ws.walls for eid in wall)
        partition_ok = covered == list(range(total_edges))
        halves = sorted({(len(pos), tower[n].vertex_count - len(pos)) for pos in ws.positive})
        ok = ok and partition_ok
        details.append(
            f"level {n}: {len(sizes)} walls of sizes {sorted(set(sizes))}, half-space splits {halves}, "
            f"partition of {total_edges} edges: {'yes' if partition_ok else 'NO'}"
        )
    bridge_base = new_multigraph(2, ((0, 1), (0, 0), (1, 1)))
    try:
        wall_structure(z2_cover(bridge_base))
        ok = False
        details.append("bridge base was NOT rejected")
    except NotTwoConnectedError:
        details.append("base with a bridge is rejected as not a Z/2-pair")
    return SuiteResult("walls", ok, tuple(details))


def _level2_data(tower):
    cover = tower[2].cover
    return cover, cover.base, cover.spanning


def suite_same_balls(tower, seed: int) -> SuiteResult:
    cover, base, spanning = _level2_data(tower)
    g2 = tower[2].graph
    masks = tower[2].point_masks
    girth_base = tower[1].girth_value
    rows = [bfs_distances(g2, v) for v in range(g2.vertex_count)]
    dominated = 0
    scale_ok = True
    for i, j in _pairs(g2.vertex_count):
        dw = (masks[i] ^ masks[j]).bit_count()
        dx = rows[i][j]
        if dw > dx:
            scale_ok = False
        else:
            dominated += 1
        below_w, below_x = dw < girth_base, dx < girth_base
        if below_w != below_x or (below_w and dw != dx):
            scale_ok = False
    return SuiteResult(
        "same-balls",
        scale_ok,
        (
            f"d_W <= d_X on all {dominated} vertex pairs of level 2",
            f"below girth(X_1) = {girth_base} the two metrics agree exactly",
        ),
    )


def suite_bijection(tower, seed: int) -> SuiteResult:
    cover, base, spanning = _level2_data(tower)
    g2 = tower[2].graph
    cap = tower[2].diameter_value
    n = cover.fiber_count
    ok = True
    checked = 0
    for u in range(g2.vertex_count):
        start = cover.vertex_coord(u)
        lazy = admissible_distances_from(base, spanning, start, cap)
        explicit = bfs_distances(g2, u)
        for v in range(g2.vertex_count):
            if lazy.get(cover.vertex_coord(v)) != explicit[v]:
                ok = False
            checked += 1
    return SuiteResult(
        "bijection",
        ok,
        (f"admissible-path lengths over level-1 data equal explicit BFS distances on all "
         f"{checked} ordered level-2 pairs (cap {cap})",),
    )


def suite_parity(tower, seed: int) -> SuiteResult:
    cover, base, spanning = _level2_data(tower)
    ws = wall_structure(cover)
    cap = tower[2].diameter_value
    ok = True
    no_backtrack = True
    count = 0
    for i, j in _pairs(tower[2].vertex_count):
        x, y = cover.vertex_coord(i), cover.vertex_coord(j)
        canon = canonical_admissible_path(base, spanning, x, y)
        short = shortest_admissible_path(base, spanning, x, y, cap)
        if short is ExceedsCap:
            ok = False
            continue
        if not is_admissible(base, spanning, canon, x, y) or not is_admissible(base, spanning, short, x, y):
            ok = False
        expected = ws.separation_count(i, j)
        for p in (canon, short):
            odd = 0
            for e in range(base.edge_count):
                if p.edges.count(e) % 2:
                    odd += 1
            if odd != expected or odd != wall_distance(base, spanning, x, y):
                ok = False
        if any(short.edges[t] == short.edges[t + 1] for t in range(short.length - 1)):
            no_backtrack = False
        count += 1
    loop_ok = _loop_discipline_level1(tower)
    return SuiteResult(
        "parity",
        ok and no_backtrack and loop_ok,
        (
            f"canonical and shortest admissible paths have identical odd-edge counts, equal to "
            f"explicit half-space separations, on all {count} level-2 pairs",
            f"no shortest admissible path backtracks: {'yes' if no_backtrack else 'NO'}",
            f"loop discipline on level-1 data (every contained loop traversed exactly once): "
            f"{'yes' if loop_ok else 'NO'}",
        ),
    )


def _loop_discipline_level1(tower) -> bool:
    """Enumerate ALL shortest admissible paths over the figure-eight data and
    check each traverses any self-loop it contains exactly once."""
    base = tower[0].graph
    spanning = tower[0].spanning
    width = len(spanning.s_edges)
    for tx in range(1 << width):
        for ty in range(1 << width):
            x, y = (0, tx), (0, ty)
            shortest = shortest_admissible_path(base, spanning, x, y, 4)
            if shortest is ExceedsCap:
                return False
            target_len = shortest.length
            stack = [((0,), ())]
            for _ in range(target_len):
                nxt = []
                for vertices, edges in stack:
                    for eid, w, _ in base.adjacency[vertices[-1]]:
                        nxt.append((vertices + (w,), edges + (eid,)))
                stack = nxt
            for vertices, edges in set(stack):
                p = Path(vertices, edges)
                if not is_admissible(base, spanning, p, x, y):
                    continue
                for loop_edge in range(base.edge_count):  # both edges are self-loops
                    if edges.count(loop_edge) > 1:
                        return False
    return True


def suite_embedding(tower, seed: int) -> SuiteResult:
    ok = True
    details = []
    for n in (1, 2):
        emb = wall_embedding(tower[n].cover, wall_structure(tower[n].cover))
        good = embedding_check(emb)
        bad = not embedding_check(corrupt_embedding(emb, 0, 0))
        ok = ok and good and bad
        pair_count = tower[n].vertex_count * (tower[n].vertex_count + 1) // 2
        details.append(
            f"level {n}: ||f(x)-f(y)||^2 = d_W on all {pair_count} pairs "
            f"({emb.dimension} coordinates); corrupted copy rejected: {'yes' if bad else 'NO'}"
        )
    return SuiteResult("embedding", ok, tuple(details))


def suite_girth(tower, seed: int) -> SuiteResult:
    rows = girth_growth_report(tower)  # raises on growth/tree-ball failure
    expected_start = ((0, 1), (1, 2))
    ok = rows[: len(expected_start)] == expected_start and len(rows) >= 3
    return SuiteResult(
        "girth",
        ok,
        (
            "girths by level: " + ", ".join(f"X{n}={g}" for n, g in rows),
            "strict growth and tree balls at radius floor((girth-1)/2) verified on all explicit levels",
        ),
    )


def suite_implicit(tower, seed: int) -> SuiteResult:
    shadow = build_tower(3, explicit_cap=4)  # level 2 implicit over explicit level-1 data
    cover, base, spanning = _level2_data(tower)
    g2 = tower[2].graph
    masks = tower[2].point_masks
    cap = tower[2].diameter_value
    ok = True
    for i, j in _pairs(g2.vertex_count):
        x, y = cover.vertex_coord(i), cover.vertex_coord(j)
        if implicit_wall_distance(shadow, x, y) != (masks[i] ^ masks[j]).bit_count():
            ok = False
    for u in range(g2.vertex_count):
        explicit = bfs_distances(g2, u)
        start = cover.vertex_coord(u)
        lazy = admissible_distances_from(base, spanning, start, cap)
        for v in range(g2.vertex_count):
            if lazy.get(cover.vertex_coord(v)) != explicit[v]:
                ok = False
    rng = random.Random(seed)
    deep = tower if not tower[-1].is_explicit else build_tower(len(tower) + 1)
    width = deep[3].fiber_width
    fast = True
    for _ in range(100):
        x = (rng.randrange(128), rng.getrandbits(width))
        y = (rng.randrange(128), rng.getrandbits(width))
        t0 = time.perf_counter()
        implicit_wall_distance(deep, x, y)
        if time.perf_counter() - t0 >= 1.0:
            fast = False
    return SuiteResult(
        "implicit",
        ok and fast,
        (
            "lazy engines re-pointed at level-1 data reproduce every explicit level-2 wall "
            "and graph distance",
            f"100 seeded wall-distance queries with {width}-bit fibers each finished within "
            f"the 1 s bound: {'yes' if fast else 'NO'}",
        ),
    )


def suite_kernel(tower, seed: int) -> SuiteResult:
    space = BoxSpace(tower, "wall")
    report = negative_type_suite(space, seed, 1000)
    return SuiteResult(
        "kernel",
        report.passed,
        tuple(report.text().strip().splitlines()[1:]),
    )


SUITES = {
    "sizes": suite_sizes,
    "covering": suite_covering,
    "transitivity": suite_transitivity,
    "walls": suite_walls,
    "same-balls": suite_same_balls,
    "bijection": suite_bijection,
    "parity": suite_parity,
    "embedding": suite_embedding,
    "girth": suite_girth,
    "implicit": suite_implicit,
    "kernel": suite_kernel,
}


def run_suites(names, tower=None, seed: int = 42) -> list[SuiteResult]:
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise InvalidInputError(f"unknown suite names: {', '.join(unknown)}")
    if tower is None:
        tower = build_tower(4)
    return [SUITES[name](tower, seed) for name in names]


def render_report(results, seed: int) -> str:
    lines = ["boxcover verification report", f"seed: {seed}", f"suites: {len(results)}", ""]
    for result in results:
        lines.extend(result.lines())
        lines.append("")
    passed = sum(1 for r in results if r.passed)
    verdict = "ALL PASS" if passed == len(results) else "FAILURES PRESENT"
    lines.append(f"result: {verdict} ({passed}/{len(results)})")
    return "\n".join(lines) + "\n"


def level_stats_csv(tower) -> str:
    lines = ["level,vertices,edges,girth,diameter,wall_diameter,max_ball_sizes"]
    for level in tower:
        if not level.is_explicit:
            continue
        s = level_stats(level)
        profile = " ".join(str(n) for n in s.max_ball_sizes)
        lines.append(
            f"{s.index},{s.vertex_count},{s.edge_count},{s.girth},{s.diameter},"
            f"{s.wall_diameter},{profile}"
        )
    return "\n".join(lines) + "\n"


def distance_matrix_csv(level: TowerLevel) -> str:
    g = level._need_explicit()
    rows = []
    for u in range(g.vertex_count):
        rows.append(",".join(str(d) for d in bfs_distances(g, u)))
    return "\n".join(rows) + "\n"


def write_figures(out_dir, tower) -> list[str]:
    """Render diagnostic figures as PNG files; returns the file names."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .tower import level_stats

    out_dir = str(out_dir)
    explicit = [level_stats(lv) for lv in tower if lv.is_explicit]
    names = []

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [s.index for s in explicit]
    ax.plot(xs, [s.girth for s in explicit], "o-", label="girth")
    ax.plot(xs, [s.diameter for s in explicit], "s-", label="diameter")
    ax.plot(xs, [s.wall_diameter for s in explicit], "^--", label="wall diameter")
    ax.set_xlabel("tower level")
    ax.set_ylabel("value")
    ax.set_title("Scale growth along the tower")
    ax.set_xticks(xs)
    ax.legend()
    fig.tight_layout()
    path = f"{out_dir}/fig_growth.png"
    fig.savefig(path)
    plt.close(fig)
    names.append("fig_growth.png")

    top = max((lv for lv in tower if lv.is_explicit), key=lambda lv: lv.index)
    if top.cover is not None:
        masks = top.point_masks
        g = top.graph
        counts: dict[tuple[int, int], int] = {}
        for u in range(g.vertex_count):
            row = bfs_distances(g, u)
            for v in range(u):
                key = ((masks[u] ^ masks[v]).bit_count(), row[v])
                counts[key] = counts.get(key, 0) + 1
        fig, ax = plt.subplots(figsize=(5, 5))
        dws = [k[0] for k in sorted(counts)]
        dxs = [k[1] for k in sorted(counts)]
        sizes = [20 + 3 * counts[k] for k in sorted(counts)]
        ax.scatter(dws, dxs, s=sizes, alpha=0.6)
        lim = max(max(dws), max(dxs)) + 1
        ax.plot([0, lim], [0, lim], "k--", linewidth=1, label="d_W = d_X")
        ax.set_xlabel("wall distance d_W")
        ax.set_ylabel("graph distance d_X")
        ax.set_title(f"Metric comparison on level {top.index} (marker size = pair count)")
        ax.legend()
        fig.tight_layout()
        path = f"{out_dir}/fig_metric_compare.png"
        fig.savefig(path)
        plt.close(fig)
        names.append("fig_metric_compare.png")

    fig, ax = plt.subplots(figsize=(6, 4))
    for s in explicit:
        ax.plot(range(len(s.max_ball_sizes)), s.max_ball_sizes, "o-", label=f"level {s.index}")
    ax.set_xlabel("radius")
    ax.set_ylabel("max ball size")
    ax.set_title("Largest ball profiles per level")
    ax.legend()
    fig.tight_layout()
    path = f"{out_dir}/fig_ball_profiles.png"
    fig.savefig(path)
    plt.close(fig)
    names.append("fig_ball_profiles.png")
    return names
