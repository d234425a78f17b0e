"""Wall-based 0/1 embeddings and the negative-type kernel verification.

Each explicit cover embeds into Euclidean space with one 0/1 coordinate per
wall (1 = positive half-space), so that the squared Euclidean distance
between images *equals* the wall distance — distances transform by the
square root, which is the concrete desk-scale form of coarse embeddability.
The kernel side verifies that wall-metric distance matrices, including the
cross-level convention diam_W(X_m) + diam_W(X_n) + m + n, are conditionally
negative: sum(l_i l_j d(x_i, x_j)) <= 0 whenever the coefficients sum to 0.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .covering import CoveringGraph, fiber_hex
from .errors import InvalidInputError
from .tower import BoxSpace
from .walls import WallStructure, wall_distance

KERNEL_TOLERANCE = 1e-9
_COEFF_TOLERANCE = 1e-12


def worker_count(default: int = 1) -> int:
    """Worker threads for shardable suites; BOXCOVER_THREADS overrides."""
    raw = os.environ.get("BOXCOVER_THREADS", "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidInputError(f"BOXCOVER_THREADS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InvalidInputError("BOXCOVER_THREADS must be >= 1")
    return value


@dataclass(frozen=True)
class WallEmbedding:
    """0/1 coordinates per wall, packed as per-vertex bitmasks.

    Bit e of ``masks[vid]`` is 1 iff the vertex lies in the positive
    half-space of the wall over base edge e; coordinates are reported in
    ascending wall id order.
    """

    cover: CoveringGraph
    wall_ids: tuple[int, ...]
    masks: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.wall_ids)

    def coordinates(self, vid: int) -> tuple[int, ...]:
        if not 0 <= vid < len(self.masks):
            raise InvalidInputError(f"cover vertex id {vid} out of range")
        m = self.masks[vid]
        return tuple((m >> e) & 1 for e in self.wall_ids)

    def squared_distance(self, xid: int, yid: int) -> int:
        """Exact integer ||f(x) - f(y)||^2."""
        return (self.masks[xid] ^ self.masks[yid]).bit_count()

    def csv_text(self) -> str:
        header = "vertex,fiber," + ",".join(f"w{e}" for e in self.wall_ids)
        lines = [header]
        width = self.cover.fiber_width
        for vid, m in enumerate(self.masks):
            _, k = self.cover.vertex_coord(vid)
            coords = ",".join(str((m >> e) & 1) for e in self.wall_ids)
            lines.append(f"{vid},{fiber_hex(width, k)},{coords}")
        return "\n".join(lines) + "\n"


def wall_embedding(cover: CoveringGraph, walls: WallStructure) -> WallEmbedding:
    """Coordinates from the verified explicit half-spaces (chi_U values)."""
    if walls.cover is not cover and walls.cover != cover:
        raise InvalidInputError("wall structure belongs to a different cover")
    wall_ids = tuple(range(cover.base.edge_count))
    masks = []
    for vid in range(cover.total.vertex_count):
        m = 0
        for e in wall_ids:
            if vid in walls.positive[e]:
                m |= 1 << e
        masks.append(m)
    return WallEmbedding(cover=cover, wall_ids=wall_ids, masks=tuple(masks))


def corrupt_embedding(embedding: WallEmbedding, vid: int, wall: int) -> WallEmbedding:
    """Flip one coordinate — a deliberate violation for negative tests."""
    masks = list(embedding.masks)
    masks[vid] ^= 1 << wall
    return replace(embedding, masks=tuple(masks))


def embedding_check(embedding: WallEmbedding) -> bool:
    """Certify ||f(x) - f(y)||^2 = d_W(x, y) over all pairs, in exact integer
    arithmetic; d_W comes from the parity engine, an independent route."""
    cover = embedding.cover
    base, spanning = cover.base, cover.spanning
    points = [cover.vertex_coord(vid) for vid in range(cover.total.vertex_count)]
    for i in range(len(points)):
        for j in range(i + 1):
            if embedding.squared_distance(i, j) != wall_distance(base, spanning, points[i], points[j]):
                return False
    return True


@dataclass(frozen=True)
class KernelProbe:
    """One quadratic-form evaluation site: box-space points with zero-sum
    coefficients."""

    space: BoxSpace
    points: tuple[tuple[int, int], ...]  # (level index, vertex id)
    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.points) != len(self.coefficients):
            raise InvalidInputError("need one coefficient per point")
        if not self.points:
            raise InvalidInputError("a probe needs at least one point")
        total = sum(self.coefficients)
        if abs(total) > _COEFF_TOLERANCE:
            raise InvalidInputError(f"coefficients must sum to 0, got {total!r}")


def kernel_value(probe: KernelProbe) -> float:
    """The quadratic form sum(l_i l_j d(x_i, x_j)); negative type means this
    never exceeds 0 for zero-sum coefficients."""
    pts, lam = probe.points, probe.coefficients
    space = probe.space
    total = 0.0
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i == j:
                continue
            total += lam[i] * lam[j] * space.distance(pts[i], pts[j])
    return total


def _sample_probe(space: BoxSpace, rng: random.Random, max_points: int = 16) -> KernelProbe:
    explicit = [lv for lv in space.levels if lv.is_explicit]
    r = rng.randint(2, max_points)
    points = []
    for _ in range(r):
        level = explicit[rng.randrange(len(explicit))]
        points.append((level.index, rng.randrange(level.vertex_count)))
    while True:
        draws = [rng.uniform(-1.0, 1.0) for _ in range(r - 1)]
        last = -sum(draws)
        if abs(last) <= 1.0:
            break
    return KernelProbe(space=space, points=tuple(points), coefficients=tuple(draws + [last]))


@dataclass(frozen=True)
class KernelReport:
    metric: str
    seed: int
    trials: int
    max_value: float
    symmetry_ok: bool
    normalization_ok: bool

    @property
    def passed(self) -> bool:
        return self.max_value <= KERNEL_TOLERANCE and self.symmetry_ok and self.normalization_ok

    def text(self) -> str:
        lines = [
            "negative-type kernel report",
            f"metric: {self.metric}",
            f"seed: {self.seed}",
            f"trials: {self.trials}",
            f"max_form_value: {self.max_value:.9e}",
            f"symmetry: {'ok' if self.symmetry_ok else 'VIOLATED'}",
            f"normalization: {'ok' if self.normalization_ok else 'VIOLATED'}",
            f"result: {'PASS' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines) + "\n"


def _run_trial(space: BoxSpace, seed: int, trial: int) -> tuple[float, bool, bool]:
    rng = random.Random(f"{seed}:{trial}")
    probe = _sample_probe(space, rng)
    sym = True
    norm = True
    for p in probe.points:
        if space.distance(p, p) != 0:
            norm = False
    for i, p in enumerate(probe.points):
        for q in probe.points[i + 1:]:
            if space.distance(p, q) != space.distance(q, p):
                sym = False
    return kernel_value(probe), sym, norm


def negative_type_suite(space: BoxSpace, seed: int, trials: int, workers: int | None = None) -> KernelReport:
    """Seeded randomized verification that the selected metric is of negative
    type over the box space.  Deterministic for a given seed: each trial
    derives its own RNG from (seed, trial index), so sharding across workers
    cannot change the outcome."""
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if workers is None:
        workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: _run_trial(space, seed, t), range(trials)))
    else:
        results = [_run_trial(space, seed, t) for t in range(trials)]
    return KernelReport(
        metric=space.metric,
        seed=seed,
        trials=trials,
        max_value=max(value for value, _, _ in results),
        symmetry_ok=all(sym for _, sym, _ in results),
        normalization_ok=all(norm for _, _, norm in results),
    )
