"""Shared builders for the test suite."""

from __future__ import annotations

import random

from polyindex.graphs import WeightedGraph
from polyindex.linedraw import Junction, LineDrawing, Segment

STAR4 = WeightedGraph.binary(4, [(1, 2), (1, 3), (1, 4)])
# the second worked 4-node graph: a triangle with one pendant node
PAW4 = WeightedGraph.binary(4, [(1, 3), (1, 4), (2, 3), (3, 4)])
TRIANGLE = WeightedGraph.binary(3, [(1, 2), (2, 3), (1, 3)])
PATH3 = WeightedGraph.binary(3, [(1, 2), (2, 3)])


def cube_graph() -> WeightedGraph:
    """The 3-cube wireframe: 8 nodes, 12 edges, 3-regular."""
    edges = []
    for u in range(8):
        for bit in (1, 2, 4):
            v = u ^ bit
            if u < v:
                edges.append((u + 1, v + 1))
    return WeightedGraph.binary(8, edges)


def random_permutation(rng: random.Random, n: int) -> tuple[int, ...]:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return tuple(perm)


def random_connected_graph(
    rng: random.Random, n: int, extra_edges: int | None = None, w_max: int = 1
) -> WeightedGraph:
    """Random spanning tree plus extra edges; weights uniform in 1..w_max."""
    nodes = list(range(1, n + 1))
    rng.shuffle(nodes)
    edges: dict[tuple[int, int], int] = {}

    def add(a: int, b: int):
        key = (min(a, b), max(a, b))
        if key not in edges:
            edges[key] = rng.randint(1, w_max) if w_max > 1 else 1

    for i in range(1, n):
        add(nodes[i], nodes[rng.randrange(i)])
    if extra_edges is None:
        extra_edges = rng.randint(0, n)
    for _ in range(extra_edges):
        if n < 2:
            break
        a, b = rng.sample(range(1, n + 1), 2)
        add(a, b)
    return WeightedGraph(n, tuple((u, v, w) for (u, v), w in edges.items()))


def random_binary_graph(rng: random.Random, n: int) -> WeightedGraph:
    """Erdos-Renyi-ish binary graph, not necessarily connected."""
    edges = [
        (u, v, 1)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < 0.45
    ]
    return WeightedGraph(n, tuple(edges))


def drawing(points: dict[str, tuple[float, float]], segs: list[tuple[str, str]]) -> LineDrawing:
    """Compact drawing builder; segment ids are generated."""
    junctions = tuple(Junction(jid, x, y) for jid, (x, y) in points.items())
    segments = tuple(
        Segment(f"s{i}", a, b) for i, (a, b) in enumerate(segs)
    )
    return LineDrawing(junctions, segments)


def square_drawing(origin=(0.0, 0.0), side=4.0, prefix="a") -> LineDrawing:
    x, y = origin
    pts = {
        f"{prefix}0": (x, y),
        f"{prefix}1": (x + side, y),
        f"{prefix}2": (x + side, y + side),
        f"{prefix}3": (x, y + side),
    }
    segs = [
        (f"{prefix}0", f"{prefix}1"),
        (f"{prefix}1", f"{prefix}2"),
        (f"{prefix}2", f"{prefix}3"),
        (f"{prefix}3", f"{prefix}0"),
    ]
    return drawing(pts, segs)


def cube_drawing() -> LineDrawing:
    """General-position drawing of a cube: hexagonal silhouette plus a
    central junction joined to alternating silhouette corners.

    Census: one Y (center), three Arrows (corners with a spoke), three
    Ls; nine segments.  Slightly irregular on purpose.
    """
    import math

    pts = {}
    for i in range(6):
        ang = math.radians(60 * i + 7)
        r = 10.0 + (0.7 if i % 2 else 0.0)
        pts[f"h{i}"] = (r * math.cos(ang), r * math.sin(ang))
    pts["c"] = (0.4, -0.3)
    segs = [(f"h{i}", f"h{(i + 1) % 6}") for i in range(6)]
    segs += [("c", "h0"), ("c", "h2"), ("c", "h4")]
    return drawing(pts, segs)
