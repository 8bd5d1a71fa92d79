"""Brute-force machinery for small graphs: canonical forms, enumeration of
isomorphism-class representatives, and signature collision studies.

Everything in here is exponential and intended for n up to about 8; it
serves as ground truth for the polynomial signatures (isomorphic graphs
must collide, non-isomorphic ones are counted when they do).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import SizeLimitError
from .graphs import WeightedGraph, connected_components, laplacian
from .signatures import char_signature, d2_signature

CANONICAL_N_MAX = 8


def _refine_colors(adj: dict[int, dict[int, int]]) -> dict[int, tuple]:
    """Stable 1-dimensional Weisfeiler-Lehman coloring (weights included)."""
    colors = {u: (len(nbrs), sum(nbrs.values())) for u, nbrs in adj.items()}
    while True:
        refined = {
            u: (colors[u], tuple(sorted((w, colors[v]) for v, w in adj[u].items())))
            for u in adj
        }
        if len(set(refined.values())) == len(set(colors.values())):
            return colors
        colors = refined


def _color_classes(g: WeightedGraph) -> list[list[int]]:
    """Nodes grouped by refined color, classes in sorted color order."""
    adj = g.adjacency()
    colors = _refine_colors(adj)
    groups: dict[tuple, list[int]] = {}
    for u in sorted(adj):
        groups.setdefault(colors[u], []).append(u)
    return [groups[c] for c in sorted(groups)]


def canonical_key(g: WeightedGraph, n_max: int = CANONICAL_N_MAX) -> tuple:
    """Canonical encoding, equal for two graphs iff they are isomorphic
    (respecting weights).

    Minimizes the upper-triangular weight matrix over all node orderings
    compatible with the refined coloring; colors are isomorphism-invariant,
    so restricting to color-respecting orders is safe and prunes most of
    the n! search.
    """
    n = g.node_count
    if n > n_max:
        raise SizeLimitError(f"canonical form limited to n <= {n_max}, got {n}")
    weight: dict[tuple[int, int], int] = {}
    for u, v, w in g.edges:
        weight[(u, v)] = w
        weight[(v, u)] = w
    classes = _color_classes(g)
    best: tuple | None = None
    for parts in itertools.product(*(itertools.permutations(c) for c in classes)):
        order = [u for part in parts for u in part]
        enc = tuple(
            weight.get((order[i], order[j]), 0)
            for i in range(n)
            for j in range(i + 1, n)
        )
        if best is None or enc < best:
            best = enc
    assert best is not None
    return (n, best)


def are_isomorphic(g1: WeightedGraph, g2: WeightedGraph) -> bool:
    """Weight-respecting graph isomorphism by backtracking search.

    Cheap invariants (size, weight multiset, refined color histogram) cut
    off most negatives before the search starts.
    """
    if g1.node_count != g2.node_count or g1.edge_count != g2.edge_count:
        return False
    if sorted(w for _, _, w in g1.edges) != sorted(w for _, _, w in g2.edges):
        return False
    adj1, adj2 = g1.adjacency(), g2.adjacency()
    col1, col2 = _refine_colors(adj1), _refine_colors(adj2)
    hist1 = sorted(col1.values())
    hist2 = sorted(col2.values())
    if hist1 != hist2:
        return False

    # order g1's nodes most-constrained first: rare colors, high degree
    color_count: dict[tuple, int] = {}
    for c in col1.values():
        color_count[c] = color_count.get(c, 0) + 1
    nodes1 = sorted(adj1, key=lambda u: (color_count[col1[u]], -len(adj1[u]), u))
    candidates = {u: [v for v in adj2 if col2[v] == col1[u]] for u in nodes1}

    n = g1.node_count
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == n:
            return True
        u = nodes1[i]
        for v in candidates[u]:
            if v in used:
                continue
            # adjacency to every already-mapped node must agree exactly
            ok = all(
                adj1[u].get(u2) == adj2[v].get(v2) for u2, v2 in mapping.items()
            )
            if ok:
                mapping[u] = v
                used.add(v)
                if extend(i + 1):
                    return True
                del mapping[u]
                used.remove(v)
        return False

    return extend(0)


def enumerate_graphs(n: int, connected_only: bool = False) -> list[WeightedGraph]:
    """All binary graphs on n nodes up to isomorphism.

    Builds representatives by vertex augmentation: every n-node graph
    restricts to an (n-1)-node graph, so attaching a fresh node to every
    neighbor subset of every (n-1)-representative covers all classes;
    canonical keys dedupe.  Results are deterministic and sorted by
    (edge count, canonical key).
    """
    if n < 1:
        raise SizeLimitError(f"enumeration needs n >= 1, got {n}")
    if n > CANONICAL_N_MAX:
        raise SizeLimitError(
            f"exhaustive enumeration limited to n <= {CANONICAL_N_MAX}, got {n}"
        )
    reps: dict[tuple, WeightedGraph] = {
        canonical_key(WeightedGraph(1)): WeightedGraph(1)
    }
    for k in range(2, n + 1):
        nxt: dict[tuple, WeightedGraph] = {}
        for g in reps.values():
            base = list(g.edges)
            for r in range(k):
                for subset in itertools.combinations(range(1, k), r):
                    edges = base + [(u, k, 1) for u in subset]
                    cand = WeightedGraph(k, tuple(edges))
                    key = canonical_key(cand)
                    if key not in nxt:
                        nxt[key] = cand
        reps = nxt
    graphs = sorted(
        reps.items(), key=lambda item: (len(item[1].edges), item[0])
    )
    out = [g for _, g in graphs]
    if connected_only:
        out = [g for g in out if len(connected_components(g)) == 1]
    return out


@dataclass(frozen=True)
class CollisionReport:
    """Signature collisions among pairwise non-isomorphic connected graphs."""

    n: int
    class_count: int
    d2_collision_pairs: int
    char_collision_pairs: int
    d2_groups: tuple[tuple[int, ...], ...] = ()
    char_groups: tuple[tuple[int, ...], ...] = ()


def _collision_pairs(keys: list) -> tuple[int, list[tuple[int, ...]]]:
    buckets: dict[object, list[int]] = {}
    for i, k in enumerate(keys):
        buckets.setdefault(k, []).append(i)
    pairs = 0
    groups = []
    for members in buckets.values():
        if len(members) > 1:
            pairs += len(members) * (len(members) - 1) // 2
            groups.append(tuple(members))
    groups.sort()
    return pairs, groups


def collision_study(n: int, collide_n_max: int = 7) -> CollisionReport:
    """Count d2 and characteristic-polynomial collisions over all connected
    n-node binary graphs up to isomorphism."""
    if n > collide_n_max:
        raise SizeLimitError(f"collision study limited to n <= {collide_n_max}")
    graphs = enumerate_graphs(n, connected_only=True)
    if n == 1:
        return CollisionReport(1, len(graphs), 0, 0)
    d2_keys: list[tuple[int, ...]] = []
    char_keys: list[tuple[int, ...]] = []
    for g in graphs:
        lap = laplacian(g)
        d2_keys.append(d2_signature(lap).coeffs)
        char_keys.append(char_signature(lap).coeffs)
    d2_pairs, d2_groups = _collision_pairs(d2_keys)
    char_pairs, char_groups = _collision_pairs(char_keys)
    return CollisionReport(
        n,
        len(graphs),
        d2_pairs,
        char_pairs,
        tuple(d2_groups),
        tuple(char_groups),
    )
