"""View decomposition into overlapping neighborhood subgraphs.

A view graph is never matched as a whole: around every node we take the
induced subgraph of its radius-p neighborhood, keep the ones whose size
falls in a configured window, and match those.  Perturbing part of a
view then leaves the subgraphs rooted elsewhere untouched, which is what
makes retrieval robust.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GraphError
from .graphs import WeightedGraph, induced_subgraph

DEFAULT_RADIUS = 2
DEFAULT_MIN_NODES = 5
DEFAULT_MAX_NODES = 10


@dataclass(frozen=True)
class Subgraph:
    """One member of a decomposition: seed node, induced graph, back-map.

    `node_map[i-1]` is the parent index of subgraph node i.
    """

    seed: int
    graph: WeightedGraph
    node_map: tuple[int, ...]


@dataclass(frozen=True)
class SubgraphSet:
    parent: WeightedGraph
    members: tuple[Subgraph, ...]


def _ball(adj: dict[int, dict[int, int]], seed: int, radius: int) -> set[int]:
    """Nodes within `radius` edges of `seed` (BFS)."""
    dist = {seed: 0}
    frontier = [seed]
    for d in range(radius):
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = d + 1
                    nxt.append(v)
        frontier = nxt
    return set(dist)


def p_neighborhood_subgraphs(
    g: WeightedGraph,
    p: int = DEFAULT_RADIUS,
    min_nodes: int = DEFAULT_MIN_NODES,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> SubgraphSet:
    """Radius-p neighborhood subgraphs of every node of `g`.

    Subgraphs outside [min_nodes, max_nodes] are discarded; members with
    identical node sets are deduplicated (they would double-vote during
    recognition), keeping the lowest seed.  BFS never leaves a connected
    component, so disconnected inputs are effectively decomposed
    per-component.  Output order is deterministic (by seed).
    """
    if p < 1:
        raise GraphError(f"neighborhood radius must be >= 1, got {p}")
    if min_nodes < 1 or max_nodes < min_nodes:
        raise GraphError(f"bad size window [{min_nodes}, {max_nodes}]")
    adj = g.adjacency()
    members: list[Subgraph] = []
    seen_node_sets: set[frozenset[int]] = set()
    for seed in range(1, g.node_count + 1):
        nodes = _ball(adj, seed, p)
        if not (min_nodes <= len(nodes) <= max_nodes):
            continue
        key = frozenset(nodes)
        if key in seen_node_sets:
            continue
        seen_node_sets.add(key)
        sub, node_map = induced_subgraph(g, nodes)
        members.append(Subgraph(seed, sub, node_map))
    return SubgraphSet(g, tuple(members))


def complexity_measure(g: WeightedGraph) -> Fraction:
    """Average node degree f(G) = (1/n) * sum(d_i) = 2|E|/n, exact."""
    if g.node_count < 1:
        raise GraphError("complexity measure needs at least one node")
    return Fraction(2 * g.edge_count, g.node_count)


def is_relevant(g: WeightedGraph) -> bool:
    """True iff f(G) >= 2, i.e. the graph has more structure than a tree.

    Equivalent to |E| >= |V| by integer arithmetic, so no rationals are
    needed on this path.
    """
    return g.edge_count >= g.node_count
