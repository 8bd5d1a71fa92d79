"""Weighted undirected graphs and their Laplacian matrices.

This is the shared representation used everywhere else: object views,
subviews and image data are all `WeightedGraph` instances.  Nodes are
indexed 1..n; edges carry strictly positive integer weights so that all
downstream polynomial arithmetic stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphError, ParseError

Edge = tuple[int, int, int]  # (u, v, weight) with u < v


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected simple graph with positive integer edge weights.

    Invariants enforced at construction: no self-loops, no duplicate
    edges, node indices in [1..n], integral weights >= 1.  Instances are
    immutable and safe to share between threads.
    """

    node_count: int
    edges: tuple[Edge, ...] = ()
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.node_count
        if n < 0:
            raise GraphError(f"node_count must be >= 0, got {n}")
        seen: set[tuple[int, int]] = set()
        normalized: list[Edge] = []
        for e in self.edges:
            if len(e) == 2:
                u, v = e
                w = 1
            else:
                u, v, w = e
            if not (isinstance(u, int) and isinstance(v, int) and isinstance(w, int)):
                raise GraphError(f"edge {e!r} must be a pair/triple of ints")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphError(f"edge ({u},{v}) outside node range 1..{n}")
            if w < 1:
                raise GraphError(f"edge ({u},{v}) has non-positive weight {w}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            normalized.append((u, v, w))
        normalized.sort()
        object.__setattr__(self, "edges", tuple(normalized))
        if self.node_labels is not None:
            labels = tuple(str(t) for t in self.node_labels)
            if len(labels) != n:
                raise GraphError(
                    f"node_labels has {len(labels)} entries for {n} nodes"
                )
            object.__setattr__(self, "node_labels", labels)

    @classmethod
    def binary(
        cls,
        node_count: int,
        pairs: Iterable[tuple[int, int]],
        node_labels: Sequence[str] | None = None,
    ) -> "WeightedGraph":
        """Build a graph with weight 1 on every edge."""
        edges = tuple((u, v, 1) for u, v in pairs)
        labels = tuple(node_labels) if node_labels is not None else None
        return cls(node_count, edges, labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def label_of(self, node: int) -> str:
        """Human-readable identity of a node (its label if present)."""
        if self.node_labels is not None:
            return self.node_labels[node - 1]
        return str(node)

    def adjacency(self) -> dict[int, dict[int, int]]:
        """Neighbor map {u: {v: weight}}; includes isolated nodes."""
        adj: dict[int, dict[int, int]] = {u: {} for u in range(1, self.node_count + 1)}
        for u, v, w in self.edges:
            adj[u][v] = w
            adj[v][u] = w
        return adj


@dataclass(frozen=True)
class Laplacian:
    """Integer Laplacian matrix: weight-sum diagonal minus weighted adjacency."""

    n: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))


def laplacian(g: WeightedGraph) -> Laplacian:
    """Laplacian of `g`: l_ii = sum of incident weights, l_ij = -w_ij.

    Row and column sums are zero; for binary graphs the diagonal equals
    the node degrees.
    """
    n = g.node_count
    m = [[0] * n for _ in range(n)]
    for u, v, w in g.edges:
        m[u - 1][v - 1] = -w
        m[v - 1][u - 1] = -w
        m[u - 1][u - 1] += w
        m[v - 1][v - 1] += w
    return Laplacian(n, tuple(tuple(r) for r in m))


def degree_profile(g: WeightedGraph) -> list[int]:
    """Number of incident edges per node (weights ignored), length n."""
    deg = [0] * g.node_count
    for u, v, _ in g.edges:
        deg[u - 1] += 1
        deg[v - 1] += 1
    return deg


def induced_subgraph(g: WeightedGraph, nodes: Iterable[int]) -> tuple[WeightedGraph, tuple[int, ...]]:
    """Induced subgraph on `nodes`, re-indexed 1..k in parent order.

    Returns the subgraph and the back-map: entry i-1 is the parent index
    of subgraph node i.  Labels are inherited so provenance survives
    re-indexing.
    """
    chosen = sorted(set(nodes))
    for v in chosen:
        if not (1 <= v <= g.node_count):
            raise GraphError(f"node {v} outside range 1..{g.node_count}")
    index = {v: i + 1 for i, v in enumerate(chosen)}
    edges = tuple(
        (index[u], index[v], w) for u, v, w in g.edges if u in index and v in index
    )
    labels = tuple(g.label_of(v) for v in chosen)
    return WeightedGraph(len(chosen), edges, labels), tuple(chosen)


def connected_components(g: WeightedGraph) -> list[WeightedGraph]:
    """Connected components as re-indexed induced subgraphs.

    Component node sets partition [1..n]; each component's labels point
    back at the parent nodes.
    """
    adj = g.adjacency()
    unseen = set(range(1, g.node_count + 1))
    out: list[WeightedGraph] = []
    while unseen:
        start = min(unseen)
        comp = {start}
        frontier = [start]
        while frontier:
            u = frontier.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    frontier.append(v)
        unseen -= comp
        sub, _ = induced_subgraph(g, comp)
        out.append(sub)
    return out


def permute(g: WeightedGraph, perm: Sequence[int]) -> WeightedGraph:
    """Relabel nodes: node i becomes perm[i-1].  `perm` must be a bijection
    on [1..n]; labels travel with their nodes."""
    n = g.node_count
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise GraphError(f"permutation {perm!r} is not a bijection on 1..{n}")
    edges = tuple((perm[u - 1], perm[v - 1], w) for u, v, w in g.edges)
    labels = None
    if g.node_labels is not None:
        relabeled = [""] * n
        for i, lab in enumerate(g.node_labels):
            relabeled[perm[i] - 1] = lab
        labels = tuple(relabeled)
    return WeightedGraph(n, edges, labels)


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p - 1] = i + 1
    return tuple(inv)


# --- text format -----------------------------------------------------------
#
# One graph per record:
#     graph <name> <n>
#     <i> <j> [<w>]
# Records repeat for multi-graph streams; '#' starts a comment.


def parse_graphs(text: str) -> list[tuple[str, WeightedGraph]]:
    """Parse the graph text format; returns (name, graph) per record."""
    records: list[tuple[str, WeightedGraph]] = []
    name: str | None = None
    n = 0
    edges: list[tuple[int, int, int]] = []

    def flush(line_no: int):
        nonlocal name, edges
        if name is None:
            return
        try:
            records.append((name, WeightedGraph(n, tuple(edges))))
        except GraphError as exc:
            raise ParseError(f"graph {name!r}: {exc}", line_no) from exc
        name = None
        edges = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "graph":
            flush(line_no)
            if len(parts) != 3:
                raise ParseError("expected 'graph <name> <n>'", line_no)
            name = parts[1]
            try:
                n = int(parts[2])
            except ValueError:
                raise ParseError(f"bad node count {parts[2]!r}", line_no) from None
            if n < 0:
                raise ParseError(f"negative node count {n}", line_no)
        else:
            if name is None:
                raise ParseError("edge line before any 'graph' header", line_no)
            if len(parts) not in (2, 3):
                raise ParseError("expected '<i> <j> [<w>]'", line_no)
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise ParseError(f"non-integer edge field in {line!r}", line_no) from None
            u, v = nums[0], nums[1]
            w = nums[2] if len(nums) == 3 else 1
            edges.append((u, v, w))
    flush(len(text.splitlines()))
    if not records:
        raise ParseError("no graph records found")
    return records


def format_graph(g: WeightedGraph, name: str) -> str:
    lines = [f"graph {name} {g.node_count}"]
    for u, v, w in g.edges:
        lines.append(f"{u} {v} {w}")
    return "\n".join(lines) + "\n"
