"""Three-layer model database and vote-based recognition.

Layer one holds subgraphs keyed by their exact d2 signature in per-size
hash tables; layer two holds characteristic views (each pointing at the
signatures it contributed); layer three holds objects (each a list of
views).  Shared subviews collapse into one entry listing every owning
view, so the graph layer grows sub-linearly as similar views are added.

Recognition decomposes each unknown scene graph the same way views were
decomposed at build time, looks every subgraph signature up, and lets
each hit vote once for every characteristic view attached to the entry.
Bucketing uses a 64-bit mix of the coefficient vector purely as an
accelerator: membership is always decided by exact vector equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .decompose import is_relevant, p_neighborhood_subgraphs
from .errors import DatabaseFormatError, GraphError, SizeLimitError
from .graphs import WeightedGraph, laplacian
from .signatures import DEFAULT_N_MAX, GraphSignature, d2_signature
from .smallgraphs import are_isomorphic

FORMAT_HEADER = "polyindex-db"
FORMAT_VERSION = 1

SignatureKey = tuple[int, tuple[int, ...]]  # (size, coefficient vector)


@dataclass(frozen=True)
class DbParams:
    """Decomposition settings a database was built with; queries reuse them."""

    p: int = 2
    min_nodes: int = 5
    max_nodes: int = 10
    mode: str = "weighted"
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if self.p < 1:
            raise GraphError(f"p must be >= 1, got {self.p}")
        if self.min_nodes < 2 or self.max_nodes < self.min_nodes:
            raise GraphError(
                f"bad size window [{self.min_nodes}, {self.max_nodes}]"
            )
        if self.max_nodes > self.n_max:
            raise GraphError(
                f"size window top {self.max_nodes} exceeds n_max {self.n_max}"
            )
        if self.mode not in ("weighted", "binary"):
            raise GraphError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class StoredGraph:
    """One hash-layer entry: a subgraph, its signature, its owning views."""

    signature: GraphSignature
    graph: WeightedGraph
    cv_ids: tuple[str, ...]


@dataclass(frozen=True)
class CharacteristicView:
    id: str
    object_id: str
    view_graph: WeightedGraph
    subgraph_refs: tuple[SignatureKey, ...]


@dataclass(frozen=True)
class ModelObject:
    id: str
    cv_ids: tuple[str, ...]


@dataclass(frozen=True)
class ModelDatabase:
    """Immutable after construction; concurrent lookups are safe."""

    params: DbParams
    objects: dict[str, ModelObject]
    views: dict[str, CharacteristicView]
    # per-size bucket tables: size -> 64-bit mix -> entries (exact-compared)
    tables: dict[int, dict[int, tuple[StoredGraph, ...]]]

    def entries(self) -> Iterator[StoredGraph]:
        for size in sorted(self.tables):
            buckets = self.tables[size]
            seen = []
            for bucket in buckets.values():
                seen.extend(bucket)
            seen.sort(key=lambda e: e.signature.coeffs)
            yield from seen

    def entry_count(self) -> int:
        return sum(len(b) for t in self.tables.values() for b in t.values())


@dataclass(frozen=True)
class BuildReport:
    object_count: int
    view_count: int
    subgraph_count: int
    entry_count: int
    total_refs: int
    accidents: tuple[str, ...] = ()
    skipped: tuple[str, ...] = ()

    @property
    def sharing_ratio(self) -> float:
        """Average number of views per stored graph; > 1 means sharing."""
        return self.total_refs / self.entry_count if self.entry_count else 0.0


_MASK64 = (1 << 64) - 1


def _mix64(size: int, coeffs: tuple[int, ...]) -> int:
    """Avalanche mix of the full integer key (splitmix64 finalizer)."""
    h = (0x9E3779B97F4A7C15 * (size + 1)) & _MASK64
    for c in coeffs:
        h = (h ^ (c & _MASK64)) * 0xBF58476D1CE4E5B9 & _MASK64
        h ^= h >> 27
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    h = (h ^ (h >> 27)) * 0x94D049BB133111EB & _MASK64
    return h ^ (h >> 31)


def build_database(
    views: Iterable[tuple[str, str, WeightedGraph]],
    params: DbParams = DbParams(),
) -> tuple[ModelDatabase, BuildReport]:
    """Decompose every (object_id, view_id, graph) triple and index it.

    Views failing the relevance test are skipped with a report note.
    Subgraphs whose signatures already exist join the existing entry;
    when the stored graph is not isomorphic to the incoming one, the
    coincidence is logged as an accident (retrieval still treats them as
    equal, exactly as hashing would).
    """
    entry_graph: dict[SignatureKey, WeightedGraph] = {}
    entry_cvs: dict[SignatureKey, set[str]] = {}
    view_records: dict[str, CharacteristicView] = {}
    object_views: dict[str, list[str]] = {}
    accidents: list[str] = []
    skipped: list[str] = []
    subgraph_count = 0

    for object_id, view_id, graph in views:
        if view_id in view_records:
            raise GraphError(f"duplicate view id {view_id!r}")
        if not is_relevant(graph):
            skipped.append(f"view {view_id!r}: below relevance threshold")
            continue
        refs: set[SignatureKey] = set()
        decomposition = p_neighborhood_subgraphs(
            graph, params.p, params.min_nodes, params.max_nodes
        )
        for member in decomposition.members:
            sub = member.graph
            if sub.node_count > params.n_max:
                skipped.append(
                    f"view {view_id!r} seed {member.seed}: "
                    f"{sub.node_count} nodes exceeds n_max {params.n_max}"
                )
                continue
            subgraph_count += 1
            sig = d2_signature(laplacian(sub), params.n_max)
            key: SignatureKey = (sig.size, sig.coeffs)
            refs.add(key)
            if key not in entry_graph:
                entry_graph[key] = sub
                entry_cvs[key] = {view_id}
            else:
                entry_cvs[key].add(view_id)
                if not are_isomorphic(entry_graph[key], sub):
                    accidents.append(
                        f"signature {key[0]}:{' '.join(map(str, key[1]))} shared "
                        f"by non-isomorphic graphs (view {view_id!r})"
                    )
        view_records[view_id] = CharacteristicView(
            view_id, object_id, graph, tuple(sorted(refs))
        )
        object_views.setdefault(object_id, []).append(view_id)

    if not view_records:
        raise GraphError("no relevant view graphs; nothing to index")

    objects = {
        oid: ModelObject(oid, tuple(sorted(vids)))
        for oid, vids in sorted(object_views.items())
    }
    tables: dict[int, dict[int, tuple[StoredGraph, ...]]] = {}
    for key in sorted(entry_graph):
        size, coeffs = key
        entry = StoredGraph(
            GraphSignature(size, coeffs),
            entry_graph[key],
            tuple(sorted(entry_cvs[key])),
        )
        bucket = _mix64(size, coeffs)
        table = tables.setdefault(size, {})
        table[bucket] = table.get(bucket, ()) + (entry,)

    db = ModelDatabase(params, objects, dict(sorted(view_records.items())), tables)
    report = BuildReport(
        object_count=len(objects),
        view_count=len(view_records),
        subgraph_count=subgraph_count,
        entry_count=len(entry_graph),
        total_refs=sum(len(cvs) for cvs in entry_cvs.values()),
        accidents=tuple(accidents),
        skipped=tuple(skipped),
    )
    return db, report


def lookup(db: ModelDatabase, sig: GraphSignature) -> StoredGraph | None:
    """Exact-match lookup of a signature; absence is a normal result."""
    buckets = db.tables.get(sig.size)
    if not buckets:
        return None
    for entry in buckets.get(_mix64(sig.size, sig.coeffs), ()):
        if entry.signature.coeffs == sig.coeffs:
            return entry
    return None


@dataclass(frozen=True)
class VoteRecord:
    """Provenance of a single vote."""

    scene_graph: int
    seed: int
    signature: SignatureKey
    cv_id: str


@dataclass(frozen=True)
class VoteTally:
    votes: dict[str, int]
    provenance: tuple[VoteRecord, ...]

    def ranked(self) -> list[tuple[str, int]]:
        """(cv_id, votes) best first; ties stay visible, broken by id only
        for output stability."""
        return sorted(self.votes.items(), key=lambda kv: (-kv[1], kv[0]))

    def total(self) -> int:
        return sum(self.votes.values())


@dataclass(frozen=True)
class RecognitionResult:
    per_graph: tuple[VoteTally, ...]
    combined: VoteTally

    def ranked(self) -> list[tuple[str, int]]:
        return self.combined.ranked()


def recognize(
    db: ModelDatabase, scene: Iterable[WeightedGraph]
) -> RecognitionResult:
    """Decompose scene graphs, look each subgraph up, and tally votes.

    Every matched subgraph votes once per characteristic view listed on
    its entry; tallies are kept per scene graph and combined.
    """
    params = db.params
    per_graph: list[VoteTally] = []
    combined_votes: dict[str, int] = {}
    combined_prov: list[VoteRecord] = []
    for gi, graph in enumerate(scene):
        votes: dict[str, int] = {}
        prov: list[VoteRecord] = []
        members = p_neighborhood_subgraphs(
            graph, params.p, params.min_nodes, params.max_nodes
        ).members
        for member in members:
            if member.graph.node_count > params.n_max:
                continue
            sig = d2_signature(laplacian(member.graph), params.n_max)
            entry = lookup(db, sig)
            if entry is None:
                continue
            for cv_id in entry.cv_ids:
                votes[cv_id] = votes.get(cv_id, 0) + 1
                record = VoteRecord(gi, member.seed, (sig.size, sig.coeffs), cv_id)
                prov.append(record)
        per_graph.append(VoteTally(votes, tuple(prov)))
        for cv_id, count in votes.items():
            combined_votes[cv_id] = combined_votes.get(cv_id, 0) + count
        combined_prov.extend(prov)
    return RecognitionResult(
        tuple(per_graph), VoteTally(combined_votes, tuple(combined_prov))
    )


# --- serialization ------------------------------------------------------------
#
# Text-based, versioned, deterministically ordered, diffable.  The 64-bit
# bucket values are never written; they are recomputed on load.


def _format_graph_block(g: WeightedGraph, node_tag: str, edge_tag: str) -> list[str]:
    lines = []
    if g.node_labels is not None:
        for i, lab in enumerate(g.node_labels, start=1):
            if any(ch.isspace() for ch in lab):
                raise GraphError(f"node label {lab!r} contains whitespace")
            lines.append(f"{node_tag} {i} {lab}")
    for u, v, w in g.edges:
        lines.append(f"{edge_tag} {u} {v} {w}")
    return lines


def save_database(db: ModelDatabase) -> str:
    out: list[str] = [f"{FORMAT_HEADER} {FORMAT_VERSION}"]
    p = db.params
    out.append(
        f"params p {p.p} min_nodes {p.min_nodes} max_nodes {p.max_nodes} "
        f"mode {p.mode} n_max {p.n_max}"
    )
    for oid in sorted(db.objects):
        out.append(f"object {oid} {' '.join(db.objects[oid].cv_ids)}")
    for vid in sorted(db.views):
        view = db.views[vid]
        out.append(f"view {vid} {view.object_id} {view.view_graph.node_count}")
        out.extend(_format_graph_block(view.view_graph, "vlabel", "vedge"))
        for size, coeffs in view.subgraph_refs:
            out.append(f"ref {size} {' '.join(map(str, coeffs))}")
    for entry in db.entries():
        sig = entry.signature
        out.append(f"entry {sig.size} {' '.join(map(str, sig.coeffs))}")
        out.append(f"nodes {entry.graph.node_count}")
        out.extend(_format_graph_block(entry.graph, "glabel", "gedge"))
        out.append(f"cv {' '.join(entry.cv_ids)}")
    out.append("end")
    return "\n".join(out) + "\n"


def load_database(text: str) -> ModelDatabase:
    """Parse a serialized database; rejects corrupt or truncated input
    without returning anything partial."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise DatabaseFormatError("empty database stream")
    header = lines[0].split()
    if len(header) != 2 or header[0] != FORMAT_HEADER:
        raise DatabaseFormatError("not a database stream (bad header)", 1)
    if header[1] != str(FORMAT_VERSION):
        raise DatabaseFormatError(f"unsupported version {header[1]!r}", 1)
    if not lines or lines[-1].strip() != "end":
        raise DatabaseFormatError("truncated stream (missing end marker)")

    params: DbParams | None = None
    objects: dict[str, ModelObject] = {}
    views: dict[str, CharacteristicView] = {}
    entries: list[StoredGraph] = []

    cur_view: list | None = None  # [vid, oid, n, labels, edges, refs]
    cur_entry: list | None = None  # [sig, n, labels, edges, cvs]

    def err(msg: str, line_no: int):
        raise DatabaseFormatError(msg, line_no)

    def build_graph(n, labels, edges, line_no) -> WeightedGraph:
        try:
            if labels:
                if sorted(labels) != list(range(1, n + 1)):
                    err("node labels do not cover 1..n", line_no)
                lab = tuple(labels[i] for i in range(1, n + 1))
            else:
                lab = None
            return WeightedGraph(n, tuple(edges), lab)
        except GraphError as exc:
            raise DatabaseFormatError(str(exc), line_no) from exc

    def flush_view(line_no):
        nonlocal cur_view
        if cur_view is None:
            return
        vid, oid, n, labels, edges, refs = cur_view
        g = build_graph(n, labels, edges, line_no)
        views[vid] = CharacteristicView(vid, oid, g, tuple(sorted(refs)))
        cur_view = None

    def flush_entry(line_no):
        nonlocal cur_entry
        if cur_entry is None:
            return
        sig, n, labels, edges, cvs = cur_entry
        if n is None:
            err("entry missing node count", line_no)
        if not cvs:
            err("entry with empty view list", line_no)
        g = build_graph(n, labels, edges, line_no)
        entries.append(StoredGraph(sig, g, tuple(sorted(cvs))))
        cur_entry = None

    for line_no, raw in enumerate(lines[1:-1], start=2):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        try:
            if tag == "params":
                kv = parts[1:]
                d = {kv[i]: kv[i + 1] for i in range(0, len(kv), 2)}
                params = DbParams(
                    p=int(d["p"]),
                    min_nodes=int(d["min_nodes"]),
                    max_nodes=int(d["max_nodes"]),
                    mode=d["mode"],
                    n_max=int(d["n_max"]),
                )
            elif tag == "object":
                objects[parts[1]] = ModelObject(parts[1], tuple(parts[2:]))
            elif tag == "view":
                flush_view(line_no)
                flush_entry(line_no)
                cur_view = [parts[1], parts[2], int(parts[3]), {}, [], []]
            elif tag == "vlabel":
                cur_view[3][int(parts[1])] = parts[2]
            elif tag == "vedge":
                cur_view[4].append((int(parts[1]), int(parts[2]), int(parts[3])))
            elif tag == "ref":
                cur_view[5].append((int(parts[1]), tuple(map(int, parts[2:]))))
            elif tag == "entry":
                flush_view(line_no)
                flush_entry(line_no)
                size = int(parts[1])
                coeffs = tuple(map(int, parts[2:]))
                cur_entry = [GraphSignature(size, coeffs), None, {}, [], []]
            elif tag == "nodes":
                cur_entry[1] = int(parts[1])
            elif tag == "glabel":
                cur_entry[2][int(parts[1])] = parts[2]
            elif tag == "gedge":
                cur_entry[3].append((int(parts[1]), int(parts[2]), int(parts[3])))
            elif tag == "cv":
                cur_entry[4].extend(parts[1:])
            else:
                err(f"unknown record {tag!r}", line_no)
        except DatabaseFormatError:
            raise
        except (GraphError, SizeLimitError) as exc:
            raise DatabaseFormatError(str(exc), line_no) from exc
        except (IndexError, KeyError, TypeError, ValueError) as exc:
            raise DatabaseFormatError(f"malformed record {raw!r}", line_no) from exc
    flush_view(len(lines))
    flush_entry(len(lines))

    if params is None:
        raise DatabaseFormatError("missing params record")
    # referential integrity across the three layers
    for oid, obj in objects.items():
        for vid in obj.cv_ids:
            if vid not in views:
                raise DatabaseFormatError(f"object {oid!r} lists unknown view {vid!r}")
    owner: dict[str, str] = {}
    for oid, obj in objects.items():
        for vid in obj.cv_ids:
            if vid in owner:
                raise DatabaseFormatError(f"view {vid!r} owned by two objects")
            owner[vid] = oid
    for vid, view in views.items():
        if owner.get(vid) != view.object_id:
            raise DatabaseFormatError(
                f"view {vid!r} not listed by its object {view.object_id!r}"
            )
    known_keys = set()
    tables: dict[int, dict[int, tuple[StoredGraph, ...]]] = {}
    for entry in sorted(entries, key=lambda e: (e.signature.size, e.signature.coeffs)):
        sig = entry.signature
        key = (sig.size, sig.coeffs)
        if key in known_keys:
            raise DatabaseFormatError(
                f"duplicate entry for signature {sig.size}:{sig.coeffs}"
            )
        known_keys.add(key)
        for vid in entry.cv_ids:
            if vid not in views:
                raise DatabaseFormatError(
                    f"entry references unknown view {vid!r}"
                )
        bucket = _mix64(sig.size, sig.coeffs)
        table = tables.setdefault(sig.size, {})
        table[bucket] = table.get(bucket, ()) + (entry,)
    for vid, view in views.items():
        for key in view.subgraph_refs:
            if key not in known_keys:
                raise DatabaseFormatError(
                    f"view {vid!r} references missing entry {key[0]}:{key[1]}"
                )
    return ModelDatabase(params, objects, dict(sorted(views.items())), tables)
