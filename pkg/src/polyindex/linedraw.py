"""Line-drawing ingestion and conversion to weighted graphs.

A drawing is a set of 2-D junctions joined by straight segments.  The
pipeline in `split_image_graph` cleans a multi-object scene (dangling
edges out, cut at occlusion T junctions, collinear chains fused), splits
it into connected components, throws away tree-like components, and
labels every surviving edge by the local shape of its two endpoints.
The label catalogue is deterministic, so identical local geometry always
produces identical edge weights, no matter where it sits in the image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple

from .decompose import is_relevant
from .errors import GraphError, ParseError
from .graphs import WeightedGraph, connected_components

DEFAULT_COLLINEAR_DEG = 10.0
COINCIDENT_EPS = 1e-6


@dataclass(frozen=True)
class Junction:
    id: str
    x: float
    y: float


@dataclass(frozen=True)
class Segment:
    id: str
    a: str
    b: str


@dataclass(frozen=True)
class LineDrawing:
    """Validated junction/segment geometry in arbitrary planar units."""

    junctions: tuple[Junction, ...]
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.junctions:
            raise GraphError("drawing has no junctions")
        seen_j: set[str] = set()
        for j in self.junctions:
            if j.id in seen_j:
                raise GraphError(f"duplicate junction id {j.id!r}")
            seen_j.add(j.id)
        pts = sorted(self.junctions, key=lambda j: (j.x, j.y, j.id))
        for p, q in zip(pts, pts[1:]):
            if abs(p.x - q.x) <= COINCIDENT_EPS and abs(p.y - q.y) <= COINCIDENT_EPS:
                raise GraphError(
                    f"junctions {p.id!r} and {q.id!r} share coordinates"
                )
        seen_s: set[str] = set()
        for s in self.segments:
            if s.id in seen_s:
                raise GraphError(f"duplicate segment id {s.id!r}")
            seen_s.add(s.id)
            if s.a not in seen_j or s.b not in seen_j:
                raise GraphError(f"segment {s.id!r} references unknown junction")
            if s.a == s.b:
                raise GraphError(f"segment {s.id!r} has zero length")

    def junction(self, jid: str) -> Junction:
        for j in self.junctions:
            if j.id == jid:
                return j
        raise GraphError(f"no junction {jid!r}")

    def coords(self) -> dict[str, tuple[float, float]]:
        return {j.id: (j.x, j.y) for j in self.junctions}

    def segments_at(self, jid: str) -> list[Segment]:
        return [s for s in self.segments if jid in (s.a, s.b)]


class JunctionType(Enum):
    TERMINAL = "terminal"
    L = "L"
    Y = "Y"
    ARROW = "arrow"
    T = "T"
    HIGH_DEGREE = "high-degree"


# --- angles -----------------------------------------------------------------


def _direction_deg(p: tuple[float, float], q: tuple[float, float]) -> float:
    return math.degrees(math.atan2(q[1] - p[1], q[0] - p[0])) % 360.0


def _angle_gap(a: float, b: float) -> float:
    """Unsigned angle between two directions, in [0, 180]."""
    d = abs(a - b) % 360.0
    return 360.0 - d if d > 180.0 else d


def _opposite(a: float, b: float, tol_deg: float) -> bool:
    return _angle_gap(a, b) >= 180.0 - tol_deg


def _classify_directions(dirs: list[float], tol_deg: float) -> JunctionType:
    k = len(dirs)
    if k == 0 or k == 1:
        return JunctionType.TERMINAL
    if k == 2:
        return JunctionType.L
    if k > 3:
        return JunctionType.HIGH_DEGREE
    for i in range(3):
        for j in range(i + 1, 3):
            if _opposite(dirs[i], dirs[j], tol_deg):
                return JunctionType.T
    ordered = sorted(dirs)
    gaps = [
        (ordered[(i + 1) % 3] - ordered[i]) % 360.0 for i in range(3)
    ]
    return JunctionType.ARROW if max(gaps) > 180.0 else JunctionType.Y


def classify_junction(
    d: LineDrawing, jid: str, collinear_deg: float = DEFAULT_COLLINEAR_DEG
) -> JunctionType:
    """Junction type from the directions of its incident segments.

    1 edge: terminal.  2: L.  3: T when two directions are opposite
    within the collinearity tolerance, otherwise Arrow when one sector
    exceeds 180 degrees, otherwise Y.  4+: high-degree.
    """
    coords = d.coords()
    here = coords[d.junction(jid).id]
    dirs = []
    for s in d.segments_at(jid):
        other = s.b if s.a == jid else s.a
        dirs.append(_direction_deg(here, coords[other]))
    return _classify_directions(dirs, collinear_deg)


# --- edge appearance catalogue ----------------------------------------------


class EndpointShape(NamedTuple):
    """Vertex type plus how many sibling edges lie on each side of the edge."""

    kind: str  # "L", "Y" or "arrow"
    left: int
    right: int


@dataclass(frozen=True)
class EdgeAppearance:
    first: EndpointShape
    second: EndpointShape
    canonical_label: int


_KIND_ORDER = {"L": 0, "Y": 1, "arrow": 2}


def _shape_key(s: EndpointShape) -> tuple[int, int, int]:
    return (_KIND_ORDER[s.kind], s.left, s.right)


def _swap_sides(s: EndpointShape) -> EndpointShape:
    return EndpointShape(s.kind, s.right, s.left)


def _canonical_pair(
    first: EndpointShape, second: EndpointShape
) -> tuple[EndpointShape, EndpointShape]:
    # Reversing the edge swaps the endpoints and mirrors left/right at both.
    forward = (first, second)
    backward = (_swap_sides(second), _swap_sides(first))
    key = lambda pair: (_shape_key(pair[0]), _shape_key(pair[1]))
    return forward if key(forward) <= key(backward) else backward


def _build_catalogue() -> tuple[tuple[EndpointShape, EndpointShape], ...]:
    """Every canonical endpoint pair, sorted; index+1 is the edge label.

    An L vertex has one sibling edge (splits (1,0) and (0,1)); Y and
    Arrow vertices have two (splits (2,0), (1,1), (0,2)).
    """
    shapes = [EndpointShape("L", 1, 0), EndpointShape("L", 0, 1)]
    for kind in ("Y", "arrow"):
        shapes += [
            EndpointShape(kind, 2, 0),
            EndpointShape(kind, 1, 1),
            EndpointShape(kind, 0, 2),
        ]
    pairs = {
        _canonical_pair(a, b) for a in shapes for b in shapes
    }
    return tuple(
        sorted(pairs, key=lambda p: (_shape_key(p[0]), _shape_key(p[1])))
    )


CATALOGUE: tuple[tuple[EndpointShape, EndpointShape], ...] = _build_catalogue()
_LABEL_BY_PAIR: dict[tuple[EndpointShape, EndpointShape], int] = {
    pair: i + 1 for i, pair in enumerate(CATALOGUE)
}


def catalogue_size() -> int:
    return len(CATALOGUE)


# Label reserved for edges whose endpoints fall outside the catalogue
# (high-degree junctions kept under the "reserve" policy).
RESERVED_LABEL = len(CATALOGUE) + 1

_APPEARANCE_KINDS = {
    JunctionType.L: "L",
    JunctionType.Y: "Y",
    JunctionType.ARROW: "arrow",
}


def _endpoint_shape(
    d: LineDrawing,
    coords: dict[str, tuple[float, float]],
    seg: Segment,
    jid: str,
    edge_dir: float,
    collinear_deg: float,
) -> EndpointShape | None:
    jtype = classify_junction(d, jid, collinear_deg)
    kind = _APPEARANCE_KINDS.get(jtype)
    if kind is None:
        return None
    here = coords[jid]
    left = right = 0
    for sib in d.segments_at(jid):
        if sib.id == seg.id:
            continue
        other = sib.b if sib.a == jid else sib.a
        sib_dir = _direction_deg(here, coords[other])
        rel = (sib_dir - edge_dir) % 360.0
        # positive cross product with the oriented edge => left side;
        # rel == 0 or 180 cannot happen at a non-T junction of a valid drawing
        if 0.0 < rel < 180.0:
            left += 1
        else:
            right += 1
    return EndpointShape(kind, left, right)


def edge_appearance(
    d: LineDrawing, segment_id: str, collinear_deg: float = DEFAULT_COLLINEAR_DEG
) -> EdgeAppearance | None:
    """Appearance descriptor and canonical label of one segment.

    Returns None when either endpoint is not an L, Y or Arrow junction.
    The label does not depend on the segment's stored endpoint order,
    nor on rotating or translating the whole drawing; mirroring changes
    it by design (left and right matter).
    """
    seg = next((s for s in d.segments if s.id == segment_id), None)
    if seg is None:
        raise GraphError(f"no segment {segment_id!r}")
    coords = d.coords()
    fwd = _direction_deg(coords[seg.a], coords[seg.b])
    first = _endpoint_shape(d, coords, seg, seg.a, fwd, collinear_deg)
    second = _endpoint_shape(d, coords, seg, seg.b, fwd, collinear_deg)
    if first is None or second is None:
        return None
    label = _LABEL_BY_PAIR[_canonical_pair(first, second)]
    return EdgeAppearance(first, second, label)


# --- text format --------------------------------------------------------------
#
#     junction <id> <x> <y>
#     segment <id> <j1> <j2>
# '#' starts a comment; ids are arbitrary whitespace-free tokens.


def parse_line_drawing(text: str) -> LineDrawing:
    junctions: list[Junction] = []
    segments: list[Segment] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "junction":
            if len(parts) != 4:
                raise ParseError("expected 'junction <id> <x> <y>'", line_no)
            try:
                junctions.append(Junction(parts[1], float(parts[2]), float(parts[3])))
            except ValueError:
                raise ParseError(f"bad coordinates in {line!r}", line_no) from None
        elif parts[0] == "segment":
            if len(parts) != 4:
                raise ParseError("expected 'segment <id> <j1> <j2>'", line_no)
            segments.append(Segment(parts[1], parts[2], parts[3]))
        else:
            raise ParseError(f"unknown record {parts[0]!r}", line_no)
    if not junctions:
        raise ParseError("no junctions in drawing")
    try:
        return LineDrawing(tuple(junctions), tuple(segments))
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def format_line_drawing(d: LineDrawing) -> str:
    lines = [f"junction {j.id} {j.x!r} {j.y!r}" for j in d.junctions]
    lines += [f"segment {s.id} {s.a} {s.b}" for s in d.segments]
    return "\n".join(lines) + "\n"


# --- image-graph splitting ----------------------------------------------------


def _prune_dangling(segments: dict[str, tuple[str, str]]) -> int:
    """Remove dangling/isolated segments in place, to a fixpoint.

    A segment is dangling when either endpoint has degree 1 (an isolated
    segment has two such endpoints).  Removing one can expose another,
    so passes repeat; the count of passes is returned and is bounded by
    the number of segments.
    """
    passes = 0
    while True:
        degree: dict[str, int] = {}
        for a, b in segments.values():
            degree[a] = degree.get(a, 0) + 1
            degree[b] = degree.get(b, 0) + 1
        doomed = [
            sid
            for sid, (a, b) in segments.items()
            if degree[a] == 1 or degree[b] == 1
        ]
        if not doomed:
            return passes
        passes += 1
        for sid in doomed:
            del segments[sid]


def _incident_directions(
    jid: str,
    segments: dict[str, tuple[str, str]],
    coords: dict[str, tuple[float, float]],
) -> list[tuple[str, float]]:
    here = coords[jid]
    out = []
    for sid, (a, b) in segments.items():
        if jid == a:
            out.append((sid, _direction_deg(here, coords[b])))
        elif jid == b:
            out.append((sid, _direction_deg(here, coords[a])))
    return out


def _cut_t_junctions(
    segments: dict[str, tuple[str, str]],
    coords: dict[str, tuple[float, float]],
    tol_deg: float,
) -> int:
    """Delete the stem segment of every T junction; returns number cut.

    Detaching the stem makes it dangling by construction, so outright
    deletion plus a dangling re-prune is equivalent to the
    detach-then-prune formulation.  The two bar segments stay joined and
    are merged later by collinear fusion.
    """
    jids = sorted({j for a, b in segments.values() for j in (a, b)})
    stems: set[str] = set()
    for jid in jids:
        incident = _incident_directions(jid, segments, coords)
        dirs = [d for _, d in incident]
        if _classify_directions(dirs, tol_deg) is not JunctionType.T:
            continue
        # the bar is the pair closest to a straight line; the stem is the rest
        best_pair = None
        best_gap = -1.0
        for i in range(3):
            for j in range(i + 1, 3):
                gap = _angle_gap(dirs[i], dirs[j])
                if gap > best_gap:
                    best_gap = gap
                    best_pair = (i, j)
        stem_idx = ({0, 1, 2} - set(best_pair)).pop()
        stems.add(incident[stem_idx][0])
    for sid in stems:
        segments.pop(sid, None)
    return len(stems)


def _fuse_collinear(
    segments: dict[str, tuple[str, str]],
    coords: dict[str, tuple[float, float]],
    tol_deg: float,
) -> int:
    """Merge straight chains: a degree-2 junction whose segments leave in
    opposite directions is deleted and its segments become one."""
    fused = 0
    while True:
        incidence: dict[str, list[str]] = {}
        for sid, (a, b) in segments.items():
            incidence.setdefault(a, []).append(sid)
            incidence.setdefault(b, []).append(sid)
        target = None
        for jid in sorted(incidence):
            sids = incidence[jid]
            if len(sids) != 2:
                continue
            d1 = _incident_directions(jid, {s: segments[s] for s in sids}, coords)
            if _opposite(d1[0][1], d1[1][1], tol_deg):
                target = (jid, sids)
                break
        if target is None:
            return fused
        jid, (s1, s2) = target
        a1, b1 = segments[s1]
        a2, b2 = segments[s2]
        far1 = b1 if a1 == jid else a1
        far2 = b2 if a2 == jid else a2
        del segments[s1]
        del segments[s2]
        # a parallel segment between the far ends would mean the drawing had a
        # junction sitting inside another segment; keep the existing one
        if not any({a, b} == {far1, far2} for a, b in segments.values()):
            segments[f"{s1}+{s2}"] = (far1, far2)
        fused += 1


def split_image_graph(
    d: LineDrawing,
    collinear_deg: float = DEFAULT_COLLINEAR_DEG,
    mode: str = "weighted",
    high_degree: str = "exclude",
) -> list[WeightedGraph]:
    """Clean a scene drawing and return its relevant weighted graphs.

    Steps, in order: prune dangling segments to a fixpoint; cut the stem
    at every T junction (re-pruning after, since both steps can expose
    more of each other); fuse collinear chains; split into connected
    components; keep components with average degree >= 2 and weight
    their edges by appearance label (or 1 in "binary" mode).

    `high_degree` controls edges touching junctions of degree > 3:
    "exclude" drops them from the output graphs, "reserve" keeps them
    with the reserved out-of-catalogue label, "strict" raises.
    """
    if mode not in ("weighted", "binary"):
        raise GraphError(f"unknown mode {mode!r}")
    if high_degree not in ("exclude", "reserve", "strict"):
        raise GraphError(f"unknown high-degree policy {high_degree!r}")

    coords = d.coords()
    segments = {s.id: (s.a, s.b) for s in d.segments}

    _prune_dangling(segments)
    while True:
        if _cut_t_junctions(segments, coords, collinear_deg) == 0:
            break
        _prune_dangling(segments)
    _fuse_collinear(segments, coords, collinear_deg)
    # fusing can nudge endpoint directions, so re-check for Ts once more
    while _cut_t_junctions(segments, coords, collinear_deg):
        _prune_dangling(segments)
        _fuse_collinear(segments, coords, collinear_deg)

    if not segments:
        return []

    cleaned = LineDrawing(
        tuple(
            Junction(jid, coords[jid][0], coords[jid][1])
            for jid in sorted({j for a, b in segments.values() for j in (a, b)})
        ),
        tuple(Segment(sid, a, b) for sid, (a, b) in sorted(segments.items())),
    )

    weights: dict[str, int] = {}
    for seg in cleaned.segments:
        if mode == "binary":
            weights[seg.id] = 1
            continue
        appearance = edge_appearance(cleaned, seg.id, collinear_deg)
        if appearance is not None:
            weights[seg.id] = appearance.canonical_label
        elif high_degree == "reserve":
            weights[seg.id] = RESERVED_LABEL
        elif high_degree == "strict":
            raise GraphError(
                f"segment {seg.id!r} touches a junction outside the catalogue"
            )
        # "exclude": no weight entry; edge dropped below

    jids = sorted({j for s in cleaned.segments if s.id in weights for j in (s.a, s.b)})
    if not jids:
        return []
    index = {jid: i + 1 for i, jid in enumerate(jids)}
    whole = WeightedGraph(
        len(jids),
        tuple(
            (index[s.a], index[s.b], weights[s.id])
            for s in cleaned.segments
            if s.id in weights
        ),
        tuple(jids),
    )
    return [comp for comp in connected_components(whole) if is_relevant(comp)]
