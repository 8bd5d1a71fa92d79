"""Synthetic line drawings: projected convex solids, occlusion, noise.

Stands in for a camera and segmentation front end.  Views are hidden-line
projections of simple convex polyhedra (every vertex has three edges, so
projected junctions are L, Y or Arrow).  Scenes are views degraded by
segment deletion and partially covered by a foreground shape, which cuts
the hidden parts away and introduces genuine T junctions along the
foreground silhouette.

Everything is driven by explicit `random.Random` instances, so a fixed
seed reproduces output byte for byte.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import GraphError
from .linedraw import (
    DEFAULT_COLLINEAR_DEG,
    Junction,
    JunctionType,
    LineDrawing,
    Segment,
    classify_junction,
    split_image_graph,
)

MIN_JUNCTION_SEP = 1e-3


# --- solids -------------------------------------------------------------------

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class Solid:
    """Closed polyhedron: vertices, face cycles, outward unit normals.

    Normals may be omitted for convex solids (derived from the centroid);
    non-convex solids must supply them.
    """

    name: str
    vertices: tuple[Vec3, ...]
    faces: tuple[tuple[int, ...], ...]
    normals: tuple[Vec3, ...] | None = None

    def edges(self) -> list[tuple[int, int]]:
        seen = set()
        for face in self.faces:
            for i, u in enumerate(face):
                v = face[(i + 1) % len(face)]
                seen.add((min(u, v), max(u, v)))
        return sorted(seen)


def _prism_from_profile(name: str, profile: list[tuple[float, float]], depth: float) -> Solid:
    """Extrude a simple 2-D profile (in the xz plane) along y.

    The profile may be non-convex; it is re-oriented counterclockwise so
    that outward side normals follow from the edge directions.
    """
    area = sum(
        profile[i][0] * profile[(i + 1) % len(profile)][1]
        - profile[(i + 1) % len(profile)][0] * profile[i][1]
        for i in range(len(profile))
    )
    if area < 0:
        profile = list(reversed(profile))
    k = len(profile)
    verts = [(x, 0.0, z) for x, z in profile] + [(x, depth, z) for x, z in profile]
    faces = [tuple(range(k - 1, -1, -1)), tuple(range(k, 2 * k))]
    normals: list[Vec3] = [(0.0, -1.0, 0.0), (0.0, 1.0, 0.0)]
    for i in range(k):
        j = (i + 1) % k
        faces.append((i, j, k + j, k + i))
        dx = profile[j][0] - profile[i][0]
        dz = profile[j][1] - profile[i][1]
        length = math.hypot(dx, dz)
        normals.append((dz / length, 0.0, -dx / length))
    return Solid(name, tuple(verts), tuple(faces), tuple(normals))


def make_box(w: float = 1.0, d: float = 1.3, h: float = 0.8) -> Solid:
    profile = [(-w / 2, -h / 2), (w / 2, -h / 2), (w / 2, h / 2), (-w / 2, h / 2)]
    return _prism_from_profile("box", profile, d)


def make_prism(k: int, r: float = 0.8, depth: float = 1.2) -> Solid:
    profile = [
        (r * math.cos(2 * math.pi * i / k), r * math.sin(2 * math.pi * i / k))
        for i in range(k)
    ]
    return _prism_from_profile(f"prism{k}", profile, depth)


def make_house(w: float = 1.2, depth: float = 1.0, wall: float = 0.7, roof: float = 0.55) -> Solid:
    profile = [
        (-w / 2, 0.0),
        (w / 2, 0.0),
        (w / 2, wall),
        (0.0, wall + roof),
        (-w / 2, wall),
    ]
    return _prism_from_profile("house", profile, depth)


def chamfer_profile(
    profile: list[tuple[float, float]], cut: float
) -> list[tuple[float, float]]:
    """Replace every profile corner with a short 45-degree-ish bevel.

    Breaks up the all-right-angle monotony of block profiles so that
    different objects produce different junction-type patterns.
    """
    out: list[tuple[float, float]] = []
    k = len(profile)
    for i, (px, py) in enumerate(profile):
        ax, ay = profile[(i - 1) % k]
        bx, by = profile[(i + 1) % k]
        da = math.hypot(px - ax, py - ay)
        db = math.hypot(bx - px, by - py)
        ca = min(cut, da / 3)
        cb = min(cut, db / 3)
        out.append((px - (px - ax) / da * ca, py - (py - ay) / da * ca))
        out.append((px + (bx - px) / db * cb, py + (by - py) / db * cb))
    return out


def make_block(name: str, profile: list[tuple[float, float]], depth: float, cut: float = 0.0) -> Solid:
    if cut > 0:
        profile = chamfer_profile(profile, cut)
    return _prism_from_profile(name, profile, depth)


def offset_polygon(profile: list[tuple[float, float]], dist: float) -> list[tuple[float, float]]:
    """Offset every edge outward by `dist`, vertices at the intersections
    of adjacent offset edges.  Edge directions are preserved, which keeps
    the side faces of a tapered solid planar."""
    k = len(profile)
    out = []
    for i in range(k):
        ax, ay = profile[(i - 1) % k]
        bx, by = profile[i]
        cx, cy = profile[(i + 1) % k]
        u1x, u1y = bx - ax, by - ay
        l1 = math.hypot(u1x, u1y)
        u1x, u1y = u1x / l1, u1y / l1
        u2x, u2y = cx - bx, cy - by
        l2 = math.hypot(u2x, u2y)
        u2x, u2y = u2x / l2, u2y / l2
        # outward normals (CCW polygon: outward is right of travel)
        n1x, n1y = u1y, -u1x
        n2x, n2y = u2y, -u2x
        p1x, p1y = bx + n1x * dist, by + n1y * dist
        p2x, p2y = bx + n2x * dist, by + n2y * dist
        den = u1x * u2y - u1y * u2x
        if abs(den) < 1e-9:  # collinear edges: plain shift
            out.append((p1x, p1y))
            continue
        # intersect p1 + t*u1 with p2 + s*u2
        t = ((p2x - p1x) * u2y - (p2y - p1y) * u2x) / den
        out.append((p1x + t * u1x, p1y + t * u1y))
    return out


def make_tapered_plate(
    name: str, profile: list[tuple[float, float]], depth: float, flare: float
) -> Solid:
    """Plate whose back face is the front profile flared outward.

    The rim band leans toward a face-on viewer, so every front outline
    vertex shows its depth edge; the projected drawing is then a closed
    two-connected mesh all the way around instead of having a fragile
    bare-outline half.
    """
    area = sum(
        profile[i][0] * profile[(i + 1) % len(profile)][1]
        - profile[(i + 1) % len(profile)][0] * profile[i][1]
        for i in range(len(profile))
    )
    if area < 0:
        profile = list(reversed(profile))
    back = offset_polygon(profile, flare)
    k = len(profile)
    verts = [(x, 0.0, z) for x, z in profile] + [(x, depth, z) for x, z in back]
    faces: list[tuple[int, ...]] = [
        tuple(range(k - 1, -1, -1)),
        tuple(range(k, 2 * k)),
    ]
    normals: list[Vec3] = [(0.0, -1.0, 0.0), (0.0, 1.0, 0.0)]
    for i in range(k):
        j = (i + 1) % k
        faces.append((i, j, k + j, k + i))
        dx = profile[j][0] - profile[i][0]
        dz = profile[j][1] - profile[i][1]
        length = math.hypot(dx, dz)
        ox, oz = dz / length, -dx / length  # outward in the profile plane
        # side face leans: normal tilts toward the front by the flare angle
        tilt = math.atan2(flare, depth)
        normals.append(
            _normalize((ox * math.cos(tilt), -math.sin(tilt), oz * math.cos(tilt)))
        )
    return Solid(name, tuple(verts), tuple(faces), tuple(normals))


def regular_polygon(k: int, r: float, phase_deg: float = 0.0) -> list[tuple[float, float]]:
    return [
        (
            r * math.cos(2 * math.pi * i / k + math.radians(phase_deg)),
            r * math.sin(2 * math.pi * i / k + math.radians(phase_deg)),
        )
        for i in range(k)
    ]


def toothed_polygon(
    carrier: list[tuple[float, float]],
    teeth_per_side: int,
    height: float,
    style: str | tuple[str, ...] = "square",
    tooth_frac: float = 0.55,
) -> list[tuple[float, float]]:
    """Feature-dense plate profile: a convex carrier polygon whose every
    side sprouts evenly spaced teeth.

    The outline stays one closed loop, so the projected drawing is rich
    in short cycles and survives local damage far better than open
    comb-like shapes.  Styles: "square", "point" (triangular), "lean"
    (parallelogram), "trap" (trapezoidal), "notch", "bevel", "hook",
    "double"; a tuple of styles is cycled tooth by tooth, which makes
    even the gaps between teeth structurally distinctive.
    """
    styles = (style,) if isinstance(style, str) else tuple(style)
    pts: list[tuple[float, float]] = []
    k = len(carrier)
    tooth_index = 0
    for i in range(k):
        ax, ay = carrier[i]
        bx, by = carrier[(i + 1) % k]
        ux, uy = bx - ax, by - ay
        length = math.hypot(ux, uy)
        ux, uy = ux / length, uy / length
        # carrier assumed counterclockwise: outward normal is right of travel
        nx, ny = uy, -ux
        pts.append((ax, ay))
        pitch = length / teeth_per_side
        width = pitch * tooth_frac
        for t in range(teeth_per_side):
            style = styles[tooth_index % len(styles)]
            tooth_index += 1
            s0 = t * pitch + (pitch - width) / 2
            s1 = s0 + width
            p0 = (ax + ux * s0, ay + uy * s0)
            p1 = (ax + ux * s1, ay + uy * s1)
            top0 = (p0[0] + nx * height, p0[1] + ny * height)
            top1 = (p1[0] + nx * height, p1[1] + ny * height)
            if style == "blank":
                continue  # skipped slot: a long plain run of carrier edge
            if style == "square":
                pts += [p0, top0, top1, p1]
            elif style == "point":
                apex = ((top0[0] + top1[0]) / 2, (top0[1] + top1[1]) / 2)
                pts += [p0, apex, p1]
            elif style == "twinpeak":
                # M-shaped tooth: two peaks around a shallow middle valley
                mid = (
                    (top0[0] + top1[0]) / 2 - nx * 0.72 * height,
                    (top0[1] + top1[1]) / 2 - ny * 0.72 * height,
                )
                pts += [
                    p0,
                    (top0[0] + ux * 0.16 * width, top0[1] + uy * 0.16 * width),
                    mid,
                    (top1[0] - ux * 0.16 * width, top1[1] - uy * 0.16 * width),
                    p1,
                ]
            elif style == "lean":
                shift = 0.45 * width
                pts += [
                    p0,
                    (top0[0] + ux * shift, top0[1] + uy * shift),
                    (top1[0] + ux * shift, top1[1] + uy * shift),
                    p1,
                ]
            elif style == "trap":
                inset = 0.3 * width
                pts += [
                    p0,
                    (top0[0] + ux * inset, top0[1] + uy * inset),
                    (top1[0] - ux * inset, top1[1] - uy * inset),
                    p1,
                ]
            elif style == "notch":
                # square tooth with a notch bitten out of its top
                f = 0.3 * width
                d = 0.45 * height
                pts += [
                    p0,
                    top0,
                    (top0[0] + ux * f, top0[1] + uy * f),
                    (top0[0] + ux * f - nx * d, top0[1] + uy * f - ny * d),
                    (top1[0] - ux * f - nx * d, top1[1] - uy * f - ny * d),
                    (top1[0] - ux * f, top1[1] - uy * f),
                    top1,
                    p1,
                ]
            elif style == "bevel":
                # square tooth with both top corners cut at 45 degrees
                f = 0.28 * width
                pts += [
                    p0,
                    (top0[0] - nx * f, top0[1] - ny * f),
                    (top0[0] + ux * f, top0[1] + uy * f),
                    (top1[0] - ux * f, top1[1] - uy * f),
                    (top1[0] - nx * f, top1[1] - ny * f),
                    p1,
                ]
            elif style in ("hook", "hookm"):
                # asymmetric flag: full-height wall plus half-height tail
                # with an overhang; "hookm" is the mirror image, a distinct
                # motif in its own right because labels see chirality
                mid_h = 0.45 * height
                over = 0.3 * width
                if style == "hook":
                    pts += [
                        p0,
                        top0,
                        (top1[0] + ux * over, top1[1] + uy * over),
                        (
                            p1[0] + ux * over + nx * mid_h,
                            p1[1] + uy * over + ny * mid_h,
                        ),
                        (p1[0] + nx * mid_h, p1[1] + ny * mid_h),
                        p1,
                    ]
                else:
                    pts += [
                        p0,
                        (p0[0] + nx * mid_h, p0[1] + ny * mid_h),
                        (
                            p0[0] - ux * over + nx * mid_h,
                            p0[1] - uy * over + ny * mid_h,
                        ),
                        (top0[0] - ux * over, top0[1] - uy * over),
                        top1,
                        p1,
                    ]
            elif style == "spire":
                # house-shaped tooth: square body with a pointed roof
                apex = (
                    (top0[0] + top1[0]) / 2 + nx * 0.55 * height,
                    (top0[1] + top1[1]) / 2 + ny * 0.55 * height,
                )
                pts += [p0, top0, apex, top1, p1]
            elif style == "crown":
                # notched tooth with a small spike standing in the notch
                f = 0.26 * width
                d = 0.5 * height
                mid = (
                    (top0[0] + top1[0]) / 2 + nx * 0.1 * height,
                    (top0[1] + top1[1]) / 2 + ny * 0.1 * height,
                )
                pts += [
                    p0,
                    top0,
                    (top0[0] + ux * f, top0[1] + uy * f),
                    (top0[0] + ux * f - nx * d, top0[1] + uy * f - ny * d),
                    mid,
                    (top1[0] - ux * f - nx * d, top1[1] - uy * f - ny * d),
                    (top1[0] - ux * f, top1[1] - uy * f),
                    top1,
                    p1,
                ]
            elif style == "double":
                # two-step ziggurat tooth
                f = 0.25 * width
                h2 = 0.5 * height
                pts += [
                    p0,
                    (p0[0] + nx * h2, p0[1] + ny * h2),
                    (p0[0] + ux * f + nx * h2, p0[1] + uy * f + ny * h2),
                    (top0[0] + ux * f, top0[1] + uy * f),
                    (top1[0] - ux * f, top1[1] - uy * f),
                    (p1[0] - ux * f + nx * h2, p1[1] - uy * f + ny * h2),
                    (p1[0] + nx * h2, p1[1] + ny * h2),
                    p1,
                ]
            else:
                raise GraphError(f"unknown tooth style {style!r}")
    return pts


def l_notch_profile(w=1.9, h=1.7, t=0.6, notch=0.3, slant=0.1) -> list[tuple[float, float]]:
    """L shape with slant-walled notches in both arms."""
    n1 = t + 0.25
    n2 = t + 0.3
    return [
        (0, 0), (w, 0), (w, t),
        (n1 + notch + slant, t), (n1 + notch - slant, t - notch),
        (n1 - slant, t - notch), (n1 + slant, t),
        (t, t),
        (t, n2 + slant), (t - notch, n2 - slant),
        (t - notch, n2 + notch - slant), (t, n2 + notch + slant),
        (t, h), (0, h),
    ]


def sawtooth_profile(teeth=4, tooth=0.42, base=0.5, height=0.55) -> list[tuple[float, float]]:
    """Base bar with triangular (diagonal-edged) teeth on top."""
    w = teeth * tooth
    pts = [(0.0, 0.0), (w, 0.0), (w, base)]
    for i in range(teeth, 0, -1):
        pts.append(((i - 0.5) * tooth, base + height))
        pts.append(((i - 1) * tooth, base))
    return pts


def comb_profile(teeth=4, tooth=0.3, gap=0.28, base=0.42, height=1.1) -> list[tuple[float, float]]:
    """Base bar with upward teeth, all right angles."""
    w = teeth * tooth + (teeth - 1) * gap
    pts = [(0.0, 0.0), (w, 0.0)]
    x = w
    for i in range(teeth):
        pts += [(x, height), (x - tooth, height)]
        x -= tooth
        if i < teeth - 1:
            pts += [(x, base), (x - gap, base)]
            x -= gap
    return pts


def ziggurat_profile(w=1.9, rise=0.4, run=0.3, lean=0.1, tiers=3) -> list[tuple[float, float]]:
    """Symmetric step pyramid; the risers lean inward, so its corner
    angles differ from the right-angle blocks."""
    right = []
    x = w
    for k in range(1, tiers):
        right.append((x - lean, k * rise))
        right.append((x - lean - run, k * rise))
        x -= lean + run
    right.append((x - lean, tiers * rise))
    mirrored = [(w - px, pz) for px, pz in reversed(right)]
    return [(0.0, 0.0), (w, 0.0)] + right + mirrored


def plus_profile(size=1.6, arm=0.5) -> list[tuple[float, float]]:
    a = (size - arm) / 2
    b = a + arm
    return [
        (a, 0), (b, 0), (b, a), (size, a), (size, b), (b, b),
        (b, size), (a, size), (a, b), (0, b), (0, a), (a, a),
    ]


def cross_notched_profile(size=2.4, arm=0.7, notch=0.22) -> list[tuple[float, float]]:
    """Plus shape with a square notch in the tip of every arm."""
    a = (size - arm) / 2
    b = a + arm
    n0 = (size - notch) / 2
    n1 = n0 + notch

    def notched_tip(p0, p1, inward):
        # tip edge from p0 to p1 with a notch of depth `notch` pushed inward
        (x0, y0), (x1, y1) = p0, p1
        ix, iy = inward
        if x0 == x1:  # vertical tip edge
            q0 = (x0, n0 if y0 < y1 else n1)
            q1 = (x0, n1 if y0 < y1 else n0)
            return [p0, q0, (x0 + ix * notch, q0[1]), (x0 + ix * notch, q1[1]), q1, p1]
        q0 = (n0 if x0 < x1 else n1, y0)
        q1 = (n1 if x0 < x1 else n0, y0)
        return [p0, q0, (q0[0], y0 + iy * notch), (q1[0], y0 + iy * notch), q1, p1]

    pts: list[tuple[float, float]] = []
    pts += notched_tip((a, 0.0), (b, 0.0), (0, 1))          # bottom arm tip
    pts += [(b, a), (size, a)]
    pts += notched_tip((size, a), (size, b), (-1, 0))[1:]   # right arm tip
    pts += [(b, b), (b, size)]
    pts += notched_tip((b, size), (a, size), (0, -1))[1:]   # top arm tip
    pts += [(a, b), (0, b)]
    pts += notched_tip((0, b), (0, a), (1, 0))[1:]          # left arm tip
    pts += [(a, a)]
    return pts


def make_tetrahedron(scale: float = 1.0) -> Solid:
    s = scale
    verts = ((s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s))
    faces = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
    return Solid("tetra", verts, faces)


def truncate(solid: Solid, t: float = 0.32, name: str | None = None) -> Solid:
    """Cut every (degree-3) corner of a convex solid, yielding a richer
    convex solid: each vertex becomes a small triangle, each k-gon face a
    2k-gon.  `t` is the fractional cut depth along each edge."""
    incident: dict[int, list[int]] = {}
    for u, v in solid.edges():
        incident.setdefault(u, []).append(v)
        incident.setdefault(v, []).append(u)
    if any(len(nbrs) != 3 for nbrs in incident.values()):
        raise GraphError("truncation implemented for 3-edge vertices only")

    new_index: dict[tuple[int, int], int] = {}
    verts: list[Vec3] = []
    for v in sorted(incident):
        for u in sorted(incident[v]):
            p = solid.vertices[v]
            q = solid.vertices[u]
            new_index[(v, u)] = len(verts)
            verts.append(
                (
                    p[0] + t * (q[0] - p[0]),
                    p[1] + t * (q[1] - p[1]),
                    p[2] + t * (q[2] - p[2]),
                )
            )
    faces: list[tuple[int, ...]] = []
    for face in solid.faces:
        cycle = []
        k = len(face)
        for i, v in enumerate(face):
            prev_v = face[(i - 1) % k]
            next_v = face[(i + 1) % k]
            cycle.append(new_index[(v, prev_v)])
            cycle.append(new_index[(v, next_v)])
        faces.append(tuple(cycle))
    for v in sorted(incident):
        faces.append(tuple(new_index[(v, u)] for u in sorted(incident[v])))
    return Solid(name or f"trunc-{solid.name}", tuple(verts), tuple(faces))


# --- projection ---------------------------------------------------------------


def _sub(a: Vec3, b: Vec3) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _normalize(a: Vec3) -> Vec3:
    n = math.sqrt(_dot(a, a))
    return (a[0] / n, a[1] / n, a[2] / n)


def _face_normals(solid: Solid) -> list[Vec3]:
    if solid.normals is not None:
        return list(solid.normals)
    # convex fallback: orient the winding normal away from the centroid
    center = (
        sum(v[0] for v in solid.vertices) / len(solid.vertices),
        sum(v[1] for v in solid.vertices) / len(solid.vertices),
        sum(v[2] for v in solid.vertices) / len(solid.vertices),
    )
    out = []
    for face in solid.faces:
        a, b, c = (solid.vertices[i] for i in face[:3])
        normal = _cross(_sub(b, a), _sub(c, a))
        mid = (
            sum(solid.vertices[i][0] for i in face) / len(face),
            sum(solid.vertices[i][1] for i in face) / len(face),
            sum(solid.vertices[i][2] for i in face) / len(face),
        )
        if _dot(normal, _sub(mid, center)) < 0:
            normal = (-normal[0], -normal[1], -normal[2])
        out.append(_normalize(normal))
    return out


def _point_in_polygon(x: float, y: float, poly: list[tuple[float, float]]) -> bool:
    """Crossing-number test; works for non-convex polygons."""
    inside = False
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xc > x:
                inside = not inside
    return inside


def project_solid(
    solid: Solid,
    azimuth_deg: float,
    elevation_deg: float,
    scale: float = 100.0,
    prefix: str = "v",
) -> LineDrawing:
    """Orthographic projection of a solid with hidden lines removed.

    Visibility is sampled along every edge and refined by bisection, so
    self-occluding (non-convex) solids work: an edge disappearing behind
    a nearer part ends at a junction on the occluding silhouette, and the
    silhouette segment is split there, producing the T junction a real
    junction detector would see.
    """
    az = math.radians(azimuth_deg)
    el = math.radians(elevation_deg)
    view = (math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el))
    right = _cross((0.0, 0.0, 1.0), view)
    if _dot(right, right) < 1e-12:
        right = (1.0, 0.0, 0.0)
    right = _normalize(right)
    up = _normalize(_cross(view, right))
    normals = _face_normals(solid)

    def project(p: Vec3) -> tuple[float, float, float]:
        return (scale * _dot(p, right), scale * _dot(p, up), scale * _dot(p, view))

    pts = [project(v) for v in solid.vertices]

    # occluders: front-facing faces, with projected outline and plane data
    occluders = []
    for fi, face in enumerate(solid.faces):
        nv = _dot(normals[fi], view)
        if nv <= 1e-9:
            continue
        poly = [(pts[i][0], pts[i][1]) for i in face]
        xs = [p[0] for p in poly]
        ys = [p[1] for p in poly]
        anchor = solid.vertices[face[0]]
        # depth of the face plane at projected coords (s, t):
        #   d = (n.a - s*(n.r)/scale - t*(n.u)/scale) / (n.v), in scale units
        nr = _dot(normals[fi], right)
        nu = _dot(normals[fi], up)
        na = _dot(normals[fi], anchor) * scale
        occluders.append(
            (min(xs), max(xs), min(ys), max(ys), poly, nr, nu, na, nv, set(face))
        )

    eps_depth = 1e-6 * scale

    def hidden(s: float, t: float, depth: float, skip: set[int]) -> bool:
        for x0, x1, y0, y1, poly, nr, nu, na, nv, fverts in occluders:
            if not (x0 - 1e-9 <= s <= x1 + 1e-9 and y0 - 1e-9 <= t <= y1 + 1e-9):
                continue
            face_depth = (na - s * nr - t * nu) / nv
            if face_depth <= depth + eps_depth:
                continue
            if _point_in_polygon(s, t, poly):
                return True
        return False

    edge_faces: dict[tuple[int, int], list[int]] = {}
    for fi, face in enumerate(solid.faces):
        for i, u in enumerate(face):
            v = face[(i + 1) % len(face)]
            edge_faces.setdefault((min(u, v), max(u, v)), []).append(fi)

    samples = 48

    def visible_runs(u: int, v: int) -> list[tuple[float, float]]:
        pu, pv = pts[u], pts[v]

        def vis(t: float) -> bool:
            s = pu[0] + t * (pv[0] - pu[0])
            y = pu[1] + t * (pv[1] - pu[1])
            d = pu[2] + t * (pv[2] - pu[2])
            return not hidden(s, y, d, set())

        ts = [i / samples for i in range(samples + 1)]
        flags = [vis(t) for t in ts]

        def refine(lo: float, hi: float, lo_vis: bool) -> float:
            for _ in range(40):
                mid = (lo + hi) / 2
                if vis(mid) == lo_vis:
                    lo = mid
                else:
                    hi = mid
            return (lo + hi) / 2

        runs = []
        start: float | None = ts[0] if flags[0] else None
        for i in range(samples):
            if flags[i] == flags[i + 1]:
                continue
            boundary = refine(ts[i], ts[i + 1], flags[i])
            if flags[i]:
                runs.append((start, boundary))
                start = None
            else:
                start = boundary
        if start is not None:
            runs.append((start, 1.0))
        return [(a, b) for a, b in runs if b - a > 1e-5]

    junction_xy: dict[str, tuple[float, float]] = {}
    raw_segments: list[tuple[str, str, str]] = []
    cut_points: list[str] = []
    t_counter = 0

    def vertex_junction(i: int) -> str:
        jid = f"{prefix}{i}"
        junction_xy[jid] = (pts[i][0], pts[i][1])
        return jid

    for u, v in sorted(edge_faces):
        pu, pv = pts[u], pts[v]
        for k, (a, b) in enumerate(visible_runs(u, v)):
            ends = []
            for t, snap_vertex in ((a, u if a < 1e-4 else None), (b, v if b > 1 - 1e-4 else None)):
                if snap_vertex is not None:
                    ends.append(vertex_junction(snap_vertex))
                else:
                    t_counter += 1
                    jid = f"{prefix}t{t_counter}"
                    junction_xy[jid] = (
                        pu[0] + t * (pv[0] - pu[0]),
                        pu[1] + t * (pv[1] - pu[1]),
                    )
                    cut_points.append(jid)
                    ends.append(jid)
            raw_segments.append((f"{prefix}e{u}_{v}_{k}", ends[0], ends[1]))

    # merge junctions that coincide in projection (a hidden edge often
    # reappears exactly at a silhouette vertex in block-shaped solids)
    merge_eps = 1e-5 * scale
    canon: dict[str, str] = {}
    kept: list[str] = []
    is_cut = set(cut_points)
    # vertex junctions sort ahead of cut junctions, so coincident cut
    # points merge into the vertex rather than the other way around
    for jid in sorted(junction_xy, key=lambda j: (j in is_cut, j)):
        target = jid
        for other in kept:
            if math.dist(junction_xy[jid], junction_xy[other]) < merge_eps:
                target = other
                break
        canon[jid] = target
        if target == jid:
            kept.append(jid)
    seen_pairs: set[frozenset[str]] = set()
    merged_segments = []
    for sid, a, b in raw_segments:
        a, b = canon[a], canon[b]
        if a == b:
            continue
        pair = frozenset((a, b))
        if pair in seen_pairs:
            continue
        seen_pairs.add(pair)
        merged_segments.append((sid, a, b))
    raw_segments = merged_segments
    cut_points = [j for j in cut_points if canon[j] == j]

    # split occluding silhouette segments at the cut points lying on them
    split_lists: dict[str, list[str]] = {}
    for jid in cut_points:
        c = junction_xy[jid]
        host = None
        for sid, a, b in raw_segments:
            if jid in (a, b):
                continue
            if _on_segment(c, junction_xy[a], junction_xy[b], eps=1e-6 * scale):
                host = sid
                break
        if host is None:
            raise GraphError("hidden-line cut point off every silhouette segment")
        split_lists.setdefault(host, []).append(jid)

    segments: list[Segment] = []
    for sid, a, b in raw_segments:
        cuts = split_lists.get(sid)
        if not cuts:
            segments.append(Segment(sid, a, b))
            continue
        pa = junction_xy[a]
        chain = [a] + sorted(cuts, key=lambda j: math.dist(pa, junction_xy[j])) + [b]
        for i in range(len(chain) - 1):
            segments.append(Segment(f"{sid}/{i}", chain[i], chain[i + 1]))

    used = {j for s in segments for j in (s.a, s.b)}
    junctions = tuple(
        Junction(jid, x, y)
        for jid, (x, y) in sorted(junction_xy.items())
        if jid in used
    )
    return LineDrawing(junctions, tuple(segments))


def view_is_clean(d: LineDrawing, collinear_deg: float = DEFAULT_COLLINEAR_DEG) -> bool:
    """True when a drawing is a usable single-object view.

    Requires well-separated junctions, no crossing segments, decisive
    junction classifications (the type must not flip when the collinear
    tolerance is widened; degree must stay at most 3), and a splitting
    pipeline result of exactly one relevant component retaining most of
    the drawing.  Self-occlusion T junctions are fine; they are cut and
    fused during splitting, for views exactly as for scenes.
    """
    pts = [(j.x, j.y) for j in d.junctions]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if math.dist(pts[i], pts[j]) < MIN_JUNCTION_SEP * 100:
                return False
    if _any_interior_crossing(d):
        return False
    for j in d.junctions:
        if classify_junction(d, j.id, collinear_deg) is JunctionType.HIGH_DEGREE:
            return False
    graphs = split_image_graph(d, collinear_deg=collinear_deg)
    if len(graphs) != 1:
        return False
    return graphs[0].node_count >= 0.6 * len(d.junctions)


def _seg_coords(d: LineDrawing) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    c = d.coords()
    return [(c[s.a], c[s.b]) for s in d.segments]


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _any_interior_crossing(d: LineDrawing) -> bool:
    segs = _seg_coords(d)
    ids = [(s.a, s.b) for s in d.segments]
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if set(ids[i]) & set(ids[j]):
                continue  # sharing a junction is not a crossing
            p1, q1 = segs[i]
            p2, q2 = segs[j]
            d1 = _orient(p1, q1, p2)
            d2 = _orient(p1, q1, q2)
            d3 = _orient(p2, q2, p1)
            d4 = _orient(p2, q2, q1)
            if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
                return True
    return False


# --- standard view catalog ------------------------------------------------------


def _solid_set() -> list[tuple[Solid, list[tuple[float, float]]]]:
    """Solids with per-solid base camera angles (azimuth, elevation).

    Feature-dense toothed plates: large junction counts keep radius-2
    neighborhoods genuinely local (damage stays contained), the closed
    outlines resist pruning cascades, and each object gets its own tooth
    style and carrier polygon so neighborhoods rarely collide across
    objects.
    """
    return [
        (
            make_tapered_plate(
                "gear",
                toothed_polygon(regular_polygon(9, 2.0), 2, 0.3, "spire"),
                0.3,
                0.12,
            ),
            [(-95.0, 11.0), (-83.0, 16.0)],
        ),
        (
            make_tapered_plate(
                "star",
                toothed_polygon(regular_polygon(8, 2.0, 22.5), 2, 0.42, "twinpeak", tooth_frac=0.56),
                0.3,
                0.11,
            ),
            [(-98.0, 14.0), (-85.0, 10.0)],
        ),
        (
            make_tapered_plate(
                "crenel",
                toothed_polygon(
                    [(-1.9, -1.3), (1.9, -1.3), (1.9, 1.3), (-1.9, 1.3)],
                    2,
                    0.36,
                    "crown",
                    tooth_frac=0.62,
                ),
                0.3,
                0.11,
            ),
            [(-93.0, 15.0), (-80.0, 11.0)],
        ),
        (
            make_tapered_plate(
                "pinwheel",
                toothed_polygon(regular_polygon(7, 2.0, 25.7), 2, 0.3, "hook"),
                0.3,
                0.08,
            ),
            [(-96.0, 10.0), (-86.0, 15.0)],
        ),
        (
            make_tapered_plate(
                "trapring",
                toothed_polygon(regular_polygon(7, 2.0, 90.0), 2, 0.34, "double", tooth_frac=0.62),
                0.3,
                0.11,
            ),
            [(-91.0, 13.0), (-82.0, 9.0)],
        ),
        (
            make_tapered_plate(
                "sawdisc",
                toothed_polygon(regular_polygon(3, 2.8, 30.0), 4, 0.42, "bevel", tooth_frac=0.6),
                0.3,
                0.12,
            ),
            [(-97.0, 12.0), (-84.0, 14.0)],
        ),
    ]


def view_catalog(seed: int = 0) -> list[tuple[str, str, LineDrawing]]:
    """Deterministic catalog of two clean views per solid.

    Searches a small jittered grid of camera angles per view slot until
    the projection passes `view_is_clean`.
    """
    rng = random.Random(seed)
    out: list[tuple[str, str, LineDrawing]] = []
    for solid, base_angles in _solid_set():
        for vi, (az0, el0) in enumerate(base_angles):
            found = None
            for attempt in range(200):
                az = az0 + rng.uniform(-8.0, 8.0)
                el = el0 + rng.uniform(-6.0, 6.0)
                d = project_solid(solid, az, el, prefix=f"{solid.name}_")
                if view_is_clean(d):
                    found = d
                    break
            if found is None:
                raise GraphError(f"no clean view found for {solid.name}")
            out.append((solid.name, f"{solid.name}_cv{vi}", found))
    return out


# --- occlusion composition -------------------------------------------------------


def convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Monotone-chain convex hull, counterclockwise, no duplicate endpoint."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def _inside_hull(hull, p, eps=1e-9) -> bool:
    return all(
        _orient(hull[i], hull[(i + 1) % len(hull)], p) > eps
        for i in range(len(hull))
    )


def _clip_interval(p, q, hull) -> tuple[float, float] | None:
    """Parameter interval of segment p+t(q-p), t in [0,1], inside a CCW
    convex hull (Cyrus-Beck); None when the segment misses the hull."""
    t0, t1 = 0.0, 1.0
    dx, dy = q[0] - p[0], q[1] - p[1]
    for i in range(len(hull)):
        a = hull[i]
        b = hull[(i + 1) % len(hull)]
        # inward normal of CCW edge a->b
        nx, ny = -(b[1] - a[1]), b[0] - a[0]
        den = nx * dx + ny * dy
        num = nx * (a[0] - p[0]) + ny * (a[1] - p[1])
        if abs(den) < 1e-12:
            if num > 0:  # entirely outside this half-plane
                return None
            continue
        t = num / den
        if den > 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 >= t1:
            return None
    return (t0, t1)


def _on_segment(c, p, q, eps=1e-6) -> bool:
    if abs(_orient(p, q, c)) > eps * math.dist(p, q):
        return False
    lo_x, hi_x = min(p[0], q[0]) - eps, max(p[0], q[0]) + eps
    lo_y, hi_y = min(p[1], q[1]) - eps, max(p[1], q[1]) + eps
    return lo_x <= c[0] <= hi_x and lo_y <= c[1] <= hi_y


def translate_drawing(d: LineDrawing, dx: float, dy: float, prefix: str = "") -> LineDrawing:
    return LineDrawing(
        tuple(Junction(prefix + j.id, j.x + dx, j.y + dy) for j in d.junctions),
        tuple(Segment(prefix + s.id, prefix + s.a, prefix + s.b) for s in d.segments),
    )


def make_occluder_quad(
    cx: float, cy: float, half_w: float, half_h: float, angle_deg: float, prefix: str = "q"
) -> LineDrawing:
    a = math.radians(angle_deg)
    ca, sa = math.cos(a), math.sin(a)
    corners = []
    for ux, uy in ((-half_w, -half_h), (half_w, -half_h), (half_w, half_h), (-half_w, half_h)):
        corners.append((cx + ux * ca - uy * sa, cy + ux * sa + uy * ca))
    junctions = tuple(
        Junction(f"{prefix}{i}", x, y) for i, (x, y) in enumerate(corners)
    )
    segments = tuple(
        Segment(f"{prefix}e{i}", f"{prefix}{i}", f"{prefix}{(i + 1) % 4}")
        for i in range(4)
    )
    return LineDrawing(junctions, segments)


def compose_scene(layers: list[LineDrawing]) -> LineDrawing:
    """Overlay drawings back to front with occlusion.

    Later layers hide whatever falls inside the convex hull of their
    junctions: earlier-layer segments are clipped at the hull boundary,
    the boundary segment is split there, and the junction becomes a
    T (two collinear boundary pieces plus the clipped stub).  A single
    layer comes back unchanged.
    """
    if not layers:
        raise GraphError("empty scene")
    if len(layers) == 1:
        return layers[0]

    junctions: dict[str, tuple[float, float]] = {}
    segments: dict[str, tuple[str, str]] = {}
    fresh = [0]

    def new_junction(x: float, y: float) -> str:
        fresh[0] += 1
        jid = f"cut{fresh[0]}"
        junctions[jid] = (x, y)
        return jid

    for li, layer in enumerate(layers):
        pfx = f"s{li}_"
        hull = (
            convex_hull([(j.x, j.y) for j in layer.junctions])
            if li > 0
            else None
        )
        if li > 0 and hull is not None and len(hull) >= 3:
            # clip everything already placed against this layer's hull
            splits: dict[str, list[tuple[float, float]]] = {}
            for sid in sorted(segments):
                a, b = segments[sid]
                p, q = junctions[a], junctions[b]
                interval = _clip_interval(p, q, hull)
                if interval is None:
                    continue
                t0, t1 = interval
                eps = 1e-7
                if t1 - t0 <= eps:
                    continue
                del segments[sid]
                if t0 > eps:
                    cx, cy = p[0] + t0 * (q[0] - p[0]), p[1] + t0 * (q[1] - p[1])
                    stub = new_junction(cx, cy)
                    segments[f"{sid}/a"] = (a, stub)
                    splits.setdefault(stub, []).append((cx, cy))
                if t1 < 1.0 - eps:
                    cx, cy = p[0] + t1 * (q[0] - p[0]), p[1] + t1 * (q[1] - p[1])
                    stub = new_junction(cx, cy)
                    segments[f"{sid}/b"] = (stub, b)
                    splits.setdefault(stub, []).append((cx, cy))
            # orphaned junctions fully inside the hull disappear with their segments
            still_used = {j for ab in segments.values() for j in ab}
            for jid in [j for j in junctions if j not in still_used and not j.startswith("cut")]:
                if _inside_hull(hull, junctions[jid], -1e-9):
                    del junctions[jid]
            # register this layer, then split its boundary at every cut point
            coords = layer.coords()
            for j in layer.junctions:
                junctions[pfx + j.id] = (j.x, j.y)
            cut_on: dict[str, list[str]] = {}
            for stub_jid in splits:
                c = junctions[stub_jid]
                host = None
                for s in layer.segments:
                    if _on_segment(c, coords[s.a], coords[s.b]):
                        host = s
                        break
                if host is None:
                    raise GraphError("cut point off the occluder boundary")
                cut_on.setdefault(host.id, []).append(stub_jid)
            for s in layer.segments:
                cuts = cut_on.get(s.id)
                if not cuts:
                    segments[pfx + s.id] = (pfx + s.a, pfx + s.b)
                    continue
                p = coords[s.a]
                chain = sorted(
                    cuts, key=lambda jid: math.dist(p, junctions[jid])
                )
                stations = [pfx + s.a] + chain + [pfx + s.b]
                for i in range(len(stations) - 1):
                    segments[f"{pfx}{s.id}/{i}"] = (stations[i], stations[i + 1])
        else:
            for j in layer.junctions:
                junctions[pfx + j.id] = (j.x, j.y)
            for s in layer.segments:
                segments[pfx + s.id] = (pfx + s.a, pfx + s.b)

    used = {j for ab in segments.values() for j in ab}
    return LineDrawing(
        tuple(Junction(jid, x, y) for jid, (x, y) in sorted(junctions.items()) if jid in used),
        tuple(Segment(sid, a, b) for sid, (a, b) in sorted(segments.items())),
    )


def scene_is_plausible(d: LineDrawing) -> bool:
    """Weaker validity for composed scenes: separated junctions, no
    interior crossings.  T junctions are expected here."""
    pts = [(j.x, j.y) for j in d.junctions]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if math.dist(pts[i], pts[j]) < MIN_JUNCTION_SEP * 50:
                return False
    return not _any_interior_crossing(d)


# --- perturbations ----------------------------------------------------------------


def delete_segments(d: LineDrawing, rate: float, rng: random.Random) -> LineDrawing:
    """Remove a `rate` fraction of segments (at least one when rate > 0)."""
    if rate <= 0 or not d.segments:
        return d
    k = max(1, round(rate * len(d.segments)))
    doomed = set(rng.sample([s.id for s in d.segments], min(k, len(d.segments))))
    kept = tuple(s for s in d.segments if s.id not in doomed)
    used = {j for s in kept for j in (s.a, s.b)}
    return LineDrawing(
        tuple(j for j in d.junctions if j.id in used),
        kept,
    )


def jitter_drawing(d: LineDrawing, sigma: float, rng: random.Random) -> LineDrawing:
    if sigma <= 0:
        return d
    return LineDrawing(
        tuple(
            Junction(j.id, j.x + rng.gauss(0, sigma), j.y + rng.gauss(0, sigma))
            for j in d.junctions
        ),
        d.segments,
    )


def _bbox(d: LineDrawing) -> tuple[float, float, float, float]:
    xs = [j.x for j in d.junctions]
    ys = [j.y for j in d.junctions]
    return min(xs), min(ys), max(xs), max(ys)


def generate_query_scene(
    view: LineDrawing,
    rng: random.Random,
    deletion_rate: float = 0.15,
    occlude: bool = True,
    jitter_sigma: float = 0.0,
    max_attempts: int = 80,
) -> LineDrawing:
    """One degraded scene from a stored view: deletion, then one occluding
    quad placed over part of the view (position rerolled until the
    composition is geometrically clean)."""
    base = delete_segments(view, deletion_rate, rng)
    base = jitter_drawing(base, jitter_sigma, rng)
    if not occlude:
        return base
    x0, y0, x1, y1 = _bbox(view)
    w, h = x1 - x0, y1 - y0
    for _ in range(max_attempts):
        cx = rng.uniform(x0 + 0.12 * w, x1 - 0.12 * w)
        cy = rng.uniform(y0 + 0.12 * h, y1 - 0.12 * h)
        quad = make_occluder_quad(
            cx,
            cy,
            rng.uniform(0.07, 0.12) * w,
            rng.uniform(0.07, 0.12) * h,
            rng.uniform(0.0, 90.0),
        )
        try:
            scene = compose_scene([base, quad])
        except GraphError:
            continue
        if scene_is_plausible(scene):
            return scene
    # occluder placement failed everywhere; fall back to the bare view
    return base
