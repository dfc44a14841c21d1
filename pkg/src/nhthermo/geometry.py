"""Joint-spectrum hulls and numerical-range boundaries in the plane."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import as_complex_matrix
from .gibbs import ObservablePair

EPS_COLLINEAR = 1e-10
EPS_BOUNDARY = 1e-10


@dataclass(frozen=True)
class HullPolygon:
    vertices: np.ndarray  # (m, 2), counterclockwise
    diameter: float
    degenerate: str | None = None  # "point" or "segment"

    @property
    def edges(self):
        v = self.vertices
        return list(zip(v, np.roll(v, -1, axis=0)))

    def boundary_polyline(self) -> np.ndarray:
        """Closed polyline (first vertex repeated at the end)."""
        return np.vstack([self.vertices, self.vertices[:1]])


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _orientation(o, a, b) -> float:
    """Sign-exact orientation: float cross product, rational fallback when roundoff could flip it."""
    c = _cross(o, a, b)
    bound = 8.0 * np.finfo(float).eps * (
        abs((a[0] - o[0]) * (b[1] - o[1])) + abs((a[1] - o[1]) * (b[0] - o[0]))
    )
    if abs(c) > bound:
        return c
    o, a, b = ([Fraction(v) for v in p] for p in (o, a, b))
    return float((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def _line_distance(p, a, b) -> float:
    chord = math.hypot(b[0] - a[0], b[1] - a[1])
    return abs(_cross(a, b, p)) / chord if chord > 0 else math.hypot(p[0] - a[0], p[1] - a[1])


def _drop_collinear(verts: list, tol: float) -> list:
    """Merge runs of vertices lying within ``tol`` of the edge that replaces them."""
    if len(verts) <= 3 or tol <= 0:
        return verts
    # start from the vertex farthest from the line through its neighbours
    m = len(verts)
    start = max(range(m), key=lambda i: _line_distance(verts[i], verts[i - 1], verts[(i + 1) % m]))
    ring = verts[start:] + verts[:start]
    out = [ring[0]]
    i = 0
    while i < m:
        j = i + 1
        # extend the edge from ring[i] while every skipped vertex stays within tol
        while j + 1 <= m and all(
            _line_distance(ring[k % m], ring[i], ring[(j + 1) % m]) <= tol for k in range(i + 1, j + 1)
        ):
            j += 1
        if j >= m:
            break
        out.append(ring[j])
        i = j
    return out if len(out) >= 3 else verts


def convex_hull(points, eps_collinear: float = EPS_COLLINEAR) -> HullPolygon:
    """Monotone-chain hull with exact orientation tests.

    Vertices within ``eps_collinear * span`` of the edge joining their
    surviving neighbours are dropped, so the polygon shrinks by at most that
    distance.
    """
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    span = float(np.max(np.ptp(pts, axis=0))) if len(pts) > 1 else 0.0
    pts_sorted = sorted(map(tuple, pts))

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _orientation(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts_sorted)
    upper = chain(reversed(pts_sorted))
    verts = lower[:-1] + upper[:-1] if len(pts_sorted) > 1 else list(pts_sorted)
    if not verts:
        verts = pts_sorted[:1]
    if len(verts) >= 3:
        verts = _drop_collinear(verts, eps_collinear * span)
    diameter = float(np.max(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)))
    degenerate = None
    if len(verts) >= 3:
        # a sliver thinner than the collinearity tolerance counts as a segment
        v = np.array(verts)
        edge = np.roll(v, -1, axis=0) - v
        rel = v[None, :, :] - v[:, None, :]
        dist = np.abs(edge[:, None, 0] * rel[..., 1] - edge[:, None, 1] * rel[..., 0])
        width = float(np.min(dist.max(axis=1) / np.linalg.norm(edge, axis=1)))
        if width <= eps_collinear * span:
            ends = max(((a, b) for a in verts for b in verts), key=lambda e: math.dist(*e))
            verts = sorted(ends)
    verts = np.array(verts)
    if len(verts) == 1 or diameter == 0.0:
        degenerate = "point"
        verts = verts[:1]
    elif len(verts) == 2:
        degenerate = "segment"
    return HullPolygon(vertices=verts, diameter=diameter, degenerate=degenerate)


def joint_hull(pair: ObservablePair) -> HullPolygon:
    return convex_hull(pair.joint_spectrum)


def _segment_distance(p, a, b) -> float:
    ab = b - a
    denom = ab @ ab
    t = 0.0 if denom == 0 else min(1.0, max(0.0, (p - a) @ ab / denom))
    return float(np.linalg.norm(p - (a + t * ab)))


def distance_to_boundary(hull: HullPolygon, point) -> float:
    p = np.asarray(point, dtype=float)
    if hull.degenerate == "point":
        return float(np.linalg.norm(p - hull.vertices[0]))
    return min(_segment_distance(p, a, b) for a, b in hull.edges)


@dataclass(frozen=True)
class Membership:
    kind: str  # "interior", "boundary" or "exterior"
    margin: float = 0.0  # interior: distance to the boundary
    distance: float = 0.0  # exterior: distance to the hull
    facet: int | None = None  # boundary: index of the nearest edge

    @property
    def is_interior(self) -> bool:
        return self.kind == "interior"


def hull_membership(hull: HullPolygon, point, eps_boundary: float = EPS_BOUNDARY) -> Membership:
    """Classify a point against a hull with tie tolerance ``eps_boundary * diameter``."""
    p = np.asarray(point, dtype=float)
    tol = eps_boundary * max(hull.diameter, 1.0 if hull.diameter == 0 else hull.diameter)
    if hull.degenerate is not None:
        # No interior in two dimensions.
        dist = distance_to_boundary(hull, p)
        if dist <= tol:
            return Membership("boundary", facet=0)
        return Membership("exterior", distance=dist)
    a = hull.vertices
    edge = np.roll(a, -1, axis=0) - a
    # positive inside for a counterclockwise polygon
    signed = (edge[:, 0] * (p[1] - a[:, 1]) - edge[:, 1] * (p[0] - a[:, 0])) / np.linalg.norm(edge, axis=1)
    worst = int(np.argmin(signed))
    if signed[worst] > tol:
        return Membership("interior", margin=float(signed[worst]))
    dist = distance_to_boundary(hull, p)
    if signed[worst] >= -tol or dist <= tol:
        nearest = int(np.argmin([_segment_distance(p, a, b) for a, b in hull.edges]))
        return Membership("boundary", facet=nearest)
    return Membership("exterior", distance=dist)


def theta_grid(size: int = 512, endpoint: bool = True) -> np.ndarray:
    return np.linspace(-math.pi, math.pi, size, endpoint=endpoint)


def numerical_range_boundary(a, thetas=None) -> np.ndarray:
    """Support points of the field of values ``{<A psi, psi> : ||psi|| = 1}``.

    For each angle the top eigenvector of the Hermitian part of
    ``exp(-i theta) A`` gives the boundary point ``<A psi, psi>``. Returns an
    ``(m, 2)`` array of (real, imag) coordinates in angle order.
    """
    a = as_complex_matrix(a, "A")
    thetas = theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    out = np.empty((len(thetas), 2))
    for i, th in enumerate(thetas):
        rot = np.exp(-1j * th) * a
        herm = 0.5 * (rot + rot.conj().T)
        _, vecs = np.linalg.eigh(herm)
        psi = vecs[:, -1]
        z = np.vdot(psi, a @ psi)
        out[i] = z.real, z.imag
    return out


def metric_numerical_range_boundary(pair: ObservablePair, thetas=None) -> np.ndarray:
    """Field-of-values boundary of ``D^{1/2}(H + iK)D^{-1/2}`` (normal for commuting D-Hermitian pairs)."""
    a0 = pair.metric.similarity(np.asarray(pair.h) + 1j * np.asarray(pair.k))
    return numerical_range_boundary(a0, thetas)


def _densify(polyline: np.ndarray, per_edge: int) -> np.ndarray:
    pts = [polyline[:1]]
    t = np.linspace(0.0, 1.0, per_edge + 1)[1:, None]
    for a, b in zip(polyline[:-1], polyline[1:]):
        pts.append(a + t * (b - a))
    return np.vstack(pts)


def _distance_to_polyline(points: np.ndarray, polyline: np.ndarray, chunk: int = 1024) -> np.ndarray:
    a, b = polyline[:-1], polyline[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    denom = np.where(denom == 0.0, 1.0, denom)
    out = np.empty(len(points))
    for start in range(0, len(points), chunk):
        p = points[start : start + chunk, None, :]
        t = np.clip(np.einsum("pij,ij->pi", p - a, ab) / denom, 0.0, 1.0)
        out[start : start + chunk] = np.linalg.norm(p - (a + t[..., None] * ab), axis=-1).min(axis=1)
    return out


def hausdorff_distance(a, b, per_edge: int = 16) -> float:
    """Symmetric Hausdorff distance between two polylines.

    Points sampled along each polyline's edges are measured exactly against
    the other polyline's segments.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 1 or len(b) == 1:
        a, b = (np.vstack([x, x]) if len(x) == 1 else x for x in (a, b))
    ab = _distance_to_polyline(_densify(a, per_edge), b).max()
    ba = _distance_to_polyline(_densify(b, per_edge), a).max()
    return float(max(ab, ba))


def is_convex_polyline(points, tol: float = 1e-12) -> bool:
    """Consecutive edge cross products share one sign (zero-length edges skipped)."""
    p = np.asarray(points, dtype=float)
    edges = np.diff(p, axis=0)
    keep = np.linalg.norm(edges, axis=1) > tol
    edges = edges[keep]
    if len(edges) < 2:
        return True
    cross = edges[:-1, 0] * edges[1:, 1] - edges[:-1, 1] * edges[1:, 0]
    scale = tol * max(np.abs(edges).max() ** 2, 1.0)
    return bool(np.all(cross >= -scale) or np.all(cross <= scale))
