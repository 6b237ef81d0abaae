"""Action regions as polytopes in the belief simplex.

Each region is the intersection of the simplex with the half-spaces where
one action is receiver-optimal.  Vertices are found by brute-force
intersection of hyperplane subsets, which is exact and fast enough for the
declared scope (n <= 8).  Facets include simplex-boundary faces as well as
payoff-boundary faces: optimal supports routinely sit on simplex vertices,
so the simplex faces cannot be dropped.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateRegion
from .game import ACTION_TIE_TOL, Game, optimal_action_set

logger = logging.getLogger(__name__)

VERTEX_DEDUP_TOL = 1e-8
FACE_TOL = 1e-9


class Membership(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Halfspace:
    """Constraint normal . mu >= offset."""

    normal: np.ndarray
    offset: float
    kind: str  # "payoff" or "simplex"

    def slack(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points) @ self.normal - self.offset


@dataclass
class ActionRegion:
    action: int
    halfspaces: list[Halfspace]
    vertices: np.ndarray = field(default=None)  # (v, n), filled by build_regions
    dim: int = -1

    @property
    def empty(self) -> bool:
        return self.vertices is None or len(self.vertices) == 0

    @property
    def full_dim(self) -> bool:
        return not self.empty and self.dim == self.vertices.shape[1] - 1


@dataclass(frozen=True)
class Facet:
    parent_action: int
    tight_constraint: int  # index into the parent's halfspace list
    vertices: np.ndarray  # (v, n)

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


@dataclass
class SenderSubzone:
    parent_action: int
    chosen_action: int
    halfspaces: list[Halfspace]
    vertices: np.ndarray


def _affine_dim(points: np.ndarray, tol: float = 1e-9) -> int:
    pts = np.atleast_2d(points)
    if len(pts) <= 1:
        return 0
    diffs = pts[1:] - pts[0]
    sv = np.linalg.svd(diffs, compute_uv=False)
    return int(np.sum(sv > tol))


def region_halfspaces(game: Game, action: int) -> list[Halfspace]:
    """Payoff half-spaces (action beats each rival) plus simplex faces."""
    hs = []
    ua = game.receiver_payoffs[action]
    for other in range(game.m):
        if other == action:
            continue
        hs.append(Halfspace(normal=ua - game.receiver_payoffs[other], offset=0.0, kind="payoff"))
    n = game.n
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        hs.append(Halfspace(normal=e, offset=0.0, kind="simplex"))
    return hs


def _polytope_vertices(halfspaces: list[Halfspace], n: int) -> np.ndarray:
    """Vertices of {mu >= constraints, sum mu = 1} by exhaustive intersection
    of (n-1)-subsets of the constraint hyperplanes with the sum-to-one plane."""
    normals = np.array([h.normal for h in halfspaces])
    offsets = np.array([h.offset for h in halfspaces])
    found = []
    ones = np.ones(n)
    for idx in itertools.combinations(range(len(halfspaces)), n - 1):
        a = np.vstack([normals[list(idx)], ones])
        b = np.append(offsets[list(idx)], 1.0)
        try:
            sol = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(sol)):
            continue
        if np.any(normals @ sol - offsets < -FACE_TOL):
            continue
        found.append(sol)
    if not found:
        return np.empty((0, n))
    pts = np.array(found)
    keep: list[np.ndarray] = []
    for p in pts:
        if not any(np.abs(p - q).max() <= VERTEX_DEDUP_TOL for q in keep):
            keep.append(p)
    return np.array(keep)


def build_regions(game: Game) -> list[ActionRegion]:
    """One region per action; empty regions are flagged, not dropped."""
    regions = []
    for a in range(game.m):
        hs = region_halfspaces(game, a)
        verts = _polytope_vertices(hs, game.n)
        dim = _affine_dim(verts) if len(verts) else -1
        regions.append(ActionRegion(action=a, halfspaces=hs, vertices=verts, dim=dim))
    return regions


def enumerate_vertices(region: ActionRegion) -> np.ndarray:
    """Exact vertex set of the region (recomputed from its half-spaces)."""
    n = region.halfspaces[0].normal.shape[0]
    verts = _polytope_vertices(region.halfspaces, n)
    if len(verts) and _affine_dim(verts) < n - 1:
        logger.warning("region for action %d is degenerate (dim %d < %d)",
                       region.action, _affine_dim(verts), n - 1)
    return verts


def enumerate_facets(region: ActionRegion) -> list[Facet]:
    """Faces of dimension (region dim - 1), one per tight constraint."""
    if region.empty:
        raise DegenerateRegion(f"region for action {region.action} is empty")
    if not region.full_dim:
        raise DegenerateRegion(
            f"region for action {region.action} has dimension {region.dim}"
        )
    facets = []
    seen = set()
    for ci, h in enumerate(region.halfspaces):
        tight = region.vertices[np.abs(h.slack(region.vertices)) <= FACE_TOL]
        if len(tight) == 0:
            continue
        if _affine_dim(tight) != region.dim - 1:
            continue
        key = tuple(sorted(map(tuple, np.round(tight, 8))))
        if key in seen:
            continue
        seen.add(key)
        facets.append(Facet(parent_action=region.action, tight_constraint=ci, vertices=tight))
    return facets


def membership(region: ActionRegion, belief: np.ndarray, tol: float = 1e-9):
    """Classify a belief as Interior, Boundary (with tight facet indices) or
    Outside the region."""
    facets = enumerate_facets(region)
    slacks = np.array([h.slack(belief[None, :])[0] for h in region.halfspaces])
    if np.any(slacks < -tol):
        return Membership.OUTSIDE, ()
    tight = [
        fi for fi, f in enumerate(facets)
        if abs(region.halfspaces[f.tight_constraint].slack(belief[None, :])[0]) <= tol
    ]
    if tight:
        return Membership.BOUNDARY, tuple(tight)
    return Membership.INTERIOR, ()


def sender_subzones(game: Game, region: ActionRegion) -> list[SenderSubzone]:
    """Split a region into pieces on which the sender-preferred action (and
    hence the sender's value, affine in the belief) is constant."""
    if region.empty:
        return []
    subzones = []
    # actions that are receiver-optimal somewhere on this region: check at
    # each vertex and at the centroid
    probes = np.vstack([region.vertices, region.vertices.mean(axis=0)])
    candidates = set()
    for p in probes:
        candidates |= optimal_action_set(game, p)
    for a_prime in sorted(candidates):
        # piece of the region where a_prime is also receiver-optimal
        hs = list(region.halfspaces)
        up = game.receiver_payoffs[a_prime]
        for other in range(game.m):
            if other != a_prime:
                hs.append(Halfspace(normal=up - game.receiver_payoffs[other],
                                    offset=0.0, kind="payoff"))
        piece = _polytope_vertices(hs, game.n)
        if len(piece) == 0:
            continue
        # rivals the receiver would also accept everywhere on this piece;
        # only those compete for the sender's preference
        rivals = [
            a for a in sorted(candidates)
            if a != a_prime and all(a in optimal_action_set(game, v) for v in piece)
        ]
        sp = game.sender_lin[a_prime]
        sc = game.sender_const[a_prime]
        for other in rivals:
            hs.append(Halfspace(normal=sp - game.sender_lin[other],
                                offset=float(game.sender_const[other] - sc),
                                kind="payoff"))
        verts = _polytope_vertices(hs, game.n)
        if len(verts) == 0:
            continue
        subzones.append(SenderSubzone(parent_action=region.action,
                                      chosen_action=a_prime,
                                      halfspaces=hs, vertices=verts))
    return subzones


def all_facets(game: Game, regions: list[ActionRegion] | None = None) -> list[Facet]:
    """Facets of every nonempty full-dimensional region, in action order."""
    if regions is None:
        regions = build_regions(game)
    out = []
    for r in regions:
        if r.full_dim:
            out.extend(enumerate_facets(r))
    return out
