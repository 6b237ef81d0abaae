"""Naive brute-force verifiers, kept deliberately separate from the
optimizing solvers: candidate posteriors are enumerated on region boundaries
at a fixed grid spacing, with exact region vertices added so vertex-supported
optima are representable at any resolution."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .continuum import ContinuumProblem, partition_signal, sender_value_continuum
from .errors import EmptyInterval, ScaleExceeded, ValidationError
from .game import Game, InformationStructure, sender_value, structure
from .regions import all_facets, build_regions

_NEG_W_TOL = 1e-9
_MAX_TRIPLE_CANDS = 140  # cap on candidate count for 3-subset enumeration


def _facet_grid(vertices: np.ndarray, spacing: float) -> np.ndarray:
    """Grid points of a facet given by its vertex set: barycentric lattice
    over the vertices at roughly the requested spacing."""
    v = len(vertices)
    if v == 1:
        return vertices.copy()
    diam = max(np.abs(a - b).max() for a, b in combinations(vertices, 2))
    steps = max(1, int(np.ceil(diam / spacing)))
    if v == 2:
        t = np.linspace(0.0, 1.0, steps + 1)[:, None]
        return (1 - t) * vertices[0] + t * vertices[1]
    pts = []
    for combo in combinations(range(steps + v - 1), v - 1):
        bars = np.diff((-1,) + combo + (steps + v - 1,)) - 1
        pts.append((np.asarray(bars) / steps) @ vertices)
    return np.asarray(pts)


def _candidates(game: Game, spacing: float) -> np.ndarray:
    pts = [np.eye(game.n)]
    for facet in all_facets(game):
        pts.append(facet.vertices)
        pts.append(_facet_grid(facet.vertices, spacing))
    for region in build_regions(game):
        if not region.empty:
            pts.append(region.vertices)
    cands = np.vstack(pts)
    cands = np.clip(cands, 0.0, None)
    cands /= cands.sum(axis=1, keepdims=True)
    _, idx = np.unique(np.round(cands, 9), axis=0, return_index=True)
    return cands[np.sort(idx)]


def _sender_values(game: Game, pts: np.ndarray) -> np.ndarray:
    """Sender value at each belief row: receiver-optimal action set, then the
    sender's favourite within it (direct matrix evaluation)."""
    rv = pts @ game.receiver_payoffs.T
    sv = pts @ game.sender_lin.T + game.sender_const
    tied = rv >= rv.max(axis=1, keepdims=True) - 1e-9
    return np.where(tied, sv, -np.inf).max(axis=1)


def _best_pair(game, cands, vals, resolution):
    """For each candidate p, walk the exact ray from p through the prior:
    every sampled pair is Bayes-plausible by construction, so the scan is a
    true lower bound.  Crossings of receiver-indifference hyperplanes are
    added to the t-grid so region switches are sampled exactly."""
    mu0 = game.prior
    m = game.m
    planes = [game.receiver_payoffs[a] - game.receiver_payoffs[b]
              for a, b in combinations(range(m), 2)]
    best = None
    for i, p in enumerate(cands):
        d = mu0 - p
        if np.abs(d).max() < 1e-12:
            continue
        neg = d < -1e-15
        t_max = float(np.min(mu0[neg] / -d[neg]))
        ts = list(np.linspace(0.0, t_max, resolution + 1)[1:])
        for g in planes:
            den = g @ d
            if abs(den) > 1e-14:
                t = -(g @ mu0) / den
                if 1e-12 < t <= t_max:
                    ts.append(t)
        ts = np.asarray(ts)
        q = mu0 + ts[:, None] * d
        np.clip(q, 0.0, None, out=q)
        q /= q.sum(axis=1, keepdims=True)
        w = ts / (1.0 + ts)
        vv = w * vals[i] + (1.0 - w) * _sender_values(game, q)
        j = int(np.argmax(vv))
        if best is None or vv[j] > best[0]:
            best = (float(vv[j]), np.vstack([p, q[j]]),
                    np.array([w[j], 1.0 - w[j]]))
    return best


def _best_triple(game, cands, vals, feas_tol):
    mu0 = np.append(game.prior, 1.0)
    best = None
    for combo in combinations(range(len(cands)), 3):
        A = np.column_stack([np.append(cands[idx], 1.0) for idx in combo])
        w, res, rank, _ = np.linalg.lstsq(A, mu0, rcond=None)
        if rank < 3 or w.min() < -_NEG_W_TOL:
            continue
        if np.abs(A @ w - mu0).max() > feas_tol:
            continue
        w = np.clip(w, 0.0, None)
        w /= w.sum()
        v = float(w @ vals[list(combo)])
        if best is None or v > best[0]:
            best = (v, cands[list(combo)], w)
    return best


def brute_force_solve(game: Game, k: int, resolution: int = 50):
    """Exhaustive search over small posterior supports drawn from a boundary
    grid.  Returns (value, structure); a lower bound on the true optimum that
    converges at rate Lipschitz-constant / resolution."""
    if game.n > 4 or k > 3 or resolution > 80:
        raise ScaleExceeded("oracle limits: n <= 4, k <= 3, resolution <= 80")
    if k < 1 or resolution < 2:
        raise ValidationError("need k >= 1 and resolution >= 2")
    prior_val = float(sender_value(game, game.prior))
    best = (prior_val, game.prior[None, :].copy(), np.array([1.0]))
    if k >= 2:
        spacing = 1.0 / resolution
        cands = _candidates(game, spacing)
        vals = np.array([sender_value(game, mu) for mu in cands])
        found = _best_pair(game, cands, vals, resolution)
        if found and found[0] > best[0]:
            best = found
    if k >= 3:
        if len(cands) > _MAX_TRIPLE_CANDS:
            keep = np.linspace(0, len(cands) - 1, _MAX_TRIPLE_CANDS).astype(int)
            sub, subv = cands[keep], vals[keep]
        else:
            sub, subv = cands, vals
        found = _best_triple(game, sub, subv, 1e-9)
        if found and found[0] > best[0]:
            best = found
    value, support, weights = best
    keep = weights > 1e-12
    return value, structure(support[keep], weights[keep] / weights[keep].sum())


def brute_force_partition(problem: ContinuumProblem, k: int,
                          resolution: int = 200) -> float:
    """Exhaustive grid over partition breakpoints for the continuum variant."""
    if k > 3:
        raise ScaleExceeded("partition oracle limits: k <= 3")
    if k < 1 or resolution < 2:
        raise ValidationError("need k >= 1 and resolution >= 2")

    def value(interior):
        try:
            return sender_value_continuum(
                problem, partition_signal(problem, interior))
        except (EmptyInterval, ValidationError):
            return -np.inf

    best = value(())
    pts = np.arange(1, resolution) / resolution
    for r in range(1, k):
        for interior in combinations(pts, r):
            best = max(best, value(interior))
    return float(best)
