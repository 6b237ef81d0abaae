"""Convex weights over a support and the constructive support transformations.

``choquet_weights`` recovers the unique convex weights expressing the prior
over an affinely independent support.  ``project_to_boundary`` pushes
interior support points to region boundaries along rays from the prior,
``reduce_affinely_dependent`` drops redundant beliefs, and ``collapse_pair``
merges two posteriors into their mixture.  All three keep the posterior
mean pinned to the prior and never lower the sender's expected value
(the last one can lower it; it trades a signal away on purpose).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import regions as rg
from .errors import BayesViolation, Infeasible, NotAffinelyIndependent
from .game import Game, InformationStructure, sender_value, structure

NEG_WEIGHT_TOL = 1e-10
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class WeightSolution:
    weights: np.ndarray
    residual: float


def is_affinely_independent(support: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the differences from the first point have full rank."""
    sup = np.atleast_2d(np.asarray(support, dtype=float))
    if sup.shape[0] == 1:
        return True
    diffs = sup[1:] - sup[0]
    sv = np.linalg.svd(diffs, compute_uv=False)
    return bool(sv.min() > tol)


def _augmented(support: np.ndarray) -> np.ndarray:
    sup = np.atleast_2d(support)
    return np.vstack([sup.T, np.ones(sup.shape[0])])


def choquet_weights(support: np.ndarray, prior: np.ndarray) -> WeightSolution:
    """Unique convex weights w with sum_i w_i mu_i = prior.

    Solved as least squares on the augmented system [support^T; 1] w =
    [prior; 1]; under affine independence the left inverse exists and the
    solution is exact whenever the prior lies in the support's hull.
    """
    sup = np.atleast_2d(np.asarray(support, dtype=float))
    if not is_affinely_independent(sup):
        raise NotAffinelyIndependent("support is affinely dependent")
    t = _augmented(sup)
    rhs = np.append(np.asarray(prior, dtype=float), 1.0)
    w, *_ = np.linalg.lstsq(t, rhs, rcond=None)
    residual = float(np.linalg.norm(t @ w - rhs))
    if residual >= RESIDUAL_TOL or w.min() < -NEG_WEIGHT_TOL:
        raise Infeasible(
            f"prior outside the support hull (residual {residual:.2e}, min weight {w.min():.2e})"
        )
    return WeightSolution(weights=np.clip(w, 0.0, None), residual=residual)


def collapse_pair(tau: InformationStructure, i: int, j: int) -> InformationStructure:
    """Replace posteriors i and j with their probability-weighted mixture."""
    if i == j:
        raise ValueError("collapse_pair needs two distinct indices")
    wi, wj = tau.weights[i], tau.weights[j]
    merged = (wi * tau.support[i] + wj * tau.support[j]) / (wi + wj)
    keep = [t for t in range(tau.size) if t not in (i, j)]
    support = np.vstack([tau.support[keep], merged]) if keep else merged[None, :]
    weights = np.append(tau.weights[keep], wi + wj)
    return structure(support, weights)


def _merge_duplicates(tau: InformationStructure, tol: float = 1e-9) -> InformationStructure:
    support: list[np.ndarray] = []
    weights: list[float] = []
    for mu, w in zip(tau.support, tau.weights):
        for t, q in enumerate(support):
            if np.abs(mu - q).max() <= tol:
                weights[t] += w
                break
        else:
            support.append(mu)
            weights.append(float(w))
    return structure(np.array(support), np.array(weights))


def reduce_affinely_dependent(game: Game, tau: InformationStructure) -> InformationStructure:
    """Drop beliefs until the support is affinely independent, never losing
    sender value.

    Each round finds affine weights lam with sum lam = 0, sum lam_i mu_i = 0,
    then drops either the maximizer of w_i/lam_i among negative lam or the
    minimizer among positive lam; one of the two cannot lower the expected
    value, and we keep the better of the pair.
    """
    tau.check_plausible(game.prior)
    cur = _merge_duplicates(tau)
    while not is_affinely_independent(cur.support):
        sup, w = cur.support, cur.weights
        null = _affine_null_vector(sup)
        neg = np.flatnonzero(null < -1e-12)
        pos = np.flatnonzero(null > 1e-12)
        j_star = neg[np.argmax(w[neg] / null[neg])]
        p_star = pos[np.argmin(w[pos] / null[pos])]
        best = None
        for drop in sorted({int(j_star), int(p_star)}):
            new_w = w - null * (w[drop] / null[drop])
            keep = [t for t in range(cur.size) if t != drop and new_w[t] > 1e-12]
            cand = structure(sup[keep], new_w[keep] / new_w[keep].sum())
            val = sum(q * sender_value(game, mu) for mu, q in zip(cand.support, cand.weights))
            if best is None or val > best[0]:
                best = (val, cand)
        cur = _merge_duplicates(best[1])
    return cur


def _affine_null_vector(support: np.ndarray) -> np.ndarray:
    """A nonzero lam with sum lam = 0 and sum lam_i mu_i = 0."""
    t = _augmented(support)
    _, _, vh = np.linalg.svd(t)
    return vh[-1]


def project_to_boundary(game: Game, tau: InformationStructure) -> InformationStructure:
    """Move every support belief in the interior of an action region to the
    region's boundary along the ray from the prior, reweighting with the
    closed forms that keep the posterior mean at the prior.

    When the prior is outside the region both ray-boundary intersections are
    candidates and the larger improvement wins (ties -> the point closer to
    the prior); when the prior is inside only the far intersection exists.
    """
    tau.check_plausible(game.prior)
    regions = rg.build_regions(game)
    full = [r for r in regions if r.full_dim]
    cur = tau
    changed = True
    while changed:
        changed = False
        for idx in range(cur.size):
            mu = cur.support[idx]
            home = _interior_region(full, mu)
            if home is None:
                continue
            if np.abs(mu - game.prior).max() <= 1e-12:
                continue  # ray undefined; a no-information point stays put
            replacement = _best_boundary_replacement(game, cur, idx, home)
            if replacement is not None:
                cur = replacement
                changed = True
                break
    return cur


def _interior_region(regions_full: list[rg.ActionRegion], mu: np.ndarray):
    for r in regions_full:
        kind, _ = rg.membership(r, mu)
        if kind is rg.Membership.INTERIOR:
            return r
    return None


def _ray_boundary_hits(region: rg.ActionRegion, origin: np.ndarray, through: np.ndarray):
    """Intersections of {origin + s (through - origin), s real} with the
    region boundary, returned as the two extreme feasible parameters."""
    d = through - origin
    lo, hi = -np.inf, np.inf
    for h in region.halfspaces:
        a = float(h.normal @ d)
        b = float(h.normal @ origin - h.offset)
        # feasibility: b + s a >= 0
        if abs(a) < 1e-14:
            continue
        bound = -b / a
        if a > 0:
            lo = max(lo, bound)
        else:
            hi = min(hi, bound)
    return lo, hi


def _reweight_outward(w: np.ndarray, idx: int, delta: float) -> np.ndarray:
    """Weights after replacing mu_idx by mu_idx + delta (mu_idx - prior)."""
    denom = 1.0 + delta - w[idx] * delta
    out = w * (1.0 + delta) / denom
    out[idx] = w[idx] / denom
    return out


def _reweight_inward(w: np.ndarray, idx: int, gamma: float) -> np.ndarray:
    """Weights after replacing mu_idx by mu_idx - gamma (mu_idx - prior)."""
    denom = 1.0 - gamma + w[idx] * gamma
    out = w * (1.0 - gamma) / denom
    out[idx] = w[idx] / denom
    return out


def _best_boundary_replacement(game: Game, tau: InformationStructure, idx: int,
                               region: rg.ActionRegion):
    mu0 = game.prior
    mu = tau.support[idx]
    w = tau.weights
    lo, hi = _ray_boundary_hits(region, mu0, mu)
    base = sum(q * sender_value(game, p) for p, q in zip(tau.support, tau.weights))
    prior_inside = lo <= 0.0  # s = 0 is the prior itself
    candidates = []
    # outward hit at s = hi (mu interior implies hi > 1)
    delta = hi - 1.0
    if np.isfinite(hi) and delta > 1e-14:
        mu_far = mu0 + hi * (mu - mu0)
        candidates.append((mu_far, _reweight_outward(w, idx, delta)))
    if not prior_inside and lo < 1.0 - 1e-12:
        gamma = 1.0 - lo
        if 0.0 < gamma < 1.0:
            mu_near = mu0 + lo * (mu - mu0)
            candidates.append((mu_near, _reweight_inward(w, idx, gamma)))
    best = None
    for new_mu, new_w in candidates:
        support = tau.support.copy()
        support[idx] = np.clip(new_mu, 0.0, None)
        support[idx] /= support[idx].sum()
        cand = structure(support, new_w)
        val = sum(q * sender_value(game, p) for p, q in zip(cand.support, cand.weights))
        dist = float(np.linalg.norm(new_mu - mu0))
        if best is None or val > best[0] + 1e-12 or (abs(val - best[0]) <= 1e-12 and dist < best[1]):
            best = (val, dist, cand)
    if best is None:
        return None
    if best[0] < base - 1e-12:
        # the lemma guarantees one candidate weakly improves; numerical slack
        # aside, never accept a strict loss
        return None
    return best[2]
