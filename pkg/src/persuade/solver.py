"""Sender-optimal information structures with at most k signals.

The search space is the finite set of facet collections: every optimal
structure can be supported on region boundaries with one belief per chosen
facet, so we enumerate multisets of facets (sizes 1..k), keep the collections
whose facet vertices can convexly reach the prior, and maximize expected
sender value over each with a direct vertex-tuple sweep plus multi-start
Nelder-Mead over facet barycentric coordinates.
"""

from __future__ import annotations

import itertools
import warnings
import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from . import _backend
from .errors import Infeasible, ScaleExceeded
from .game import Game, InformationStructure, sender_value, structure
from .plausibility import NEG_WEIGHT_TOL, is_affinely_independent
from .regions import Facet, all_facets

MAX_STATES = 8
MAX_ACTIONS = 8
MAX_SIGNALS = 5

VALUE_TIE_TOL = 1e-9
_FACET_TOL = 1e-8


@dataclass(frozen=True)
class FacetCollection:
    """Ordered multiset of facets; belief i will live on facets[i]."""

    facets: tuple[Facet, ...]

    def __len__(self):
        return len(self.facets)

    @property
    def key(self):
        return tuple((f.parent_action, f.tight_constraint) for f in self.facets)


@dataclass
class SolveResult:
    value: float
    structure: InformationStructure
    collection: FacetCollection | None
    iterations: int = 0
    restarts: int = 0
    oracle_gap: float | None = None


def _payoff_arrays(game: Game):
    recv = np.ascontiguousarray(game.receiver_payoffs)
    slin = np.ascontiguousarray(game.sender_lin)
    sconst = np.ascontiguousarray(game.sender_const)
    return recv, slin, sconst


def _prior_reachable(verts: np.ndarray, prior: np.ndarray, tol: float = 1e-7) -> bool:
    """Can the prior be written as a nonnegative combination of these points?"""
    a = np.vstack([verts.T, np.ones(len(verts))])
    y = np.append(prior, 1.0)
    _, res = nnls(a, y)
    return res < tol


def enumerate_facet_collections(game: Game, k: int):
    """All multisets of at most k facets whose vertex hull can reach the prior.

    Yields collections of size 1..k, deduplicated up to ordering.  k outside
    the cardinality-constrained regime (2 <= k < min(n, m)) is allowed with a
    warning.
    """
    if not (2 <= k < min(game.n, game.m)):
        warnings.warn(
            f"k={k} outside the constrained regime 2 <= k < min(n, m) = "
            f"{min(game.n, game.m)}; enumeration proceeds anyway",
            stacklevel=2,
        )
    facets = all_facets(game)
    out = []
    for size in range(1, k + 1):
        for combo in itertools.combinations_with_replacement(facets, size):
            verts = np.vstack([f.vertices for f in combo])
            if _prior_reachable(verts, game.prior):
                out.append(FacetCollection(facets=tuple(combo)))
    return out


def _collection_seed(collection: FacetCollection, seed: int) -> int:
    blob = repr((collection.key, seed)).encode()
    return zlib.crc32(blob)


def _stack(collection: FacetCollection):
    verts = np.vstack([f.vertices for f in collection.facets])
    counts = [len(f.vertices) for f in collection.facets]
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return np.ascontiguousarray(verts, dtype=float), offsets


def _vertex_tuple_sweep(game, collection, verts, offsets, recv, slin, sconst):
    """Evaluate every choice of one vertex per facet; returns (value, support)."""
    idx_ranges = [range(offsets[i], offsets[i + 1]) for i in range(len(collection))]
    tuples = np.array(list(itertools.product(*idx_ranges)))
    supports = verts[tuples]  # (B, s, n)
    values, feasible, _ = _backend.eval_supports(
        recv, slin, sconst, game.prior, supports
    )
    if not feasible.any():
        return -np.inf, None
    best = int(np.argmax(np.where(feasible, values, -np.inf)))
    return float(values[best]), supports[best]


def _polish(game: Game, beliefs: np.ndarray):
    """Snap a raw support to a clean structure: exact weights, dropped zeros.

    Returns (value, InformationStructure) or (-inf, None) when infeasible.
    """
    beliefs = np.clip(np.atleast_2d(beliefs), 0.0, None)
    beliefs = beliefs / beliefs.sum(axis=1, keepdims=True)
    # merge near-coincident beliefs
    kept: list[np.ndarray] = []
    for mu in beliefs:
        if not any(np.linalg.norm(mu - v) < 1e-7 for v in kept):
            kept.append(mu)
    sup = np.array(kept)
    a = np.vstack([sup.T, np.ones(len(sup))])
    y = np.append(game.prior, 1.0)
    w, *_ = np.linalg.lstsq(a, y, rcond=None)
    if np.linalg.norm(a @ w - y) > 1e-7 or w.min() < -1e-7:
        return -np.inf, None
    keep = w > 1e-9
    sup, w = sup[keep], np.clip(w[keep], 0.0, None)
    if len(sup) == 0:
        return -np.inf, None
    w = w / w.sum()
    if not is_affinely_independent(sup):
        return -np.inf, None
    # re-derive exact weights on the trimmed support
    a = np.vstack([sup.T, np.ones(len(sup))])
    w, *_ = np.linalg.lstsq(a, y, rcond=None)
    if np.linalg.norm(a @ w - y) > 1e-7 or w.min() < -NEG_WEIGHT_TOL:
        return -np.inf, None
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    tau = structure(sup, w)
    val = float(sum(wi * sender_value(game, mu) for wi, mu in zip(w, sup)))
    return val, tau


def _run_nm(game, recv, slin, sconst, verts, offsets, starts, max_iter):
    f, z, ev = _backend.multistart_nm(
        verts, offsets, recv, slin, sconst, game.prior, starts,
        max_iter=max_iter,
    )
    if f >= 1e6:  # penalty-only outcome, no feasible point found
        return None, ev
    return _backend.barycentric_to_beliefs(z, verts, offsets), ev


def maximize_on_collection(game: Game, collection: FacetCollection, k: int,
                           seed: int = 0, restarts: int = 8,
                           max_iter: int = 400):
    """Best structure with belief i constrained to collection.facets[i].

    Returns (value, structure, evals).  Raises Infeasible when no Bayes
    plausible, affinely independent support exists on the collection.

    The maximizer set can be a flat polytope (expected value is piecewise
    bilinear in positions and weights); after the free search, extra passes
    re-optimize with each belief pinned to each vertex of its facet, so the
    returned structure is an extreme point of the optimal set whenever one
    pinned pass matches the best value.
    """
    if len(collection) > k:
        raise Infeasible("collection larger than the signal budget")
    recv, slin, sconst = _payoff_arrays(game)
    verts, offsets = _stack(collection)
    best_val, best_sup = _vertex_tuple_sweep(
        game, collection, verts, offsets, recv, slin, sconst
    )
    evals = int(offsets[-1])

    d = int(offsets[-1])
    rng = np.random.default_rng(_collection_seed(collection, seed))
    starts = rng.uniform(0.05, 1.0, size=(restarts, d))
    if best_sup is not None:
        # seed one start near the best vertex tuple
        z0 = np.full(d, 0.02)
        for i in range(len(collection)):
            block = verts[offsets[i]:offsets[i + 1]]
            j = int(np.argmin(np.linalg.norm(block - best_sup[i], axis=1)))
            z0[offsets[i] + j] = 1.0
        starts = np.vstack([z0, starts])

    raw_candidates = []
    if best_sup is not None:
        raw_candidates.append(best_sup)
    cand, ev = _run_nm(game, recv, slin, sconst, verts, offsets, starts, max_iter)
    evals += ev
    if cand is not None:
        raw_candidates.append(cand)

    # pinned passes: freeze one belief at one facet vertex, optimize the rest
    s = len(collection)
    if s > 1:
        for i in range(s):
            for t in range(int(offsets[i]), int(offsets[i + 1])):
                pin_verts = np.vstack(
                    [verts[offsets[0]:offsets[i]], verts[t:t + 1],
                     verts[offsets[i + 1]:]]
                )
                sizes = np.diff(offsets).copy()
                sizes[i] = 1
                pin_off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
                pd = int(pin_off[-1])
                pst = rng.uniform(0.05, 1.0, size=(max(2, restarts // 2), pd))
                cand, ev = _run_nm(game, recv, slin, sconst,
                                   np.ascontiguousarray(pin_verts), pin_off,
                                   pst, max_iter)
                evals += ev
                if cand is not None:
                    raw_candidates.append(cand)

    top_val, top_tau = -np.inf, None
    for raw in raw_candidates:
        val, tau = _polish(game, raw)
        if tau is None:
            continue
        if top_tau is None or _better(val, tau, top_val, top_tau):
            top_val, top_tau = val, tau
    if top_tau is None:
        raise Infeasible("no plausible affinely independent support on collection")
    return top_val, top_tau, evals


def _encoding(tau: InformationStructure):
    rows = np.column_stack([tau.support, tau.weights])
    rows = rows[np.lexsort(rows.T[::-1])]
    return tuple(np.round(rows, 9).ravel())


def _better(val_a, tau_a, val_b, tau_b) -> bool:
    """Deterministic preference: value, then support size, then encoding.

    The final comparison prefers the lexicographically greatest encoding,
    which canonically favors mass concentrated on lower-indexed states.
    """
    if val_a > val_b + VALUE_TIE_TOL:
        return True
    if val_a < val_b - VALUE_TIE_TOL:
        return False
    sa, sb = len(tau_a.weights), len(tau_b.weights)
    if sa != sb:
        return sa < sb
    return _encoding(tau_a) > _encoding(tau_b)


def _no_information(game: Game) -> tuple[float, InformationStructure]:
    tau = structure(game.prior[None, :], np.array([1.0]))
    return sender_value(game, game.prior), tau


def solve(game: Game, k: int, seed: int = 0, restarts: int = 8,
          max_iter: int = 400, beam: int = 12) -> SolveResult:
    """Maximum expected sender value over structures with at most k beliefs.

    Cheap vertex-tuple sweeps rank all feasible collections; the top `beam`
    per support size get the full multi-start refinement.  Results for size s
    do not depend on k, so values are monotone in k by construction.
    """
    if game.n > MAX_STATES or game.m > MAX_ACTIONS:
        raise ScaleExceeded(
            f"supported scope is n, m <= {MAX_STATES}; got n={game.n}, m={game.m}"
        )
    if k > MAX_SIGNALS:
        raise ScaleExceeded(f"supported signal budget is k <= {MAX_SIGNALS}")
    if k < 1:
        raise ScaleExceeded("k must be >= 1")

    best_val, best_tau = _no_information(game)
    best_coll = None
    iters = 0
    nm_runs = 0
    if k == 1:
        return SolveResult(best_val, best_tau, None, iters, nm_runs)

    recv, slin, sconst = _payoff_arrays(game)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        collections = enumerate_facet_collections(game, k)

    by_size: dict[int, list] = {}
    for coll in collections:
        verts, offsets = _stack(coll)
        sweep_val, _ = _vertex_tuple_sweep(
            game, coll, verts, offsets, recv, slin, sconst
        )
        iters += int(offsets[-1])
        # optimistic bound: expected value never exceeds the best sender
        # value among the collection's facet vertices (linear per facet),
        # so collections whose sweep is infeasible but whose facets touch
        # high-value beliefs still rank into the beam
        bound = max(sender_value(game, v) for v in verts)
        by_size.setdefault(len(coll), []).append((sweep_val, bound, coll))

    for size, ranked in sorted(by_size.items()):
        by_sweep = sorted(ranked, key=lambda t: (-t[0], t[2].key))[:beam]
        by_bound = sorted(ranked, key=lambda t: (-t[1], t[2].key))[:beam]
        chosen, seen = [], set()
        for _, _, coll in by_sweep + by_bound:
            if coll.key not in seen:
                seen.add(coll.key)
                chosen.append(coll)
        for coll in chosen:
            try:
                val, tau, ev = maximize_on_collection(
                    game, coll, k, seed=seed, restarts=restarts,
                    max_iter=max_iter,
                )
            except Infeasible:
                continue
            iters += ev
            nm_runs += restarts
            if _better(val, tau, best_val, best_tau):
                best_val, best_tau, best_coll = val, tau, coll

    return SolveResult(best_val, best_tau, best_coll, iters, nm_runs)


def k_convex_hull_value(game: Game, k: int, budget: int, seed: int = 0,
                        injected=None) -> float:
    """Stochastic lower bound on the k-signal value via sampled supports.

    Samples k-point supports from facet points and region vertices, keeps the
    Bayes-plausible ones, and returns the best expected sender value found.
    `injected` supports (arrays of shape (<=k, n)) are evaluated first, so a
    known-good support gives its exact value even at budget 1.
    """
    if budget < 1:
        raise ScaleExceeded("budget must be >= 1")
    if k == 1:
        return sender_value(game, game.prior)
    recv, slin, sconst = _payoff_arrays(game)
    rng = np.random.default_rng(seed)
    facets = all_facets(game)
    pool = [v for f in facets for v in f.vertices]
    for f in facets:
        coeffs = rng.dirichlet(np.ones(len(f.vertices)), size=6)
        pool.extend(coeffs @ f.vertices)
    pool = np.unique(np.round(np.array(pool), 12), axis=0)

    best = -np.inf
    for sup in injected or []:
        sup = np.atleast_2d(np.asarray(sup, dtype=float))
        if len(sup) > k:
            continue
        values, feasible, _ = _backend.eval_supports(
            recv, slin, sconst, game.prior, sup[None, ...]
        )
        if feasible[0]:
            best = max(best, float(values[0]))
        budget -= 1
        if budget <= 0:
            return best

    n_pool = len(pool)
    batch = min(budget, 4096)
    remaining = budget
    while remaining > 0:
        b = min(batch, remaining)
        idx = rng.integers(0, n_pool, size=(b, k))
        values, feasible, _ = _backend.eval_supports(
            recv, slin, sconst, game.prior, pool[idx]
        )
        if feasible.any():
            best = max(best, float(values[feasible].max()))
        remaining -= b
    # the prior itself is always reachable with one uninformative signal
    return max(best, sender_value(game, game.prior))
