"""Finite persuasion games: beliefs, information structures and induced utilities.

A game is a finite state set, a finite action set, a receiver payoff matrix
and sender payoffs that are linear (matrix mode) or affine (per-action
coefficients plus a constant) in the belief.  The receiver best-responds to
a belief; ties are broken in the sender's favour, and residual ties by the
lowest action index so everything is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BayesViolation, ValidationError

ACTION_TIE_TOL = 1e-9
BELIEF_SUM_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-10
BAYES_TOL = 1e-9


def as_belief(x, n: int | None = None) -> np.ndarray:
    """Validate and return a belief as a float vector on the simplex."""
    b = np.asarray(x, dtype=float)
    if b.ndim != 1:
        raise ValidationError(f"belief must be a vector, got shape {b.shape}")
    if n is not None and b.shape[0] != n:
        raise ValidationError(f"belief has length {b.shape[0]}, expected {n}")
    if np.any(b < -1e-12):
        raise ValidationError(f"belief has negative coordinate: {b}")
    if abs(b.sum() - 1.0) > 1e-9:
        raise ValidationError(f"belief coordinates sum to {b.sum():.12f}, not 1")
    return np.clip(b, 0.0, None)


@dataclass(frozen=True)
class Game:
    """A sender-receiver game with an interior common prior."""

    states: tuple[str, ...]
    actions: tuple[str, ...]
    receiver_payoffs: np.ndarray  # (m, n)
    sender_lin: np.ndarray  # (m, n) linear coefficients of sender value
    sender_const: np.ndarray  # (m,) affine constants (zero in matrix mode)
    prior: np.ndarray  # (n,)
    affine_mode: bool = False

    def __post_init__(self):
        n, m = self.n, self.m
        if n < 2 or m < 2:
            raise ValidationError(f"need at least 2 states and 2 actions, got n={n}, m={m}")
        if self.receiver_payoffs.shape != (m, n):
            raise ValidationError(
                f"receiver_payoffs shape {self.receiver_payoffs.shape} != ({m}, {n})"
            )
        if self.sender_lin.shape != (m, n) or self.sender_const.shape != (m,):
            raise ValidationError("sender payoff arrays have wrong shape")
        p = np.asarray(self.prior, dtype=float)
        if p.shape != (n,):
            raise ValidationError(f"prior has shape {p.shape}, expected ({n},)")
        if abs(p.sum() - 1.0) > BELIEF_SUM_TOL:
            raise ValidationError(f"prior sums to {p.sum():.15f}, not 1")
        if np.any(p <= 0.0):
            raise ValidationError("prior must be strictly interior (all coordinates > 0)")

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def m(self) -> int:
        return len(self.actions)

    def sender_action_values(self, belief: np.ndarray) -> np.ndarray:
        """Sender's expected payoff for each action at the belief."""
        return self.sender_lin @ belief + self.sender_const

    def receiver_action_values(self, belief: np.ndarray) -> np.ndarray:
        """Receiver's expected payoff for each action at the belief."""
        return self.receiver_payoffs @ belief


def make_game(
    states,
    actions,
    receiver_payoffs,
    prior,
    sender_payoffs=None,
    sender_affine=None,
) -> Game:
    """Build a game in matrix mode (``sender_payoffs``, an m x n matrix) or
    region-affine mode (``sender_affine``, per action n coefficients plus a
    trailing constant)."""
    states = tuple(str(s) for s in states)
    actions = tuple(str(a) for a in actions)
    m, n = len(actions), len(states)
    recv = np.asarray(receiver_payoffs, dtype=float)
    if (sender_payoffs is None) == (sender_affine is None):
        raise ValidationError("exactly one of sender_payoffs / sender_affine is required")
    if sender_payoffs is not None:
        lin = np.asarray(sender_payoffs, dtype=float)
        const = np.zeros(m)
        affine = False
    else:
        rows = np.asarray(sender_affine, dtype=float)
        if rows.shape != (m, n + 1):
            raise ValidationError(
                f"sender_affine must be m x (n+1) (coefficients + constant), got {rows.shape}"
            )
        lin = rows[:, :n].copy()
        const = rows[:, n].copy()
        affine = True
    return Game(
        states=states,
        actions=actions,
        receiver_payoffs=recv,
        sender_lin=lin,
        sender_const=const,
        prior=as_belief(prior, n),
        affine_mode=affine,
    )


@dataclass(frozen=True)
class InformationStructure:
    """Finite distribution over posteriors: support beliefs and their weights."""

    support: np.ndarray  # (s, n)
    weights: np.ndarray  # (s,)

    def __post_init__(self):
        sup = np.atleast_2d(np.asarray(self.support, dtype=float))
        w = np.asarray(self.weights, dtype=float)
        if sup.shape[0] != w.shape[0]:
            raise ValidationError("support and weights disagree in length")
        if np.any(w <= 0.0):
            raise ValidationError(f"weights must be strictly positive, got {w}")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"weights sum to {w.sum():.12f}, not 1")
        for row in sup:
            as_belief(row)

    @property
    def size(self) -> int:
        return self.support.shape[0]

    def mean(self) -> np.ndarray:
        return self.weights @ self.support

    def check_plausible(self, prior: np.ndarray, tol: float = BAYES_TOL) -> None:
        err = np.abs(self.mean() - prior).max()
        if err > tol:
            raise BayesViolation(f"posterior mean differs from prior by {err:.3e}")


def structure(support, weights) -> InformationStructure:
    return InformationStructure(
        support=np.atleast_2d(np.asarray(support, dtype=float)),
        weights=np.asarray(weights, dtype=float),
    )


@dataclass(frozen=True)
class SignalKernel:
    """Conditional signal probabilities pi(s | state), one row per signal."""

    table: np.ndarray  # (s, n)

    def __post_init__(self):
        t = self.table
        if np.any(t < -1e-12) or np.any(t > 1 + 1e-12):
            raise ValidationError("kernel entries must lie in [0, 1]")
        colsums = t.sum(axis=0)
        if np.any(np.abs(colsums - 1.0) > 1e-10):
            raise ValidationError(f"kernel columns must sum to 1, got {colsums}")


def optimal_action_set(game: Game, belief: np.ndarray) -> set[int]:
    """Receiver-optimal actions at the belief, up to the indifference tolerance."""
    vals = game.receiver_action_values(belief)
    best = vals.max()
    return set(np.flatnonzero(vals >= best - ACTION_TIE_TOL).tolist())

def sender_preferred_action(game: Game, belief: np.ndarray) -> int:
    """Receiver-optimal action the sender likes best; residual ties go to the
    lowest action index."""
    opt = sorted(optimal_action_set(game, belief))
    svals = game.sender_action_values(belief)
    best = max(svals[a] for a in opt)
    for a in opt:
        if svals[a] >= best - ACTION_TIE_TOL:
            return a
    raise AssertionError("unreachable")


def sender_value(game: Game, belief: np.ndarray) -> float:
    """Sender's expected payoff at the belief under the tie-broken action."""
    return float(game.sender_action_values(belief)[sender_preferred_action(game, belief)])


def receiver_value(game: Game, belief: np.ndarray) -> float:
    """Receiver's expected payoff at the belief under the same action."""
    return float(game.receiver_action_values(belief)[sender_preferred_action(game, belief)])


def expected_values(game: Game, tau: InformationStructure) -> tuple[float, float]:
    """Weight-averaged (sender, receiver) values over the support."""
    tau.check_plausible(game.prior)
    s = sum(w * sender_value(game, mu) for mu, w in zip(tau.support, tau.weights))
    r = sum(w * receiver_value(game, mu) for mu, w in zip(tau.support, tau.weights))
    return float(s), float(r)


def signal_kernel(game: Game, tau: InformationStructure) -> SignalKernel:
    """Signal distribution pi(s|state) = mu_s(state) tau(mu_s) / prior(state)."""
    tau.check_plausible(game.prior)
    table = tau.support * tau.weights[:, None] / game.prior[None, :]
    return SignalKernel(table=table)


def posteriors_from_kernel(game: Game, kernel: SignalKernel) -> InformationStructure:
    """Bayesian update of the prior through the kernel (round-trip check)."""
    joint = kernel.table * game.prior[None, :]
    weights = joint.sum(axis=1)
    keep = weights > 1e-14
    support = joint[keep] / weights[keep, None]
    return structure(support, weights[keep])
