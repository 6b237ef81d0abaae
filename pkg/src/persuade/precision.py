"""Value-of-precision analytics.

V*(k) curves, the (2/k)V*(k) increment bound for strictly positive sender
payoffs, and the 3-state threshold-game family where the receiver takes a
risky action i only when mu_i >= pi_bar.  For pi_bar > 2/3 the family has
closed-form 2-signal bounds over the central prior set Delta_c.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, PreconditionUnmet
from .game import Game, make_game
from .solver import SolveResult, solve


@dataclass(frozen=True)
class PrecisionCurve:
    values: np.ndarray      # V*(1..k_max)
    increments: np.ndarray  # V*(j+1) - V*(j)
    results: tuple[SolveResult, ...]


def threshold_game(pi_bar: float) -> Game:
    """3 states, 4 actions; safe a_0 pays 0, risky a_i pays (1-pi)/pi on a
    match and -1 on a miss, so a_i is optimal exactly on {mu_i >= pi_bar}."""
    if not (1.0 / 3.0 < pi_bar < 1.0):
        raise DomainError(f"pi_bar must lie in (1/3, 1); got {pi_bar}")
    hit = (1.0 - pi_bar) / pi_bar
    recv = np.full((4, 3), -1.0)
    recv[0] = 0.0
    for i in range(3):
        recv[i + 1, i] = hit
    sender = np.ones((4, 3))
    sender[0] = 0.0
    return make_game(
        states=["w1", "w2", "w3"],
        actions=["a0", "a1", "a2", "a3"],
        receiver_payoffs=recv,
        sender_payoffs=sender,
        prior=np.full(3, 1.0 / 3.0),
    )


def in_delta_c(pi_bar: float, belief) -> bool:
    """Central priors where every coordinate strictly exceeds 1 - pi_bar.

    Nonempty exactly when pi_bar > 2/3; there 2-signal structures are
    strictly worse than 3-signal ones.
    """
    b = np.asarray(belief, dtype=float)
    # strict inequality, robust to roundoff in 1 - pi_bar
    return bool(np.all(b > 1.0 - pi_bar + 1e-12))


def lemma7_bounds(pi_bar: float) -> tuple[float, float]:
    """(upper, lower) closed forms for the 2-signal value over Delta_c:
    upper = (2*pi_bar - 1)/pi_bar, lower = 1/(3*pi_bar)."""
    if pi_bar <= 2.0 / 3.0:
        raise DomainError(f"bounds require pi_bar > 2/3; got {pi_bar}")
    return (2.0 * pi_bar - 1.0) / pi_bar, 1.0 / (3.0 * pi_bar)


def value_curve(game: Game, k_max: int, seed: int = 0, **solve_kw) -> PrecisionCurve:
    """V*(1..k_max) and the marginal value of each extra signal."""
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    results = tuple(solve(game, k, seed=seed, **solve_kw) for k in range(1, k_max + 1))
    values = np.array([r.value for r in results])
    return PrecisionCurve(values=values, increments=np.diff(values), results=results)


def _min_sender_payoff(game: Game) -> float:
    """Minimum sender payoff over the simplex (affine per action: attained
    at state vertices)."""
    vertex_vals = game.sender_lin + game.sender_const[:, None]  # (m, n)
    return float(vertex_vals.min())


def check_theorem3_bound(game: Game, k: int, seed: int = 0) -> tuple[bool, float]:
    """Does V*(k) - V*(k-1) <= (2/k) V*(k) hold?  Returns (holds, slack).

    Requires k >= 3 and strictly positive sender payoffs everywhere; the
    bound is not shift-invariant, so violations of positivity are reported
    rather than silently normalized away.
    """
    if k < 3:
        raise DomainError("bound is stated for k >= 3")
    if _min_sender_payoff(game) <= 0.0:
        raise PreconditionUnmet(
            "sender payoffs must be strictly positive everywhere for the "
            "(2/k) increment bound"
        )
    curve = value_curve(game, k, seed=seed)
    vk, vk1 = curve.values[k - 1], curve.values[k - 2]
    slack = (2.0 / k) * vk - (vk - vk1)
    return bool(slack >= -1e-9), float(slack)


def shift_sender_payoffs(game: Game, delta: float) -> Game:
    """Add a constant to every sender payoff (e.g. to make them positive)."""
    return replace(game, sender_const=game.sender_const + delta)
