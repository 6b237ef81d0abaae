"""Advice-seeking: the receiver picks the signal-space size k first, the
sender best-responds with an optimal k-signal structure.  Includes Blackwell
comparability of information structures via garbling feasibility."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError
from .game import Game, InformationStructure, make_game, receiver_value
from .solver import SolveResult, solve

GARBLE_TOL = 1e-8


class Comparability(enum.Enum):
    A_MORE_INFORMATIVE = "AMoreInformative"
    B_MORE_INFORMATIVE = "BMoreInformative"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class AdviceEquilibrium:
    chosen_k: int
    per_k: tuple[tuple[int, SolveResult, float], ...]  # (k, sender result, receiver value)


def example_4_2_game() -> Game:
    """3-state, 5-action game where the receiver's best choice is k=2:
    with 3 signals the sender can steer toward high-sender-payoff actions
    that the receiver likes less."""
    recv = np.array([
        [-1.0, 12.0, 12.0],
        [10.0 / 3.0, 10.0 / 3.0, 10.0 / 3.0],
        [-100.0 / 3.0, 83.0 / 3.0, 3.0],
        [-100.0 / 3.0, 3.0, 83.0 / 3.0],
        [-50.0 / 3.0, 58.0 / 3.0, 58.0 / 3.0],
    ])
    sender = np.array([
        [0.0] * 3,
        [1.0] * 3,
        [10.0] * 3,
        [10.0] * 3,
        [1.0] * 3,
    ])
    return make_game(
        states=["w1", "w2", "w3"],
        actions=["a0", "a1", "a2", "a3", "a4"],
        receiver_payoffs=recv,
        sender_payoffs=sender,
        prior=np.full(3, 1.0 / 3.0),
    )


def _receiver_expected(game: Game, tau: InformationStructure) -> float:
    return float(sum(w * receiver_value(game, mu)
                     for w, mu in zip(tau.weights, tau.support)))


def advice_equilibrium(game: Game, k_max: int, seed: int = 0, **solve_kw) -> AdviceEquilibrium:
    """Receiver's optimal k <= k_max given the sender's best response each k.

    Ties in receiver value break toward smaller k.
    """
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    per_k = []
    for k in range(1, k_max + 1):
        res = solve(game, k, seed=seed, **solve_kw)
        per_k.append((k, res, _receiver_expected(game, res.structure)))
    chosen = max(per_k, key=lambda t: (t[2], -t[0]))[0]
    return AdviceEquilibrium(chosen_k=chosen, per_k=tuple(per_k))


def _is_garbling(tau_a: InformationStructure, tau_b: InformationStructure) -> bool:
    """Is B a garbling of A?  Feasibility of a joint q >= 0 with row sums
    tau_a's weights, column sums tau_b's weights, and each column's
    belief-average equal to tau_b's posterior (mean-preserving contraction)."""
    sa, sb = len(tau_a.weights), len(tau_b.weights)
    n = tau_a.support.shape[1]
    nv = sa * sb  # q flattened row-major: q[i, j] -> i * sb + j

    rows = []
    rhs = []
    for i in range(sa):  # row sums
        r = np.zeros(nv)
        r[i * sb:(i + 1) * sb] = 1.0
        rows.append(r)
        rhs.append(tau_a.weights[i])
    for j in range(sb):  # column sums
        r = np.zeros(nv)
        r[j::sb] = 1.0
        rows.append(r)
        rhs.append(tau_b.weights[j])
    for j in range(sb):  # barycenter of column j must be tau_b's posterior
        for c in range(n):
            r = np.zeros(nv)
            for i in range(sa):
                r[i * sb + j] = tau_a.support[i, c]
            rows.append(r)
            rhs.append(tau_b.weights[j] * tau_b.support[j, c])
    res = linprog(
        c=np.zeros(nv),
        A_eq=np.array(rows),
        b_eq=np.array(rhs),
        bounds=[(0, None)] * nv,
        method="highs",
    )
    if res.status == 0:
        q = res.x
        err = float(np.abs(np.array(rows) @ q - np.array(rhs)).max())
        return err < GARBLE_TOL
    return False


def blackwell_compare(tau_a: InformationStructure, tau_b: InformationStructure,
                      prior) -> Comparability:
    """Blackwell order of two structures plausible for the same prior."""
    prior = np.asarray(prior, dtype=float)
    for tau in (tau_a, tau_b):
        tau.check_plausible(prior, tol=1e-6)
    a_finer = _is_garbling(tau_a, tau_b)
    b_finer = _is_garbling(tau_b, tau_a)
    if a_finer and b_finer:
        return Comparability.EQUAL
    if a_finer:
        return Comparability.A_MORE_INFORMATIVE
    if b_finer:
        return Comparability.B_MORE_INFORMATIVE
    return Comparability.INCOMPARABLE
