import numpy as np
import pytest

from persuade.cli import financial_game
from persuade.game import make_game
from persuade.precision import threshold_game


@pytest.fixture(scope="session")
def financial():
    return financial_game()


@pytest.fixture(scope="session")
def threshold08():
    return threshold_game(0.8)


@pytest.fixture(scope="session")
def threshold07():
    return threshold_game(0.7)


def random_game(rng, n=3, m=None, positive=False):
    m = m or int(rng.integers(3, 5))
    lo = 0.1 if positive else -1.0
    return make_game(
        states=[f"w{i}" for i in range(n)],
        actions=[f"a{j}" for j in range(m)],
        receiver_payoffs=rng.uniform(-1, 1, (m, n)),
        sender_payoffs=rng.uniform(lo, 1, (m, n)),
        prior=rng.dirichlet(np.ones(n) * 3),
    )


def indifferent_game(value=5.0):
    pay = np.full((3, 3), value)
    return make_game(
        states=["w1", "w2", "w3"], actions=["a0", "a1", "a2"],
        receiver_payoffs=pay, sender_payoffs=pay,
        prior=(1 / 3, 1 / 3, 1 / 3),
    )
