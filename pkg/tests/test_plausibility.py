"""Barycentric weights and the three value-preserving support surgeries."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_game
from persuade.errors import Infeasible
from persuade.game import expected_values, structure
from persuade.plausibility import (choquet_weights, collapse_pair,
                                   is_affinely_independent,
                                   project_to_boundary,
                                   reduce_affinely_dependent)


def test_independent_vertices():
    assert is_affinely_independent(np.eye(3))


def test_collinear_dependent():
    assert not is_affinely_independent(
        np.array([[1, 0, 0], [0.5, 0.5, 0], [0, 1, 0.0]]))


def test_two_distinct_points_independent():
    assert is_affinely_independent(np.array([[0.8, 0.1, 0.1], [0, 0.5, 0.5]]))


def test_choquet_financial_pair():
    sol = choquet_weights(np.array([[1, 0, 0], [0, 4 / 7, 3 / 7]]),
                          np.array([0.3, 0.4, 0.3]))
    assert np.allclose(sol.weights, [0.3, 0.7], atol=1e-9)


def test_choquet_vertices_are_coordinates():
    sol = choquet_weights(np.eye(3), np.array([0.3, 0.4, 0.3]))
    assert np.allclose(sol.weights, [0.3, 0.4, 0.3])


def test_choquet_two_point_hand_solution():
    sol = choquet_weights(np.array([[0.8, 0.1, 0.1], [0, 0.5, 0.5]]),
                          np.ones(3) / 3)
    assert np.allclose(sol.weights, [5 / 12, 7 / 12], atol=1e-9)


def test_choquet_infeasible_outside_hull():
    with pytest.raises(Infeasible):
        choquet_weights(np.array([[1, 0, 0], [0.6, 0.4, 0]]),
                        np.ones(3) / 3)


def test_collapse_pair_vertices():
    tau = structure(np.eye(3), [0.3, 0.4, 0.3])
    got = collapse_pair(tau, 0, 1)
    assert np.allclose(sorted(map(tuple, got.support)),
                       sorted(map(tuple, [[0, 0, 1], [3 / 7, 4 / 7, 0]])))
    assert np.allclose(sorted(got.weights), [0.3, 0.7])


def test_collapse_duplicated_pair():
    tau = structure([[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 1.0]],
                    [0.25, 0.25, 0.5])
    got = collapse_pair(tau, 0, 1)
    assert len(got.weights) == 2
    assert np.allclose(np.sort(got.weights), [0.5, 0.5])


def test_collapse_financial_three_signal(financial):
    tau = structure(np.eye(3), [0.3, 0.4, 0.3])
    got = collapse_pair(tau, 0, 2)
    assert np.allclose(got.mean(), financial.prior)
    val, _ = expected_values(financial, got)
    assert val <= 0.30 + 1e-9


def test_reduce_keeps_independent_input(financial):
    tau = structure([[1, 0, 0], [0, 4 / 7, 3 / 7]], [0.3, 0.7])
    got = reduce_affinely_dependent(financial, tau)
    assert np.allclose(got.support, tau.support)


def test_reduce_planar_four_points(financial):
    pts = np.array([[0.6, 0.2, 0.2], [0.2, 0.6, 0.2],
                    [0.2, 0.2, 0.6], [1 / 3, 1 / 3, 1 / 3]])
    weights = np.array([0.25, 0.25, 0.25, 0.25])
    mean = weights @ pts
    import dataclasses
    g = dataclasses.replace(financial, prior=mean)
    tau = structure(pts, weights)
    before, _ = expected_values(g, tau)
    got = reduce_affinely_dependent(g, tau)
    after, _ = expected_values(g, got)
    assert len(got.weights) <= 3
    assert is_affinely_independent(got.support)
    assert after >= before - 1e-9


def test_reduce_merges_duplicates(financial):
    pts = np.array([[1, 0, 0], [1, 0, 0], [0, 4 / 7, 3 / 7.0]])
    tau = structure(pts, [0.15, 0.15, 0.7])
    got = reduce_affinely_dependent(financial, tau)
    assert len(got.weights) == 2
    assert np.allclose(got.mean(), financial.prior, atol=1e-9)


def test_project_fixpoint(financial):
    tau = structure([[1, 0, 0], [0, 4 / 7, 3 / 7]], [0.3, 0.7])
    got = project_to_boundary(financial, tau)
    assert np.allclose(got.support, tau.support, atol=1e-9)


def _interior_structure(game, rng, size):
    pts = rng.dirichlet(np.ones(game.n) * 2, size)
    w = rng.dirichlet(np.ones(size))
    mean = w @ pts
    import dataclasses
    return dataclasses.replace(game, prior=mean), structure(pts, w)


@pytest.mark.parametrize("seed", range(5))
def test_project_improves_threshold(threshold08, seed):
    rng = np.random.default_rng(seed)
    g, tau = _interior_structure(threshold08, rng, 2)
    before, _ = expected_values(g, tau)
    got = project_to_boundary(g, tau)
    after, _ = expected_values(g, got)
    assert after >= before - 1e-9
    assert np.allclose(got.mean(), g.prior, atol=1e-9)


def test_project_improves_financial(financial):
    rng = np.random.default_rng(11)
    g, tau = _interior_structure(financial, rng, 2)
    before, _ = expected_values(g, tau)
    got = project_to_boundary(g, tau)
    after, _ = expected_values(g, got)
    assert after >= before - 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_surgeries_preserve_plausibility_and_value(seed, size):
    rng = np.random.default_rng(seed)
    g = random_game(rng)
    g, tau = _interior_structure(g, rng, size)
    before, _ = expected_values(g, tau)
    for op in (project_to_boundary, reduce_affinely_dependent):
        got = op(g, tau)
        after, _ = expected_values(g, got)
        assert after >= before - 1e-9
        assert np.abs(got.mean() - g.prior).max() <= 1e-9
    reduced = reduce_affinely_dependent(g, tau)
    assert is_affinely_independent(reduced.support)


def test_weight_continuity():
    sup = np.array([[0.8, 0.1, 0.1], [0, 0.5, 0.5]])
    prior = np.ones(3) / 3
    base = choquet_weights(sup, prior).weights
    prev = np.inf
    d = sup[1] - sup[0]
    for eps in (1e-4, 1e-5, 1e-6):
        pert = sup + eps * np.array([-d, d])  # slide along the support line
        delta = np.abs(choquet_weights(pert, prior).weights - base).max()
        assert delta < prev + 1e-15
        prev = delta
