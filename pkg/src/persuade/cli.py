"""Command-line front end: game file I/O, built-in examples, and CSV
emission of solver results.

Game files are JSON with keys states, actions, receiver_payoffs, prior and
one of sender_payoffs / sender_affine.  Builtins: "financial",
"threshold:PI" and "advice42".
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .advice import advice_equilibrium, example_4_2_game
from .continuum import (ContinuumProblem, PiecewiseLinearPrior, PowerPrior,
                        UniformPrior, optimize_partition)
from .errors import (DomainError, Infeasible, ParseError, PersuadeError,
                     ScaleExceeded, ValidationError)
from .game import Game, make_game
from .oracle import brute_force_solve
from .precision import threshold_game, value_curve
from .solver import solve

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SCALE = 3
EXIT_INFEASIBLE = 4


def financial_game() -> Game:
    """Three-state market game: the analyst tries to talk the client into a
    position, the client only trades when confident enough."""
    recv = np.array([
        [0.7, -0.3, -1.3],    # long
        [0.0, 0.0, 0.0],      # do nothing
        [-1.3, -0.3, 0.7],    # short
    ])
    sender = np.column_stack([recv, np.zeros(3)])  # commission = trade payoff
    return make_game(
        states=["up", "flat", "down"],
        actions=["long", "nothing", "short"],
        receiver_payoffs=recv,
        sender_affine=sender,
        prior=(0.3, 0.4, 0.3),
    )


def load_game(path_or_builtin: str) -> Game:
    """Resolve a builtin name or parse a JSON game file."""
    name = path_or_builtin.strip()
    if name == "financial":
        return financial_game()
    if name == "advice42":
        return example_4_2_game()
    if name.startswith("threshold:"):
        try:
            pi = float(name.split(":", 1)[1])
        except ValueError as exc:
            raise ParseError(f"bad threshold parameter in {name!r}") from exc
        return threshold_game(pi)
    try:
        with open(name) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read game file {name!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {name!r}: {exc}") from exc
    try:
        return make_game(
            states=data["states"],
            actions=data["actions"],
            receiver_payoffs=np.asarray(data["receiver_payoffs"], float),
            prior=np.asarray(data["prior"], float),
            sender_payoffs=(np.asarray(data["sender_payoffs"], float)
                            if "sender_payoffs" in data else None),
            sender_affine=(np.asarray(data["sender_affine"], float)
                           if "sender_affine" in data else None),
        )
    except KeyError as exc:
        raise ParseError(f"game file {name!r} is missing field {exc}") from exc


def save_game(game: Game, path: str) -> None:
    data = {
        "states": list(game.states),
        "actions": list(game.actions),
        "receiver_payoffs": game.receiver_payoffs.tolist(),
        "prior": game.prior.tolist(),
    }
    if game.affine_mode:
        data["sender_affine"] = np.column_stack(
            [game.sender_lin, game.sender_const]).tolist()
    else:
        data["sender_payoffs"] = game.sender_lin.tolist()
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def _barycentric_grid(grid: int) -> np.ndarray:
    pts = []
    for i in range(grid + 1):
        for j in range(grid + 1 - i):
            pts.append((i / grid, j / grid, (grid - i - j) / grid))
    return np.asarray(pts)


def emit_surface(game: Game, k: int, grid: int, out: str,
                 seed: int = 0) -> None:
    """CSV of the k-signal sender value over a barycentric prior grid
    (3-state games only).  Grid priors on the simplex boundary are nudged
    inward since the solver needs an interior prior."""
    if game.n != 3:
        raise ScaleExceeded("surface output needs a 3-state game")
    import dataclasses
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mu1", "mu2", "mu3", "value"])
        for mu in _barycentric_grid(grid):
            p = np.clip(mu, 1e-9, None)
            p /= p.sum()
            g = dataclasses.replace(game, prior=p)
            val = solve(g, k, seed=seed).value
            writer.writerow([f"{mu[0]:.6f}", f"{mu[1]:.6f}",
                             f"{mu[2]:.6f}", f"{val:.6f}"])


def _write_structure_csv(path, result):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        n = result.structure.support.shape[1]
        writer.writerow([f"mu{i+1}" for i in range(n)] + ["weight"])
        for mu, w in zip(result.structure.support, result.structure.weights):
            writer.writerow([f"{x:.9f}" for x in mu] + [f"{w:.9f}"])


def _seed(args) -> int:
    env = os.environ.get("PERSUADE_SEED")
    return int(env) if env is not None else args.seed


def _cmd_solve(args):
    game = load_game(args.game)
    res = solve(game, args.signals, seed=_seed(args))
    print(f"value {res.value:.6f} with {len(res.structure.weights)} signals")
    for mu, w in zip(res.structure.support, res.structure.weights):
        print("  posterior", np.round(mu, 6), "weight", round(float(w), 6))
    if args.output:
        _write_structure_csv(args.output, res)
    return EXIT_OK


def _cmd_precision(args):
    game = load_game(args.game)
    curve = value_curve(game, args.k_max, seed=_seed(args))
    for k, v in enumerate(curve.values, start=1):
        print(f"k={k} value={v:.6f}")
    print("increments", [round(float(d), 6) for d in curve.increments])
    return EXIT_OK


def _cmd_threshold(args):
    game = threshold_game(args.pi_bar)
    curve = value_curve(game, args.k_max, seed=_seed(args))
    for k, v in enumerate(curve.values, start=1):
        print(f"pi_bar={args.pi_bar} k={k} value={v:.6f}")
    return EXIT_OK


def _cmd_advice(args):
    game = load_game(args.game)
    eq = advice_equilibrium(game, args.k_max, seed=_seed(args))
    for k, res, rv in eq.per_k:
        print(f"k={k} sender={res.value:.6f} receiver={rv:.6f}")
    print(f"receiver picks k={eq.chosen_k}")
    return EXIT_OK


def _parse_prior(spec: str):
    if spec == "uniform":
        return UniformPrior()
    if spec.startswith("power:"):
        return PowerPrior(float(spec.split(":", 1)[1]))
    if spec.startswith("linear:"):
        knots = [tuple(map(float, kv.split(",")))
                 for kv in spec.split(":", 1)[1].split(";")]
        xs, fs = zip(*knots)
        return PiecewiseLinearPrior(xs, fs)
    raise ParseError(f"unknown prior spec {spec!r}")


def _cmd_continuum(args):
    cutoffs = tuple(float(x) for x in args.cutoffs.split(","))
    utils = tuple(float(x) for x in args.utilities.split(","))
    problem = ContinuumProblem(_parse_prior(args.prior), cutoffs, utils)
    signal, value = optimize_partition(problem, args.signals, grid=args.grid)
    print(f"value {value:.6f} breakpoints "
          f"{[round(float(x), 6) for x in signal.breakpoints]}")
    if args.output:
        with open(args.output, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["left", "right", "mean", "mass"])
            bp = signal.breakpoints
            for a, b, m, w in zip(bp[:-1], bp[1:], signal.interval_means,
                                  signal.interval_masses):
                writer.writerow([f"{a:.9f}", f"{b:.9f}",
                                 f"{m:.9f}", f"{w:.9f}"])
    return EXIT_OK


def _cmd_verify(args):
    game = load_game(args.game)
    res = solve(game, args.signals, seed=_seed(args))
    oracle_val, _ = brute_force_solve(game, args.signals, args.resolution)
    gap = res.value - oracle_val
    print(f"solver {res.value:.6f} oracle {oracle_val:.6f} gap {gap:+.6f}")
    return EXIT_OK


def _cmd_surface(args):
    game = load_game(args.game)
    emit_surface(game, args.signals, args.grid, args.output, seed=_seed(args))
    print(f"wrote {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persuade",
        description="Optimal information design with a capped signal count.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="optimal k-signal structure")
    p.add_argument("--game", required=True)
    p.add_argument("--signals", "-k", type=int, required=True)
    p.add_argument("--output")
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("precision", help="value curve over k")
    p.add_argument("--game", required=True)
    p.add_argument("--k-max", type=int, default=3)
    common(p)
    p.set_defaults(func=_cmd_precision)

    p = sub.add_parser("threshold", help="threshold-game value curve")
    p.add_argument("--pi-bar", type=float, required=True)
    p.add_argument("--k-max", type=int, default=3)
    common(p)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("advice", help="receiver's preferred signal count")
    p.add_argument("--game", required=True)
    p.add_argument("--k-max", type=int, default=3)
    common(p)
    p.set_defaults(func=_cmd_advice)

    p = sub.add_parser("continuum", help="monotone partition optimizer")
    p.add_argument("--prior", default="uniform")
    p.add_argument("--cutoffs", required=True)
    p.add_argument("--utilities", required=True)
    p.add_argument("--signals", "-k", type=int, required=True)
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_continuum)

    p = sub.add_parser("verify", help="solver vs brute-force oracle")
    p.add_argument("--game", required=True)
    p.add_argument("--signals", "-k", type=int, required=True)
    p.add_argument("--resolution", type=int, default=50)
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("surface", help="value-vs-prior CSV (3 states)")
    p.add_argument("--game", required=True)
    p.add_argument("--signals", "-k", type=int, required=True)
    p.add_argument("--grid", type=int, default=40)
    p.add_argument("--output", required=True)
    common(p)
    p.set_defaults(func=_cmd_surface)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScaleExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValidationError, ParseError, DomainError, PersuadeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
