"""Continuum-state variant: states in [0, 1], receiver acts on the posterior
mean, signals are monotone partitions of the state interval.

The sender's problem is equivalent to choosing a convex, piecewise-linear
integrated-CDF function c between two envelopes: c0 (no information) and
c1 (full revelation).  A k-interval partition yields a c with at most k+1
affine pieces, and the sender's value depends only on which action cell each
interval's conditional mean lands in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import DomainError, EmptyInterval, ScaleExceeded, ValidationError

_QUAD_TOL = 1e-10
_MASS_TOL = 1e-12
_CUTOFF_TOL = 1e-9


class PriorCDF:
    """Continuous prior on [0, 1] given by its CDF.

    Subclasses with closed forms override cdf / cdf_integral; the base class
    integrates the CDF by adaptive quadrature.
    """

    def cdf(self, x: float) -> float:
        raise NotImplementedError

    def cdf_integral(self, x: float) -> float:
        """Integral of the CDF from 0 to x."""
        val, _ = quad(self.cdf, 0.0, x, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL)
        return val

    @property
    def mean(self) -> float:
        # E[X] = 1 - int_0^1 F for X supported on [0, 1].
        return 1.0 - self.cdf_integral(1.0)


@dataclass(frozen=True)
class UniformPrior(PriorCDF):
    """Uniform distribution on [0, 1]."""

    def cdf(self, x: float) -> float:
        return float(np.clip(x, 0.0, 1.0))

    def cdf_integral(self, x: float) -> float:
        x = float(np.clip(x, 0.0, 1.0))
        return 0.5 * x * x


@dataclass(frozen=True)
class PowerPrior(PriorCDF):
    """CDF x**p on [0, 1], p > 0."""

    p: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValidationError("power prior needs p > 0")

    def cdf(self, x: float) -> float:
        return float(np.clip(x, 0.0, 1.0)) ** self.p

    def cdf_integral(self, x: float) -> float:
        x = float(np.clip(x, 0.0, 1.0))
        return x ** (self.p + 1.0) / (self.p + 1.0)


@dataclass(frozen=True)
class PiecewiseLinearPrior(PriorCDF):
    """CDF linearly interpolated through knots; doubles as the adapter for
    tabulated CDF data."""

    xs: tuple = field(default=(0.0, 1.0))
    fs: tuple = field(default=(0.0, 1.0))

    def __post_init__(self):
        xs, fs = np.asarray(self.xs, float), np.asarray(self.fs, float)
        if xs.shape != fs.shape or xs.size < 2:
            raise ValidationError("need matching knot arrays with >= 2 points")
        if xs[0] != 0.0 or xs[-1] != 1.0 or fs[0] != 0.0 or abs(fs[-1] - 1.0) > 1e-12:
            raise ValidationError("knots must run from (0, 0) to (1, 1)")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(fs) < 0):
            raise ValidationError("knots must increase (strictly in x)")

    def cdf(self, x: float) -> float:
        return float(np.interp(np.clip(x, 0.0, 1.0), self.xs, self.fs))

    def cdf_integral(self, x: float) -> float:
        x = float(np.clip(x, 0.0, 1.0))
        xs, fs = np.asarray(self.xs, float), np.asarray(self.fs, float)
        total = 0.0
        for a, b, fa, fb in zip(xs[:-1], xs[1:], fs[:-1], fs[1:]):
            if x <= a:
                break
            t = min(x, b)
            ft = fa + (fb - fa) * (t - a) / (b - a)
            total += 0.5 * (fa + ft) * (t - a)
        return total


def tabulated_prior(xs, fs) -> PiecewiseLinearPrior:
    """Adapter: empirical/tabulated CDF points -> interpolated prior."""
    return PiecewiseLinearPrior(tuple(float(v) for v in xs),
                                tuple(float(v) for v in fs))


@dataclass(frozen=True)
class ContinuumProblem:
    """Prior CDF plus the receiver's action cutoffs and sender utilities.

    Action i (utility ``action_utilities[i]``) is taken when the posterior
    mean falls in [cutoff_{i-1}, cutoff_i); a mean exactly at a cutoff takes
    the sender-preferred adjacent action.
    """

    prior: PriorCDF
    cutoffs: tuple
    action_utilities: tuple

    def __post_init__(self):
        cuts = np.asarray(self.cutoffs, float)
        if cuts.size == 0 or np.any(cuts <= 0) or np.any(cuts >= 1):
            raise ValidationError("cutoffs must lie strictly inside (0, 1)")
        if np.any(np.diff(cuts) <= 0):
            raise ValidationError("cutoffs must be strictly increasing")
        if len(self.action_utilities) != cuts.size + 1:
            raise ValidationError("need one more utility than cutoffs")


@dataclass(frozen=True)
class PartitionSignal:
    """Monotone partition of [0, 1]: each cell reported by its conditional
    mean, carrying the cell's prior mass."""

    breakpoints: tuple   # 0 = x_0 < ... < x_K = 1
    interval_means: tuple
    interval_masses: tuple

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, float)
        means = np.asarray(self.interval_means, float)
        masses = np.asarray(self.interval_masses, float)
        if bp[0] != 0.0 or bp[-1] != 1.0 or np.any(np.diff(bp) <= 0):
            raise ValidationError("breakpoints must increase from 0 to 1")
        if means.size != bp.size - 1 or masses.size != means.size:
            raise ValidationError("need one mean and mass per interval")
        if np.any(np.diff(means) <= 0):
            raise ValidationError("interval means must strictly increase")
        if np.any(masses <= 0) or abs(masses.sum() - 1.0) > 1e-9:
            raise ValidationError("masses must be positive and sum to 1")

    def c_function(self, x) -> np.ndarray:
        """Integrated CDF of the induced posterior-mean distribution:
        c(x) = sum_i w_i * max(0, x - m_i)."""
        x = np.asarray(x, float)
        m = np.asarray(self.interval_means, float)
        w = np.asarray(self.interval_masses, float)
        return np.maximum(0.0, x[..., None] - m) @ w


def conditional_mean(problem: ContinuumProblem, a: float, b: float) -> float:
    """E[X | X in (a, b]] under the prior.

    Uses integration by parts: int_a^b x dF = b F(b) - a F(a) - int_a^b F.
    """
    if not (0.0 <= a < b <= 1.0):
        raise DomainError("need 0 <= a < b <= 1")
    F = problem.prior
    mass = F.cdf(b) - F.cdf(a)
    if mass <= _MASS_TOL:
        raise EmptyInterval(f"interval ({a}, {b}] carries no prior mass")
    num = b * F.cdf(b) - a * F.cdf(a) - (F.cdf_integral(b) - F.cdf_integral(a))
    return num / mass


def envelopes(problem: ContinuumProblem):
    """Lower and upper bounds on any achievable integrated-CDF function:
    c0 for no information (kink at the prior mean), c1 for full revelation
    (integral of the prior CDF)."""
    m0 = problem.prior.mean

    def c0(x):
        return np.maximum(0.0, np.asarray(x, float) - m0)

    def c1(x):
        xs = np.asarray(x, float)
        if xs.ndim == 0:
            return problem.prior.cdf_integral(float(xs))
        return np.array([problem.prior.cdf_integral(float(v)) for v in xs])

    return c0, c1


def _utility_at_mean(problem: ContinuumProblem, mean: float) -> float:
    cuts = np.asarray(problem.cutoffs, float)
    utils = np.asarray(problem.action_utilities, float)
    hit = np.flatnonzero(np.abs(cuts - mean) <= _CUTOFF_TOL)
    if hit.size:  # atom exactly at a cutoff: sender-preferred side
        i = int(hit[0])
        return float(max(utils[i], utils[i + 1]))
    return float(utils[int(np.searchsorted(cuts, mean, side="right"))])


def sender_value_continuum(problem: ContinuumProblem,
                           signal: PartitionSignal) -> float:
    """Expected sender utility: each cell's mass goes to the action its
    conditional mean induces."""
    return float(sum(w * _utility_at_mean(problem, m)
                     for m, w in zip(signal.interval_means,
                                     signal.interval_masses)))


def partition_signal(problem: ContinuumProblem, interior) -> PartitionSignal:
    """Build the signal for given interior breakpoints (may be empty)."""
    bp = np.concatenate(([0.0], np.sort(np.asarray(interior, float)), [1.0]))
    if np.any(np.diff(bp) <= 0):
        raise ValidationError("breakpoints must be strictly increasing")
    F = problem.prior
    means, masses = [], []
    for a, b in zip(bp[:-1], bp[1:]):
        w = F.cdf(b) - F.cdf(a)
        if w <= _MASS_TOL:
            raise EmptyInterval(f"interval ({a}, {b}] carries no prior mass")
        means.append(conditional_mean(problem, a, b))
        masses.append(w)
    masses = np.asarray(masses) / sum(masses)
    return PartitionSignal(tuple(bp), tuple(means), tuple(masses))


def _try_value(problem, interior):
    try:
        sig = partition_signal(problem, interior)
    except (EmptyInterval, ValidationError):
        return None, -np.inf
    return sig, sender_value_continuum(problem, sig)


def optimize_partition(problem: ContinuumProblem, k: int,
                       grid: int = 200) -> tuple:
    """Best k-cell monotone partition: exhaustive breakpoint grid at spacing
    1/grid, then per-breakpoint bounded refinement inside its grid cell.

    Returns (signal, value).  The winning signal's integrated-CDF function is
    checked to lie between the no-information and full-revelation envelopes.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if grid < 10:
        raise DomainError("grid must be >= 10")
    if k > 4:
        raise ScaleExceeded("partition search supports k <= 4")

    best_sig, best_val = _try_value(problem, ())
    if k > 1:
        from itertools import combinations
        pts = np.arange(1, grid) / grid
        for interior in combinations(pts, k - 1):
            sig, val = _try_value(problem, interior)
            if val > best_val + 1e-12:
                best_sig, best_val = sig, val

        # Local polish: slide each breakpoint within its grid cell.
        interior = list(best_sig.breakpoints[1:-1])
        for _ in range(2):
            for i in range(len(interior)):
                lo = max(interior[i] - 1.0 / grid,
                         interior[i - 1] + 1e-9 if i else 1e-9)
                hi = min(interior[i] + 1.0 / grid,
                         interior[i + 1] - 1e-9 if i + 1 < len(interior)
                         else 1.0 - 1e-9)

                def neg(x, i=i):
                    trial = interior.copy()
                    trial[i] = x
                    return -_try_value(problem, trial)[1]

                res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                                      options={"xatol": 1e-10})
                if -res.fun > best_val + 1e-12:
                    interior[i] = float(res.x)
                    best_sig, best_val = _try_value(problem, interior)

    xs = np.linspace(0.0, 1.0, 1000)
    c0, c1 = envelopes(problem)
    c = best_sig.c_function(xs)
    if np.any(c < c0(xs) - 1e-9) or np.any(c > c1(xs) + 1e-9):
        raise ValidationError("optimized partition leaves the feasible "
                              "envelope band")
    return best_sig, best_val
