"""Optimal information design with a capped number of signals.

A sender commits to an information structure with at most k distinct signals
(k below both the action and state counts), a receiver best-responds with
sender-preferred tie-breaking.  The package solves for sender-optimal
structures, value-of-precision curves, receiver-chosen signal counts, and the
continuum-state monotone-partition variant, with an independent brute-force
oracle for verification.
"""

from ._backend import BACKEND
from .advice import (AdviceEquilibrium, Comparability, advice_equilibrium,
                     blackwell_compare, example_4_2_game)
from .continuum import (ContinuumProblem, PartitionSignal,
                        PiecewiseLinearPrior, PowerPrior, UniformPrior,
                        conditional_mean, envelopes, optimize_partition,
                        partition_signal, sender_value_continuum,
                        tabulated_prior)
from .errors import (BayesViolation, DegenerateRegion, DomainError,
                     EmptyInterval, Infeasible, NotAffinelyIndependent,
                     ParseError, PersuadeError, PreconditionUnmet,
                     ScaleExceeded, ValidationError)
from .game import (Game, InformationStructure, SignalKernel, expected_values,
                   make_game, optimal_action_set, receiver_value,
                   sender_preferred_action, sender_value, signal_kernel,
                   structure)
from .oracle import brute_force_partition, brute_force_solve
from .plausibility import (WeightSolution, choquet_weights, collapse_pair,
                           is_affinely_independent, project_to_boundary,
                           reduce_affinely_dependent)
from .precision import (PrecisionCurve, check_theorem3_bound, in_delta_c,
                        lemma7_bounds, shift_sender_payoffs, threshold_game,
                        value_curve)
from .regions import (ActionRegion, Facet, all_facets, build_regions,
                      enumerate_facets, enumerate_vertices, membership,
                      sender_subzones)
from .solver import (FacetCollection, SolveResult, enumerate_facet_collections,
                     k_convex_hull_value, maximize_on_collection, solve)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
