"""Exact analysis and simulation of optimally steered zero-temperature
lattice cluster growth.

The package models the growth of plus-spin clusters on a two-dimensional
torus under zero-temperature single-flip dynamics, controlled one spin
flip per decision epoch, as a Markov decision process whose target is the
all-plus configuration. It provides the lattice simulator, the exact
finite gap MDPs the dynamics project onto, candidate policy families, and
the discounted-reward machinery that certifies which family is optimal.
"""

__version__ = "0.1.0"

from .analysis import (
    HittingStats,
    MomentPair,
    ValueTable,
    analytic_value_x,
    bellman_residual,
    estimate_hitting,
    estimate_value,
    find_lambda_crossing,
    hitting_time_moments,
    minimal_path_length,
    pgf_estimate,
    policy_evaluation,
    small_lambda_threshold,
    value_iteration,
    x_family_rule,
)
from .auxmdp import (
    FiniteMdp,
    build_stripe_stripe_mdp,
    classify_x,
    classify_y,
    classify_z,
    gap_transition,
)
from .cascade import gap_flip_distribution, window_cascade
from .dynamics import (
    TO_ROBUST,
    Capped,
    ToRobust,
    classify_robust,
    downhill_absorption,
    is_robust,
    relax,
    susceptible_sites,
)
from .errors import (
    BracketError,
    CensoringError,
    CharacterizationViolation,
    ClassificationError,
    ConfigError,
    DivergenceError,
    DomainError,
    EnumerationBudgetError,
    IsingCtrlError,
    UnresolvedTrajectoryError,
)
from .experiments import ExperimentConfig, verify_kernel
from .lattice import Lattice, SpinConfiguration, read_pgm, torus_distance, write_pgm
from .mdp import (
    EpisodeResult,
    replication_rng,
    run_episode,
    single_stripe,
    stripe_and_droplet,
    two_droplets,
    two_stripes,
)
from .policies import FAMILY_IDS, Policy, make_policy
