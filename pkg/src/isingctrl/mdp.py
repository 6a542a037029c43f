"""Episode simulator for the controlled lattice Markov decision process.

One decision epoch: the policy flips one minus spin next to the growing
clusters, then the zero-temperature dynamics relax the configuration
(either until robust, or for a capped number of raw proposals). The reward
structure is hitting-time shaped: the value of an episode under discount
factor lambda is lambda ** tau / (1 - lambda), where tau is the first epoch
at which the all-plus configuration is reached.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .dynamics import Capped, relax
from .errors import UnresolvedTrajectoryError
from .lattice import (
    Lattice,
    SpinConfiguration,
    column_stripe_sites,
    rectangle_sites,
)
from .policies import Policy


def replication_rng(master_seed: int, family: str, rep: int) -> np.random.Generator:
    """Independent generator for one replication of one policy family."""
    digest = hashlib.sha256(f"{master_seed}/{family}/{rep}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


@dataclass
class EpisodeResult:
    tau: int | None  # None only when absorption is not required
    fallback_count: int
    snapshots: dict = field(default_factory=dict)  # epoch -> SpinConfiguration


def run_episode(
    sigma: SpinConfiguration,
    policy: Policy,
    mode,
    rng: np.random.Generator,
    max_epochs: int = 50_000,
    snapshot_epochs: tuple[int, ...] = (),
    require_absorption: bool = True,
) -> EpisodeResult:
    """Run one controlled episode until the all-plus state or the epoch cap.

    Raises UnresolvedTrajectoryError when the cap is hit first, unless
    `require_absorption` is off (snapshot renders), in which case the run
    stops after the last requested snapshot with tau = None.
    """
    n2 = sigma.lattice.num_sites
    capped = isinstance(mode, Capped)
    snapshots = {}
    start_fallbacks = policy.fallback_count
    horizon = max_epochs
    if not require_absorption and snapshot_epochs:
        horizon = min(max_epochs, max(snapshot_epochs))
    for epoch in range(horizon + 1):
        if epoch in snapshot_epochs:
            snapshots[epoch] = sigma
        if sigma.plus_count == n2:
            return EpisodeResult(epoch, policy.fallback_count - start_fallbacks, snapshots)
        if epoch == horizon:
            break
        site = policy.select_site(sigma, rng)
        if site is None:  # defensive: policies only return None at absorption
            break
        sigma = relax(
            sigma.flipped(site), mode, rng, touched=None if capped else site
        )
    if require_absorption:
        raise UnresolvedTrajectoryError(
            f"episode not absorbed within {max_epochs} epochs for family {policy.family}"
        )
    return EpisodeResult(None, policy.fallback_count - start_fallbacks, snapshots)


def episode_value(tau: int, lam: float) -> float:
    """Discounted reward of an episode: lambda**tau / (1 - lambda)."""
    return lam**tau / (1.0 - lam)


# ---------------------------------------------------------------------------
# initial conditions


def two_stripes(
    lattice: Lattice, widths: tuple[int, int], gaps: tuple[int, int]
) -> SpinConfiguration:
    """Two vertical plus stripes separated by the given column gaps.

    Stripe one starts at column 0; the scan-order gap pair of the result is
    `gaps` and widths[0] + widths[1] + sum(gaps) must equal the lattice side.
    """
    n = lattice.n
    w1, w2 = widths
    g1, g2 = gaps
    if w1 + w2 + g1 + g2 != n:
        raise ValueError("stripe widths and gaps must tile the torus")
    sites = column_stripe_sites(n, g1, w1) + column_stripe_sites(n, g1 + w1 + g2, w2)
    return SpinConfiguration.all_minus(lattice).with_plus(sites)


def single_stripe(lattice: Lattice, width: int, start_col: int = 0) -> SpinConfiguration:
    return SpinConfiguration.all_minus(lattice).with_plus(
        column_stripe_sites(lattice.n, start_col, width)
    )


def stripe_and_droplet(
    lattice: Lattice,
    stripe_width: int,
    droplet: tuple[int, int],
    gap: int,
    droplet_row: int = 0,
) -> SpinConfiguration:
    """A vertical stripe at column 0 and an h x w droplet at column gap.

    `gap` is the column distance between the stripe and the droplet on the
    near side.
    """
    h, w = droplet
    sites = column_stripe_sites(lattice.n, 0, stripe_width)
    sites += rectangle_sites(lattice.n, droplet_row, stripe_width + gap, h, w)
    return SpinConfiguration.all_minus(lattice).with_plus(sites)


def two_droplets(
    lattice: Lattice,
    shape: tuple[int, int],
    col_gap: int,
    row_gap: int,
) -> SpinConfiguration:
    """Two equal droplets offset by the given column and row gaps.

    The first droplet sits at the origin; the second is displaced so that
    the circular gap between the column intervals is col_gap and between
    the row intervals is row_gap.
    """
    h, w = shape
    sites = rectangle_sites(lattice.n, 0, 0, h, w)
    sites += rectangle_sites(lattice.n, h + row_gap, w + col_gap, h, w)
    return SpinConfiguration.all_minus(lattice).with_plus(sites)
