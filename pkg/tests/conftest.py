"""Shared fixtures: the N=32 gap-pair MDP and the Monte Carlo sample sets
used by the acceptance suite. The MC fixtures are session-scoped so the
expensive replication protocols run once and are reused by every test that
needs them."""

import time
from types import SimpleNamespace

import numpy as np
import pytest

from isingctrl.auxmdp import build_stripe_stripe_mdp
from isingctrl.dynamics import TO_ROBUST
from isingctrl.lattice import Lattice
from isingctrl.mdp import (
    replication_rng,
    run_episode,
    stripe_and_droplet,
    two_droplets,
    two_stripes,
)
from isingctrl.policies import make_policy

MASTER_SEED = 20260826
N = 32


def collect_taus(sigma, family, reps, max_epochs=50_000):
    """Run the replication protocol for one policy family; returns tau array."""
    taus = np.empty(reps, dtype=np.int64)
    for rep in range(reps):
        rng = replication_rng(MASTER_SEED, family, rep)
        policy = make_policy(family)
        result = run_episode(sigma, policy, TO_ROBUST, rng, max_epochs=max_epochs)
        taus[rep] = result.tau
    return taus


@pytest.fixture(scope="session")
def mdp32():
    return build_stripe_stripe_mdp(N)


@pytest.fixture(scope="session")
def lattice32():
    return Lattice(N)


@pytest.fixture(scope="session")
def x_start(lattice32):
    """Two width-3 stripes at distance 13 on the 32-torus (gap pair (13, 13))."""
    return two_stripes(lattice32, (3, 3), (13, 13))


@pytest.fixture(scope="session")
def y_start(lattice32):
    """Width-3 stripe and a 3x3 droplet at column distance 13."""
    return stripe_and_droplet(lattice32, 3, (3, 3), 13)


@pytest.fixture(scope="session")
def z_start(lattice32):
    """Two 3x3 droplets at column and row distance 13."""
    return two_droplets(lattice32, (3, 3), 13, 13)


def _timed_protocol(sigma, families, reps=2000):
    t0 = time.perf_counter()
    taus = {fam: collect_taus(sigma, fam, reps) for fam in families}
    return SimpleNamespace(taus=taus, elapsed=time.perf_counter() - t0)


@pytest.fixture(scope="session")
def x_mc(x_start):
    return _timed_protocol(x_start, ("x.a1", "x.a2"))


@pytest.fixture(scope="session")
def y_mc(y_start):
    return _timed_protocol(y_start, ("y.a1", "y.a1p", "y.a2", "y.a3", "y.a4"))


@pytest.fixture(scope="session")
def z_mc(z_start):
    return _timed_protocol(z_start, ("z.a1", "z.a2", "z.a3"))
