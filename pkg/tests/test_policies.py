"""Policy families: candidate site groups, selection, and validation."""

import numpy as np
import pytest

from isingctrl.errors import ClassificationError
from isingctrl.lattice import Lattice, energy_delta
from isingctrl.mdp import stripe_and_droplet, two_droplets, two_stripes
from isingctrl.policies import FAMILY_IDS, Policy, make_policy


def test_unknown_family_rejected():
    with pytest.raises(ClassificationError):
        Policy("x.a9")
    for fam in FAMILY_IDS:
        assert make_policy(fam).family == fam


def test_x_policies_target_correct_distances():
    lattice = Lattice(32)
    sigma = two_stripes(lattice, (3, 3), (13, 13))
    for fam, want_d in (("x.a1", 1), ("x.a2", 2)):
        policy = make_policy(fam)
        groups = policy.action_groups(sigma)
        assert len(groups) == 2  # one candidate group per open gap
        stripe_cols = {c for c in range(32) if sigma.spin((0, c)) == 1}
        for group in groups:
            for site in group:
                assert sigma.spin(site) == -1
                # candidate sites sit at the declared circular column
                # distance from the nearest stripe column
                col = site[1]
                dist = min(min((col - c) % 32, (c - col) % 32) for c in stripe_cols)
                assert dist == want_d


def test_x_small_gap_uses_distance_one():
    # family 2 plays distance 1 in gaps of width 2 and distance 2 in width 3
    lattice = Lattice(16)
    sigma = two_stripes(lattice, (5, 5), (2, 4))
    groups = make_policy("x.a2").action_groups(sigma)
    assert groups  # both gaps still open


def test_select_site_is_deterministic_given_rng():
    lattice = Lattice(32)
    sigma = stripe_and_droplet(lattice, 3, (3, 3), 13)
    for fam in ("y.a1", "y.a1p", "y.a2", "y.a3", "y.a4"):
        a = make_policy(fam).select_site(sigma, np.random.default_rng(7))
        b = make_policy(fam).select_site(sigma, np.random.default_rng(7))
        assert a == b
        assert sigma.spin(a) == -1


def test_z_policies_offer_sites():
    lattice = Lattice(32)
    sigma = two_droplets(lattice, (3, 3), 13, 13)
    for fam in ("z.a1", "z.a2", "z.a3"):
        site = make_policy(fam).select_site(sigma, np.random.default_rng(3))
        assert site is not None
        assert sigma.spin(site) == -1


def test_policy_returns_none_at_absorption():
    from isingctrl.lattice import SpinConfiguration

    lattice = Lattice(16)
    plus = SpinConfiguration.all_plus(lattice)
    assert make_policy("x.a1").select_site(plus, np.random.default_rng(0)) is None
