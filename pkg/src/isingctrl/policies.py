"""Lattice-level control policies for the three two-cluster regimes.

A policy maps a robust configuration to a set of candidate flip-site
groups. One group is drawn uniformly, then one minus site uniformly within
it; this is the randomized decision rule evaluated by the simulator. The
regimes are identified by their family ids:

* ``x.*``  two parallel stripes,
* ``y.*``  one stripe and one rectangular droplet,
* ``z.*``  two rectangular droplets.

Within a gap of size g, "distance d" sites form the two lines at offsets
d - 1 and g - d from the gap boundaries (a single line when they coincide).
The ``a_0`` action flips a site diagonally adjacent to a droplet corner,
which lets the relaxation extend the droplet by one row and one column at
once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .auxmdp import DropletPairView, StripeDropletView, StripePairView, x_view, y_view, z_view
from .dynamics import RobustComponent, lenient_components
from .errors import ClassificationError
from .lattice import Site, SpinConfiguration

FAMILY_IDS = (
    "x.a1", "x.a2",
    "y.a1", "y.a1p", "y.a2", "y.a3", "y.a4",
    "z.a1", "z.a2", "z.a3",
)


def _minus(sigma: SpinConfiguration, sites) -> list[Site]:
    return [s for s in sites if sigma.spins[s] < 0]


def _line(axis: int, index: int, span, n: int) -> list[Site]:
    """Sites of one row (axis 0) or column (axis 1) restricted to span."""
    index %= n
    if axis == 1:
        return [(r % n, index) for r in span]
    return [(index, c % n) for c in span]


def _component_span(comp: RobustComponent, axis: int) -> range:
    """Row range (axis 1, i.e. column lines) or column range of a component."""
    start, length = comp.rows() if axis == 1 else comp.cols()
    return range(start, start + length)


def _gap_sides(gap: tuple[int, int], comps, axis: int, n: int):
    """Components bordering a gap run on its low and high side.

    With comps None (pure stripe regime) both sides span all lines.
    """
    if comps is None:
        return None, None
    start, length = gap

    def owner(idx):
        idx %= n
        for c in comps:
            s, l = (c.cols() if axis == 1 else c.rows())
            if (idx - s) % n < l:
                return c
        raise ClassificationError(f"no component borders gap at index {idx}")

    return owner(start - 1), owner(start + length)


def gap_sites(
    sigma: SpinConfiguration,
    gap: tuple[int, int],
    d: int,
    axis: int,
    comps,
) -> list[Site]:
    """Minus sites at distance d from either bordering component, in the gap.

    The line adjacent to a stripe spans all lattice lines; the line adjacent
    to a droplet spans only the droplet's extent.
    """
    n = sigma.lattice.n
    start, length = gap
    low, high = _gap_sides(gap, comps, axis, n)

    def span(comp):
        if comp is None or comp.kind != "rect":
            return range(n)
        return _component_span(comp, axis)

    sites = set(_line(axis, start + d - 1, span(low), n))
    sites.update(_line(axis, start + length - d, span(high), n))
    return _minus(sigma, sites)


def droplet_growth_sites(sigma: SpinConfiguration, comp: RobustComponent, d: int, axis: int) -> list[Site]:
    """Minus sites at distance d from the two droplet sides along `axis`.

    axis 1 grows the droplet vertically (row lines above and below), axis 0
    grows it horizontally.
    """
    n = sigma.lattice.n
    if axis == 1:
        r0, h = comp.rows()
        span = range(*(lambda s, l: (s, s + l))(*comp.cols()))
        lines = [_line(0, r0 - d, span, n), _line(0, r0 + h + d - 1, span, n)]
    else:
        c0, w = comp.cols()
        span = range(*(lambda s, l: (s, s + l))(*comp.rows()))
        lines = [_line(1, c0 - d, span, n), _line(1, c0 + w + d - 1, span, n)]
    return _minus(sigma, [s for line in lines for s in line])


def diagonal_sites(sigma: SpinConfiguration, comps) -> list[Site]:
    """Minus sites diagonally adjacent to the corners of the rectangles."""
    n = sigma.lattice.n
    sites = []
    for comp in comps:
        if comp.kind != "rect":
            continue
        r0, h = comp.rows()
        c0, w = comp.cols()
        for r in (r0 - 1, r0 + h):
            for c in (c0 - 1, c0 + w):
                sites.append((r % n, c % n))
    return _minus(sigma, sites)


def _profile_distance(g: int, family: int) -> int:
    """Flip distance used inside a gap of size g by stripe-gap families."""
    if g in (2, 4):
        return 1
    if g == 3:
        return 2
    return 1 if family == 1 else 2


def _ordered_gaps(gaps):
    """(longest, shortest) gap runs; ties resolved by scan order."""
    if len(gaps) == 1:
        return gaps[0], gaps[0]
    a, b = gaps
    return (a, b) if a[1] >= b[1] else (b, a)


@dataclass
class Policy:
    """Randomized decision rule for one policy family.

    `action_groups` returns the nonempty candidate site groups for the
    current robust configuration ([] exactly at absorption). Groups that
    come out empty because every targeted site is already plus are replaced
    by fallback growth actions and counted in `fallback_count`.
    """

    family: str
    lenient: bool = False
    fallback_count: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.family not in FAMILY_IDS:
            raise ClassificationError(f"unknown policy family {self.family!r}")

    # -- regime dispatch ----------------------------------------------------

    def action_groups(self, sigma: SpinConfiguration) -> list[list[Site]]:
        comps = lenient_components(sigma) if self.lenient else None
        if self.lenient and not comps:
            return []
        regime = self.family[0]
        if regime == "x":
            view = x_view(sigma, comps)
            groups = [] if view is None else self._x_groups(sigma, view)
        elif regime == "y":
            view = y_view(sigma, comps)
            groups = [] if view is None else self._y_groups(sigma, view)
        else:
            view = z_view(sigma, comps)
            groups = [] if view is None else self._z_groups(sigma, view)
        return groups

    def select_site(self, sigma: SpinConfiguration, rng: np.random.Generator) -> Site | None:
        groups = self.action_groups(sigma)
        if not groups:
            return None
        group = groups[int(rng.integers(len(groups)))]
        return group[int(rng.integers(len(group)))]

    # -- stripe-stripe ------------------------------------------------------

    def _x_groups(self, sigma, view: StripePairView):
        fam = 1 if self.family == "x.a1" else 2
        groups = []
        for gap in view.gaps:
            d = _profile_distance(gap[1], fam)
            sites = gap_sites(sigma, gap, d, view.axis, None)
            if sites:
                groups.append(sites)
        return groups

    # -- stripe-droplet -----------------------------------------------------

    def _y_groups(self, sigma, view: StripeDropletView):
        comps = [c for c in (view.stripe, view.droplet) if c is not None]
        longest, shortest = _ordered_gaps(view.gaps)
        k = view.state[2]
        droplet = view.droplet if (view.droplet is not None and view.droplet.kind == "rect") else None

        def gap_group(gap, d):
            return gap_sites(sigma, gap, d, view.axis, comps)

        if self.family == "y.a1":
            wanted = [gap_group(shortest, 1), gap_group(longest, 1)]
        elif self.family == "y.a1p":
            i, j = sorted((longest[1], shortest[1]), reverse=True)
            if i == 2 and j == 2:
                wanted = [gap_group(shortest, 1), gap_group(longest, 1)]
            elif j == 2:
                wanted = [gap_group(shortest, 1), gap_group(longest, 2)]
            else:
                wanted = [gap_group(shortest, 2), gap_group(longest, 2)]
        elif self.family == "y.a2":
            if k != 0 and droplet is not None:
                wanted = [droplet_growth_sites(sigma, droplet, 1, view.axis)]
            else:
                wanted = [gap_group(longest, 1), gap_group(shortest, 1)]
        elif self.family == "y.a3":
            wanted = [gap_group(longest, 1), gap_group(shortest, 1)]
            if k != 0 and droplet is not None:
                wanted.insert(0, droplet_growth_sites(sigma, droplet, 1, view.axis))
        else:  # y.a4
            wanted = [gap_group(longest, 1), gap_group(shortest, 1)]
            if k != 0 and droplet is not None:
                wanted.insert(0, diagonal_sites(sigma, [droplet]))
        groups = _dedup([g for g in wanted if g])
        if not groups:
            self.fallback_count += 1
            groups = _dedup(
                g for g in (gap_group(longest, 1), gap_group(shortest, 1)) if g
            )
        return groups

    # -- droplet-droplet ----------------------------------------------------

    def _z_groups(self, sigma, view: DropletPairView):
        comps = list(view.comps)
        i, j, k, ell, m, n_ = view.state

        def a_h():
            return [
                s
                for c in comps
                if c.width < view.n
                for s in droplet_growth_sites(sigma, c, 1, 0)
            ]

        def a_v():
            return [
                s
                for c in comps
                if c.height < view.n
                for s in droplet_growth_sites(sigma, c, 1, 1)
            ]

        if self.family == "z.a1":
            wanted = a_v() if (m > 0 or n_ > 0) else a_h()
        elif self.family == "z.a2":
            wanted = a_v() if (k > 0 or ell > 0) else a_h()
        else:  # z.a3
            wanted = diagonal_sites(sigma, comps)
        if wanted:
            return [wanted]
        self.fallback_count += 1
        for fallback in (a_h, a_v):
            sites = fallback()
            if sites:
                return [sites]
        return []


def _dedup(groups):
    seen = []
    for g in groups:
        key = sorted(g)
        if key not in [sorted(h) for h in seen]:
            seen.append(g)
    return seen


def make_policy(family: str) -> Policy:
    return Policy(family)
