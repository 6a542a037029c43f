"""Zero-temperature single-flip dynamics and local-minimum machinery.

A site is susceptible when flipping it does not raise the energy: a plus
spin with at least three minus neighbors, or a minus spin with at least two
plus neighbors. Configurations without susceptible sites are robust (local
energy minima) and are the only states the decision process ever observes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CharacterizationViolation, EnumerationBudgetError
from .lattice import Lattice, Site, SpinConfiguration


# ---------------------------------------------------------------------------
# relaxation modes


class ToRobust:
    """Run the natural dynamics until a robust configuration is reached."""

    def __repr__(self):
        return "ToRobust"


TO_ROBUST = ToRobust()


@dataclass(frozen=True)
class Capped:
    """Run exactly `kappa` raw proposals (rejections included), then stop."""

    kappa: int

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError("kappa must be >= 1")


# ---------------------------------------------------------------------------
# susceptibility


def susceptible_mask(sigma: SpinConfiguration) -> np.ndarray:
    """Boolean mask of susceptible sites (vectorized)."""
    s = sigma.spins.astype(np.int16)
    nbr = (
        np.roll(s, 1, axis=0)
        + np.roll(s, -1, axis=0)
        + np.roll(s, 1, axis=1)
        + np.roll(s, -1, axis=1)
    )
    return ((s > 0) & (nbr <= -2)) | ((s < 0) & (nbr >= 0))


def susceptible_sites(sigma: SpinConfiguration) -> set[Site]:
    rows, cols = np.nonzero(susceptible_mask(sigma))
    return {(int(r), int(c)) for r, c in zip(rows, cols)}


def is_robust(sigma: SpinConfiguration) -> bool:
    return not susceptible_mask(sigma).any()


def _flat_susceptible(g, nbr, idx) -> bool:
    n0, n1, n2, n3 = nbr[idx]
    s = g[n0] + g[n1] + g[n2] + g[n3]
    return (s <= -2) if g[idx] > 0 else (s >= 0)


def _initial_susc_set(g, nbr, n2) -> set[int]:
    return {i for i in range(n2) if _flat_susceptible(g, nbr, i)}


def metropolis_step(sigma: SpinConfiguration, rng: np.random.Generator) -> SpinConfiguration:
    """One raw proposal: uniform site, flipped iff the move is downhill."""
    n = sigma.lattice.n
    r = int(rng.integers(n))
    c = int(rng.integers(n))
    s = int(sigma.spins[r, c])
    sp = sigma.spins
    nbr = int(sp[(r - 1) % n, c]) + int(sp[(r + 1) % n, c]) + int(sp[r, (c - 1) % n]) + int(sp[r, (c + 1) % n])
    accept = (nbr <= -2) if s > 0 else (nbr >= 0)
    return sigma.flipped((r, c)) if accept else sigma


def _relax_list(g: list, lattice: Lattice, mode, rng: np.random.Generator, susc: set[int]):
    """Relax a flat +/-1 spin list in place; returns the number of flips.

    Event-driven: a raw proposal chain is a uniform site draw accepted only
    on susceptible sites, so, conditional on a flip, the flipped site is
    uniform over the susceptible set. For the capped mode the number of
    proposals consumed between flips is geometric with success probability
    |susceptible| / N^2, which is sampled directly instead of looping.
    """
    nbr = lattice.neighbors_flat
    n2 = lattice.num_sites
    flips = 0
    budget = None if isinstance(mode, ToRobust) else mode.kappa

    while susc:
        if budget is not None:
            k = len(susc)
            draw = int(rng.geometric(k / n2))
            if draw > budget:
                break
            budget -= draw
        pool = tuple(susc)
        i = pool[int(rng.integers(len(pool)))]
        g[i] = -g[i]
        flips += 1
        for j in (i, *nbr[i]):
            if _flat_susceptible(g, nbr, j):
                susc.add(j)
            else:
                susc.discard(j)
    return flips


def relax(
    sigma: SpinConfiguration,
    mode,
    rng: np.random.Generator,
    touched: Site | None = None,
) -> SpinConfiguration:
    """Relax under the natural dynamics.

    `touched` is an optional hint: if `sigma` was obtained from a robust
    configuration by flipping that single site, only the site and its
    neighbors can be susceptible, so the initial scan is skipped.
    """
    lattice = sigma.lattice
    g = sigma.spins.ravel().tolist()
    nbr = lattice.neighbors_flat
    if touched is not None:
        i = lattice.flat(touched)
        susc = {j for j in (i, *nbr[i]) if _flat_susceptible(g, nbr, j)}
    else:
        susc = _initial_susc_set(g, nbr, lattice.num_sites)
    if not susc:
        return sigma
    _relax_list(g, lattice, mode, rng, susc)
    spins = np.asarray(g, dtype=np.int8).reshape(lattice.n, lattice.n)
    return SpinConfiguration(lattice, spins)


# ---------------------------------------------------------------------------
# exact absorption oracle


def downhill_absorption(sigma: SpinConfiguration, budget: int = 10**6):
    """Exact distribution over the robust states reachable downhill.

    Memoized recursion with rational arithmetic: a robust state maps to a
    point mass; otherwise the distribution is the uniform mixture over the
    one-flip successors at susceptible sites (self-loops cannot change the
    absorption law). Every flip strictly lowers the energy, so the
    recursion is acyclic and terminates.
    """
    lattice = sigma.lattice
    nbr = lattice.neighbors_flat
    n2 = lattice.num_sites
    memo: dict[bytes, dict[bytes, Fraction]] = {}

    def solve(g: list) -> dict[bytes, Fraction]:
        key = bytes(b & 0xFF for b in g)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if len(memo) >= budget:
            raise EnumerationBudgetError(
                f"downhill enumeration exceeded {budget} memoized states"
            )
        susc = [i for i in range(n2) if _flat_susceptible(g, nbr, i)]
        if not susc:
            out = {key: Fraction(1)}
        else:
            w = Fraction(1, len(susc))
            out = {}
            for i in susc:
                g[i] = -g[i]
                for endpoint, p in solve(g).items():
                    out[endpoint] = out.get(endpoint, Fraction(0)) + w * p
                g[i] = -g[i]
        memo[key] = out
        return out

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n2 + 1000))
    try:
        dist = solve(sigma.spins.ravel().tolist())
    finally:
        sys.setrecursionlimit(old_limit)

    result = {}
    for key, p in dist.items():
        spins = np.frombuffer(key, dtype=np.int8).reshape(lattice.n, lattice.n)
        result[SpinConfiguration(lattice, spins)] = p
    assert sum(result.values()) == 1
    return result


# ---------------------------------------------------------------------------
# robust-shape characterization


@dataclass(frozen=True)
class RobustComponent:
    """One maximal plus cluster of a robust configuration.

    kind is "rect", "stripe_cols" (full columns, wraps over rows) or
    "stripe_rows" (full rows, wraps over columns). anchor is the top-left
    cell (row, col) of the covered block, heights/widths count cells.
    """

    kind: str
    anchor: Site
    height: int
    width: int

    def rows(self) -> tuple[int, int]:
        return self.anchor[0], self.height

    def cols(self) -> tuple[int, int]:
        return self.anchor[1], self.width


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal circular runs of True as (start, length), in scan order of start."""
    n = mask.size
    if mask.all():
        return [(0, n)]
    if not mask.any():
        return []
    m = mask.astype(np.int8)
    starts = np.flatnonzero((m == 1) & (np.roll(m, 1) == 0))
    ends = np.flatnonzero((m == 1) & (np.roll(m, -1) == 0))
    runs = []
    for s in starts:
        e = ends[ends >= s][0] if (ends >= s).any() else ends[0] + n
        runs.append((int(s), int(e - s + 1)))
    return sorted(runs)


def _linear_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of True without wraparound, as (start, length)."""
    m = np.concatenate(([0], mask.astype(np.int8), [0]))
    starts = np.flatnonzero(np.diff(m) == 1)
    ends = np.flatnonzero(np.diff(m) == -1)
    return [(int(s), int(e - s)) for s, e in zip(starts, ends)]


def _interval_gap(a0: int, alen: int, b0: int, blen: int, n: int) -> tuple[int, bool]:
    """Circular gap between two index intervals: (empty count, disjoint?).

    Returns (0, False) when the intervals overlap; otherwise the smaller of
    the two empty arcs separating them, with disjoint True (adjacent
    intervals give (0, True)).
    """
    g1 = (b0 - (a0 + alen)) % n
    g2 = (a0 - (b0 + blen)) % n
    if alen + blen + g1 + g2 == n:
        return min(g1, g2), True
    return 0, False


def component_distance(a: "RobustComponent", b: "RobustComponent", n: int) -> int:
    """Torus Manhattan distance between the site sets of two components.

    Per axis, disjoint index intervals contribute their empty gap plus one;
    overlapping intervals contribute nothing.
    """
    dist = 0
    for (a0, alen), (b0, blen) in (
        (a.rows(), b.rows()),
        (a.cols(), b.cols()),
    ):
        gap, disjoint = _interval_gap(a0, alen, b0, blen, n)
        if disjoint:
            dist += gap + 1
    return dist


def bounding_components(sigma: SpinConfiguration) -> list[tuple[int, int, int, int]]:
    """Bounding blocks (r0, c0, height, width) of plus clusters.

    Splits on empty column arcs, then empty row arcs, then empty column arcs
    again; exact for collections of pairwise-separated rectangles and a
    usable bounding-box description otherwise.
    """
    n = sigma.lattice.n
    grid = sigma.spins > 0
    if sigma.plus_count in (0, n * n):
        return []
    blocks = []
    for c0, w in _runs(grid.any(axis=0)):
        cols = np.arange(c0, c0 + w) % n
        sub = grid[:, cols]
        for r0, hgt in _runs(sub.any(axis=1)):
            rows = np.arange(r0, r0 + hgt) % n
            band = grid[np.ix_(rows, cols)]
            col_occ = band.any(axis=0)
            inner = _runs(col_occ) if w == n else _linear_runs(col_occ)
            for cc, ww in inner:
                blocks.append(((r0 % n), int(cols[cc % w]), hgt, ww))
    return blocks


def lenient_components(sigma: SpinConfiguration) -> list[RobustComponent]:
    """Bounding-box components without the robust-shape validation.

    Used under capped relaxation, where cluster boundaries may be ragged:
    each plus cluster is reduced to its bounding block and labelled by its
    extent, so the policies remain applicable between relaxation sweeps.
    """
    n = sigma.lattice.n
    comps = []
    for r0, c0, h, w in bounding_components(sigma):
        if h == n and w == n:
            continue
        if h == n:
            comps.append(RobustComponent("stripe_cols", (0, c0), n, w))
        elif w == n:
            comps.append(RobustComponent("stripe_rows", (r0, 0), h, n))
        else:
            comps.append(RobustComponent("rect", (r0, c0), h, w))
    return comps


def classify_robust(sigma: SpinConfiguration) -> list[RobustComponent]:
    """Decompose a robust configuration into rectangle/stripe components.

    Returns [] for the uniform configurations. Raises
    CharacterizationViolation if the plus clusters are not pairwise-distant
    rectangles or stripes.
    """
    n = sigma.lattice.n
    if sigma.plus_count in (0, n * n):
        return []
    grid = sigma.spins > 0
    blocks = bounding_components(sigma)
    comps = []
    covered = 0
    for r0, c0, hgt, w in blocks:
        rows = np.arange(r0, r0 + hgt) % n
        cols = np.arange(c0, c0 + w) % n
        if not grid[np.ix_(rows, cols)].all():
            raise CharacterizationViolation(
                f"plus cluster near ({r0},{c0}) is not a filled rectangle"
            )
        covered += hgt * w
        if hgt == n and w == n:
            raise CharacterizationViolation("full block should be the uniform sentinel")
        if hgt == n:
            comps.append(RobustComponent("stripe_cols", (0, c0), n, w))
        elif w == n:
            comps.append(RobustComponent("stripe_rows", (r0, 0), hgt, n))
        else:
            if min(hgt, w) < 2 or max(hgt, w) > n - 2:
                raise CharacterizationViolation(
                    f"rectangle {hgt}x{w} violates the robust-shape side bounds"
                )
            comps.append(RobustComponent("rect", (r0, c0), hgt, w))
    if covered != sigma.plus_count:
        raise CharacterizationViolation(
            "plus sites are not exhausted by rectangular components"
        )
    for a in range(len(comps)):
        for b in range(a + 1, len(comps)):
            dist = component_distance(comps[a], comps[b], n)
            if dist <= 2:
                raise CharacterizationViolation(
                    f"components at distance {dist} <= 2 cannot both be stable"
                )
    return comps
