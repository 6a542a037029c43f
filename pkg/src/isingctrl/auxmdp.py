"""Finite auxiliary decision processes and lattice-state classifiers.

The stripe--stripe regime admits an exact finite Markov decision process on
gap pairs (i, j): flipping a spin at distance 1 or 2 from a stripe inside a
gap of size g relaxes, with known rational probabilities, to a stripe pair
whose gap shrank by 0, 1, 2 or closed entirely. The kernel rows here are
the exact absorption laws of the zero-temperature dynamics started from the
single-flip perturbation; `verify-kernel` recomputes them from the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ClassificationError, DomainError
from .dynamics import RobustComponent, _interval_gap, _runs, classify_robust
from .lattice import SpinConfiguration

State = tuple[int, int]
NOOP = ("noop",)


def gap_transition(g: int, d: int) -> dict[int, Fraction]:
    """Exact law of the new gap size after one distance-d flip and relaxation.

    Defined for gaps g >= 2 with d = 1, and g >= 3 with d = 2.
    """
    F = Fraction
    if d == 1:
        if g == 2:
            return {2: F(1, 4), 0: F(3, 4)}
        if g > 2:
            return {g: F(1, 3), g - 1: F(2, 3)}
    elif d == 2:
        if g == 3:
            return {3: F(7, 18), 2: F(31, 144), 0: F(19, 48)}
        if g > 3:
            return {g: F(5, 9), g - 1: F(7, 27), g - 2: F(5, 27)}
    raise DomainError(f"no distance-{d} action is available in a gap of size {g}")


def gap_distances(g: int) -> tuple[int, ...]:
    """Distances at which a flip action exists inside a gap of size g."""
    if g < 2:
        return ()
    return (1,) if g == 2 else (1, 2)


@dataclass(frozen=True)
class FiniteMdp:
    """Finite discounted MDP with exact rational kernel rows.

    `transitions[state][action]` maps successor states to probabilities.
    Reward is 1 per epoch spent in an absorbing state, 0 elsewhere, so the
    value of a state under discount factor lambda equals E[lambda^tau] times
    1 / (1 - lambda), with tau the hitting time of the absorbing set.
    """

    states: tuple[State, ...]
    transitions: dict  # state -> {action -> {state -> Fraction}}
    absorbing: frozenset

    def __post_init__(self):
        object.__setattr__(
            self, "index", {s: k for k, s in enumerate(self.states)}
        )

    def actions(self, state: State):
        return tuple(self.transitions[state].keys())

    def reward(self, state: State) -> int:
        return 1 if state in self.absorbing else 0

    def policy_matrix(self, decision_rule) -> np.ndarray:
        """Dense row-stochastic matrix of the chain induced by a decision rule.

        `decision_rule(state)` returns either a single action or a mapping
        from actions to mixing weights.
        """
        m = len(self.states)
        P = np.zeros((m, m))
        for s in self.states:
            choice = decision_rule(s)
            if not isinstance(choice, dict):
                choice = {choice: 1.0}
            total = sum(choice.values())
            for action, w in choice.items():
                for t, p in self.transitions[s][action].items():
                    P[self.index[s], self.index[t]] += (w / total) * float(p)
        return P

    def reward_vector(self) -> np.ndarray:
        return np.array([self.reward(s) for s in self.states], dtype=float)


def _normalize(state: State) -> State:
    i, j = state
    return (j, 0) if i == 0 and j > 0 else (i, j)


def build_stripe_stripe_mdp(n: int) -> FiniteMdp:
    """Exact gap-pair MDP for two plus stripes on an n x n torus.

    States (i, j) with positive gaps i, j >= 2 and i + j <= n - 4 (both
    stripes at least two columns wide), single-stripe states (i, 0) with
    2 <= i <= n - 2, and the absorbing state (0, 0). Both gap orders are
    kept as distinct states with symmetric rows.
    """
    if n < 8:
        raise DomainError("two stripes with gaps require n >= 8")
    states = [(0, 0)]
    states += [(i, 0) for i in range(2, n - 1)]
    states += [
        (i, j)
        for i in range(2, n - 5)
        for j in range(2, n - 3 - i)
    ]
    transitions = {}
    for s in states:
        i, j = s
        rows = {}
        if s == (0, 0):
            rows[NOOP] = {s: Fraction(1)}
        else:
            for which, g in enumerate((i, j)):
                for d in gap_distances(g):
                    row = {}
                    for g2, p in gap_transition(g, d).items():
                        t = list(s)
                        t[which] = g2
                        row[_normalize(tuple(t))] = p
                    rows[("gap", which, d)] = row
        transitions[s] = rows
    return FiniteMdp(tuple(states), transitions, frozenset({(0, 0)}))


# ---------------------------------------------------------------------------
# lattice-state classifiers


def _component_gaps(comps, axis: int, n: int) -> list[tuple[int, int]]:
    """Circular runs of indices not covered by any component interval.

    axis 1 works over column indices, axis 0 over row indices. Runs come in
    scan order of their start index.
    """
    occ = np.zeros(n, dtype=bool)
    for c in comps:
        start, length = (c.cols() if axis == 1 else c.rows())
        occ[np.arange(start, start + length) % n] = True
    return _runs(~occ)


@dataclass(frozen=True)
class StripePairView:
    """Geometry behind a stripe--stripe state: gap runs in scan order.

    axis is 1 when the stripes are full columns (gaps run over column
    indices) and 0 when the stripes are full rows.
    """

    axis: int
    gaps: tuple[tuple[int, int], ...]  # (start index, length) per gap

    @property
    def state(self) -> State:
        lengths = tuple(length for _, length in self.gaps)
        return lengths if len(lengths) == 2 else (lengths + (0, 0))[:2]


def x_view(sigma: SpinConfiguration, comps=None) -> StripePairView | None:
    """Stripe-pair geometry of a robust configuration, None when all-plus.

    Raises ClassificationError unless the configuration is all-plus, a
    single stripe, or two parallel stripes. `comps` overrides the strict
    robust-shape decomposition (used under capped relaxation).
    """
    if comps is None:
        comps = classify_robust(sigma)
    if not comps:
        if sigma.plus_count == 0:
            raise ClassificationError("all-minus configuration has no stripes")
        return None
    kinds = {c.kind for c in comps}
    if len(comps) > 2 or len(kinds) != 1 or "rect" in kinds:
        raise ClassificationError(
            f"expected parallel stripes, found {[c.kind for c in comps]}"
        )
    axis = 1 if kinds == {"stripe_cols"} else 0
    return StripePairView(axis, tuple(_component_gaps(comps, axis, sigma.lattice.n)))


def classify_x(sigma: SpinConfiguration) -> State:
    view = x_view(sigma)
    return (0, 0) if view is None else view.state


@dataclass(frozen=True)
class StripeDropletView:
    """Geometry behind a stripe--droplet state (i, j, k).

    i and j are the column gaps on either side of the droplet, in scan
    order; k is the number of lattice rows the droplet does not cover.
    After the droplet spans all rows it is a second stripe and k = 0; after
    coalescence a single stripe remains and the view degrades gracefully.
    """

    axis: int
    gaps: tuple[tuple[int, int], ...]
    stripe: RobustComponent | None
    droplet: RobustComponent | None
    n: int

    @property
    def state(self) -> tuple[int, int, int]:
        lengths = tuple(length for _, length in self.gaps)
        i, j = (lengths + (0, 0))[:2]
        k = 0 if self.droplet is None else self.n - self.droplet.height
        return (i, j, k)


def y_view(sigma: SpinConfiguration, comps=None) -> StripeDropletView | None:
    """Stripe-droplet geometry of a robust configuration, None when all-plus."""
    if comps is None:
        comps = classify_robust(sigma)
    n = sigma.lattice.n
    if not comps:
        if sigma.plus_count == 0:
            raise ClassificationError("all-minus configuration cannot occur here")
        return None
    stripes = [c for c in comps if c.kind != "rect"]
    rects = [c for c in comps if c.kind == "rect"]
    if len(comps) > 2 or len(rects) > 1 or not stripes:
        raise ClassificationError(
            f"expected a stripe and at most one droplet, found {[c.kind for c in comps]}"
        )
    axis = 1 if stripes[0].kind == "stripe_cols" else 0
    return StripeDropletView(
        axis,
        tuple(_component_gaps(comps, axis, n)),
        stripes[0],
        rects[0] if rects else (stripes[1] if len(stripes) == 2 else None),
        n,
    )


def classify_y(sigma: SpinConfiguration) -> tuple[int, int, int]:
    view = y_view(sigma)
    return (0, 0, 0) if view is None else view.state


@dataclass(frozen=True)
class DropletPairView:
    """Geometry behind a droplet-droplet state (i, j, k, l, m, n).

    i, j are the circular column gaps between the two components (0 when
    the column intervals meet or overlap), k, l the circular row gaps, and
    m, n the torus distances between the top boundary rows and between the
    bottom boundary rows. With a single remaining component the pair
    entries are all 0.
    """

    comps: tuple[RobustComponent, ...]
    n: int

    @property
    def state(self) -> tuple[int, int, int, int, int, int]:
        if len(self.comps) < 2:
            return (0, 0, 0, 0, 0, 0)
        a, b = self.comps
        n = self.n
        g1 = (b.anchor[1] - (a.anchor[1] + a.width)) % n
        g2 = (a.anchor[1] - (b.anchor[1] + b.width)) % n
        if a.width + b.width + g1 + g2 != n:  # column intervals overlap
            g1 = g2 = 0
        r1 = (b.anchor[0] - (a.anchor[0] + a.height)) % n
        r2 = (a.anchor[0] - (b.anchor[0] + b.height)) % n
        if a.height + b.height + r1 + r2 != n:  # row intervals overlap
            r1 = r2 = 0
        top = min((b.anchor[0] - a.anchor[0]) % n, (a.anchor[0] - b.anchor[0]) % n)
        abot = (a.anchor[0] + a.height - 1) % n
        bbot = (b.anchor[0] + b.height - 1) % n
        bot = min((bbot - abot) % n, (abot - bbot) % n)
        return (g1, g2, r1, r2, top, bot)


def z_view(sigma: SpinConfiguration, comps=None) -> DropletPairView | None:
    """Droplet-pair geometry of a robust configuration, None when all-plus."""
    if comps is None:
        comps = classify_robust(sigma)
    if not comps:
        if sigma.plus_count == 0:
            raise ClassificationError("all-minus configuration cannot occur here")
        return None
    if len(comps) > 2:
        raise ClassificationError(f"expected at most two components, found {len(comps)}")
    return DropletPairView(tuple(comps), sigma.lattice.n)


def classify_z(sigma: SpinConfiguration) -> tuple[int, int, int, int, int, int]:
    view = z_view(sigma)
    return (0, 0, 0, 0, 0, 0) if view is None else view.state
