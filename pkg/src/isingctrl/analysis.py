"""Exact discounted analysis of the finite gap MDPs plus Monte Carlo stats.

Values are expected total discounted rewards with reward 1 per epoch spent
in the absorbing target, so v(s) = E[lambda^tau] / (1 - lambda) with tau
the hitting time. Policy values solve the linear fixed point
v = r + lambda P v; optimal values solve the Bellman equation with a max
over actions.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .auxmdp import NOOP, FiniteMdp, State
from .errors import (
    BracketError,
    CensoringError,
    DivergenceError,
    DomainError,
)

_DIRECT_SOLVE_LAMBDA = 0.99  # iterative contraction is too slow beyond this


@dataclass(frozen=True)
class ValueTable:
    values: dict
    lam: float
    provenance: str  # analytic | linear-solve | value-iteration

    def __getitem__(self, state: State) -> float:
        return self.values[state]

    def as_vector(self, mdp: FiniteMdp) -> np.ndarray:
        return np.array([self.values[s] for s in mdp.states])


@dataclass(frozen=True)
class MomentPair:
    e_tau: float
    e_tau_factorial2: float  # E[tau (tau - 1)]


@dataclass(frozen=True)
class HittingStats:
    sample_count: int
    mean: float
    variance: float
    ci95_low: float
    ci95_high: float
    resolved_fraction: float = 1.0


# ---------------------------------------------------------------------------
# decision rules for the stripe-stripe MDP


def x_profile_distance(g: int, family: int) -> int:
    """Flip distance the family uses inside a gap of size g."""
    if g in (2, 4):
        return 1
    if g == 3:
        return 2
    return 1 if family == 1 else 2


def x_family_rule(family: int, selector: str = "randomized"):
    """Decision rule of stripe-stripe family 1 or 2 on the gap-pair MDP.

    selector "randomized" mixes the per-gap actions uniformly (the rule used
    in simulation); "short"/"long" act deterministically on the smaller or
    larger positive gap, ties resolved toward the first coordinate.
    """
    if family not in (1, 2):
        raise DomainError("family must be 1 or 2")

    def rule(state: State):
        if state == (0, 0):
            return NOOP
        actions = {
            ("gap", which, x_profile_distance(g, family)): 1.0
            for which, g in enumerate(state)
            if g > 0
        }
        if selector == "randomized" or len(actions) == 1:
            return actions
        i, j = state
        which = 0 if ((i <= j) if selector == "short" else (i >= j)) else 1
        return ("gap", which, x_profile_distance(state[which], family))

    return rule


# ---------------------------------------------------------------------------
# exact solvers


def policy_evaluation(
    mdp: FiniteMdp, rule, lam: float, tol: float = 1e-12
) -> ValueTable:
    """Value of a decision rule: fixed point of v = r + lambda P v.

    Iterative contraction to sup-norm step tolerance `tol`; a direct dense
    solve takes over for lambda close to 1, where the contraction rate
    makes iteration impractical.
    """
    if not 0 < lam < 1:
        raise DomainError("discount factor must lie in (0, 1)")
    P = mdp.policy_matrix(rule)
    r = mdp.reward_vector()
    if lam > _DIRECT_SOLVE_LAMBDA:
        v = np.linalg.solve(np.eye(len(r)) - lam * P, r)
    else:
        v = np.zeros_like(r)
        while True:
            v_next = r + lam * (P @ v)
            if np.max(np.abs(v_next - v)) <= tol:
                v = v_next
                break
            v = v_next
    return ValueTable(dict(zip(mdp.states, v.tolist())), lam, "linear-solve")


def _q_values(mdp: FiniteMdp, v: dict, lam: float, state: State) -> dict:
    out = {}
    for action, row in mdp.transitions[state].items():
        out[action] = mdp.reward(state) + lam * sum(
            float(p) * v[t] for t, p in row.items()
        )
    return out


def value_iteration(mdp: FiniteMdp, lam: float, tol: float = 1e-12, tie_tol: float = 1e-9):
    """Optimal values and the full greedy argmax sets (ties preserved)."""
    if not 0 < lam < 1:
        raise DomainError("discount factor must lie in (0, 1)")
    v = {s: 0.0 for s in mdp.states}
    while True:
        v_next = {s: max(_q_values(mdp, v, lam, s).values()) for s in mdp.states}
        delta = max(abs(v_next[s] - v[s]) for s in mdp.states)
        v = v_next
        if delta <= tol:
            break
    greedy = {}
    for s in mdp.states:
        q = _q_values(mdp, v, lam, s)
        best = max(q.values())
        greedy[s] = tuple(a for a, val in q.items() if val >= best - tie_tol)
    return ValueTable(v, lam, "value-iteration"), greedy


def bellman_residual(mdp: FiniteMdp, rule, lam: float) -> float:
    """Sup-norm gap between the Bellman optimum and the rule's own value."""
    table = policy_evaluation(mdp, rule, lam)
    return max(
        max(_q_values(mdp, table.values, lam, s).values()) - table.values[s]
        for s in mdp.states
    )


def find_lambda_crossing(mdp: FiniteMdp, rule_a, rule_b, state: State, bracket) -> float:
    """Discount factor where the two rules' values at `state` coincide."""
    lo, hi = bracket

    def diff(lam):
        return (
            policy_evaluation(mdp, rule_a, lam)[state]
            - policy_evaluation(mdp, rule_b, lam)[state]
        )

    f_lo, f_hi = diff(lo), diff(hi)
    if f_lo == 0.0 and f_hi == 0.0:
        raise BracketError("values coincide on the whole bracket; no crossing")
    if f_lo * f_hi > 0:
        raise BracketError(f"no sign change over bracket ({lo}, {hi})")
    return float(bisect(diff, lo, hi, xtol=1e-6))


# ---------------------------------------------------------------------------
# hitting-time moments and path lengths


def _transient_system(mdp: FiniteMdp, rule, target: State):
    P = mdp.policy_matrix(rule)
    idx = [k for k, s in enumerate(mdp.states) if s != target]
    if len(idx) == len(mdp.states):
        raise DomainError(f"target {target} is not a state of the MDP")
    Q = P[np.ix_(idx, idx)]
    return P, idx, Q


def hitting_time_moments(mdp: FiniteMdp, rule, target: State, state: State | None = None):
    """Exact E[tau] and E[tau(tau-1)] of the hitting time of `target`.

    First-step analysis: on the transient part, m1 = 1 + Q m1 and
    m2 = 1 + Q (2 m1 + m2) with m2 = E[tau^2], whence
    E[tau(tau-1)] = m2 - m1. Returns a MomentPair for `state`, or the full
    state -> MomentPair map when `state` is None.
    """
    _, idx, Q = _transient_system(mdp, rule, target)
    eye = np.eye(len(idx))
    ones = np.ones(len(idx))
    try:
        m1 = np.linalg.solve(eye - Q, ones)
        m2 = np.linalg.solve(eye - Q, ones + 2.0 * (Q @ m1))
    except np.linalg.LinAlgError as exc:
        raise DivergenceError("target not reached with probability one") from exc
    if not np.all(np.isfinite(m1)) or np.any(m1 < 0):
        raise DivergenceError("target not reached with probability one")
    pairs = {target: MomentPair(0.0, 0.0)}
    for k, row in zip(idx, range(len(idx))):
        pairs[mdp.states[k]] = MomentPair(float(m1[row]), float(m2[row] - m1[row]))
    if state is not None:
        return pairs[state]
    return pairs


def minimal_path_length(mdp: FiniteMdp, rule, state: State, target: State) -> int:
    """Fewest epochs that reach `target` with positive probability."""
    if state == target:
        return 0
    P = mdp.policy_matrix(rule)
    start, goal = mdp.index[state], mdp.index[target]
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in np.nonzero(P[u] > 0)[0]:
            w = int(w)
            if w not in dist:
                dist[w] = dist[u] + 1
                if w == goal:
                    return dist[w]
                queue.append(w)
    raise DivergenceError(f"{target} unreachable from {state} under the rule")


def hitting_probability_at(mdp: FiniteMdp, rule, state: State, target: State, t: int) -> float:
    """P(tau = t) for the hitting time of `target` from `state`."""
    P = mdp.policy_matrix(rule)
    goal = mdp.index[target]
    P = P.copy()
    P[goal, :] = 0.0
    P[goal, goal] = 1.0
    dist = np.zeros(len(mdp.states))
    dist[mdp.index[state]] = 1.0
    prev = dist[goal]
    for _ in range(t):
        prev = dist[goal]
        dist = dist @ P
    return float(dist[goal] - prev) if t > 0 else float(state == target)


def small_lambda_threshold(mdp: FiniteMdp, rule_a, rule_b, state: State, target: State) -> float:
    """Bound below which the shorter-minimal-path rule is preferred.

    With t (resp. t') the minimal path lengths under the two rules and
    t < t', the rule with the shorter path dominates whenever
    lambda <= P_a(tau = t) ** (1 / (t' - t)).
    """
    t_a = minimal_path_length(mdp, rule_a, state, target)
    t_b = minimal_path_length(mdp, rule_b, state, target)
    if t_a == t_b:
        raise DomainError("rules share the same minimal path length")
    if t_a > t_b:
        rule_a, t_a, t_b = rule_b, t_b, t_a
    p = hitting_probability_at(mdp, rule_a, state, target, t_a)
    return p ** (1.0 / (t_b - t_a))


# ---------------------------------------------------------------------------
# analytic stripe-stripe values (family 1)


def analytic_value_x(state: State, lam: float) -> float:
    """Closed recursion for the family-1 value on the gap-pair MDP.

    Computed gap by gap: closing a gap of size 2 contributes 3l/(4-l),
    size 3 the two-term special row, and each unit shrink above size 3
    contributes 2l/(3-l). Gaps of size 1 are outside the domain.
    """
    if not 0 < lam < 1:
        raise DomainError("discount factor must lie in (0, 1)")
    i, j = state
    if i in (1,) or j in (1,):
        raise DomainError("gap of size 1 has no stripe-stripe representation")
    i, j = max(i, j), min(i, j)

    def chain(g: int, tail: float) -> float:
        """Value factoring through closing one gap of size g, given the
        value `tail` after it closes."""
        if g == 0:
            return tail
        v0 = tail
        v2 = 3 * lam / (4 - lam) * v0
        if g == 2:
            return v2
        v3 = (31 * lam * v2 + 57 * lam * v0) / (8 * (18 - 7 * lam))
        v = v3
        for _ in range(4, g + 1):
            v = 2 * lam / (3 - lam) * v
        return v

    v_absorb = 1.0 / (1.0 - lam)
    return chain(i, chain(j, v_absorb))


def resolvent_partial_sum(mdp: FiniteMdp, rule, lam: float, horizon: int) -> np.ndarray:
    """Sum over t <= horizon of lambda^t (P^t r), per state."""
    P = mdp.policy_matrix(rule)
    r = mdp.reward_vector()
    acc = r.copy()
    term = r.copy()
    for _ in range(horizon):
        term = lam * (P @ term)
        acc += term
    return acc


# ---------------------------------------------------------------------------
# Monte Carlo estimators


def _stats(samples: np.ndarray) -> HittingStats:
    n = samples.size
    mean = float(samples.mean())
    var = float(samples.var(ddof=1)) if n > 1 else 0.0
    half = 1.96 * math.sqrt(var / n) if n > 1 else 0.0
    return HittingStats(n, mean, var, mean - half, mean + half)


def _check_resolved(samples) -> np.ndarray:
    arr = list(samples)
    if any(s is None for s in arr):
        raise CensoringError("unresolved (censored) samples present")
    out = np.asarray(arr, dtype=float)
    if out.size == 0:
        raise CensoringError("empty sample set")
    return out


def estimate_hitting(samples) -> HittingStats:
    """Mean hitting time with normal-approximation 95% interval."""
    return _stats(_check_resolved(samples))


def estimate_value(samples, lam: float) -> HittingStats:
    """Statistics of the per-episode discounted reward lambda^tau/(1-lambda)."""
    taus = _check_resolved(samples)
    return _stats(lam**taus / (1.0 - lam))


def pgf_estimate(samples, lam: float) -> float:
    """Sample mean of lambda^tau, tied to estimate_value by construction:
    (1 - lambda) * estimate_value(samples, lam).mean equals this exactly."""
    return (1.0 - lam) * estimate_value(samples, lam).mean
