"""Exact discounted analysis of the two stripe-stripe policy families.

Walks through the analysis layer: closed-form values, the critical discount
factor 15/17 located two independent ways, Bellman residuals certifying
optimality on each side, and the hitting-time limit that connects discounted
values to expected absorption times.

Run:  python3 demos/02_exact_analysis.py
"""

from isingctrl.analysis import (
    analytic_value_x,
    bellman_residual,
    find_lambda_crossing,
    hitting_time_moments,
    policy_evaluation,
    x_family_rule,
)
from isingctrl.auxmdp import build_stripe_stripe_mdp

N = 32
LAMBDA_C = 15 / 17


def main():
    mdp = build_stripe_stripe_mdp(N)
    a1, a2 = x_family_rule(1), x_family_rule(2)

    print("closed form vs linear solve (family 1, discount 1/2):")
    table = policy_evaluation(mdp, a1, 0.5)
    for s in ((2, 0), (3, 0), (5, 5), (8, 8)):
        print(f"  v{s}: solved {table[s]:.12f}  analytic {analytic_value_x(s, 0.5):.12f}")

    print("\ncritical discount factor:")
    crossing = find_lambda_crossing(mdp, a1, a2, (5, 5), (0.8, 0.95))
    print(f"  value crossing at state (5,5): {crossing:.6f}  (15/17 = {LAMBDA_C:.6f})")

    print("\nBellman residuals (0 means optimal):")
    for lam in (0.80, 0.95):
        print(f"  discount {lam}: family1 {bellman_residual(mdp, a1, lam):.3e}  "
              f"family2 {bellman_residual(mdp, a2, lam):.3e}")

    print("\nhitting-time limit 1/(1-l) - v(s) -> E[tau]:")
    lam = 0.999
    table = policy_evaluation(mdp, a1, lam)
    for s in ((2, 0), (13, 13)):
        pair = hitting_time_moments(mdp, a1, (0, 0), s)
        gap = 1 / (1 - lam) - table[s]
        print(f"  state {s}: gap {gap:.5f}, exact E[tau] {pair.e_tau:.5f}, "
              f"E[tau(tau-1)] {pair.e_tau_factorial2:.3f}")


if __name__ == "__main__":
    main()
