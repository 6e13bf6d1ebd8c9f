"""Locating the critical points that split the convex roof into three regimes.

Below q*0 the optimal ensemble mixes a W vertex with a phase triple at q*0;
above q*1 it mixes a GHZ vertex with a triple at q*1; in between the triple at
q = p alone is optimal.
"""
from ghzwroof.roof import (
    TANGLE_Q_STAR0,
    TANGLE_Q_STAR1,
    branch_derivative,
    find_critical_points,
)

for kind in ("tangle", "pi"):
    cp = find_critical_points(kind)
    print(f"{kind:6s}  q*0 = {cp.q_star0:.10f}   q*1 = {cp.q_star1:.10f}   theta* = {cp.theta_star}")

print(f"\nanalytic tangle values: q*0 = {TANGLE_Q_STAR0:.10f}, q*1 = {TANGLE_Q_STAR1:.10f}")

# The search does not depend on the reference p used to build the branch objective.
for p_ref in (0.1, 0.3, 0.5):
    cp = find_critical_points("pi", p_ref, p_ref)
    print(f"p_ref = {p_ref}: pi q*0 = {cp.q_star0:.12f}, q*1 = {cp.q_star1:.12f}")

cp = find_critical_points("pi")
print("\nbranch slopes at the pi critical points (should vanish):")
print("  d E40/dq at q*0:", branch_derivative("pi", 0.3, cp.q_star0, 40))
print("  d E41/dq at q*1:", branch_derivative("pi", 0.9, cp.q_star1, 41))
