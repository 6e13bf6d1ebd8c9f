"""Roof curves of p|GHZ><GHZ| + (1-p)|W><W| and the decompositions behind them.

Pass --plot to draw both curves with matplotlib (optional dependency).
"""
import sys

import numpy as np

from ghzwroof.roof import (
    build_decomposition,
    ensemble_value,
    mixed_closed,
    roof_evaluate,
    verify_decomposition,
)

ps = np.linspace(0, 1, 1001)
tau = np.array([mixed_closed("tangle", p) for p in ps])
pi = np.array([mixed_closed("pi", p) for p in ps])

print("p     tangle      pi          branches")
for p in (0.0, 0.2, 0.5, 0.6, 0.65, 0.8, 0.95, 1.0):
    print(f"{p:<5} {mixed_closed('tangle', p):<11.8f} {mixed_closed('pi', p):<11.8f} "
          f"{roof_evaluate('tangle', p)[1]}/{roof_evaluate('pi', p)[1]}")

i = int(np.argmin(pi))
print(f"\nthe tangle roof vanishes up to p = {ps[np.nonzero(tau > 1e-12)[0][0] - 1]:.3f}")
print(f"the pi roof is smallest near p = {ps[i]:.3f}, value {pi[i]:.6f}")

# Each roof value is realised by an explicit ensemble reproducing rho(p).
e = build_decomposition("pi", 0.3)
print("\npi decomposition at p = 0.3:")
for w, ray in e:
    print(f"  weight {w:.6f}  q {ray.q:.6f}  theta {ray.theta:.6f}")
print(f"  reconstruction error {verify_decomposition(e, 0.3):.1e}, average pi {ensemble_value(e, 'pi'):.10f}")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    plt.plot(ps, tau, label="three-tangle")
    plt.plot(ps, pi, label="three-pi")
    plt.xlabel("p")
    plt.legend()
    plt.show()
