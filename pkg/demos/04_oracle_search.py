"""Brute-force check of the roof: search over all four-state decompositions.

Every decomposition of the rank-2 mixture comes from an isometry acting on its
eigenvectors; a seeded Nelder-Mead search over isometries should land on the
closed-form roof value and never beat it.
"""
from ghzwroof.oracle import oracle_search
from ghzwroof.roof import mixed_closed

for kind in ("tangle", "pi"):
    for p in (0.3, 0.7):
        res = oracle_search(kind, p, n_states=4, restarts=16, seed=0)
        print(f"{kind:6s} p={p}: search {res.value:.12f}  closed form {mixed_closed(kind, p):.12f}  "
              f"({len(res.ensemble)} states, converged={res.converged})")
        for w, ray in res.ensemble:
            print(f"    weight {w:.5f}  q {ray.q:.5f}  theta {ray.theta:.5f}")
