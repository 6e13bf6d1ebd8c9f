"""Brute-force convex-roof search over decompositions of rho(p).

Every n-state decomposition of a rank-2 state is generated by an n x 2
isometry ``U`` acting on the subnormalised eigenvectors ``sqrt(lambda_j)|e_j>``
(here ``e_0 = GHZ`` with ``lambda_0 = p`` and ``e_1 = W``). The row phases of
``U`` are irrelevant, so the first column is kept real, leaving ``3 n`` real
parameters. A derivative-free local search runs from seeded random starts.
Phases are not restricted, so the search can find decompositions that the
closed-form branches do not consider.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ._kernels import ensemble_objective, isometry_rays
from .core import GhzwRay, NumericalContractError, WeightedEnsemble
from .measures import GHZ_VALUE, W_VALUES, MeasureKind
from .roof import ensemble_value, verify_decomposition

RECONSTRUCTION_TOL = 1e-8
_NM_OPTIONS = {"xatol": 1e-11, "fatol": 1e-14, "maxfev": 6000, "adaptive": True}
_POLISH_ROUNDS = 8


@dataclass(frozen=True)
class SearchResult:
    value: float
    ensemble: WeightedEnsemble
    restarts_used: int
    converged: bool


def _objective(kind: MeasureKind, p: float, n: int):
    use_pi = kind is MeasureKind.PI
    return lambda x: ensemble_objective(x, n, p, use_pi)


def _local_search(f, x0):
    res = minimize(f, x0, method="Nelder-Mead", options=_NM_OPTIONS)
    x, fx = res.x, res.fun
    # restarting the simplex around the incumbent escapes premature collapse
    for _ in range(_POLISH_ROUNDS):
        res = minimize(f, x, method="Nelder-Mead", options=_NM_OPTIONS)
        if res.fun >= fx - 1e-13:
            return x, fx, True
        x, fx = res.x, res.fun
    return x, fx, False


def _ensemble(x: np.ndarray, n: int, p: float) -> WeightedEnsemble:
    w, q, theta, ok = isometry_rays(x, n, p)
    if not ok:
        raise NumericalContractError("search ended on a degenerate isometry")
    keep = w > 1e-15
    w = w[keep] / w[keep].sum()
    return WeightedEnsemble(tuple((float(wi), GhzwRay(qi, ti)) for wi, qi, ti in zip(w, q[keep], theta[keep])))


def oracle_search(kind: MeasureKind | str, p: float, n_states: int = 4, restarts: int = 64,
                  seed: int = 0) -> SearchResult:
    """Minimise sum_i w_i E(psi_i) over ``n_states``-element decompositions of rho(p).

    Deterministic for a given ``seed``; ties between restarts go to the lowest
    restart index.
    """
    kind = MeasureKind.parse(kind)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if n_states not in (2, 3, 4):
        raise ValueError(f"n_states must be 2, 3 or 4, got {n_states!r}")
    if restarts < 1:
        raise ValueError("restarts must be positive")

    if p in (0.0, 1.0):
        # a pure state has only the trivial decomposition
        ray = GhzwRay(p)
        value = GHZ_VALUE if p == 1.0 else W_VALUES[kind]
        return SearchResult(value, WeightedEnsemble(((1.0, ray),)), 0, True)

    rng = np.random.default_rng(seed)
    f = _objective(kind, p, n_states)
    best_x, best_f, best_ok = None, math.inf, False
    for _ in range(restarts):
        x0 = rng.normal(size=3 * n_states)
        x, fx, ok = _local_search(f, x0)
        if fx < best_f:
            best_x, best_f, best_ok = x, fx, ok

    ensemble = _ensemble(best_x, n_states, p)
    residual = verify_decomposition(ensemble, p)
    if residual > RECONSTRUCTION_TOL:
        raise NumericalContractError(f"oracle ensemble misses rho(p) by {residual:.3e}")
    value = ensemble_value(ensemble, kind)
    return SearchResult(value, ensemble, restarts, best_ok)
