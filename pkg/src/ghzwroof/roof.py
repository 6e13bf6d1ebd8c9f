"""Convex roof of a pure-state measure over the GHZ/W mixture rho(p).

Three candidate decompositions compete:

* ``opt3``  -- three equal-weight copies of ``|p, theta*>`` at phases
  ``theta* + 2 pi n / 3``; their GHZ/W coherences cancel.
* ``opt40`` -- that triple at ``q*0`` plus a ``|W>`` vertex, valid for
  ``p <= q*0``.
* ``opt41`` -- that triple at ``q*1`` plus a ``|GHZ>`` vertex, valid for
  ``p >= q*1``.

``q*0`` and ``q*1`` minimise the two four-state branches over ``q`` and do not
depend on ``p``. For both measures handled here ``theta* = 0``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import (
    GhzwRay,
    NumericalContractError,
    WeightedEnsemble,
    ensemble_density,
    mixture_density,
    partial_trace,
    partial_transpose_a,
    hermitian_eigenvalues,
    density,
    superpose,
)
from .measures import (
    GHZ_VALUE,
    W_VALUES,
    MeasureKind,
    measure_dq,
    measure_pure,
    measure_pure_batch,
    tangle_signed,
)

THETA_STAR = 0.0
PHASES = (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)

# Closed-form critical points of the three-tangle branches.
TANGLE_Q_STAR0 = 4.0 * 2.0 ** (1.0 / 3.0) / (3.0 + 4.0 * 2.0 ** (1.0 / 3.0))
TANGLE_Q_STAR1 = 0.5 + 3.0 / 310.0 * math.sqrt(465.0)

Q_LO, Q_HI = 1e-9, 1.0 - 1e-9
GOLDEN_TOL = 1e-10
BOUNDARY_TOL = 1e-8


class DomainError(ValueError):
    """A branch was evaluated outside its window of validity in p."""


@dataclass(frozen=True)
class CriticalPoints:
    q_star0: float
    q_star1: float
    theta_star: float
    measure: MeasureKind

    def __post_init__(self):
        if not 0.0 < self.q_star0 <= self.q_star1 < 1.0:
            raise NumericalContractError(
                f"critical points out of order: q*0={self.q_star0!r}, q*1={self.q_star1!r}"
            )


@dataclass(frozen=True)
class RoofBranches:
    e_opt3: float
    e_opt40: Optional[float] = None
    e_opt41: Optional[float] = None

    def best(self) -> tuple[float, str]:
        """Smallest available branch; ties go to the simpler decomposition."""
        cands = [(self.e_opt3, "opt3")]
        if self.e_opt40 is not None:
            cands.append((self.e_opt40, "opt40"))
        if self.e_opt41 is not None:
            cands.append((self.e_opt41, "opt41"))
        value, label = cands[0]
        for v, lab in cands[1:]:
            if v < value - 1e-12:
                value, label = v, lab
        return value, label


def _check_p(p: float) -> float:
    p = float(p)
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return min(max(p, 0.0), 1.0)


# --- branch functions ------------------------------------------------------


def _pure_at(kind: MeasureKind, q):
    return measure_pure_batch(kind, q, THETA_STAR)


def _branch40(kind: MeasureKind, p, q):
    e_w = W_VALUES[kind]
    return e_w + p * (_pure_at(kind, q) - e_w) / q


def _branch41(kind: MeasureKind, p, q):
    return GHZ_VALUE - (1.0 - p) * (GHZ_VALUE - _pure_at(kind, q)) / (1.0 - q)


def e_opt3(kind: MeasureKind | str, p: float) -> float:
    kind = MeasureKind.parse(kind)
    return measure_pure(kind, GhzwRay(_check_p(p), THETA_STAR))


def e_opt40(kind: MeasureKind | str, p: float, q: float) -> float:
    """(q - p)/q E(W) + p/q E(|q, theta*>), defined for 0 <= p <= q < 1."""
    kind = MeasureKind.parse(kind)
    p = _check_p(p)
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q!r}")
    if p > q + 1e-12:
        raise DomainError(f"opt40 branch needs p <= q, got p={p!r}, q={q!r}")
    return float(_branch40(kind, min(p, q), q))


def e_opt41(kind: MeasureKind | str, p: float, q: float) -> float:
    """(p - q)/(1 - q) E(GHZ) + (1 - p)/(1 - q) E(|q, theta*>), defined for q <= p <= 1."""
    kind = MeasureKind.parse(kind)
    p = _check_p(p)
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q!r}")
    if p < q - 1e-12:
        raise DomainError(f"opt41 branch needs p >= q, got p={p!r}, q={q!r}")
    return float(_branch41(kind, max(p, q), q))


def branch_derivative(kind: MeasureKind | str, p: float, q: float, which: int) -> float:
    """Analytic d/dq of the opt40 (``which=40``) or opt41 (``which=41``) branch."""
    kind = MeasureKind.parse(kind)
    e = measure_pure(kind, GhzwRay(q, THETA_STAR))
    de = measure_dq(kind, q, THETA_STAR)
    if which == 40:
        e_w = W_VALUES[kind]
        return p * (e_w / q**2 - e / q**2 + de / q)
    if which == 41:
        return (1.0 - p) * (-GHZ_VALUE / (1.0 - q) ** 2 + e / (1.0 - q) ** 2 + de / (1.0 - q))
    raise ValueError(f"which must be 40 or 41, got {which!r}")


def branch_derivative_q_scaled(kind: MeasureKind | str, p: float, q: float, which: int) -> float:
    """Variant of :func:`branch_derivative` whose opt40 slope term is ``q dE/dq``.

    This form is wrong; it exists so the gradient check can demonstrate that
    it catches it.
    """
    kind = MeasureKind.parse(kind)
    if which != 40:
        return branch_derivative(kind, p, q, which)
    e = measure_pure(kind, GhzwRay(q, THETA_STAR))
    de = measure_dq(kind, q, THETA_STAR)
    e_w = W_VALUES[kind]
    return p * (e_w / q**2 - e / q**2 + q * de)


def branch_derivative_fd(kind: MeasureKind | str, p: float, q: float, which: int, h: float = 1e-5) -> float:
    """Central difference of a four-state branch in q."""
    kind = MeasureKind.parse(kind)
    if which == 40:
        f = e_opt40
    elif which == 41:
        f = e_opt41
    else:
        raise ValueError(f"which must be 40 or 41, got {which!r}")
    return (f(kind, p, q + h) - f(kind, p, q - h)) / (2.0 * h)


# --- one-dimensional minimisation -------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = GOLDEN_TOL,
                   max_iter: int = 500) -> float:
    """Minimiser of a unimodal ``f`` on ``[a, b]`` to bracket width ``tol``."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    else:
        raise NumericalContractError(f"golden-section search stalled on [{a!r}, {b!r}]")
    return c if fc < fd else d


def _bisect_root(g: Callable[[float], float], a: float, b: float) -> float:
    ga = g(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        if m in (a, b):
            break
        gm = g(m)
        if gm == 0.0:
            return m
        if (gm > 0.0) == (ga > 0.0):
            a, ga = m, gm
        else:
            b = m
    return 0.5 * (a + b)


@functools.lru_cache(maxsize=None)
def kink_points(kind: MeasureKind) -> tuple[float, ...]:
    """Interior q where ``E(|q, theta*>)`` is not differentiable.

    The tangle is a modulus, so it kinks where its real argument changes sign.
    Three-pi is smooth in q on the theta* line.
    """
    if kind is not MeasureKind.TANGLE:
        return ()
    grid = np.linspace(Q_LO, Q_HI, 2001)
    sign = np.sign(tangle_signed(grid))
    roots = []
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        roots.append(_bisect_root(lambda x: float(tangle_signed(x)), grid[i], grid[i + 1]))
    return tuple(roots)


def minimize_branch(f_vec: Callable, kinks=(), lo: float = Q_LO, hi: float = Q_HI,
                    grid: int = 401, tol: float = GOLDEN_TOL) -> float:
    """Global minimiser of a 1-D branch: grid bracket, golden section, then kinks.

    ``f_vec`` must accept numpy arrays. Kink locations are evaluated directly
    so a minimum sitting on a non-differentiable point is not lost.
    """
    qs = np.linspace(lo, hi, grid)
    vals = np.asarray(f_vec(qs), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalContractError("branch objective is not finite on the search grid")
    i = int(np.argmin(vals))
    a, b = qs[max(i - 1, 0)], qs[min(i + 1, grid - 1)]
    f = lambda x: float(f_vec(np.array([x]))[0])  # noqa: E731
    cands = [qs[i], golden_section(f, a, b, tol)]
    cands += [k for k in kinks if lo <= k <= hi]
    vals = [f(x) for x in cands]
    best = int(np.argmin(vals))
    return float(cands[best])


@functools.lru_cache(maxsize=None)
def _critical_points(kind: MeasureKind, p_ref0: float, p_ref1: float) -> CriticalPoints:
    kinks = kink_points(kind)
    q0 = minimize_branch(lambda q: _branch40(kind, p_ref0, q), kinks)
    q1 = minimize_branch(lambda q: _branch41(kind, p_ref1, q), kinks)
    return CriticalPoints(q0, q1, THETA_STAR, kind)


def find_critical_points(kind: MeasureKind | str, p_ref0: float = 0.3, p_ref1: float = 0.3) -> CriticalPoints:
    """Minimisers q*0, q*1 of the opt40 and opt41 branches.

    The branches are affine in p with a p-free q-dependence, so ``p_ref0`` and
    ``p_ref1`` only scale the objective; the search covers all of (0, 1).
    """
    kind = MeasureKind.parse(kind)
    if not 0.0 < p_ref0 <= 1.0 or not 0.0 <= p_ref1 < 1.0:
        raise ValueError("reference p must keep the branch q-dependence non-trivial")
    return _critical_points(kind, float(p_ref0), float(p_ref1))


# --- the roof --------------------------------------------------------------


def roof_branches(kind: MeasureKind | str, p: float) -> RoofBranches:
    kind = MeasureKind.parse(kind)
    p = _check_p(p)
    cp = find_critical_points(kind)
    e40 = e_opt40(kind, p, cp.q_star0) if p <= cp.q_star0 + 1e-12 else None
    e41 = e_opt41(kind, p, cp.q_star1) if p >= cp.q_star1 - 1e-12 else None
    return RoofBranches(e_opt3(kind, p), e40, e41)


def roof_evaluate(kind: MeasureKind | str, p: float) -> tuple[float, str]:
    """(roof value, winning branch label) for rho(p)."""
    return roof_branches(kind, p).best()


def roof_value(kind: MeasureKind | str, p: float) -> float:
    return roof_evaluate(kind, p)[0]


def tangle_mixed_closed(p: float) -> float:
    """Piecewise closed form of the three-tangle roof."""
    p = _check_p(p)
    q0, q1 = TANGLE_Q_STAR0, TANGLE_Q_STAR1
    if p <= q0:
        return p / q0 * (-q0**2 + 8.0 / 9.0 * math.sqrt(6.0 * q0 * (1.0 - q0) ** 3))
    if p < q1:
        return p**2 - 8.0 / 9.0 * math.sqrt(6.0 * p * (1.0 - p) ** 3)
    return (p - q1) / (1.0 - q1) + (1.0 - p) / (1.0 - q1) * (
        q1**2 - 8.0 / 9.0 * math.sqrt(6.0 * q1 * (1.0 - q1) ** 3)
    )


def _pi_from_spectrum(q: float) -> float:
    lam = hermitian_eigenvalues(partial_transpose_a(partial_trace(density(superpose(GhzwRay(q, 0.0))), "ab")))
    return 5.0 / 9.0 * q**2 - 4.0 / 9.0 * q + 8.0 / 9.0 - 2.0 * (float(np.sum(np.abs(lam))) - 1.0) ** 2


def pi_mixed_closed(p: float) -> float:
    """Piecewise closed form of the three-pi roof.

    The spectrum ``lambda_i(q, cos 3 theta = 1)`` is taken from the Jacobi
    eigenvalues of the partial-transposed two-qubit marginal at theta = 0.
    """
    p = _check_p(p)
    cp = find_critical_points(MeasureKind.PI)
    q0, q1 = cp.q_star0, cp.q_star1
    if p <= q0:
        return (q0 - p) / q0 * 4.0 / 9.0 * (math.sqrt(5.0) - 1.0) + p / q0 * _pi_from_spectrum(q0)
    if p < q1:
        return _pi_from_spectrum(p)
    return (p - q1) / (1.0 - q1) + (1.0 - p) / (1.0 - q1) * _pi_from_spectrum(q1)


def mixed_closed(kind: MeasureKind | str, p: float) -> float:
    kind = MeasureKind.parse(kind)
    return tangle_mixed_closed(p) if kind is MeasureKind.TANGLE else pi_mixed_closed(p)


# --- decompositions --------------------------------------------------------


def _triple(q: float, weight: float) -> list[tuple[float, GhzwRay]]:
    return [(weight, GhzwRay(q, THETA_STAR + phi)) for phi in PHASES]


def build_decomposition(kind: MeasureKind | str, p: float) -> WeightedEnsemble:
    """The decomposition of rho(p) realising the winning roof branch."""
    kind = MeasureKind.parse(kind)
    p = _check_p(p)
    _, label = roof_evaluate(kind, p)
    cp = find_critical_points(kind)
    if label == "opt3":
        return WeightedEnsemble(tuple(_triple(p, 1.0 / 3.0)))
    if label == "opt40":
        q0 = cp.q_star0
        return WeightedEnsemble(tuple(_triple(q0, p / (3.0 * q0)) + [((q0 - p) / q0, GhzwRay(0.0))]))
    q1 = cp.q_star1
    return WeightedEnsemble(
        tuple(_triple(q1, (1.0 - p) / (3.0 * (1.0 - q1))) + [((p - q1) / (1.0 - q1), GhzwRay(1.0))])
    )


def verify_decomposition(e: WeightedEnsemble, p: float) -> float:
    """Max-norm distance between the ensemble's density matrix and rho(p)."""
    return float(np.max(np.abs(ensemble_density(e) - mixture_density(_check_p(p)))))


def triple_spread(e: WeightedEnsemble, kind: MeasureKind | str) -> float:
    """Spread of weight * entanglement across the non-vertex entries.

    Vertex entries (pure GHZ or W) are skipped; for an equal-weight phase
    triple the spread is zero.
    """
    kind = MeasureKind.parse(kind)
    terms = [w * measure_pure(kind, r) for w, r in e if 0.0 < r.q < 1.0]
    return float(max(terms) - min(terms)) if terms else 0.0


def ensemble_value(e: WeightedEnsemble, kind: MeasureKind | str) -> float:
    """Average entanglement sum_i w_i E(psi_i) of an ensemble."""
    kind = MeasureKind.parse(kind)
    return float(sum(w * measure_pure(kind, r) for w, r in e))
