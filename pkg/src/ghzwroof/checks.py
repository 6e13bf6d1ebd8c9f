"""Invariant groups run by ``ghzwroof verify``.

Each group returns a :class:`CheckResult`; ``run_checks`` collects them in a
fixed order. Grids are kept moderate so the whole run takes a few seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    GhzwRay,
    density,
    eigen_residuals,
    hermitian_eigenvalues,
    partial_trace,
    partial_transpose_a,
    superpose,
)
from .measures import (
    MeasureKind,
    measure_pure_batch,
    numeric_charpoly,
    quartic_coefficients,
    tangle_closed,
    tangle_vector,
)
from .roof import (
    branch_derivative,
    branch_derivative_fd,
    build_decomposition,
    find_critical_points,
    kink_points,
    mixed_closed,
    pi_mixed_closed,
    roof_value,
    tangle_mixed_closed,
    triple_spread,
    verify_decomposition,
)

TWO_PI_3 = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _grid(n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    return np.linspace(lo, hi, n)


def check_marginals(n: int = 12) -> CheckResult:
    worst_sym, worst_eig = 0.0, 0.0
    for q in _grid(n):
        for t in _grid(n, 0.0, 2 * math.pi):
            rho = density(superpose(GhzwRay(q, t)))
            pairs = [partial_trace(rho, k) for k in ("ab", "bc", "ac")]
            singles = [partial_trace(rho, k) for k in "abc"]
            worst_sym = max(worst_sym, *(np.max(np.abs(m - pairs[0])) for m in pairs),
                            *(np.max(np.abs(m - singles[0])) for m in singles))
            for m in (pairs[0], partial_transpose_a(pairs[0]), singles[0]):
                worst_eig = max(worst_eig, *eigen_residuals(m))
    ok = worst_sym <= 1e-12 and worst_eig <= 1e-10
    return CheckResult("marginal symmetry + eigen contract", ok,
                       f"max marginal mismatch {worst_sym:.2e}, max eigen residual {worst_eig:.2e}")


def check_periodicity(n: int = 50) -> CheckResult:
    q, t = np.meshgrid(_grid(n), _grid(n, 0.0, 2 * math.pi), indexing="ij")
    worst = 0.0
    for kind in MeasureKind:
        a = measure_pure_batch(kind, q, t)
        b = measure_pure_batch(kind, q, np.mod(t + TWO_PI_3, 2 * math.pi))
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("periodicity in theta (2 pi / 3)", worst <= 1e-10, f"max deviation {worst:.2e}")


def check_phase_minimum(nq: int = 50, nt: int = 200) -> CheckResult:
    thetas = np.linspace(0.0, 2 * math.pi, nt, endpoint=False)
    worst = 0.0
    for kind in MeasureKind:
        for q in _grid(nq):
            vals = measure_pure_batch(kind, np.full(nt, q), thetas)
            at_zero = float(measure_pure_batch(kind, q, 0.0))
            worst = max(worst, at_zero - float(vals.min()))
    return CheckResult("theta = 0 minimises both measures", worst <= 1e-12,
                       f"max excess of theta=0 over grid minimum {worst:.2e}")


def check_pure_dominance(nq: int = 101, nt: int = 121) -> CheckResult:
    q, t = np.meshgrid(_grid(nq), _grid(nt, 0.0, 2 * math.pi), indexing="ij")
    gap = measure_pure_batch(MeasureKind.PI, q, t) - measure_pure_batch(MeasureKind.TANGLE, q, t)
    return CheckResult("pi >= tangle on pure states", bool(gap.min() >= -1e-10), f"min(pi - tangle) {gap.min():.3e}")


def check_tangle_oracle(n: int = 50) -> CheckResult:
    worst = 0.0
    for q in _grid(n):
        for t in _grid(n, 0.0, 2 * math.pi):
            ray = GhzwRay(q, t)
            worst = max(worst, abs(tangle_vector(superpose(ray)) - tangle_closed(ray)))
    return CheckResult("tangle closed form vs amplitude invariant", worst <= 1e-10, f"max deviation {worst:.2e}")


def check_reconstruction(n: int = 21) -> CheckResult:
    worst_r, worst_s = 0.0, 0.0
    for kind in MeasureKind:
        for p in _grid(n):
            e = build_decomposition(kind, p)
            worst_r = max(worst_r, verify_decomposition(e, p))
            worst_s = max(worst_s, triple_spread(e, kind))
    ok = worst_r <= 1e-10 and worst_s <= 1e-10
    return CheckResult("decomposition reconstruction", ok,
                       f"max residual {worst_r:.2e}, max equal-entanglement spread {worst_s:.2e}")


def gradient_samples(kind: MeasureKind, which: int, n: int = 20, seed: int = 2024,
                     h: float = 1e-5) -> list[tuple[float, float]]:
    """Deterministic (p, q) points inside a branch window, away from the tangle kink."""
    rng = np.random.default_rng(seed + (0 if which == 40 else 1) + (10 if kind is MeasureKind.PI else 0))
    kinks = kink_points(kind)
    out = []
    while len(out) < n:
        q = float(rng.uniform(0.05, 0.95))
        if any(abs(q - k) < 0.02 for k in kinks):
            continue
        if which == 40:
            p = float(rng.uniform(0.05, q - 2 * h))
        else:
            p = float(rng.uniform(q + 2 * h, 0.95 if q + 2 * h < 0.95 else 1.0))
        out.append((p, q))
    return out


def check_gradients(derivative: Callable = branch_derivative, h: float = 1e-5, rtol: float = 1e-5) -> CheckResult:
    worst = 0.0
    for kind in MeasureKind:
        for which in (40, 41):
            for p, q in gradient_samples(kind, which, h=h):
                a = derivative(kind, p, q, which)
                fd = branch_derivative_fd(kind, p, q, which, h)
                worst = max(worst, abs(a - fd) / max(abs(a), abs(fd)))
    return CheckResult("analytic branch derivatives vs finite differences", worst <= rtol,
                       f"max relative error {worst:.2e}")


def check_quartic(n: int = 21) -> CheckResult:
    worst_res, worst_coef = 0.0, 0.0
    for q in _grid(n):
        for t in _grid(n, 0.0, 2 * math.pi):
            m = partial_transpose_a(partial_trace(density(superpose(GhzwRay(q, t))), "ab"))
            poly = quartic_coefficients(q, math.cos(3 * t))
            lam = hermitian_eigenvalues(m)
            worst_res = max(worst_res, float(np.max(np.abs(poly(lam)))))
            worst_coef = max(worst_coef, float(np.max(np.abs(np.subtract(poly, numeric_charpoly(m))))))
    ok = worst_res <= 1e-8
    note = "closed-form quartic agrees with the matrix spectrum" if ok else \
        "closed-form quartic disagrees; the partial-transpose matrix is authoritative"
    return CheckResult("characteristic quartic cross-check", ok,
                       f"max residual {worst_res:.2e}, max coefficient gap {worst_coef:.2e}; {note}")


def check_mixture_curves(n: int = 1001) -> CheckResult:
    ps = _grid(n)
    tau = np.array([tangle_mixed_closed(p) for p in ps])
    pi = np.array([pi_mixed_closed(p) for p in ps])
    monotone = bool(np.all(np.diff(tau) >= -1e-12))
    i = int(np.argmin(pi))
    interior = 0 < i < n - 1 and pi[i] < min(pi[0], pi[-1])
    dominance = bool(np.all(pi >= tau - 1e-12))
    consistent = max(
        max(abs(roof_value(k, p) - mixed_closed(k, p)) for p in ps[::10]) for k in MeasureKind
    )
    cont = 0.0
    for kind in MeasureKind:
        cp = find_critical_points(kind)
        for q in (cp.q_star0, cp.q_star1):
            cont = max(cont, abs(mixed_closed(kind, q - 1e-12) - mixed_closed(kind, q + 1e-12)))
    ok = monotone and interior and dominance and consistent <= 1e-9 and cont <= 1e-8
    return CheckResult(
        "mixture roof curves", ok,
        f"tangle monotone={monotone}, pi interior min at p={ps[i]:.3f} ({pi[i]:.6f}), "
        f"pi>=tangle={dominance}, roof-vs-closed {consistent:.1e}, jump at q* {cont:.1e}",
    )


def run_checks(derivative: Callable = branch_derivative) -> list[CheckResult]:
    return [
        check_marginals(),
        check_periodicity(),
        check_phase_minimum(),
        check_pure_dominance(),
        check_tangle_oracle(),
        check_reconstruction(),
        check_gradients(derivative),
        check_quartic(),
        check_mixture_curves(),
    ]
