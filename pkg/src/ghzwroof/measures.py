"""Pure-state tripartite measures on the GHZ/W family.

Three-tangle comes in two independent flavours: the closed form in ``(q,
theta)`` and the degree-4 amplitude invariant evaluated on any 8-vector.
Three-pi is always assembled from matrices (reduced states, partial transpose,
Jacobi spectrum); the printed quartic in ``(q, cos 3 theta)`` is only used as a
cross-check.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from ._kernels import pi_kernel
from .core import (
    GhzwRay,
    density,
    hermitian_eigh,
    hermitian_eigenvalues,
    make_ghz,
    make_w,
    partial_trace,
    partial_transpose_a,
    superpose,
)

SQRT6 = math.sqrt(6.0)


class MeasureKind(enum.Enum):
    TANGLE = "tangle"
    PI = "pi"

    @classmethod
    def parse(cls, value: "MeasureKind | str") -> "MeasureKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown measure {value!r}; expected 'tangle' or 'pi'") from None


class CharPolyCoeffs(NamedTuple):
    """Monic quartic lambda^4 + c3 lambda^3 + c2 lambda^2 + c1 lambda + c0."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, lam):
        lam = np.asarray(lam)
        return (((lam + self.c3) * lam + self.c2) * lam + self.c1) * lam + self.c0


# Endpoint values, shared by both measures at GHZ.
GHZ_VALUE = 1.0
# N_ab(W) = (sqrt5 - 1)/3 and C_a(bc)(W)^2 = 8/9, so pi(W) = 8/9 - 2 N^2.
W_NEGATIVITY = (math.sqrt(5.0) - 1.0) / 3.0
W_VALUES = {MeasureKind.TANGLE: 0.0, MeasureKind.PI: 4.0 / 9.0 * (math.sqrt(5.0) - 1.0)}


# --- three-tangle ---------------------------------------------------------


def _tangle_argument(q, theta):
    q = np.asarray(q, dtype=float)
    return q * q - 8.0 / 9.0 * np.exp(3j * np.asarray(theta)) * np.sqrt(6.0 * q * (1.0 - q) ** 3)


def tangle_closed(ray: GhzwRay) -> float:
    return float(abs(_tangle_argument(ray.q, ray.theta)))


def tangle_closed_batch(q, theta=0.0) -> np.ndarray:
    return np.abs(_tangle_argument(np.clip(q, 0.0, 1.0), theta))


def tangle_signed(q) -> np.ndarray:
    """Real argument of the modulus at theta = 0; its sign flip marks the tangle kink."""
    return np.real(_tangle_argument(q, 0.0))


def tangle_vector(psi: np.ndarray) -> float:
    """Three-tangle 4|d1 - 2 d2 + 4 d3| from the eight amplitudes of any pure state."""
    a = np.asarray(psi, dtype=complex)
    if a.shape[-1] != 8:
        raise ValueError("expected three-qubit amplitudes of length 8")
    a000, a001, a010, a011, a100, a101, a110, a111 = np.moveaxis(a, -1, 0)
    d1 = (a000 * a111) ** 2 + (a001 * a110) ** 2 + (a010 * a101) ** 2 + (a100 * a011) ** 2
    d2 = (
        a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001
    )
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    out = 4.0 * np.abs(d1 - 2.0 * d2 + 4.0 * d3)
    return float(out) if out.ndim == 0 else out


def tangle_dq(q: float, theta: float = 0.0) -> float:
    """d tau / d q at fixed theta (undefined on the zero set of tau)."""
    z = _tangle_argument(q, theta)
    dz = 2.0 * q - 8.0 / 9.0 * np.exp(3j * theta) * SQRT6 * (
        (1.0 - q) ** 1.5 / (2.0 * math.sqrt(q)) - 1.5 * math.sqrt(q * (1.0 - q))
    )
    return float(np.real(np.conj(z) * dz) / abs(z))


# --- concurrence, negativity, three-pi ------------------------------------


def concurrence_a_bc(ray: GhzwRay) -> float:
    """sqrt(2 (1 - Tr rho_a^2)) from the single-qubit marginal."""
    rho_a = partial_trace(density(superpose(ray)), "a")
    purity = float(np.real(np.trace(rho_a @ rho_a)))
    return math.sqrt(max(2.0 * (1.0 - purity), 0.0))


def concurrence_a_bc_closed(q: float) -> float:
    return math.sqrt(5.0 / 9.0 * q * q - 4.0 / 9.0 * q + 8.0 / 9.0)


def _negativity_from(m: np.ndarray) -> float:
    return float(np.sum(np.abs(hermitian_eigenvalues(m)))) - 1.0


def negativity_ab(ray: GhzwRay) -> float:
    """||rho_ab^{T_a}||_1 - 1 for the family member ``ray``."""
    rho_ab = partial_trace(density(superpose(ray)), "ab")
    return _negativity_from(partial_transpose_a(rho_ab))


def negativity_a_bc(ray: GhzwRay) -> float:
    """Negativity across the a|bc cut of the pure state itself."""
    return _negativity_from(partial_transpose_a(density(superpose(ray))))


def pi_pure(ray: GhzwRay) -> float:
    """Three-pi using the permutation symmetry of the family: C_a(bc)^2 - 2 N_ab^2."""
    c = concurrence_a_bc(ray)
    n = negativity_ab(ray)
    return c * c - 2.0 * n * n


def pi_pure_symmetric(ray: GhzwRay) -> float:
    """Three-pi from all three one-vs-two cuts and all six pair negativities.

    Does not assume the marginals are equal; used to confirm that shortcut.
    """
    rho = density(superpose(ray))
    total = 0.0
    for party, pairs in (("a", ("ab", "ac")), ("b", ("ab", "bc")), ("c", ("ac", "bc"))):
        r1 = partial_trace(rho, party)
        n_cut2 = 2.0 * (1.0 - float(np.real(np.trace(r1 @ r1))))
        n_pairs2 = sum(_negativity_from(partial_transpose_a(partial_trace(rho, p))) ** 2 for p in pairs)
        total += n_cut2 - n_pairs2
    return total / 3.0


def pi_pure_batch(q, theta=0.0) -> np.ndarray:
    """Vectorised :func:`pi_pure` over broadcast ``(q, theta)`` arrays."""
    q, theta = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(theta, dtype=float))
    flat = pi_kernel(np.ascontiguousarray(q.ravel()), np.ascontiguousarray(theta.ravel()))
    return flat.reshape(q.shape)


def pi_dq(q: float, theta: float = 0.0) -> float:
    """d pi / d q at fixed theta via first-order perturbation of the spectra.

    Requires a non-degenerate partial-transpose spectrum with no zero
    eigenvalue, which holds for 0 < q < 1.
    """
    ray = GhzwRay(q, theta)
    psi = superpose(ray)
    dpsi = make_ghz() / (2.0 * math.sqrt(q)) + np.exp(1j * ray.theta) * make_w() / (2.0 * math.sqrt(1.0 - q))
    rho = np.outer(psi, psi.conj())
    drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())

    rho_a, drho_a = partial_trace(rho, "a"), partial_trace(drho, "a")
    dc2 = -4.0 * float(np.real(np.trace(rho_a @ drho_a)))

    m = partial_transpose_a(partial_trace(rho, "ab"))
    dm = partial_transpose_a(partial_trace(drho, "ab"))
    w, v = hermitian_eigh(m)
    dlam = np.real(np.einsum("ik,ij,jk->k", v.conj(), dm, v))
    n = float(np.sum(np.abs(w))) - 1.0
    dn = float(np.sum(np.sign(w) * dlam))
    return dc2 - 4.0 * n * dn


# --- characteristic polynomial cross-check --------------------------------


def quartic_coefficients(q: float, cos3theta: float) -> CharPolyCoeffs:
    """Closed-form characteristic polynomial of rho_ab^{T_a} on the family."""
    if not 0.0 <= q <= 1.0 or not -1.0 <= cos3theta <= 1.0:
        raise ValueError("need q in [0, 1] and cos3theta in [-1, 1]")
    s = (q * (1.0 - q)) ** 1.5
    c2 = 5.0 / 36.0 * q**2 - q / 9.0 + 2.0 / 9.0
    c1 = s / (3.0 * SQRT6) * cos3theta - 7.0 / 27.0 * q**3 + 7.0 / 18.0 * q**2 - q / 6.0 + 1.0 / 27.0
    c0 = (
        -q * s / (6.0 * SQRT6) * cos3theta
        - 41.0 / 648.0 * q**4
        + 149.0 / 648.0 * q**3
        - 13.0 / 54.0 * q**2
        + 7.0 / 81.0 * q
        - 1.0 / 81.0
    )
    return CharPolyCoeffs(-1.0, c2, c1, c0)


def numeric_charpoly(m: np.ndarray) -> CharPolyCoeffs:
    """Quartic coefficients of det(lambda I - m) from the Jacobi spectrum (Vieta)."""
    coeffs = np.real(np.poly(hermitian_eigenvalues(m)))
    if coeffs.shape != (5,):
        raise ValueError("expected a 4x4 matrix")
    return CharPolyCoeffs(*map(float, coeffs[1:]))


# --- dispatch --------------------------------------------------------------


def measure_pure(kind: MeasureKind | str, ray: GhzwRay) -> float:
    kind = MeasureKind.parse(kind)
    return tangle_closed(ray) if kind is MeasureKind.TANGLE else pi_pure(ray)


def measure_pure_batch(kind: MeasureKind | str, q, theta=0.0) -> np.ndarray:
    kind = MeasureKind.parse(kind)
    return tangle_closed_batch(q, theta) if kind is MeasureKind.TANGLE else pi_pure_batch(q, theta)


def measure_dq(kind: MeasureKind | str, q: float, theta: float = 0.0) -> float:
    kind = MeasureKind.parse(kind)
    return tangle_dq(q, theta) if kind is MeasureKind.TANGLE else pi_dq(q, theta)
