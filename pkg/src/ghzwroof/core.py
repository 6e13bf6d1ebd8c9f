"""Three-qubit states on the GHZ/W plane and the small dense linear algebra they need.

States are plain length-8 complex numpy arrays indexed by the basis label
``abc`` with qubit ``a`` most significant. Density matrices are plain complex
numpy arrays. Two-qubit matrices use the pair index ``2*i + j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ._jacobi import eigvalsh_batch, jacobi_eigh

TWO_PI = 2.0 * math.pi
HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-12
CLAMP_TOL = 1e-12


class NumericalContractError(ArithmeticError):
    """A numerical routine could not honour its stated tolerance."""


def _clamp_unit(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x) or x < -CLAMP_TOL or x > 1.0 + CLAMP_TOL:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return min(max(x, 0.0), 1.0)


@dataclass(frozen=True)
class GhzwRay:
    """Coordinates ``(q, theta)`` of sqrt(q)|GHZ> - sqrt(1-q) e^{i theta} |W>.

    ``theta`` is stored canonicalized to ``[0, 2*pi)``.
    """

    q: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q", _clamp_unit(self.q, "q"))
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise ValueError(f"theta must be finite, got {theta!r}")
        theta = math.fmod(theta, TWO_PI)
        if theta < 0.0:
            theta += TWO_PI
        if theta >= TWO_PI:
            theta = 0.0
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class GhzwMixture:
    """rho(p) = p|GHZ><GHZ| + (1-p)|W><W|."""

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", _clamp_unit(self.p, "p"))


@dataclass(frozen=True)
class WeightedEnsemble:
    """At most four weighted rays; weights non-negative and summing to one."""

    entries: tuple[tuple[float, GhzwRay], ...] = field(default_factory=tuple)

    def __post_init__(self):
        entries = tuple((float(w), r) for w, r in self.entries)
        if not 1 <= len(entries) <= 4:
            raise ValueError(f"an ensemble holds 1 to 4 states, got {len(entries)}")
        if any(w < 0.0 for w, _ in entries):
            raise ValueError("ensemble weights must be non-negative")
        total = sum(w for w, _ in entries)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"ensemble weights sum to {total!r}, expected 1")
        object.__setattr__(self, "entries", entries)

    @property
    def weights(self) -> list[float]:
        return [w for w, _ in self.entries]

    @property
    def rays(self) -> list[GhzwRay]:
        return [r for _, r in self.entries]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def make_ghz() -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[0] = psi[7] = 1.0 / math.sqrt(2.0)
    return psi


def make_w() -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[[1, 2, 4]] = 1.0 / math.sqrt(3.0)
    return psi


_GHZ = make_ghz()
_W = make_w()


def superpose(ray: GhzwRay) -> np.ndarray:
    """Amplitude vector of the family member at ``ray``."""
    return math.sqrt(ray.q) * _GHZ - math.sqrt(1.0 - ray.q) * np.exp(1j * ray.theta) * _W


def superpose_batch(q, theta) -> np.ndarray:
    """Vectorised :func:`superpose`; returns shape ``broadcast(q, theta).shape + (8,)``."""
    q, theta = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(theta, dtype=float))
    q = np.clip(q, 0.0, 1.0)
    a = np.sqrt(q)[..., None] * _GHZ
    b = (np.sqrt(1.0 - q) * np.exp(1j * theta))[..., None] * _W
    return a - b


def ray_of(psi: np.ndarray, tol: float = 1e-9) -> GhzwRay:
    """Project a state in span{GHZ, W} back to ``(q, theta)``, ignoring global phase.

    Raises ``ValueError`` if ``psi`` has weight outside the plane beyond ``tol``.
    """
    psi = np.asarray(psi, dtype=complex)
    alpha = np.vdot(_GHZ, psi)
    beta = np.vdot(_W, psi)
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    leak = np.linalg.norm(psi - alpha * _GHZ - beta * _W)
    if norm2 == 0.0 or leak > tol * math.sqrt(norm2):
        raise ValueError("state does not lie in the GHZ/W plane")
    q = abs(alpha) ** 2 / norm2
    if abs(alpha) == 0.0 or abs(beta) == 0.0:
        return GhzwRay(q, 0.0)
    # -sqrt(1-q) e^{i theta} / sqrt(q) = beta / alpha
    z = -beta * np.conj(alpha)
    return GhzwRay(q, math.atan2(z.imag, z.real))


def norm(psi: np.ndarray) -> float:
    return float(np.linalg.norm(psi))


def overlap(phi: np.ndarray, psi: np.ndarray) -> complex:
    """<phi|psi>."""
    return complex(np.vdot(phi, psi))


def density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError("density() expects a unit-norm state")
    return np.outer(psi, psi.conj())


def mixture_density(m: GhzwMixture | float) -> np.ndarray:
    p = m.p if isinstance(m, GhzwMixture) else GhzwMixture(m).p
    return p * np.outer(_GHZ, _GHZ) + (1.0 - p) * np.outer(_W, _W)


def ensemble_density(e: WeightedEnsemble) -> np.ndarray:
    rho = np.zeros((8, 8), dtype=complex)
    for w, ray in e:
        rho += w * density(superpose(ray))
    return rho


# einsum patterns over rho reshaped to (..., a, b, c, a', b', c')
_TRACE_PATTERNS = {
    frozenset("a"): "...abcdbc->...ad",
    frozenset("b"): "...abcaec->...be",
    frozenset("c"): "...abcabf->...cf",
    frozenset("ab"): "...abcdec->...abde",
    frozenset("bc"): "...abcaef->...bcef",
    frozenset("ac"): "...abcdbf->...acdf",
}


def partial_trace(rho: np.ndarray, keep: Iterable[str] | str) -> np.ndarray:
    """Reduced density matrix of an 8x8 three-qubit ``rho`` on the ``keep`` qubits.

    ``keep`` names the retained qubits, e.g. ``"ab"`` or ``{"a"}``; the kept
    qubits stay in a-b-c order. Leading batch dimensions are carried through.
    """
    key = frozenset(keep)
    try:
        pattern = _TRACE_PATTERNS[key]
    except KeyError:
        raise ValueError(f"invalid subsystem set {sorted(key)!r}") from None
    rho = np.asarray(rho)
    if rho.shape[-2:] != (8, 8):
        raise ValueError(f"expected 8x8 matrices, got shape {rho.shape}")
    lead = rho.shape[:-2]
    reduced = np.einsum(pattern, rho.reshape(lead + (2,) * 6))
    d = 2 ** len(key)
    return reduced.reshape(lead + (d, d))


def partial_transpose_a(rho_ab: np.ndarray) -> np.ndarray:
    """Transpose the first qubit's indices: out[(i,j),(k,l)] = in[(k,j),(i,l)].

    Works on 4x4 two-qubit matrices and, with ``j``/``l`` running over the
    pair ``bc``, on 8x8 three-qubit matrices. Leading batch dimensions are
    carried through.
    """
    rho_ab = np.asarray(rho_ab)
    d = rho_ab.shape[-1]
    if rho_ab.ndim < 2 or rho_ab.shape[-2] != d or d not in (4, 8):
        raise ValueError(f"expected 4x4 or 8x8 matrices, got shape {rho_ab.shape}")
    lead = rho_ab.shape[:-2]
    t = rho_ab.reshape(lead + (2, d // 2, 2, d // 2))
    n = len(lead)
    axes = tuple(range(n)) + (n + 2, n + 1, n, n + 3)
    return t.transpose(axes).reshape(lead + (d, d))


def _check_hermitian(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise NumericalContractError("matrix is not Hermitian within tolerance")
    return m


def hermitian_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix."""
    m = _check_hermitian(m)
    w, v, sweeps = jacobi_eigh(np.ascontiguousarray(m))
    if sweeps < 0:
        raise NumericalContractError("Jacobi iteration did not converge")
    return w, v


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    return hermitian_eigh(m)[0]


def hermitian_eigenvalues_batch(stack: np.ndarray) -> np.ndarray:
    """Ascending spectra of a ``(N, n, n)`` stack of Hermitian matrices."""
    stack = np.ascontiguousarray(stack, dtype=complex)
    if stack.size and np.max(np.abs(stack - stack.conj().transpose(0, 2, 1))) > HERMITIAN_TOL:
        raise NumericalContractError("matrix is not Hermitian within tolerance")
    try:
        return eigvalsh_batch(stack)
    except ValueError as exc:
        raise NumericalContractError(str(exc)) from exc


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eigenvalues(m))))


def eigen_residuals(m: np.ndarray) -> tuple[float, float]:
    """(|sum(eigs) - trace|, max ||M v - lambda v||) for the Jacobi eigenpairs."""
    m = _check_hermitian(m)
    w, v = hermitian_eigh(m)
    trace_err = abs(float(np.sum(w)) - float(np.trace(m).real))
    resid = float(np.max(np.linalg.norm(m @ v - v * w, axis=0)))
    return trace_err, resid


def two_qubit_marginal(ray: GhzwRay) -> np.ndarray:
    """rho_ab of the family member ``ray``."""
    return partial_trace(density(superpose(ray)), "ab")
