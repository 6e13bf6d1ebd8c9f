"""Compiled three-pi evaluation for many family members at once.

Mirrors the matrix route of :func:`ghzwroof.measures.pi_pure` (amplitudes,
two-qubit marginal, partial transpose on qubit a, Jacobi spectrum,
single-qubit purity) without numpy call overhead; the test suite pins the two
against each other.
"""

import numpy as np
from numba import njit

from ._jacobi import jacobi_eigh

_S2 = 1.0 / np.sqrt(2.0)
_S3 = 1.0 / np.sqrt(3.0)


@njit(cache=True)
def pi_kernel(q, theta):
    n = q.shape[0]
    out = np.empty(n)
    psi = np.zeros(8, dtype=np.complex128)
    m = np.zeros((4, 4), dtype=np.complex128)
    for k in range(n):
        qk = min(max(q[k], 0.0), 1.0)
        g = np.sqrt(qk) * _S2
        wv = -np.sqrt(1.0 - qk) * _S3 * np.exp(1j * theta[k])
        psi[:] = 0.0
        psi[0] = g
        psi[7] = g
        psi[1] = wv
        psi[2] = wv
        psi[4] = wv
        # rho_a and its purity
        purity = 0.0
        for i in range(2):
            for j in range(2):
                s = 0.0j
                for r in range(4):
                    s += psi[4 * i + r] * np.conj(psi[4 * j + r])
                purity += s.real ** 2 + s.imag ** 2
        # (rho_ab^{T_a})[(i,j),(k,l)] = rho_ab[(k,j),(i,l)]
        for i in range(2):
            for j in range(2):
                for kk in range(2):
                    for ll in range(2):
                        s = 0.0j
                        for c in range(2):
                            s += psi[4 * kk + 2 * j + c] * np.conj(psi[4 * i + 2 * ll + c])
                        m[2 * i + j, 2 * kk + ll] = s
        w, _, sweeps = jacobi_eigh(m)
        if sweeps < 0:
            raise ValueError("Jacobi iteration did not converge")
        neg = np.sum(np.abs(w)) - 1.0
        out[k] = 2.0 * (1.0 - purity) - 2.0 * neg * neg
    return out


@njit(cache=True)
def tangle_kernel(q, theta):
    n = q.shape[0]
    out = np.empty(n)
    for k in range(n):
        qk = min(max(q[k], 0.0), 1.0)
        z = qk * qk - 8.0 / 9.0 * np.exp(3j * theta[k]) * np.sqrt(6.0 * qk * (1.0 - qk) ** 3)
        out[k] = abs(z)
    return out


@njit(cache=True)
def isometry_rays(x, n, p):
    """Weights, q and theta of the states an n x 2 isometry carves out of rho(p).

    ``x`` holds the real first column, then the real and imaginary parts of
    the second; columns are Gram-Schmidt orthonormalised. ``ok`` is False on
    a degenerate parametrisation.
    """
    u0 = x[:n] + 0j
    u1 = x[n:2 * n] + 1j * x[2 * n:3 * n]
    w = np.zeros(n)
    q = np.zeros(n)
    th = np.zeros(n)
    n0 = np.sqrt(np.sum(np.abs(u0) ** 2))
    if n0 < 1e-12:
        return w, q, th, False
    u0 = u0 / n0
    proj = np.sum(np.conj(u0) * u1)
    u1 = u1 - proj * u0
    n1 = np.sqrt(np.sum(np.abs(u1) ** 2))
    if n1 < 1e-12:
        return w, q, th, False
    u1 = u1 / n1
    sp = np.sqrt(p)
    sw = np.sqrt(1.0 - p)
    for i in range(n):
        a = u0[i] * sp
        b = u1[i] * sw
        a2 = a.real ** 2 + a.imag ** 2
        b2 = b.real ** 2 + b.imag ** 2
        w[i] = a2 + b2
        if w[i] > 0.0:
            q[i] = min(max(a2 / w[i], 0.0), 1.0)
        z = -b * np.conj(a)
        th[i] = np.arctan2(z.imag, z.real)
    return w, q, th, True


@njit(cache=True)
def ensemble_objective(x, n, p, use_pi):
    w, q, th, ok = isometry_rays(x, n, p)
    if not ok:
        return 2.0
    e = pi_kernel(q, th) if use_pi else tangle_kernel(q, th)
    return np.sum(w * e)
