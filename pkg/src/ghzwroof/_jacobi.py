"""Cyclic Jacobi eigensolver for small dense Hermitian matrices.

Compiled with numba; matrices here are at most 8x8 so a plain cyclic sweep
is both fast and deterministic.
"""

import numpy as np
from numba import njit

OFF_TOL = 1e-13
MAX_SWEEPS = 100


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j].real ** 2 + a[i, j].imag ** 2
    return np.sqrt(s)


@njit(cache=True)
def jacobi_eigh(m, off_tol=OFF_TOL, max_sweeps=MAX_SWEEPS):
    """Return (eigenvalues, eigenvectors, sweeps) of a Hermitian matrix.

    Eigenvalues are ascending; eigenvectors are the columns of the second
    output. ``sweeps`` is -1 if the off-diagonal mass did not drop below
    ``off_tol`` within ``max_sweeps``.
    """
    n = m.shape[0]
    a = m.astype(np.complex128).copy()
    v = np.eye(n, dtype=np.complex128)
    sweeps = -1
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) < off_tol:
            sweeps = sweep
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                ph = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = [[c, s*ph], [-s*conj(ph), c]] in the (p, q) plane; A <- G^H A G
                gpq = s * ph
                gqp = -s * np.conj(ph)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp + gqp * akq
                    a[k, q] = gpq * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk + np.conj(gqp) * aqk
                    a[q, k] = np.conj(gpq) * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp + gqp * vkq
                    v[k, q] = gpq * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w)
    return w[order], v[:, order], sweeps


@njit(cache=True)
def eigvalsh_batch(stack):
    """Ascending eigenvalues for a (N, n, n) stack; raises on non-convergence."""
    out = np.empty((stack.shape[0], stack.shape[1]))
    for i in range(stack.shape[0]):
        w, _, sweeps = jacobi_eigh(stack[i])
        if sweeps < 0:
            raise ValueError("Jacobi iteration did not converge")
        out[i] = w
    return out
