"""Cyclic Jacobi eigenvalue iteration for dense complex Hermitian matrices."""
from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError

HERMITIAN_TOL = 1e-9


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def eigen_spectrum(matrix, tol: float = 1e-10, max_sweeps: int = 100) -> list[float]:
    """All eigenvalues of a Hermitian matrix, with multiplicity, ascending.

    Sweeps over every pair ``(p, q)`` in row order, zeroing ``A[p, q]`` with a
    unitary plane rotation, until the off-diagonal Frobenius norm is at most
    ``tol``.

    Raises
    ------
    ValueError
        If ``matrix`` is not square or not Hermitian within 1e-9.
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach ``tol``.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n and np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2

    for _ in range(max_sweeps + 1):
        if _off_norm(a) <= tol:
            return sorted(float(x) for x in np.real(np.diag(a)))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                app, aqq = a[p, p].real, a[q, q].real
                if mag <= 1e-18 * (abs(app) + abs(aqq)) or mag < 1e-300:
                    # shifts eigenvalues by O(mag**2)
                    a[p, q] = a[q, p] = 0
                    continue
                phase = apq / mag
                theta = (aqq - app) / (2 * mag)
                if abs(theta) > 1e150:
                    t = 1 / (2 * theta)
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ u
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = u.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0
    raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
