"""Pure-numpy fallbacks for the compiled kernels in _ptkernels.

Same contracts, vectorized instead of looped. The subset-offset kernels
work in bounded chunks so peak scratch stays far below the input size
even when 2^M is large.
"""

from __future__ import annotations

import math

import numpy as np

# Target number of gathered elements per chunk (~4 MiB of complex128).
_CHUNK_ELEMS = 1 << 18


def _mirror_lower(out: np.ndarray) -> np.ndarray:
    """Keep the lower triangle, overwrite the upper with its conjugate."""
    lower = np.tril(out)
    return lower + np.tril(out, -1).conj().T


def powerset_mixed(rho, bases, etas, mirror):
    dprime = bases.shape[0]
    out = np.zeros((dprime, dprime), dtype=np.complex128)
    for off in etas:
        idx = bases + off
        out += rho[idx[:, None], idx[None, :]]
    return _mirror_lower(out) if mirror else out


def powerset_pure(psi, bases, etas, mirror):
    dprime = bases.shape[0]
    out = np.zeros((dprime, dprime), dtype=np.complex128)
    chunk = max(1, _CHUNK_ELEMS // dprime)
    for start in range(0, etas.shape[0], chunk):
        sl = etas[start : start + chunk]
        g = psi[bases[:, None] + sl[None, :]]
        if mirror:
            out += g @ g.conj().T
        else:
            out += np.einsum("ik,jk->ij", g, g.conj())
    return _mirror_lower(out) if mirror else out


def jacobi_eigh(a, want_vectors, tol, max_sweeps):
    """Cyclic Jacobi on a Hermitian matrix; rotations vectorized per pair."""
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    w = np.empty(n, dtype=np.float64)
    v = np.eye(n, dtype=np.complex128) if want_vectors else None

    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        w[:] = 0.0
        return w, v

    converged = False
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.abs(np.triu(a, 1)) ** 2)))
        if off <= tol * scale:
            converged = True
            break
        thresh = 0.1 * tol * scale / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                babs = abs(b)
                if babs <= thresh:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (app - aqq) / (2.0 * babs)
                if abs(theta) > 1e150:
                    t = -1.0 / (2.0 * theta)
                else:
                    t = -math.copysign(1.0, theta) / (
                        abs(theta) + math.sqrt(theta * theta + 1.0)
                    )
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sigma = s * (b / babs)
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - np.conj(sigma) * colq
                a[:, q] = sigma * colp + c * colq
                a[p, p] = c * c * app + s * s * aqq - 2.0 * c * s * babs
                a[q, q] = s * s * app + c * c * aqq + 2.0 * c * s * babs
                a[p, q] = 0
                a[q, p] = 0
                a[p, :] = np.conj(a[:, p])
                a[q, :] = np.conj(a[:, q])
                if want_vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp - np.conj(sigma) * vq
                    v[:, q] = sigma * vp + c * vq
    if not converged:
        off = math.sqrt(2.0 * float(np.sum(np.abs(np.triu(a, 1)) ** 2)))
        if off > tol * scale:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w[:] = np.diag(a).real
    return w, v
