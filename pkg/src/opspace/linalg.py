"""Dense complex matrix arithmetic shared by every norm evaluator."""

from __future__ import annotations

import numpy as np

# Full SVD below this dimension; power iteration on the Gram matrix above.
_SVD_DIM_LIMIT = 64
_POWER_TOL = 1e-12
_POWER_MAX_ITER = 100_000


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got array of shape {a.shape}")
    return a


def operator_norm(m) -> float:
    """Largest singular value of a dense complex matrix."""
    a = as_matrix(m)
    if a.size == 0:
        raise ValueError("operator norm of an empty matrix is undefined")
    if max(a.shape) <= _SVD_DIM_LIMIT:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    return _power_norm(a)


def _power_norm(a: np.ndarray) -> float:
    # Work with the smaller Gram matrix a*a (Hermitian PSD).
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    if a.shape[1] <= _SVD_DIM_LIMIT:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    g = a.conj().T @ a
    dim = g.shape[0]
    v = np.ones(dim, dtype=np.complex128)
    v += 1e-3 * np.linspace(0.0, 1.0, dim)  # break symmetry deterministically
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(_POWER_MAX_ITER):
        w = g @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam_new = float(np.real(np.vdot(v, g @ v)))
        if abs(lam_new - lam) <= _POWER_TOL * max(1.0, abs(lam_new)):
            lam = lam_new
            break
        lam = lam_new
    return float(np.sqrt(max(lam, 0.0)))


def kron(a, b) -> np.ndarray:
    """Kronecker product; (a ⊗ b)[(i,k),(j,l)] = a[i,j]·b[k,l]."""
    a, b = as_matrix(a), as_matrix(b)
    if a.size == 0 or b.size == 0:
        raise ValueError("kron of an empty matrix is undefined")
    return np.kron(a, b)


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal matrix diag(a, b)."""
    a, b = as_matrix(a), as_matrix(b)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.complex128)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def scalar_lp(values, p: float) -> float:
    """ℓ_p norm of a vector of scalars, p ∈ [1, ∞]."""
    if p < 1:
        raise ValueError(f"lp norm requires p >= 1, got {p}")
    v = np.abs(np.asarray(values, dtype=np.complex128)).astype(float)
    if v.size == 0:
        return 0.0
    if np.isinf(p):
        return float(v.max())
    if p == 1:
        return float(v.sum())
    if p == 2:
        return float(np.sqrt(np.sum(v * v)))
    return float(np.sum(v**p) ** (1.0 / p))
