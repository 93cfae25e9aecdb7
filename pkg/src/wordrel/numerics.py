"""Dense float64 matrix kernel: products, SVD and symmetric solves.

Matrices are plain 2-D ``numpy.ndarray`` objects of dtype float64. The
decompositions delegate to LAPACK (through numpy/scipy); this module owns
the contracts around them: finiteness, shape checks, ordering of singular
values and the pseudo-inverse fallback for rank-deficient systems.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NonFiniteValue, NotPositiveDefinite, SvdNonConvergence

# Singular values below PINV_RCOND * sigma_max are treated as zero.
PINV_RCOND = 1e-10
SYMMETRY_TOL = 1e-8


class SvdResult(NamedTuple):
    u: np.ndarray
    singular_values: np.ndarray
    vt: np.ndarray


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Coerce ``data`` to a finite, non-empty 2-D float64 array."""
    m = np.array(data, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name}: expected 2-D, got {m.ndim}-D")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"{name}: empty shape {m.shape}")
    if not np.isfinite(m).all():
        raise NonFiniteValue(f"{name}: contains NaN or Inf")
    return m


def matmul(a, b) -> np.ndarray:
    """Matrix product ``a @ b``.

    Accumulates rank-1 updates over the inner dimension in index order, so
    each entry is summed exactly like the textbook triple loop. This keeps
    results independent of the BLAS build and thread count.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"matmul: {a.shape} x {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]))
    for p in range(a.shape[1]):
        out += np.multiply.outer(a[:, p], b[p, :])
    if not np.isfinite(out).all():
        raise NonFiniteValue("matmul: overflow in product")
    return out


def svd(m) -> SvdResult:
    """Full SVD with singular values in non-increasing order."""
    m = as_matrix(m)
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise SvdNonConvergence(str(exc)) from exc
    return SvdResult(u, s, vt)


def _check_symmetric(s: np.ndarray) -> None:
    if s.shape[0] != s.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {s.shape}")
    scale = max(np.abs(s).max(), 1.0)
    if np.abs(s - s.T).max() > SYMMETRY_TOL * scale:
        raise DimensionMismatch("matrix is not symmetric")


def solve_pd(s, rhs) -> np.ndarray:
    """Solve ``s @ z = rhs`` for symmetric positive-definite ``s``.

    Uses a Cholesky factorization. Raises ``NotPositiveDefinite`` when the
    factorization fails or its pivots show ``s`` to be numerically singular;
    callers are expected to fall back to :func:`pinv_solve`.
    """
    s = as_matrix(s, "s")
    rhs = as_matrix(rhs, "rhs")
    _check_symmetric(s)
    if rhs.shape[0] != s.shape[0]:
        raise DimensionMismatch(f"solve_pd: {s.shape} vs rhs {rhs.shape}")
    try:
        factor, lower = scipy.linalg.cho_factor(s, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    pivots = np.abs(np.diag(factor))
    # squared pivot ratio approximates the condition number
    if pivots.min() ** 2 <= PINV_RCOND * pivots.max() ** 2:
        raise NotPositiveDefinite("matrix is numerically singular")
    return scipy.linalg.cho_solve((factor, lower), rhs, check_finite=False)


def pinv_solve(s, rhs, rcond: float = PINV_RCOND) -> np.ndarray:
    """Minimum-norm solution of ``s @ z = rhs`` via a truncated SVD."""
    s = as_matrix(s, "s")
    rhs = as_matrix(rhs, "rhs")
    if rhs.shape[0] != s.shape[0]:
        raise DimensionMismatch(f"pinv_solve: {s.shape} vs rhs {rhs.shape}")
    u, sv, vt = svd(s)
    k = min(s.shape)
    cutoff = rcond * sv[0] if sv.size else 0.0
    keep = sv > cutoff
    inv = np.zeros_like(sv)
    inv[keep] = 1.0 / sv[keep]
    return vt[:k].T @ (inv[:, None] * (u[:, :k].T @ rhs))
