"""Projections of a window onto a learned basis.

Three ways to explain a window x with an orthonormal basis U:

* ``simple_projection``: least squares over all rows, a_hat = U^T x. Cheap,
  but a corrupted coordinate leaks into every coefficient.
* ``robust_projection``: score each coordinate by its preliminary residual
  |x - U U^T x|, drop the n_s worst rows, and re-solve least squares on the
  survivors. Closed form, no iteration, and exact when the corruption budget
  covers the corrupted rows and the basis is incoherent enough.
* ``l1_projection_oracle``: iteratively reweighted least squares for the l1
  objective min_a ||x - U a||_1. Slower; used as an independent reference.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import BadBudget, DidNotConverge, DimensionMismatch, RankDeficient

RANK_TOL = 1e-10
IRLS_SMOOTHING = 1e-8


@dataclass(frozen=True)
class RobustProjectionResult:
    """Coefficients plus the evidence used to compute them.

    kept_rows is the ascending index set of rows that survived exclusion;
    residual is x - U a_hat over all rows; prelim_residual is the first-pass
    score |x - U U^T x| that decided which rows to keep.
    """

    a_hat: np.ndarray
    kept_rows: np.ndarray
    residual: np.ndarray
    prelim_residual: np.ndarray


def _validate(U, x):
    U = np.asarray(U, dtype=float)
    x = np.asarray(x, dtype=float)
    if U.ndim != 2:
        raise DimensionMismatch("basis must be a matrix")
    if x.ndim != 1 or x.size != U.shape[0]:
        raise DimensionMismatch(
            f"window of length {x.size} does not match basis with {U.shape[0]} rows"
        )
    return U, x


def simple_projection(U: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Project onto the basis using every coordinate: a_hat = U^T x."""
    U, x = _validate(U, x)
    a_hat = U.T @ x
    return a_hat, x - U @ a_hat


def robust_projection(U: np.ndarray, x: np.ndarray, n_s: int) -> RobustProjectionResult:
    """Exclude the n_s most suspect coordinates, then least-squares the rest.

    Rows are ranked by the preliminary residual |x - U U^T x|; ties resolve
    by ascending value then ascending index, so results are deterministic.
    With n_s = 0 this reduces exactly to simple_projection.
    """
    U, x = _validate(U, x)
    m, r = U.shape
    if n_s < 0 or n_s + r > m:
        raise BadBudget(f"n_s={n_s} with rank {r} and {m} rows")
    a0 = U.T @ x
    prelim = np.abs(x - U @ a0)
    order = np.argsort(prelim, kind="stable")
    kept = np.sort(order[: m - n_s])
    if n_s == 0:
        a_hat = a0  # full-row least squares on an orthonormal basis
    else:
        q, rmat = np.linalg.qr(U[kept])
        if np.abs(np.diag(rmat)).min() <= RANK_TOL:
            raise RankDeficient(
                f"kept rows span less than rank {r} (QR diagonal below {RANK_TOL})"
            )
        a_hat = solve_triangular(rmat, q.T @ x[kept])
    return RobustProjectionResult(
        a_hat=a_hat,
        kept_rows=kept,
        residual=x - U @ a_hat,
        prelim_residual=prelim,
    )


def l1_projection_oracle(
    U: np.ndarray,
    x: np.ndarray,
    max_iter: int = 100,
    tol: float = 1e-9,
) -> np.ndarray:
    """Minimise ||x - U a||_1 by iteratively reweighted least squares.

    Weights are 1 / max(|residual_i|, 1e-8). Stops when the coefficient
    change drops below tol; hitting max_iter emits a DidNotConverge warning
    carrying the last iterate, which is still returned.
    """
    U, x = _validate(U, x)
    a = U.T @ x
    for _ in range(max_iter):
        res = x - U @ a
        w = 1.0 / np.maximum(np.abs(res), IRLS_SMOOTHING)
        sw = np.sqrt(w)
        a_new, *_ = np.linalg.lstsq(U * sw[:, None], x * sw, rcond=None)
        delta = np.max(np.abs(a_new - a))
        a = a_new
        if delta < tol:
            return a
    warnings.warn(
        DidNotConverge(
            f"IRLS did not reach tol={tol} within {max_iter} iterations",
            last_iterate=a,
        )
    )
    return a


def residual_of_last(U: np.ndarray, a_hat: np.ndarray, v: float) -> float:
    """Signed residual of the newest sample: v minus its reconstruction.

    The reconstruction is the inner product of the coefficients with the last
    row of the basis, i.e. the model's value for the window's final slot.
    """
    U = np.asarray(U, dtype=float)
    a_hat = np.asarray(a_hat, dtype=float)
    if a_hat.shape != (U.shape[1],):
        raise DimensionMismatch("coefficient length must equal the basis rank")
    return float(v - a_hat @ U[-1, :])
