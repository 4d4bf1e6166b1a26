"""Banded storage and direct solves for the beam systems."""
from __future__ import annotations

import numpy as np
from scipy import linalg

from ..errors import NumericalFailureError


def to_general_band(A, p):
    """LAPACK general band layout for ``solve_banded((p, p), ...)``."""
    n = A.shape[0]
    ab = np.zeros((2 * p + 1, n))
    for k in range(-p, p + 1):
        d = np.diagonal(A, k)
        if k >= 0:
            ab[p - k, k:] = d
        else:
            ab[p - k, : n + k] = d
    return ab


def to_upper_band(A, p):
    """Upper symmetric band layout for ``cholesky_banded``."""
    n = A.shape[0]
    ab = np.zeros((p + 1, n))
    for k in range(p + 1):
        ab[p - k, k:] = np.diagonal(A, k)
    return ab


def solve(A, b, p):
    """Direct banded solve of ``A x = b``."""
    try:
        x = linalg.solve_banded((p, p), to_general_band(A, p), b)
    except (linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailureError(f"banded solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise NumericalFailureError("banded solve produced non-finite values")
    return x


class Factor:
    """Reusable factorization of a symmetric banded matrix.

    Banded Cholesky when the matrix is positive definite, dense LU otherwise.
    """

    def __init__(self, A, p):
        self.p = p
        try:
            self._chol = linalg.cholesky_banded(to_upper_band(A, p))
            self._lu = None
        except linalg.LinAlgError:
            self._chol = None
            try:
                self._lu = linalg.lu_factor(A, check_finite=True)
            except (linalg.LinAlgError, ValueError) as exc:
                raise NumericalFailureError(f"factorization failed: {exc}") from exc
            if np.any(np.diag(self._lu[0]) == 0.0):
                raise NumericalFailureError("matrix is singular")

    def solve(self, b):
        if self._chol is not None:
            x = linalg.cho_solve_banded((self._chol, False), b)
        else:
            x = linalg.lu_solve(self._lu, b)
        if not np.all(np.isfinite(x)):
            raise NumericalFailureError("solve produced non-finite values")
        return x
