"""Dense real linear operators: SVD, pseudo-inverse, and resolution projectors.

The factorization itself is delegated to LAPACK via ``numpy.linalg.svd``;
everything here is about rank decisions, the generalized inverse, and the
identifiability tests built on top of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalFailureError


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Immutable m x n real matrix with finite entries.

    Parameters
    ----------
    matrix : array_like
        Two-dimensional, nonempty, all entries finite.
    """

    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.ndim != 2 or a.size == 0:
            raise InvalidInputError(f"operator must be a nonempty 2-D matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("operator entries must be finite (no NaN/Inf)")
        object.__setattr__(self, "matrix", _freeze(a.copy()))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries) -> "DenseOperator":
        """Build from a flat row-major sequence of length rows*cols."""
        flat = np.asarray(entries, dtype=float).ravel()
        if flat.size != rows * cols:
            raise InvalidInputError(
                f"need {rows * cols} entries for a {rows}x{cols} operator, got {flat.size}"
            )
        return cls(flat.reshape(rows, cols))

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def entries(self) -> np.ndarray:
        """Row-major flat view of the entries."""
        return self.matrix.ravel()


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Rank-truncated singular value decomposition.

    ``left_vectors`` (rows x r) and ``right_vectors`` (cols x r) have
    orthonormal columns; ``singular_values`` (length r) is nonincreasing and
    every retained value exceeds ``rank_tolerance * sigma_max``.  The tail
    below the tolerance is kept in ``discarded`` so near rank-deficiency
    stays visible.
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray
    rank_tolerance: float
    discarded: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.singular_values, dtype=float)
        if np.any(np.diff(s) > 0):
            raise InvalidInputError("singular values must be nonincreasing")
        object.__setattr__(self, "left_vectors", _freeze(self.left_vectors))
        object.__setattr__(self, "singular_values", _freeze(s))
        object.__setattr__(self, "right_vectors", _freeze(self.right_vectors))
        object.__setattr__(self, "discarded", _freeze(self.discarded))

    @property
    def rank(self) -> int:
        return self.singular_values.size

    @property
    def spectrum(self) -> np.ndarray:
        """Full singular value sequence: retained followed by discarded."""
        return np.concatenate([self.singular_values, self.discarded])


def default_rtol(a: DenseOperator) -> float:
    """Standard numerical-rank tolerance: max(rows, cols) * machine epsilon."""
    return max(a.rows, a.cols) * float(np.finfo(float).eps)


def svd(a: DenseOperator, rtol: float | None = None) -> SvdFactors:
    """Singular value decomposition with relative rank truncation.

    Singular values at or below ``rtol * sigma_max`` are moved to the
    ``discarded`` tail.  The retained triplets reconstruct the operator to
    within ``max(rtol, 1e-10) * sigma_max`` in the max-entry norm.

    Parameters
    ----------
    a : DenseOperator
    rtol : float, optional
        Relative truncation threshold, >= 0.  Defaults to
        ``max(rows, cols) * machine epsilon``.
    """
    if rtol is None:
        rtol = default_rtol(a)
    if rtol < 0:
        raise InvalidInputError(f"rtol must be >= 0, got {rtol}")
    try:
        u, s, vt = np.linalg.svd(a.matrix, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD did not converge: {exc}") from exc
    sigma_max = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * sigma_max))
    return SvdFactors(
        left_vectors=u[:, :rank],
        singular_values=s[:rank],
        right_vectors=vt[:rank].T,
        rank_tolerance=rtol,
        discarded=s[rank:],
    )


def pseudoinverse(a: DenseOperator, rtol: float | None = None) -> DenseOperator:
    """Moore-Penrose pseudo-inverse via the truncated SVD.

    For full column rank this equals ``(A^T A)^-1 A^T``, but is computed
    from the SVD so the condition number is not squared.
    """
    f = svd(a, rtol)
    if f.rank == 0:
        return DenseOperator(np.zeros((a.cols, a.rows)))
    return DenseOperator((f.right_vectors / f.singular_values) @ f.left_vectors.T)


def hat_operator(a: DenseOperator, rtol: float | None = None) -> DenseOperator:
    """Data-resolution projector ``A A^+``: symmetric and idempotent.

    Projects data onto the range of the operator; applied to observed data
    it yields the fitted ("smoothed") data.
    """
    f = svd(a, rtol)
    return DenseOperator(f.left_vectors @ f.left_vectors.T)


def model_resolution(a: DenseOperator, rtol: float | None = None) -> DenseOperator:
    """Model-resolution projector ``A^+ A``.

    Equals the identity on parameter space iff the operator has full column
    rank, i.e. iff the problem is identifiable.
    """
    f = svd(a, rtol)
    return DenseOperator(f.right_vectors @ f.right_vectors.T)


def is_identifiable_linear(a: DenseOperator, rtol: float | None = None) -> bool:
    """True iff the numerical rank equals the number of columns."""
    return svd(a, rtol).rank == a.cols


def null_space(a: DenseOperator, rtol: float | None = None) -> np.ndarray:
    """Orthonormal basis (cols x k) of the numerical null space."""
    if rtol is None:
        rtol = default_rtol(a)
    if rtol < 0:
        raise InvalidInputError(f"rtol must be >= 0, got {rtol}")
    try:
        _, s, vt = np.linalg.svd(a.matrix, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD did not converge: {exc}") from exc
    sigma_max = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * sigma_max))
    return vt[rank:].T.copy()


def linear_parameter_identifiable(
    p: DenseOperator, q: DenseOperator, rtol: float | None = None
) -> bool:
    """True iff the parameter map q is constant on the fibers of p.

    For linear maps this is the null-space inclusion null(P) <= null(q),
    tested as ``max |q N| <= rtol * ||q||`` for an orthonormal null-space
    basis N of P.
    """
    if p.cols != q.cols:
        raise InvalidInputError(
            f"P and q must act on the same parameter space: {p.cols} != {q.cols}"
        )
    if rtol is None:
        rtol = default_rtol(p)
    basis = null_space(p, rtol)
    if basis.shape[1] == 0:
        return True
    q_norm = float(np.linalg.norm(q.matrix, 2))
    return float(np.max(np.abs(q.matrix @ basis))) <= rtol * q_norm
