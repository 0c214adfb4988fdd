"""Dense linear-algebra contracts used by the mode decomposition.

Three operations with pinned numerical semantics:

* ``pseudoinverse`` -- SVD-based Moore-Penrose pseudoinverse with a relative
  singular-value cutoff (values <= rcond * sigma_max are treated as zero).
* ``eig`` -- full non-symmetric eigendecomposition, returned as a list of
  eigenpairs sorted by eigenvalue modulus descending, with ties broken by
  complex argument ascending and then by original LAPACK index. The sort is a
  total order, so the same matrix always yields the same list.
* ``canonicalize`` -- deterministic representative of an eigenvector's
  complex-scale equivalence class: unit 2-norm, largest-modulus entry real
  and nonnegative (lowest index on modulus ties).
"""

from typing import NamedTuple

import numpy as np

from epdyn.errors import NumericError, ValidationError

# Relative tolerance for "same modulus" when picking the entry that anchors the
# phase. An exact-tie argmax can flip between entries whose computed moduli
# differ by one ulp (conjugate-pair eigenvectors hit this), which would break
# idempotence of the canonical form.
_MODULUS_TIE_RTOL = 1e-12


class EigenPair(NamedTuple):
    value: complex
    vector: np.ndarray  # complex128, unit 2-norm, canonical phase


def _as_real_matrix(a, op: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValidationError(f"{op}: expected a 2-D matrix, got ndim={a.ndim}")
    if a.size == 0:
        raise ValidationError(f"{op}: matrix must be nonempty")
    if not np.isfinite(a).all():
        raise ValidationError(f"{op}: matrix contains non-finite entries")
    return a


def pseudoinverse(a, rcond: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD with relative cutoff.

    Singular values <= rcond * sigma_max are treated as zero. The default
    rcond is machine epsilon times max(rows, cols).
    """
    a = _as_real_matrix(a, "pseudoinverse")
    if rcond is None:
        rcond = np.finfo(np.float64).eps * max(a.shape)
    elif rcond < 0:
        raise ValidationError(f"pseudoinverse: rcond must be >= 0, got {rcond}")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"pseudoinverse: SVD failed: {exc}") from exc
    cutoff = rcond * s[0]
    rank = int(np.count_nonzero(s > cutoff))
    if rank == 0:
        return np.zeros((a.shape[1], a.shape[0]))
    return (vh[:rank].T / s[:rank]) @ u[:, :rank].T


def canonicalize(v) -> np.ndarray:
    """Canonical representative of a nonzero complex vector.

    Unit 2-norm; the largest-modulus entry (lowest index on ties, within a
    1e-12 relative tolerance) is made real and nonnegative. Idempotent:
    already-canonical input is returned bit-for-bit.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError("canonicalize: expected a nonempty 1-D vector")
    if not np.isfinite(v).all():
        raise ValidationError("canonicalize: vector contains non-finite entries")
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValidationError("canonicalize: zero vector has no canonical form")
    w = v.copy() if abs(norm - 1.0) <= 1e-13 else v / norm
    mags = np.abs(w)
    k = int(np.argmax(mags >= mags.max() * (1.0 - _MODULUS_TIE_RTOL)))
    pivot = w[k]
    if pivot.imag == 0.0 and pivot.real >= 0.0:
        return w
    w *= np.conj(pivot) / mags[k]
    w[k] = mags[k]  # kill the rounding residue; the pivot is exactly real
    return w


def eig(a) -> list[EigenPair]:
    """All eigenpairs of a square matrix, sorted and canonicalized.

    Sort key: |lambda| descending, then arg(lambda) ascending, then original
    index. Raises NumericError if the eigensolver does not converge.
    """
    a = _as_real_matrix(a, "eig")
    n, m = a.shape
    if n != m:
        raise ValidationError(f"eig: matrix must be square, got {n}x{m}")
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eig: eigensolver did not converge: {exc}") from exc
    order = sorted(range(n), key=lambda i: (-abs(values[i]), np.angle(values[i])))
    return [EigenPair(complex(values[i]), canonicalize(vectors[:, i])) for i in order]
