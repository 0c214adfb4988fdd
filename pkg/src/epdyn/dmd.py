"""Koopman-mode summarization of an utterance's frame dynamics.

The frame sequence is delay-stacked with a tunable order d (d=1 is the plain
one-step model), a dm x dm one-step operator is fitted by unconstrained least
squares through the pseudoinverse, and the eigenvector belonging to the
largest-modulus eigenvalue becomes the utterance summary. A complex top mode
v is encoded losslessly as [Re(v); Im(v)], so each order d contributes 2*d*m
real features; multi-order configurations concatenate the per-d blocks.

The fit is deliberately unconstrained (no companion structure is imposed on
the stacked operator); the one-step residual ||Y - A X||_F is recorded on
every fit so a constrained variant could be compared against it.
"""

from dataclasses import dataclass

import numpy as np

from epdyn import linalg
from epdyn.ep import EpSequence, Representation
from epdyn.errors import NumericError, TooShortError, ValidationError


@dataclass(frozen=True, eq=False)
class KoopmanFit:
    """Fitted one-step operator on d-stacked frames, with its spectrum."""

    order: int
    operator: np.ndarray  # (d*m, d*m)
    eigenpairs: tuple[linalg.EigenPair, ...]  # sorted by |value| descending
    residual: float  # ||Y - operator @ X||_F

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([p.value for p in self.eigenpairs])

    @property
    def top(self) -> linalg.EigenPair:
        return self.eigenpairs[0]


def _frame_matrix(seq) -> tuple[np.ndarray, str]:
    if isinstance(seq, EpSequence):
        return seq.frames, seq.id
    frames = np.asarray(seq, dtype=np.float64)
    if frames.ndim == 1:
        frames = frames[:, None]
    if frames.ndim != 2 or frames.size == 0:
        raise ValidationError("expected a nonempty (N, m) frame matrix")
    return frames, ""


def _check_order(d: int) -> int:
    d = int(d)
    if d < 1:
        raise ValidationError(f"order parameter d must be >= 1, got {d}")
    return d


def stack(seq, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Delay-stack frames into snapshot matrices (X, Y).

    Column j of X is the stacked vector [s_j; s_{j+1}; ...; s_{j+d-1}] of
    length d*m; Y holds the same vectors shifted one step. Only the N-d+1
    stacked vectors that fit inside the utterance are formed, so X and Y each
    have N-d columns. Raises TooShortError when N <= d.
    """
    frames, utt_id = _frame_matrix(seq)
    d = _check_order(d)
    n, m = frames.shape
    if n <= d:
        raise TooShortError(n_frames=n, d=d, utterance_id=utt_id)
    # stacked[:, k] = [s_k; ...; s_{k+d-1}], k = 0 .. n-d
    stacked = np.vstack([frames[i : n - d + 1 + i].T for i in range(d)])
    return stacked[:, :-1], stacked[:, 1:]


def fit_koopman(seq, d: int) -> KoopmanFit:
    """Least-squares one-step operator on d-stacked frames, plus spectrum.

    operator = Y @ pinv(X) minimizes ||Y - A X||_F; d=1 reproduces the
    plain first-order fit.
    """
    x, y = stack(seq, d)
    operator = y @ linalg.pseudoinverse(x)
    if not np.isfinite(operator).all():
        raise NumericError("fit_koopman: operator has non-finite entries")
    residual = float(np.linalg.norm(y - operator @ x))
    eigenpairs = tuple(linalg.eig(operator))
    return KoopmanFit(order=int(d), operator=operator, eigenpairs=eigenpairs, residual=residual)


def method_descriptor(d_set) -> str:
    return "dmd:d=" + ",".join(str(d) for d in d_set)


def representation(seq: EpSequence, d_set) -> Representation:
    """Utterance summary from the top mode of each order in d_set.

    For each d the canonicalized top eigenvector v (length d*m) contributes
    the block [Re(v); Im(v)]; blocks are concatenated in d_set order, giving
    a total length of 2*m*sum(d_set). d_set must be strictly ascending.
    Raises TooShortError if any order fails the length precondition.
    """
    d_set = [_check_order(d) for d in d_set]
    if not d_set:
        raise ValidationError("representation: d_set must be nonempty")
    if any(b <= a for a, b in zip(d_set, d_set[1:])):
        raise ValidationError(f"representation: d_set must be strictly ascending, got {d_set}")
    blocks = []
    for d in d_set:
        top = fit_koopman(seq, d).top.vector
        blocks.append(top.real)
        blocks.append(top.imag)
    return Representation(
        id=seq.id,
        label=seq.label,
        method=method_descriptor(d_set),
        values=np.concatenate(blocks),
    )
