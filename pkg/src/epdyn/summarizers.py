"""Classical fixed-length utterance summarizers and the concatenation combinator.

All summarizers map an utterance's (N, m) frame matrix to a real vector:

* ``average``      -- per-dimension mean (length m).
* ``p_means``      -- concatenated power means; power p contributes one block
                      of m entries sign(m_p)*|m_p|^(1/p) with m_p the mean of
                      the p-th powers. The signed root keeps odd powers real
                      on negative bottleneck features; even powers are
                      nonnegative by construction.
* ``functionals``  -- per dimension [mean, P1, Q1, Q2, Q3, P99] (length 6m).
                      Percentile q interpolates linearly at rank q/100*(N-1).
* ``dct_summary``  -- first K coefficients of the orthonormal type-II DCT
                      along time per dimension (length K*m); utterances
                      shorter than K are padded with zero frames first.
* ``concat``       -- joins representations of one utterance, "+"-style, with
                      method descriptors joined by the circled-plus sign.
"""

import numpy as np
from scipy.fft import dct as _dct

from epdyn.ep import EpSequence, Representation
from epdyn.errors import PairingError, ValidationError

CONCAT_JOINER = "⊕"  # circled plus


def average(seq: EpSequence) -> Representation:
    """Per-dimension arithmetic mean over frames."""
    return Representation(
        id=seq.id, label=seq.label, method="avg", values=seq.frames.mean(axis=0)
    )


def _check_powers(powers) -> list[int]:
    powers = [int(p) for p in powers]
    if not powers:
        raise ValidationError("p_means: powers must be nonempty")
    if any(p < 1 for p in powers):
        raise ValidationError(f"p_means: powers must be >= 1, got {powers}")
    if any(b <= a for a, b in zip(powers, powers[1:])):
        raise ValidationError(f"p_means: powers must be strictly ascending, got {powers}")
    return powers


def p_means(seq: EpSequence, powers) -> Representation:
    """Concatenated signed power means, one length-m block per power."""
    powers = _check_powers(powers)
    frames = seq.frames
    blocks = []
    for p in powers:
        if p == 1:
            blocks.append(frames.mean(axis=0))
        else:
            moment = np.mean(frames**p, axis=0)
            blocks.append(np.sign(moment) * np.abs(moment) ** (1.0 / p))
    return Representation(
        id=seq.id,
        label=seq.label,
        method="pmeans:p=" + ",".join(str(p) for p in powers),
        values=np.concatenate(blocks),
    )


def functionals(seq: EpSequence) -> Representation:
    """Per dimension: mean, 1st/99th percentiles, and the three quartiles."""
    frames = seq.frames
    mean = frames.mean(axis=0)
    p1, q1, q2, q3, p99 = np.percentile(frames, [1, 25, 50, 75, 99], axis=0)
    stats = np.stack([mean, p1, q1, q2, q3, p99], axis=1)  # (m, 6)
    return Representation(
        id=seq.id, label=seq.label, method="functionals", values=stats.ravel()
    )


def dct_summary(seq: EpSequence, k: int) -> Representation:
    """First k orthonormal DCT-II coefficients along time, per dimension."""
    k = int(k)
    if k < 1:
        raise ValidationError(f"dct_summary: k must be >= 1, got {k}")
    frames = seq.frames
    n, m = frames.shape
    if n < k:
        frames = np.vstack([frames, np.zeros((k - n, m))])
    coeffs = _dct(frames, type=2, norm="ortho", axis=0)[:k]
    return Representation(
        id=seq.id, label=seq.label, method=f"dct:k={k}", values=coeffs.T.ravel()
    )


def concat(reps) -> Representation:
    """Concatenate several representations of the same utterance."""
    reps = list(reps)
    if not reps:
        raise ValidationError("concat: need at least one representation")
    first = reps[0]
    for rep in reps[1:]:
        if rep.id != first.id or rep.label != first.label:
            raise PairingError(
                f"concat: mismatched utterances {first.id!r}/{first.label!r} "
                f"vs {rep.id!r}/{rep.label!r}"
            )
    return Representation(
        id=first.id,
        label=first.label,
        method=CONCAT_JOINER.join(rep.method for rep in reps),
        values=np.concatenate([rep.values for rep in reps]),
    )
