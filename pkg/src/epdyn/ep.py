"""Emotion-profile data model, validation, and JSON-lines I/O.

An utterance is an ordered sequence of segment-level vectors. Two kinds are
supported: estimate-level profiles (EEP), whose frames are probability
distributions over the emotion classes, and bottleneck-level profiles (BEP),
whose frames are unconstrained real feature vectors.

File formats (one JSON object per line):

* dataset:          {"id", "label", "kind": "eep"|"bep", "frames": [[f64...], ...]}
* representations:  {"id", "label", "method", "values": [f64...]}

Floats are serialized with Python's shortest round-trip representation, so
load-after-save reproduces every value bit-exactly.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from epdyn._io import atomic_write_text
from epdyn.errors import PairingError, ParseError, ValidationError

SIMPLEX_TOL = 1e-4  # absorbs float32 softmax round-off from upstream models


class EpKind(str, Enum):
    EEP = "eep"
    BEP = "bep"


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class EpSequence:
    """One utterance: an N x m frame matrix plus label and metadata."""

    id: str
    label: str
    kind: EpKind
    frames: np.ndarray  # (N, m) float64, immutable

    def __post_init__(self):
        frames = np.array(self.frames, dtype=np.float64)  # own copy; frozen below
        if frames.ndim != 2 or frames.shape[0] < 1 or frames.shape[1] < 1:
            raise ValidationError(
                f"utterance {self.id!r}: frames must form a nonempty N x m matrix"
            )
        if not np.isfinite(frames).all():
            raise ValidationError(f"utterance {self.id!r}: non-finite frame entries")
        if self.kind == EpKind.EEP:
            if (frames < 0.0).any() or (frames > 1.0).any():
                raise ValidationError(
                    f"utterance {self.id!r}: EEP entries must lie in [0, 1]"
                )
            sums = frames.sum(axis=1)
            bad = np.abs(sums - 1.0) > SIMPLEX_TOL
            if bad.any():
                i = int(np.argmax(bad))
                raise ValidationError(
                    f"utterance {self.id!r}: EEP frame {i} sums to {sums[i]:.6f}, "
                    f"expected 1 within {SIMPLEX_TOL}"
                )
        object.__setattr__(self, "frames", _freeze(frames))

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]


@dataclass(frozen=True, eq=False)
class Representation:
    """Fixed-length summary vector for one utterance."""

    id: str
    label: str
    method: str  # e.g. "dmd:d=1,2", "pmeans:p=1,2", "avg"
    values: np.ndarray  # 1-D float64, immutable

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.size == 0:
            raise ValidationError(f"representation {self.id!r}: empty value vector")
        if not np.isfinite(values).all():
            raise ValidationError(f"representation {self.id!r}: non-finite values")
        object.__setattr__(self, "values", _freeze(values))


@dataclass
class Dataset:
    """Immutable-by-convention collection of utterances of one kind."""

    sequences: list[EpSequence]
    class_set: list[str] = field(default_factory=list)

    @classmethod
    def from_sequences(cls, sequences) -> "Dataset":
        sequences = list(sequences)
        seen_ids = set()
        class_set: list[str] = []
        for seq in sequences:
            if seq.id in seen_ids:
                raise ValidationError(f"duplicate utterance id {seq.id!r}")
            seen_ids.add(seq.id)
            if seq.label not in class_set:
                class_set.append(seq.label)
        return cls(sequences=sequences, class_set=class_set)

    def __len__(self) -> int:
        return len(self.sequences)

    def by_id(self) -> dict:
        return {seq.id: seq for seq in self.sequences}


def _parse_kind(raw, where: str) -> EpKind:
    try:
        return EpKind(raw)
    except ValueError:
        raise ParseError(f"{where}: unknown kind {raw!r} (expected 'eep' or 'bep')") from None


def load_dataset(path, kind: EpKind) -> Dataset:
    """Load and validate a JSON-lines dataset of the expected kind.

    Raises ParseError (with line number) on malformed lines and
    ValidationError (naming the utterance) on invariant violations.
    """
    kind = EpKind(kind)
    sequences = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{where}: invalid JSON: {exc.msg}") from exc
            if not isinstance(record, dict):
                raise ParseError(f"{where}: expected a JSON object")
            missing = {"id", "label", "kind", "frames"} - record.keys()
            if missing:
                raise ParseError(f"{where}: missing keys {sorted(missing)}")
            line_kind = _parse_kind(record["kind"], where)
            if line_kind != kind:
                raise ValidationError(
                    f"{where}: utterance {record['id']!r} has kind "
                    f"{line_kind.value!r}, expected {kind.value!r}"
                )
            frames = record["frames"]
            if not isinstance(frames, list) or not frames or not all(
                isinstance(row, list) for row in frames
            ):
                raise ParseError(f"{where}: 'frames' must be a nonempty list of rows")
            widths = {len(row) for row in frames}
            if len(widths) != 1:
                raise ValidationError(
                    f"{where}: utterance {record['id']!r} has frames of differing "
                    f"lengths {sorted(widths)}"
                )
            try:
                matrix = np.asarray(frames, dtype=np.float64)
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{where}: non-numeric frame entries: {exc}") from exc
            sequences.append(
                EpSequence(
                    id=str(record["id"]),
                    label=str(record["label"]),
                    kind=kind,
                    frames=matrix,
                )
            )
    return Dataset.from_sequences(sequences)


def save_dataset(dataset: Dataset, path) -> None:
    """Write a dataset as JSON lines (atomic: temp file + rename)."""
    lines = []
    for seq in dataset.sequences:
        lines.append(
            json.dumps(
                {
                    "id": seq.id,
                    "label": seq.label,
                    "kind": seq.kind.value,
                    "frames": [[float(x) for x in row] for row in seq.frames],
                }
            )
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def save_representations(reps, path) -> None:
    """Write representations as JSON lines, atomically.

    Requires a nonempty list whose vectors have a uniform length within each
    method descriptor; load-after-save reproduces values bit-exactly.
    """
    reps = list(reps)
    if not reps:
        raise ValidationError("save_representations: empty representation list")
    lengths: dict[str, int] = {}
    for rep in reps:
        expected = lengths.setdefault(rep.method, rep.values.size)
        if rep.values.size != expected:
            raise ValidationError(
                f"save_representations: method {rep.method!r} mixes lengths "
                f"{expected} and {rep.values.size} (utterance {rep.id!r})"
            )
    lines = [
        json.dumps(
            {
                "id": rep.id,
                "label": rep.label,
                "method": rep.method,
                "values": [float(x) for x in rep.values],
            }
        )
        for rep in reps
    ]
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_representations(path) -> list[Representation]:
    """Load a representations JSON-lines file."""
    reps = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{where}: invalid JSON: {exc.msg}") from exc
            missing = {"id", "label", "method", "values"} - record.keys()
            if missing:
                raise ParseError(f"{where}: missing keys {sorted(missing)}")
            try:
                values = np.asarray(record["values"], dtype=np.float64)
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{where}: non-numeric values: {exc}") from exc
            reps.append(
                Representation(
                    id=str(record["id"]),
                    label=str(record["label"]),
                    method=str(record["method"]),
                    values=values,
                )
            )
    return reps


def pair_eep_bep(eep: Dataset, bep: Dataset) -> list[tuple[EpSequence, EpSequence]]:
    """Match EEP and BEP utterances by id, in EEP order.

    Raises PairingError listing the ids missing on either side.
    """
    eep_ids = {seq.id for seq in eep.sequences}
    bep_by_id = bep.by_id()
    missing_in_bep = sorted(eep_ids - bep_by_id.keys())
    missing_in_eep = sorted(bep_by_id.keys() - eep_ids)
    if missing_in_bep or missing_in_eep:
        parts = []
        if missing_in_bep:
            parts.append(f"ids missing from BEP side: {missing_in_bep}")
        if missing_in_eep:
            parts.append(f"ids missing from EEP side: {missing_in_eep}")
        raise PairingError("; ".join(parts))
    return [(seq, bep_by_id[seq.id]) for seq in eep.sequences]
