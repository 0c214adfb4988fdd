"""Exception types shared across the package.

The CLI maps these onto exit codes: validation-family errors exit 3,
numeric failures exit 4 (usage errors are argparse's exit 2).
"""


class EpdynError(Exception):
    """Base class for all package errors."""


class ValidationError(EpdynError, ValueError):
    """Invalid input data, shapes, or configuration values."""


class ParseError(ValidationError):
    """Malformed dataset/config file; message carries path and line number."""


class PairingError(ValidationError):
    """EEP/BEP datasets (or representations) that should match by id do not."""


class ConfigError(ValidationError):
    """A configuration object violates its invariants."""


class TooShortError(ValidationError):
    """Utterance has too few frames for the requested stacking order.

    Callers decide the policy: the evaluation harness excludes the utterance
    and reports it, the CLI skips it with a note.
    """

    def __init__(self, n_frames: int, d: int, utterance_id: str = ""):
        self.n_frames = n_frames
        self.d = d
        self.utterance_id = utterance_id
        who = f"utterance {utterance_id!r}: " if utterance_id else ""
        super().__init__(
            f"{who}{n_frames} frame(s) cannot be stacked with order d={d} "
            f"(need at least d+1 = {d + 1})"
        )


class NumericError(EpdynError, RuntimeError):
    """A numeric routine failed (non-convergence, non-finite results)."""
