"""Split-kernel backend selection: compiled extension with numpy fallback.

The compiled kernel is used when the extension built; otherwise the numpy
reference takes over. Both produce bit-identical splits, so the choice only
affects speed. `set_backend` exists for tests and benchmarks.
"""

from epdyn.forest import _split_numpy

_IMPLS = {"python": _split_numpy.best_split_gathered}

try:
    from epdyn.forest import _split_fast

    _IMPLS["compiled"] = _split_fast.best_split_gathered
    _DEFAULT = "compiled"
except ImportError:
    _DEFAULT = "python"

_active = _DEFAULT


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_IMPLS))


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active = name


def best_split(values, orders, labels, n_classes, min_leaf):
    return _IMPLS[_active](values, orders, labels, n_classes, min_leaf)
