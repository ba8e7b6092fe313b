"""Backend selection for the exhaustive scans.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy versions in ``_pykernels`` are used. Both return identical results.
"""

from contextlib import contextmanager

import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_active = _compiled if _compiled is not None else _pykernels


def available_backends():
    return sorted(_BACKENDS)


def backend():
    return "cython" if _active is _compiled and _compiled is not None else "python"


def set_backend(name):
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")


@contextmanager
def use_backend(name):
    previous = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def _c(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def assoc_failures(t, limit):
    return _active.assoc_failures(_c(t), limit)


def distrib_failures(star, add, limit):
    return _active.distrib_failures(_c(star), _c(add), limit)


def hom_failures(f, s, t, limit):
    return _active.hom_failures(_c(f), _c(s), _c(t), limit)


def partial_assoc_failures(comp, limit):
    return _active.partial_assoc_failures(_c(comp), limit)


def interchange_failures(comp, op, limit):
    return _active.interchange_failures(_c(comp), _c(op), limit)


def action_interchange_failures(phi, xop, gop, limit):
    return _active.action_interchange_failures(_c(phi), _c(xop), _c(gop), limit)
