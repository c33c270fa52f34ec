"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``BRDYN_PURE`` is set to a non-empty value other than
``0``, the pure-Python twin is used.  Both take the same arguments and return
the same values; the wrappers below normalise argument types for each.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from . import _pykernels

if os.environ.get("BRDYN_PURE", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "pure"
EC_BIT, PUB_BIT, PUC_BIT = _pykernels.EC_BIT, _pykernels.PUB_BIT, _pykernels.PUC_BIT


def _impl(pure: bool):
    if pure or _compiled is None:
        return _pykernels, False
    return _compiled, True


def _labels(labels, native):
    return np.ascontiguousarray(labels, dtype=np.int32) if native else [int(x) for x in labels]


def _masks(masks, native):
    return np.ascontiguousarray(masks, dtype=np.uint32) if native else [int(x) for x in masks]


def _orders(orders, native):
    if native:
        return np.ascontiguousarray(orders, dtype=np.uint32).reshape(len(orders), -1)
    return [[int(x) for x in row] for row in orders]


def pattern_flags(labels, n, m, P0, P1, stop_mask=0, pure=False) -> int:
    k, nat = _impl(pure)
    return k.pattern_flags(_labels(labels, nat), n, m, _masks(P0, nat), _masks(P1, nat), stop_mask)


def has_cycle(labels, n, m, P0, P1, maximising=False, rowmask=-1, colmask=-1, pure=False) -> bool:
    k, nat = _impl(pure)
    return k.has_cycle(_labels(labels, nat), n, m, _masks(P0, nat), _masks(P1, nat), maximising, rowmask, colmask)


def weakly_terminating(labels, n, m, P0, P1, maximising=False, rowmask=-1, colmask=-1, pure=False) -> bool:
    k, nat = _impl(pure)
    return k.weakly_terminating(
        _labels(labels, nat), n, m, _masks(P0, nat), _masks(P1, nat), maximising, rowmask, colmask
    )


def has_four_cycle(labels, n, m, P0, P1, pure=False) -> bool:
    k, nat = _impl(pure)
    return k.has_four_cycle(_labels(labels, nat), n, m, _masks(P0, nat), _masks(P1, nat))


def subgame_without_ne(labels, n, m, P0, P1, pure=False) -> bool:
    k, nat = _impl(pure)
    return k.subgame_without_ne(_labels(labels, nat), n, m, _masks(P0, nat), _masks(P1, nat))


def sweep_orders(labels, n, m, orders, pure=False):
    k, nat = _impl(pure)
    return k.sweep_orders(_labels(labels, nat), n, m, _orders(orders, nat))


def structure_witnesses(labels, n, m, orders, pure=False):
    k, nat = _impl(pure)
    return k.structure_witnesses(_labels(labels, nat), n, m, _orders(orders, nat))


def removable_choice(labels, n, m, P0, P1, pure=False):
    k, nat = _impl(pure)
    return k.removable_choice(_labels(labels, nat), n, m, _masks(P0, nat), _masks(P1, nat))


def sweep_removable(labels, n, m, orders, pure=False):
    k, nat = _impl(pure)
    return k.sweep_removable(_labels(labels, nat), n, m, _orders(orders, nat))


def walk(offsets: Sequence[int], targets: Sequence[int], absorbing: Sequence[bool], state: int,
         p: int, q: int, raw: np.ndarray, pure=False):
    k, nat = _impl(pure)
    if nat:
        return k.walk(
            np.ascontiguousarray(offsets, dtype=np.int64),
            np.ascontiguousarray(targets, dtype=np.int64),
            np.ascontiguousarray(absorbing, dtype=np.uint8),
            int(state), int(p), int(q),
            np.ascontiguousarray(raw, dtype=np.uint64),
        )
    return k.walk(list(offsets), list(targets), list(absorbing), int(state), int(p), int(q), raw.tolist())
