"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled module is used when it was built and importable; setting
``EPDUAL_PURE_PYTHON=1`` forces the fallback. ``BACKEND`` names the one in
use.
"""

from __future__ import annotations

import os

from . import _pykernels
from ._pykernels import NodeLimit

_compiled = None
if not os.environ.get("EPDUAL_PURE_PYTHON"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

# compiled versions work on 63-bit masks
_WORD = 63


def available_backends() -> dict:
    out = {"python": _pykernels}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def cutwidth_dp(n: int, out_masks: list[int]) -> tuple[list[int], int]:
    if _compiled is not None and n <= _WORD:
        return _compiled.cutwidth_dp(n, list(out_masks))
    return _pykernels.cutwidth_dp(n, list(out_masks))


def cut_sizes(order: list[int], out_masks: list[int]) -> list[int]:
    if _compiled is not None and len(order) <= _WORD:
        return _compiled.cut_sizes(list(order), list(out_masks))
    return _pykernels.cut_sizes(list(order), list(out_masks))


def pathwidth_dp(n: int, out_masks: list[int]) -> tuple[int, list[tuple[int, bool]]]:
    if _compiled is not None and n <= 18:
        return _compiled.pathwidth_dp(n, list(out_masks))
    return _pykernels.pathwidth_dp(n, list(out_masks))


def pack_disjoint_masks(masks: list[int], k: int, universe: int,
                        node_limit: int = -1) -> list[int] | None:
    if _compiled is not None and universe.bit_length() <= _WORD:
        return _compiled.pack_disjoint_masks(list(masks), k, universe, node_limit)
    return _pykernels.pack_disjoint_masks(list(masks), k, universe, node_limit)


__all__ = ["BACKEND", "NodeLimit", "available_backends", "cutwidth_dp", "cut_sizes",
           "pathwidth_dp", "pack_disjoint_masks"]
