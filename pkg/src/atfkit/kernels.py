"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``ATFKIT_PURE=1`` to force the fallback.  ``BACKEND`` names the active
implementation.
"""

from __future__ import annotations

import os

from . import _purekernels

_LIMIT = 1 << 62

try:
    if os.environ.get("ATFKIT_PURE"):
        raise ImportError("fallback forced")
    from . import _speedups as _fast
    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    _fast = None
    BACKEND = "python"


def _fits(c1, c2, c3, s, bound):
    cmax = max(c1, c2, c3)
    return 3 * cmax * bound * bound < _LIMIT and s * bound ** 3 < _LIMIT


def _pick(c1, c2, c3, s, bound):
    if _fast is not None and _fits(c1, c2, c3, s, bound):
        return _fast
    return _purekernels


def ternary_triples(c1: int, c2: int, c3: int, s: int, bound: int) -> list[tuple[int, int, int]]:
    """Brute-force every solution of ``c1 x^2 + c2 y^2 + c3 z^2 = s x y z`` in the box."""
    return _pick(c1, c2, c3, s, bound).ternary_triples(c1, c2, c3, s, bound)


def has_ternary_triple(c1: int, c2: int, c3: int, s: int, bound: int) -> bool:
    return _pick(c1, c2, c3, s, bound).has_ternary_triple(c1, c2, c3, s, bound)
