"""Compensated summation of double-double terms."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable

import numpy as np

from . import _dd
from .hiprec import HiPrecValue


def sum_arrays(hi: np.ndarray, lo: np.ndarray | None = None) -> HiPrecValue:
    """Sequential double-double sum of component arrays.

    A blocked pairwise pre-pass keeps this fast: the arrays are folded in
    halves with vectorised DD addition until short, then finished in order.
    """
    hi = np.asarray(hi, dtype=float).ravel()
    lo = np.zeros_like(hi) if lo is None else np.asarray(lo, dtype=float).ravel()
    while hi.size > 64:
        if hi.size % 2:
            hi = np.append(hi, 0.0)
            lo = np.append(lo, 0.0)
        half = hi.size // 2
        hi, lo = _dd.add(hi[:half], lo[:half], hi[half:], lo[half:])
    sh, sl = 0.0, 0.0
    for h, l in zip(hi.tolist(), lo.tolist()):
        sh, sl = _dd.add(sh, sl, h, l)
    return HiPrecValue(sh, sl)


def compensated_sum(terms: Iterable, chunks: int | None = None) -> HiPrecValue:
    """Sum HiPrecValue (or plain float) terms in double-double.

    With ``chunks`` set, the terms are split into that many contiguous blocks
    summed in worker threads and then combined; the result agrees with the
    sequential sum to well below 1e-20 relative for well-scaled inputs.
    """
    items = [HiPrecValue.of(t) for t in terms]
    hi = np.array([t.hi for t in items], dtype=float)
    lo = np.array([t.lo for t in items], dtype=float)
    if not chunks or chunks <= 1 or hi.size < 2 * chunks:
        return sum_arrays(hi, lo)
    bounds = np.linspace(0, hi.size, chunks + 1).astype(int)
    parts = [(hi[a:b], lo[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]
    with ThreadPoolExecutor(max_workers=chunks) as pool:
        partials = list(pool.map(lambda p: sum_arrays(*p), parts))
    total = HiPrecValue(0.0)
    for p in partials:
        total = total + p
    return total
