"""Generalized geometric measure of genuine multipartite entanglement."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .qcore import Bipartition, PureState, schmidt_sq_max


def bipartitions(labels) -> list[Bipartition]:
    """All distinct two-block splits of the labels (complements deduplicated)."""
    labels = tuple(labels)
    n = len(labels)
    if n < 2:
        raise ValueError("need at least two parties")
    out = []
    seen = set()
    for size in range(1, n // 2 + 1):
        for side in combinations(labels, size):
            rest = tuple(l for l in labels if l not in side)
            key = frozenset(side) if size * 2 != n else min(frozenset(side), frozenset(rest), key=sorted)
            if key in seen:
                continue
            seen.add(key)
            out.append(Bipartition(side, rest))
    return out


def ggm(psi: PureState) -> float:
    """1 minus the largest squared Schmidt coefficient over all bipartitions.

    Zero iff some bipartition is a product; bounded by 1 - 1/d_min.  For
    N >= 2 parties every one of the 2^(N-1) - 1 splits is enumerated; N <= 4
    keeps that cheap.
    """
    if len(psi.dims) > 4:
        raise ValueError("ggm is enumerated for at most 4 parties")
    lam_max = max(schmidt_sq_max(psi, cut) for cut in bipartitions(psi.labels))
    return float(1.0 - lam_max)
