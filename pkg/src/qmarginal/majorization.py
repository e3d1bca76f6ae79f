"""Increasing-order partial sums and the majorization predicate.

Convention used everywhere here: with both vectors sorted increasing,
``y`` majorizes ``x`` when every prefix sum of ``x`` is at least the matching
prefix sum of ``y`` and the totals agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import Spectrum

MAJORIZATION_TOL = 1e-8


def _values(v) -> np.ndarray:
    if isinstance(v, Spectrum):
        return v.values
    return np.sort(np.asarray(v, dtype=float).ravel())


def prefix_sum(spectrum, k: int) -> float:
    """Sum of the ``k`` smallest entries (0 for ``k = 0``)."""
    lam = _values(spectrum)
    if k < 0 or k > lam.size:
        raise ValueError(f"k={k} out of range for a spectrum of length {lam.size}")
    return float(np.sum(lam[:k]))


def block_sums(spectrum, block_size: int) -> np.ndarray:
    """Sums of consecutive blocks of the increasing-ordered spectrum."""
    lam = _values(spectrum)
    if block_size < 1 or lam.size % block_size:
        raise ValueError(
            f"block size {block_size} does not divide spectrum length {lam.size}"
        )
    return lam.reshape(-1, block_size).sum(axis=1)


@dataclass(frozen=True)
class MajorizationResult:
    status: str  # "holds" | "fails-at-k" | "sum-mismatch"
    k: int | None
    gaps: tuple[float, ...]

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def majorizes(y, x, tol: float = MAJORIZATION_TOL) -> MajorizationResult:
    """Does ``y`` majorize ``x``?

    Both inputs are re-sorted increasing.  ``gaps[k-1]`` is the k-th prefix sum
    of ``x`` minus that of ``y``; a gap in ``(-tol, 0)`` counts as equality.
    ``k`` in a ``fails-at-k`` result is 1-based.
    """
    xs = np.sort(np.asarray(x, dtype=float).ravel())
    ys = np.sort(np.asarray(y, dtype=float).ravel())
    if xs.size != ys.size:
        raise ValueError(f"length mismatch: {ys.size} vs {xs.size}")
    gaps = np.cumsum(xs) - np.cumsum(ys)
    g = tuple(float(v) for v in gaps)
    if abs(gaps[-1]) > tol:
        return MajorizationResult("sum-mismatch", None, g)
    bad = np.nonzero(gaps[:-1] < -tol)[0]
    if bad.size:
        return MajorizationResult("fails-at-k", int(bad[0]) + 1, g)
    return MajorizationResult("holds", None, g)
