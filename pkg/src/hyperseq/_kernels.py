"""Brute-force filter-axiom kernel over every family of subsets of a small universe.

A family on {0..k-1} is a bitmask over the 2^k subsets; there are
2^(2^k) families.  ``filter_mask(k)`` flags those that satisfy the filter
axioms, and ``measure_mask(k)`` does the same for finitely additive
{0,1}-valued set functions (read with the same bit layout).  The numba
path loops family by family; the numpy fallback checks all of them at
once column by column.  Set HYPERSEQ_NO_NUMBA=1
to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

try:
    if os.environ.get("HYPERSEQ_NO_NUMBA", "") not in ("", "0"):
        raise ImportError("numba disabled by HYPERSEQ_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _filter_mask_numpy(k: int) -> np.ndarray:
    nsub = 1 << k
    fams = np.arange(1 << nsub, dtype=np.uint32)
    member = ((fams[:, None] >> np.arange(nsub, dtype=np.uint32)) & 1).astype(bool)
    ok = member.any(axis=1) & ~member[:, 0]
    for s in range(nsub):
        for t in range(nsub):
            both = member[:, s] & member[:, t]
            ok &= ~both | member[:, s & t]
            ok &= ~member[:, s] | member[:, s | t]
    return ok


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _filter_mask_numba(k):
        nsub = 1 << k
        nfam = 1 << nsub
        out = np.zeros(nfam, dtype=np.bool_)
        for f in range(1, nfam):
            if f & 1:
                continue
            good = True
            for s in range(nsub):
                if not (f >> s) & 1:
                    continue
                for t in range(nsub):
                    if (f >> t) & 1:
                        if not (f >> (s & t)) & 1:
                            good = False
                            break
                    if not (f >> (s | t)) & 1:
                        good = False
                        break
                if not good:
                    break
            out[f] = good
        return out


def filter_mask(k: int, backend: str | None = None) -> np.ndarray:
    """Boolean array indexed by family bitmask: True where the family is a filter."""
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _filter_mask_numba(k)
    if backend == "numpy":
        return _filter_mask_numpy(k)
    raise ValueError(f"unknown backend {backend!r}")


def _measure_mask_numpy(k: int) -> np.ndarray:
    nsub = 1 << k
    full = nsub - 1
    mus = np.arange(1 << nsub, dtype=np.uint32)
    val = ((mus[:, None] >> np.arange(nsub, dtype=np.uint32)) & 1).astype(np.int8)
    ok = val[:, full] == 1
    for s in range(nsub):
        for t in range(nsub):
            if s & t == 0:
                ok &= val[:, s | t] == val[:, s] + val[:, t]
    return ok


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _measure_mask_numba(k):
        nsub = 1 << k
        full = nsub - 1
        nmu = 1 << nsub
        out = np.zeros(nmu, dtype=np.bool_)
        for mu in range(nmu):
            if not (mu >> full) & 1:
                continue
            good = True
            for s in range(nsub):
                for t in range(nsub):
                    if s & t == 0:
                        if ((mu >> (s | t)) & 1) != ((mu >> s) & 1) + ((mu >> t) & 1):
                            good = False
                            break
                if not good:
                    break
            out[mu] = good
        return out


def measure_mask(k: int, backend: str | None = None) -> np.ndarray:
    """True where the {0,1}-valued set function (bit s = mu(s)) is finitely
    additive with mu(universe) = 1."""
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _measure_mask_numba(k)
    if backend == "numpy":
        return _measure_mask_numpy(k)
    raise ValueError(f"unknown backend {backend!r}")
