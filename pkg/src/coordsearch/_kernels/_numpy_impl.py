"""Vectorized numpy implementations of the hot evaluation kernels.

Pure-Python fallback twin of the compiled ``_fast`` extension; both expose
the same functions and must return the same values (see tests/test_kernels).
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


# --- bin packing -----------------------------------------------------------


def bin_loads(assign, sizes, n_bins):
    """Summed item size per bin for a bin-assignment vector."""
    loads = np.zeros(n_bins, dtype=np.float64)
    np.add.at(loads, assign, sizes)
    return loads


def _soft_terms(x, capacity):
    half = capacity / 2.0
    d2 = (x - half) ** 2
    return np.where(x <= capacity, half * half - d2, d2)


def gsoft_total(loads, capacity):
    """Soft packing objective: full-or-empty bins score 0, half-full worst."""
    return float(_soft_terms(np.asarray(loads, dtype=np.float64), capacity).sum())


def binpack_wlu_all(assign, sizes, loads, capacity):
    """Per-agent soft-objective drop from removing that agent's item.

    Only the item's own bin term changes, so each entry costs O(1).
    """
    x = loads[assign]
    return _soft_terms(x, capacity) - _soft_terms(x - sizes, capacity)


def binpack_au_all(assign, sizes, loads, capacity):
    """Per-agent gap between the soft objective and its uniform mean-field value.

    The mean-field evaluation spreads agent eta's item as size/n over every bin.
    """
    n = len(assign)
    g = gsoft_total(loads, capacity)
    out = np.empty(n, dtype=np.float64)
    for eta in range(n):
        mf = loads + sizes[eta] / len(loads)
        mf[assign[eta]] -= sizes[eta]
        out[eta] = g - gsoft_total(mf, capacity)
    return out


# --- format-choice game ----------------------------------------------------


def _neighbor_sums(mat, indptr, indices):
    m = mat.shape[0]
    if len(indices) == 0:
        return np.zeros_like(mat)
    empty = indptr[:-1] == indptr[1:]
    if empty.any():
        out = np.empty_like(mat)
        for a in range(m):
            lo, hi = indptr[a], indptr[a + 1]
            out[a] = mat[indices[lo:hi]].sum(axis=0) if hi > lo else 0.0
        return out
    return np.add.reduceat(mat[indices], indptr[:-1], axis=0)


def formats_g(usage, prefs, indptr, indices):
    """World utility of the format game for a (possibly fractional) usage matrix."""
    nbr = _neighbor_sums(usage, indptr, indices)
    theta = usage.sum(axis=0)
    return float(((prefs * usage * nbr) * theta).sum())


def formats_private_all(usage, prefs, indptr, indices, clamp_row):
    """Per-agent G(z) - G(z with that agent's usage row replaced by clamp_row).

    Uses an exact algebraic delta: replacing one row changes the format
    counts, the replaced agent's own weighted usage, and the neighbor sums
    of that agent's neighbors only.
    """
    w = prefs * usage
    s = _neighbor_sums(usage, indptr, indices)
    nw = _neighbor_sums(w, indptr, indices)
    theta = usage.sum(axis=0)
    t = (w * s).sum(axis=0)
    g = float((t * theta).sum())
    delta = clamp_row[None, :] - usage
    t_cl = t[None, :] + (prefs * clamp_row[None, :] - w) * s + delta * nw
    theta_cl = theta[None, :] + delta
    g_cl = (t_cl * theta_cl).sum(axis=1)
    return g - g_cl
