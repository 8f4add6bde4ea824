"""Input validation helpers shared by loaders, estimators, and the CLI."""

from __future__ import annotations

import numpy as np


def as_float_array(a, name="array"):
    """Coerce to a float64 ndarray, rejecting non-finite entries with their location."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    bad = ~np.isfinite(arr)
    if bad.any():
        loc = np.unravel_index(int(np.flatnonzero(bad.ravel())[0]), arr.shape)
        raise ValueError(f"{name} contains a non-finite value at index {tuple(int(i) for i in loc)}")
    return arr


def check_grid(arr, name="array"):
    arr = as_float_array(arr, name=name)
    if arr.ndim not in (1, 2, 3):
        raise ValueError(f"{name} must be 1D, 2D or 3D, got ndim={arr.ndim}")
    return arr


def check_edges(edges, n_vertices):
    """Validate and canonicalize an undirected edge list: in-range, no self-loops, deduplicated."""
    e = np.asarray(edges, dtype=np.int64)
    if e.size == 0:
        e = e.reshape(0, 2)
    if e.ndim != 2 or e.shape[1] != 2:
        raise ValueError("edges must be an (m, 2) array of vertex index pairs")
    if e.size:
        if e.min() < 0 or e.max() >= n_vertices:
            bad = e[(e < 0).any(axis=1) | (e >= n_vertices).any(axis=1)][0]
            raise ValueError(f"edge endpoint out of range: {tuple(int(i) for i in bad)}")
        if (e[:, 0] == e[:, 1]).any():
            v = int(e[e[:, 0] == e[:, 1]][0, 0])
            raise ValueError(f"self-loop at vertex {v}")
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    canon = np.unique(np.stack([lo, hi], axis=1), axis=0) if e.size else e
    return canon


def check_fractions(fractions):
    f = np.asarray(fractions, dtype=np.float64)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("fractions must be a nonempty 1D sequence")
    if (f < 0).any() or (f > 1).any():
        raise ValueError("fractions must lie in [0, 1]")
    if (np.diff(f) <= 0).any():
        raise ValueError("fractions must be strictly increasing")
    return f


def check_epsilons(epsilons):
    e = np.asarray(epsilons, dtype=np.float64)
    if e.ndim != 1:
        raise ValueError("epsilons must be a 1D sequence")
    if e.size and ((e < 0).any() or (np.diff(e) <= 0).any()):
        raise ValueError("epsilons must be nonnegative and strictly increasing")
    return e


def check_same_field(n, *objs):
    """Reject inputs built from mismatched fields (different vertex counts)."""
    for o in objs:
        if o.n != n:
            raise ValueError(f"inputs come from mismatched fields: {o.n} vertices vs {n}")
