"""Discrete gradient pairing and gradient-path segmentation.

Every vertex is paired with its steepest strictly-higher and strictly-lower
neighbor under the field's total order; following those pairings to their
fixpoints assigns each vertex a (minimum, maximum) pair. Saddles never
appear explicitly: under the total order every non-extremal vertex has both
an ascent and a descent target, so chains run extremum to extremum.

All functions are pure and deterministic; fields are immutable, so concurrent
calls on different fields are safe.
"""

from __future__ import annotations

import json

import numpy as np

from ._kernels import resolve_chains
from .field import GRAPH, ScalarField

NONE = -1


class DiscreteGradient:
    """Per-vertex steepest pairings; NONE (-1) marks local extrema."""

    def __init__(self, ascend_to, descend_to):
        self.ascend_to = ascend_to
        self.descend_to = descend_to
        self.n = ascend_to.size


class CriticalSet:
    """Unmatched vertices of the gradient: minima and maxima with their values."""

    def __init__(self, minima, maxima, min_values, max_values):
        self.minima = minima
        self.maxima = maxima
        self.min_values = min_values
        self.max_values = max_values


class Segmentation:
    """Per-vertex (minimum, maximum) assignment with dense region ids.

    ``region_id`` is dense, numbered by first appearance scanning vertices in
    index order; ids are per-field and not comparable across fields.
    """

    def __init__(self, min_label, max_label, region_id, region_min, region_max):
        self.min_label = min_label
        self.max_label = max_label
        self.region_id = region_id
        self.region_min = region_min  # region id -> minimum vertex
        self.region_max = region_max  # region id -> maximum vertex
        self.n = min_label.size
        self.n_regions = region_min.size

    def region_sizes(self):
        return np.bincount(self.region_id, minlength=self.n_regions)


def build_gradient(field: ScalarField) -> DiscreteGradient:
    """Pair each vertex with its highest-ranked higher neighbor (and lowest lower).

    Steepest selection by value with rank as tie-break is exactly the
    neighbor of extreme rank, since rank orders (value, index).
    """
    n, rank = field.n, field.rank
    best_hi = np.full(n, -1, dtype=np.int64)
    best_lo = np.full(n, n, dtype=np.int64)
    if field.kind == GRAPH:
        e = field.edges
        rl, rr = rank[e[:, 0]], rank[e[:, 1]]
        swap = rl > rr
        lo = np.where(swap, e[:, 1], e[:, 0])
        hi = np.where(swap, e[:, 0], e[:, 1])
        np.maximum.at(best_hi, lo, rank[hi])
        np.minimum.at(best_lo, hi, rank[lo])
    else:
        shape = field.shape
        R = rank.reshape(shape)
        bh = best_hi.reshape(shape)
        bl = best_lo.reshape(shape)
        for ax in range(len(shape)):
            Rm = np.moveaxis(R, ax, 0)
            bhm = np.moveaxis(bh, ax, 0)
            blm = np.moveaxis(bl, ax, 0)
            np.maximum(bhm[:-1], Rm[1:], out=bhm[:-1])
            np.maximum(bhm[1:], Rm[:-1], out=bhm[1:])
            np.minimum(blm[:-1], Rm[1:], out=blm[:-1])
            np.minimum(blm[1:], Rm[:-1], out=blm[1:])
    order = field.order
    ascend_to = np.where(best_hi > rank, order[np.minimum(best_hi, n - 1)], NONE)
    descend_to = np.where(best_lo < rank, order[np.where(best_lo < n, best_lo, 0)], NONE)
    return DiscreteGradient(ascend_to, descend_to)


def find_critical(gradient: DiscreteGradient, field: ScalarField) -> CriticalSet:
    """Minima are vertices with no descent target, maxima with no ascent target."""
    minima = np.flatnonzero(gradient.descend_to == NONE)
    maxima = np.flatnonzero(gradient.ascend_to == NONE)
    return CriticalSet(minima, maxima, field.values[minima], field.values[maxima])


def segment(field: ScalarField, gradient: DiscreteGradient | None = None) -> Segmentation:
    """Assign every vertex the (minimum, maximum) fixpoints of its gradient chains.

    Chains are resolved in rank order with memoized labels, one O(n) pass per
    direction; region ids are then densified by first appearance.
    """
    if gradient is None:
        gradient = build_gradient(field)
    order = np.ascontiguousarray(field.order)
    max_label = resolve_chains(gradient.ascend_to, order)
    min_label = resolve_chains(gradient.descend_to, np.ascontiguousarray(order[::-1]))
    return _densify(min_label, max_label, field.n)


def _densify(min_label, max_label, n) -> Segmentation:
    codes = min_label * np.int64(n) + max_label
    uniq, first_idx, inverse = np.unique(codes, return_index=True, return_inverse=True)
    by_appearance = np.argsort(first_idx, kind="stable")
    dense = np.empty(uniq.size, dtype=np.int64)
    dense[by_appearance] = np.arange(uniq.size)
    region_id = dense[inverse]
    ordered = uniq[by_appearance]
    return Segmentation(min_label, max_label, region_id, ordered // n, ordered % n)


def save_segmentation(seg: Segmentation, field: ScalarField, stem):
    """Write <stem>.npy (region id per vertex) + <stem>.json (region table)."""
    import os

    stem = os.fspath(stem)
    shape = field.shape if field.kind != GRAPH else (field.n,)
    np.save(stem + ".npy", seg.region_id.reshape(shape))
    table = [
        {
            "id": int(i),
            "min_vertex": int(seg.region_min[i]),
            "max_vertex": int(seg.region_max[i]),
            "f_min": float(field.values[seg.region_min[i]]),
            "f_max": float(field.values[seg.region_max[i]]),
        }
        for i in range(seg.n_regions)
    ]
    with open(stem + ".json", "w") as fh:
        json.dump(table, fh)
