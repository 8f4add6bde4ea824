"""Persistence-threshold simplification and the level hierarchy.

Canceling a pair redirects its extremum to the elder recorded at pairing
time; chains of absorptions are resolved by pointer jumping. Persistence is
non-decreasing along absorption chains, so resolving at threshold eps stops
at the first ancestor whose own pair survives - this makes direct and
incremental simplification agree exactly.
"""

from __future__ import annotations

import json
import os

import numpy as np

from ._validation import check_epsilons, check_fractions, check_same_field
from .dual import MergeForest, build_dual, coarsen_dual, dual_to_dict
from .field import ScalarField
from .morse import Segmentation, _densify, segment
from .persistence import PersistencePairSet, sublevel_pairs, superlevel_pairs


class ThresholdSchedule:
    """Strictly increasing persistence thresholds; may carry a warning flag."""

    def __init__(self, epsilons, warned=False):
        self.epsilons = check_epsilons(epsilons)
        self.warned = warned

    def __len__(self):
        return self.epsilons.size


class Hierarchy:
    """Level sequence (base first) with per-level dual graphs and merge maps.

    ``merge_maps[l][r]`` is the region id at level l+1 absorbing region r of
    level l; identity survivals are included, so each map is total.
    """

    def __init__(self, field, epsilons, segmentations, duals, merge_maps):
        self.field = field
        self.epsilons = epsilons  # per level; 0.0 for the base
        self.segmentations = segmentations
        self.duals = duals
        self.merge_maps = merge_maps

    @property
    def n_levels(self):
        return len(self.segmentations)

    def region_counts(self):
        return [s.n_regions for s in self.segmentations]


def _representatives(pairs: PersistencePairSet, epsilon: float, n: int):
    """Vertex-indexed map sending each canceled extremum to its survivor."""
    rep = np.arange(n, dtype=np.int64)
    cancel = pairs.persistence < epsilon
    rep[pairs.extremum[cancel]] = pairs.absorbed_into[cancel]
    while True:
        nxt = rep[rep]
        if np.array_equal(nxt, rep):
            return rep
        rep = nxt


def simplify(seg: Segmentation, sub: PersistencePairSet, sup: PersistencePairSet, epsilon: float) -> Segmentation:
    """Cancel all pairs with persistence strictly below ``epsilon``.

    Min-side and max-side relabelings touch disjoint label arrays, so their
    order is immaterial; region ids are recomputed densely afterwards.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    check_same_field(seg.n, sub, sup)
    rep_min = _representatives(sub, epsilon, seg.n)
    rep_max = _representatives(sup, epsilon, seg.n)
    return _densify(rep_min[seg.min_label], rep_max[seg.max_label], seg.n)


def thresholds_from_fractions(
    sub: PersistencePairSet, sup: PersistencePairSet, fractions
) -> ThresholdSchedule:
    """Threshold at fraction q = persistence order statistic at index ceil(q*count).

    Canceling pairs below that value removes approximately a fraction q of
    the pooled finite pairs. q=0 maps to 0; q=1 to just above the maximum.
    """
    fractions = check_fractions(fractions)
    pool = np.sort(np.concatenate([sub.persistence, sup.persistence]))
    count = pool.size
    warned = False
    eps = []
    for q in fractions:
        if q == 0.0:
            e = 0.0
        elif count == 0:
            e = 0.0
            warned = True
        else:
            idx = int(np.ceil(np.round(q * count, 12)))
            e = float(np.nextafter(pool[-1], np.inf)) if idx >= count else float(pool[idx])
        eps.append(e)
    for i in range(1, len(eps)):  # persistence ties may collide; keep strictness
        if eps[i] <= eps[i - 1]:
            eps[i] = float(np.nextafter(eps[i - 1], np.inf))
    return ThresholdSchedule(np.asarray(eps), warned=warned)


def build_hierarchy(
    field: ScalarField,
    schedule: ThresholdSchedule,
    base: Segmentation | None = None,
    sub: PersistencePairSet | None = None,
    sup: PersistencePairSet | None = None,
) -> Hierarchy:
    """Base segmentation plus one simplified level per threshold.

    Each level is resolved directly from the base labels (equivalent to
    incremental refinement by the nesting property); merge maps link regions
    of consecutive levels, and each level gets its own dual graph.
    """
    if base is None:
        base = segment(field)
    if sub is None:
        sub = sublevel_pairs(field)
    if sup is None:
        sup = superlevel_pairs(field)
    n = field.n
    epsilons = [0.0] + [float(e) for e in schedule.epsilons]
    segs = [base]
    reps = [None]
    for e in schedule.epsilons:
        rep_min = _representatives(sub, float(e), n)
        rep_max = _representatives(sup, float(e), n)
        segs.append(_densify(rep_min[base.min_label], rep_max[base.max_label], n))
        reps.append((rep_min, rep_max))

    merge_maps = []
    for lvl, (lo, hi) in enumerate(zip(segs[:-1], segs[1:])):
        rep_min, rep_max = reps[lvl + 1]
        target_code = rep_min[lo.region_min] * np.int64(n) + rep_max[lo.region_max]
        next_code = hi.region_min * np.int64(n) + hi.region_max
        sorter = np.argsort(next_code)
        pos = np.searchsorted(next_code[sorter], target_code)
        merge_maps.append(sorter[pos])

    base_dual = build_dual(base, field, sub, sup, MergeForest(sub), MergeForest(sup))
    duals = [base_dual]
    composed = None
    for lvl in range(1, len(segs)):
        mm = merge_maps[lvl - 1]
        composed = mm if composed is None else mm[composed]
        duals.append(coarsen_dual(base_dual, composed, segs[lvl], field, sub, sup))
    return Hierarchy(field, np.asarray(epsilons), segs, duals, merge_maps)


def hierarchy_to_dict(h: Hierarchy):
    levels = []
    for lvl in range(h.n_levels):
        d = dual_to_dict(h.duals[lvl])
        levels.append(
            {
                "epsilon": float(h.epsilons[lvl]),
                "regions": d["nodes"],
                "dual_edges": d["edges"],
            }
        )
    merges = [
        {"level": lvl, "from_region": int(r), "to_region": int(t)}
        for lvl, mm in enumerate(h.merge_maps)
        for r, t in enumerate(mm)
    ]
    return {"levels": levels, "merges": merges}


def save_hierarchy_json(h: Hierarchy, path):
    with open(os.fspath(path), "w") as fh:
        json.dump(hierarchy_to_dict(h), fh)
