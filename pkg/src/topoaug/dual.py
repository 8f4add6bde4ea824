"""Region-adjacency dual graph with persistence-weighted edges.

Nodes are the segmentation regions; an edge exists wherever a domain edge
crosses two regions. An edge's weight is the persistence of the cheapest
pair whose cancellation merges the differing extrema of the two regions:
the pair at the join of the two extrema in the absorption forest (for a
direct absorption that is the recorded pair itself; otherwise the pair
completing the transitive chain). Regions in different components of the
absorption forest get an infinite-weight edge with no witness.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from ._kernels import dendrogram_build, tree_depths_and_roots
from ._validation import check_same_field
from .field import ScalarField
from .morse import Segmentation
from .persistence import PersistencePairSet

WITNESS_NONE = 0
WITNESS_SUB = 1
WITNESS_SUP = 2


class MergeForest:
    """Dendrogram over one sweep's extrema, answering join queries.

    ``join(a, b)`` returns the index of the pair at which extrema a and b
    first fall into one absorption class when pairs cancel in persistence
    order, or -1 if they never do (disconnected domains).
    """

    def __init__(self, pairs: PersistencePairSet):
        self.pairs = pairs
        ext_all = np.concatenate([pairs.extremum, pairs.essential])
        self.n_ext = ext_all.size
        self.leaf_of = np.full(pairs.n, -1, dtype=np.int64)
        self.leaf_of[ext_all] = np.arange(self.n_ext)
        parent = dendrogram_build(pairs.extremum, pairs.absorbed_into, self.leaf_of, self.n_ext)
        self.parent = parent
        self.depth, self.root = tree_depths_and_roots(parent)
        max_depth = int(self.depth.max()) if self.depth.size else 0
        n_levels = max(1, max_depth.bit_length())
        n_nodes = parent.size
        up = np.empty((n_levels, n_nodes), dtype=np.int32)
        up[0] = np.where(parent >= 0, parent, np.arange(n_nodes))
        for k in range(1, n_levels):
            up[k] = up[k - 1][up[k - 1]]
        self.up = up

    def join(self, ext_a, ext_b):
        """Vectorized join-pair lookup (binary-lifting LCA) for extremum vertex ids."""
        u = self.leaf_of[np.asarray(ext_a, dtype=np.int64)]
        v = self.leaf_of[np.asarray(ext_b, dtype=np.int64)]
        out = np.full(u.shape, -1, dtype=np.int64)
        ok = (self.root[u] == self.root[v]) & (u != v)
        u, v = u[ok], v[ok]
        du, dv = self.depth[u], self.depth[v]
        swap = du < dv
        u[swap], v[swap] = v[swap], u[swap]
        diff = np.abs(du - dv)
        for k in range(self.up.shape[0] - 1, -1, -1):
            step = (diff >> k) & 1 == 1
            u[step] = self.up[k][u[step]]
        same = u == v
        for k in range(self.up.shape[0] - 1, -1, -1):
            pu, pv = self.up[k][u], self.up[k][v]
            move = ~same & (pu != pv)
            u[move] = pu[move]
            v[move] = pv[move]
        lca = np.where(same, u, self.up[0][u])
        out[ok] = lca - self.n_ext
        return out


class DualGraph:
    """Simple graph over regions: parallel adjacencies collapse to one edge."""

    def __init__(self, region_min, region_max, f_min, f_max, size, edge_a, edge_b, weight, witness_extremum, witness_saddle, witness_kind):
        self.region_min = region_min
        self.region_max = region_max
        self.f_min = f_min
        self.f_max = f_max
        self.size = size
        self.edge_a = edge_a
        self.edge_b = edge_b
        self.weight = weight
        self.witness_extremum = witness_extremum
        self.witness_saddle = witness_saddle
        self.witness_kind = witness_kind

    @property
    def n_nodes(self):
        return self.region_min.size

    @property
    def n_edges(self):
        return self.edge_a.size


def _join_persistence(join, pairs):
    pers = np.full(join.shape, np.inf)
    has = join >= 0
    if has.any():
        pers[has] = pairs.persistence[join[has]]
    return pers


def region_adjacency(seg: Segmentation, field: ScalarField):
    """Unique region-id pairs (a < b) linked by at least one domain edge."""
    e = field.edges
    ra = seg.region_id[e[:, 0]]
    rb = seg.region_id[e[:, 1]]
    cross = ra != rb
    lo = np.minimum(ra[cross], rb[cross])
    hi = np.maximum(ra[cross], rb[cross])
    if lo.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    codes = np.unique(lo * np.int64(seg.n_regions) + hi)  # 1D codes sort far faster than row unique
    return np.stack([codes // seg.n_regions, codes % seg.n_regions], axis=1)


def _assemble_dual(seg, field, sub, sup, a, b, sub_join, sup_join) -> DualGraph:
    """Edge weights and witnesses from per-edge join-pair indices."""
    weight = np.full(a.size, np.inf)
    wit_ext = np.full(a.size, -1, dtype=np.int64)
    wit_sad = np.full(a.size, -1, dtype=np.int64)
    wit_kind = np.full(a.size, WITNESS_NONE, dtype=np.int8)
    sub_pers = _join_persistence(sub_join, sub)
    sup_pers = _join_persistence(sup_join, sup)
    take_sub = sub_pers <= sup_pers  # ties go to the sublevel side
    for take, join, pers, pairs, kind in (
        (take_sub & (sub_join >= 0), sub_join, sub_pers, sub, WITNESS_SUB),
        (~take_sub & (sup_join >= 0), sup_join, sup_pers, sup, WITNESS_SUP),
    ):
        weight[take] = pers[take]
        wit_ext[take] = pairs.extremum[join[take]]
        wit_sad[take] = pairs.saddle[join[take]]
        wit_kind[take] = kind
    g = DualGraph(
        seg.region_min,
        seg.region_max,
        field.values[seg.region_min],
        field.values[seg.region_max],
        seg.region_sizes(),
        a,
        b,
        weight,
        wit_ext,
        wit_sad,
        wit_kind,
    )
    g.sub_join = sub_join
    g.sup_join = sup_join
    return g


def build_dual(
    seg: Segmentation,
    field: ScalarField,
    sub: PersistencePairSet,
    sup: PersistencePairSet,
    sub_forest: MergeForest | None = None,
    sup_forest: MergeForest | None = None,
) -> DualGraph:
    """Dual graph of a segmentation; forests may be passed to amortize reuse."""
    check_same_field(field.n, seg, sub, sup)
    if sub_forest is None:
        sub_forest = MergeForest(sub)
    if sup_forest is None:
        sup_forest = MergeForest(sup)
    adj = region_adjacency(seg, field)
    a, b = adj[:, 0], adj[:, 1]
    m1, m2 = seg.region_min[a], seg.region_min[b]
    M1, M2 = seg.region_max[a], seg.region_max[b]
    sub_join = np.where(m1 != m2, sub_forest.join(m1, m2), -1)
    sup_join = np.where(M1 != M2, sup_forest.join(M1, M2), -1)
    return _assemble_dual(seg, field, sub, sup, a, b, sub_join, sup_join)


def coarsen_dual(base: DualGraph, region_map, seg, field, sub, sup) -> DualGraph:
    """Dual graph of a coarser level from the base dual and a region map.

    Joins lift unchanged through representatives (representatives stay
    strictly below the joining pair in the absorption forest), so any base
    edge mapping onto a coarse edge supplies that edge's join indices;
    internal edges vanish.
    """
    ma = region_map[base.edge_a]
    mb = region_map[base.edge_b]
    keep = np.flatnonzero(ma != mb)
    lo = np.minimum(ma[keep], mb[keep])
    hi = np.maximum(ma[keep], mb[keep])
    R = np.int64(seg.n_regions)
    codes, first = np.unique(lo * R + hi, return_index=True)
    rep = keep[first]
    a, b = codes // R, codes % R
    m_differs = seg.region_min[a] != seg.region_min[b]
    M_differs = seg.region_max[a] != seg.region_max[b]
    sub_join = np.where(m_differs, base.sub_join[rep], -1)
    sup_join = np.where(M_differs, base.sup_join[rep], -1)
    return _assemble_dual(seg, field, sub, sup, a, b, sub_join, sup_join)


def dual_to_dict(g: DualGraph):
    kinds = {WITNESS_SUB: "sublevel", WITNESS_SUP: "superlevel"}
    nodes = [
        {
            "id": i,
            "min": int(g.region_min[i]),
            "max": int(g.region_max[i]),
            "f_min": float(g.f_min[i]),
            "f_max": float(g.f_max[i]),
            "size": int(g.size[i]),
        }
        for i in range(g.n_nodes)
    ]
    edges = []
    for i in range(g.n_edges):
        w = float(g.weight[i])
        witness = None
        if g.witness_kind[i] != WITNESS_NONE:
            witness = {
                "extremum": int(g.witness_extremum[i]),
                "saddle": int(g.witness_saddle[i]),
                "kind": kinds[int(g.witness_kind[i])],
            }
        edges.append(
            {
                "a": int(g.edge_a[i]),
                "b": int(g.edge_b[i]),
                "weight": w if np.isfinite(w) else None,
                "witness": witness,
            }
        )
    return {"nodes": nodes, "edges": edges}


def save_dual_json(g: DualGraph, path):
    with open(os.fspath(path), "w") as fh:
        json.dump(dual_to_dict(g), fh)


def save_dual_edges_csv(g: DualGraph, path):
    """Edge-list CSV (a, b, weight) for graph-tool style interop."""
    with open(os.fspath(path), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "b", "weight"])
        for i in range(g.n_edges):
            w.writerow([int(g.edge_a[i]), int(g.edge_b[i]), repr(float(g.weight[i]))])
