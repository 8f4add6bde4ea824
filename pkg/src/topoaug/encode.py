"""Learning-ready encodings of hierarchies and diagrams.

Channel stacks carry the extremum *values* f(m), f(M) of each vertex's
region per level (region ids are arbitrary per sample and unlearnable
across a dataset; an id channel is available behind a flag for debugging).
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from .field import GRAPH
from .hierarchy import Hierarchy
from .persistence import PersistenceDiagram

INTRA = 0
INTER = 1


class ChannelStack:
    """(channels, *shape) stack: per level one f(min) and one f(max) channel."""

    def __init__(self, data, level_index, epsilons, channel_min, channel_max):
        self.data = data
        self.level_index = level_index
        self.epsilons = epsilons
        self.channel_min = channel_min  # normalization metadata, per channel
        self.channel_max = channel_max


class GnnGraph:
    """Hierarchical graph: intra-level adjacency plus inter-level merge edges."""

    def __init__(self, level, region_id, features, src, dst, edge_type, edge_weight):
        self.level = level
        self.region_id = region_id
        self.features = features  # columns: f_min, f_max, size_fraction, min_edge_persistence
        self.src = src
        self.dst = dst
        self.edge_type = edge_type
        self.edge_weight = edge_weight

    @property
    def n_nodes(self):
        return self.level.size

    @property
    def n_edges(self):
        return self.src.size


class PersistenceImage:
    def __init__(self, grid, sigma, birth_range, pers_range):
        self.grid = grid
        self.sigma = sigma
        self.birth_range = birth_range
        self.pers_range = pers_range


class PersistenceLandscape:
    def __init__(self, matrix, grid):
        self.matrix = matrix
        self.grid = grid


def to_channels(h: Hierarchy, include_region_ids=False) -> ChannelStack:
    """Per level, two channels holding f(min) and f(max) of each vertex's region.

    Channel order is level-major, min before max. Grid domains only.
    """
    field = h.field
    if field.kind == GRAPH:
        raise ValueError("channel encoding requires grid domain")
    values = field.values
    shape = field.shape
    chans = []
    level_index = []
    for lvl, seg in enumerate(h.segmentations):
        chans.append(values[seg.min_label].reshape(shape))
        chans.append(values[seg.max_label].reshape(shape))
        level_index += [lvl, lvl]
        if include_region_ids:
            chans.append(seg.region_id.reshape(shape).astype(np.float64))
            level_index.append(lvl)
    data = np.stack(chans, axis=0)
    flat = data.reshape(data.shape[0], -1)
    return ChannelStack(
        data,
        np.asarray(level_index),
        h.epsilons,
        flat.min(axis=1),
        flat.max(axis=1),
    )


def to_gnn_graph(h: Hierarchy, prune_base=False) -> GnnGraph:
    """Flatten the hierarchy into node/edge arrays with dense global ids.

    Node features are [f_min, f_max, size_fraction, persistence of the
    cheapest finite incident intra edge (0 if none)]. ``prune_base`` drops
    level-0 nodes together with their intra and inter edges.
    """
    start = 1 if prune_base else 0
    n = h.field.n
    counts = [h.segmentations[l].n_regions for l in range(h.n_levels)]
    offsets = {}
    total = 0
    for l in range(start, h.n_levels):
        offsets[l] = total
        total += counts[l]

    level = np.empty(total, dtype=np.int64)
    region_id = np.empty(total, dtype=np.int64)
    feats = np.zeros((total, 4))
    src, dst, etype, eweight = [], [], [], []
    for l in range(start, h.n_levels):
        off = offsets[l]
        g = h.duals[l]
        r = counts[l]
        level[off : off + r] = l
        region_id[off : off + r] = np.arange(r)
        feats[off : off + r, 0] = g.f_min
        feats[off : off + r, 1] = g.f_max
        feats[off : off + r, 2] = g.size / n
        cheapest = np.full(r, np.inf)
        finite = np.isfinite(g.weight)
        np.minimum.at(cheapest, g.edge_a[finite], g.weight[finite])
        np.minimum.at(cheapest, g.edge_b[finite], g.weight[finite])
        feats[off : off + r, 3] = np.where(np.isfinite(cheapest), cheapest, 0.0)
        src.append(off + g.edge_a)
        dst.append(off + g.edge_b)
        etype.append(np.full(g.n_edges, INTRA, dtype=np.int8))
        eweight.append(g.weight)
        if l + 1 < h.n_levels:
            mm = h.merge_maps[l]
            src.append(off + np.arange(r))
            dst.append(offsets[l + 1] + mm)
            etype.append(np.full(r, INTER, dtype=np.int8))
            eweight.append(np.full(r, np.nan))
    cat = lambda parts, dt: np.concatenate(parts).astype(dt) if parts else np.empty(0, dtype=dt)
    return GnnGraph(
        level,
        region_id,
        feats,
        cat(src, np.int64),
        cat(dst, np.int64),
        cat(etype, np.int8),
        cat(eweight, np.float64),
    )


def _axis_range(lo, hi, sigma):
    if hi > lo:
        return lo - 3.0 * sigma, hi + 3.0 * sigma
    return lo - 0.5, hi + 0.5  # degenerate extent: unit width centered


def persistence_image(d: PersistenceDiagram, resolution=20, sigma=0.1, ranges=None) -> PersistenceImage:
    """Sum of unit-height Gaussians in the birth-persistence plane.

    Sampled at pixel centers of a resolution x resolution grid; default
    ranges are the data bounding box expanded by 3 sigma. Rows index
    persistence (ascending), columns birth.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    m = int(resolution)
    pts = d.points
    b = pts[:, 0]
    p = pts[:, 1] - pts[:, 0]
    if ranges is not None:
        (b_lo, b_hi), (p_lo, p_hi) = ranges
    elif b.size == 0:
        (b_lo, b_hi), (p_lo, p_hi) = (0.0, 1.0), (0.0, 1.0)
    else:
        b_lo, b_hi = _axis_range(b.min(), b.max(), sigma)
        p_lo, p_hi = _axis_range(p.min(), p.max(), sigma)
    xs = b_lo + (np.arange(m) + 0.5) * (b_hi - b_lo) / m
    ys = p_lo + (np.arange(m) + 0.5) * (p_hi - p_lo) / m
    img = np.zeros((m, m))
    inv = 1.0 / (2.0 * sigma * sigma)
    # canonical point order makes the accumulation permutation-invariant bitwise
    for i in np.lexsort((p, b)):
        img += np.exp(-((xs[None, :] - b[i]) ** 2 + (ys[:, None] - p[i]) ** 2) * inv)
    return PersistenceImage(img, sigma, (float(b_lo), float(b_hi)), (float(p_lo), float(p_hi)))


def persistence_landscape(d: PersistenceDiagram, layers=5, points=100, t_range=None) -> PersistenceLandscape:
    """First ``layers`` landscape functions sampled at ``points`` grid values.

    lambda_k(t) is the k-th largest tent value max(0, min(t-b, d-t)) over the
    diagram; missing layers are zero-padded.
    """
    if layers < 1:
        raise ValueError("layers must be >= 1")
    if points < 2:
        raise ValueError("points must be >= 2")
    pts = d.points
    if t_range is not None:
        lo, hi = t_range
    elif len(pts) == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = pts[:, 0].min(), pts[:, 1].max()
    t = np.linspace(lo, hi, int(points))
    K = int(layers)
    if len(pts) == 0:
        return PersistenceLandscape(np.zeros((K, t.size)), t)
    tents = np.maximum(0.0, np.minimum(t[None, :] - pts[:, 0, None], pts[:, 1, None] - t[None, :]))
    if tents.shape[0] < K:
        tents = np.vstack([tents, np.zeros((K - tents.shape[0], t.size))])
    part = -np.sort(-tents, axis=0)[:K]
    return PersistenceLandscape(part, t)


def save_channels(stack: ChannelStack, stem):
    stem = os.fspath(stem)
    np.save(stem + ".npy", stack.data)
    meta = {
        "levels": [int(l) for l in stack.level_index],
        "epsilons": [float(e) for e in stack.epsilons],
        "channel_min": [float(v) for v in stack.channel_min],
        "channel_max": [float(v) for v in stack.channel_max],
    }
    with open(stem + ".json", "w") as fh:
        json.dump(meta, fh)


def gnn_to_dict(g: GnnGraph):
    nodes = [
        {
            "id": i,
            "level": int(g.level[i]),
            "region_id": int(g.region_id[i]),
            "f_min": float(g.features[i, 0]),
            "f_max": float(g.features[i, 1]),
            "size_fraction": float(g.features[i, 2]),
            "min_edge_persistence": float(g.features[i, 3]),
        }
        for i in range(g.n_nodes)
    ]
    edges = []
    for i in range(g.n_edges):
        w = float(g.edge_weight[i])
        edges.append(
            {
                "src": int(g.src[i]),
                "dst": int(g.dst[i]),
                "type": "intra" if g.edge_type[i] == INTRA else "inter",
                "weight": (w if np.isfinite(w) else None) if g.edge_type[i] == INTRA else None,
            }
        )
    return {"nodes": nodes, "edges": edges}


def save_gnn(g: GnnGraph, stem):
    """<stem>.json plus nodes/edges CSVs (two-file form)."""
    stem = os.fspath(stem)
    with open(stem + ".json", "w") as fh:
        json.dump(gnn_to_dict(g), fh)
    with open(stem + "_nodes.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "level", "region_id", "f_min", "f_max", "size_fraction", "min_edge_persistence"])
        for i in range(g.n_nodes):
            w.writerow(
                [
                    i,
                    int(g.level[i]),
                    int(g.region_id[i]),
                    repr(float(g.features[i, 0])),
                    repr(float(g.features[i, 1])),
                    repr(float(g.features[i, 2])),
                    repr(float(g.features[i, 3])),
                ]
            )
    with open(stem + "_edges.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["src", "dst", "type", "weight"])
        for i in range(g.n_edges):
            is_intra = g.edge_type[i] == INTRA
            wt = float(g.edge_weight[i])
            w.writerow(
                [
                    int(g.src[i]),
                    int(g.dst[i]),
                    "intra" if is_intra else "inter",
                    (repr(wt) if np.isfinite(wt) else "inf") if is_intra else "",
                ]
            )
