"""Array-in/array-out bindings to the topoaug core.

Thin marshaling only: inputs are validated and passed through (zero-copy for
contiguous float64/int64 arrays, one documented copy at the boundary
otherwise), outputs are plain numpy arrays whose shapes and values are
bit-identical to the core's file exports for the same input. Heavy work runs
in the core's numpy/numba kernels, which release the interpreter lock
internally. No business logic lives here.
"""

from __future__ import annotations

import numpy as np

import topoaug as _core
from topoaug.hierarchy import ThresholdSchedule as _Schedule
from topoaug.persistence import SUBLEVEL as _SUBLEVEL
from topoaug.persistence import PersistenceDiagram as _Diagram

__version__ = _core.__version__

__all__ = [
    "segment",
    "build_hierarchy",
    "to_channels",
    "to_gnn_graph",
    "persistence_image",
    "persistence_landscape",
    "augment_image",
    "augment_graph",
    "sublevel_diagram",
    "superlevel_diagram",
    "__version__",
]


def _field(values, edges=None):
    if edges is not None:
        return _core.load_graph_field(values, edges)
    arr = np.asarray(values, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ValueError("values contain non-finite entries")
    return _core.load_grid_field(arr)


def _schedule(epsilons, fractions, sub, sup):
    if (epsilons is None) == (fractions is None):
        raise ValueError("exactly one of epsilons or fractions is required")
    if epsilons is not None:
        return _Schedule(epsilons)
    return _core.thresholds_from_fractions(sub, sup, fractions)


def _hierarchy(values, edges, epsilons, fractions):
    f = _field(values, edges)
    sub = _core.sublevel_pairs(f)
    sup = _core.superlevel_pairs(f)
    sched = _schedule(epsilons, fractions, sub, sup)
    return _core.build_hierarchy(f, sched, sub=sub, sup=sup), f


def _out_shape(field):
    return field.shape if field.kind != "graph" else (field.n,)


def segment(values, edges=None):
    """(min_label, max_label, region_id) arrays, shaped like the input domain."""
    f = _field(values, edges)
    seg = _core.segment(f)
    shape = _out_shape(f)
    return (
        seg.min_label.reshape(shape),
        seg.max_label.reshape(shape),
        seg.region_id.reshape(shape),
    )


def build_hierarchy(values, epsilons=None, fractions=None, edges=None):
    """(epsilons, per-level region ids, merges) arrays.

    ``region_ids`` has one row per level (base first); ``merges`` rows are
    (level, from_region, to_region) including identity survivals.
    """
    h, f = _hierarchy(values, edges, epsilons, fractions)
    region_ids = np.stack([s.region_id for s in h.segmentations], axis=0)
    merges = np.array(
        [(lvl, r, int(t)) for lvl, mm in enumerate(h.merge_maps) for r, t in enumerate(mm)],
        dtype=np.int64,
    ).reshape(-1, 3)
    return np.asarray(h.epsilons), region_ids.reshape((len(h.segmentations),) + _out_shape(f)), merges


def to_channels(values, epsilons=None, fractions=None):
    """Channel stack (2*(levels), *shape) of per-level f(min), f(max) values."""
    h, _ = _hierarchy(values, None, epsilons, fractions)
    return _core.to_channels(h).data


def to_gnn_graph(values, epsilons=None, fractions=None, edges=None, prune_base=False):
    """(node_features, edge_index, edge_type) arrays of the hierarchical graph.

    Node feature columns: level, f_min, f_max, size_fraction, persistence of
    the cheapest finite incident intra edge. ``edge_index`` is (2, E);
    ``edge_type`` is 0 for intra, 1 for inter edges.
    """
    h, _ = _hierarchy(values, edges, epsilons, fractions)
    g = _core.to_gnn_graph(h, prune_base=prune_base)
    features = np.column_stack([g.level.astype(np.float64), g.features])
    edge_index = np.stack([g.src, g.dst], axis=0)
    return features, edge_index, g.edge_type


def _diagram(births, deaths):
    b = np.asarray(births, dtype=np.float64).ravel()
    d = np.asarray(deaths, dtype=np.float64).ravel()
    if b.shape != d.shape:
        raise ValueError("births and deaths must have the same length")
    return _Diagram(_SUBLEVEL, np.stack([b, d], axis=1), np.empty(0))


def persistence_image(births, deaths, resolution=20, sigma=0.1, ranges=None):
    """(resolution, resolution) grid of summed Gaussians in birth-persistence space."""
    return _core.persistence_image(_diagram(births, deaths), resolution=resolution, sigma=sigma, ranges=ranges).grid


def persistence_landscape(births, deaths, layers=5, points=100, t_range=None):
    """(layers, points) matrix of the top landscape functions."""
    return _core.persistence_landscape(_diagram(births, deaths), layers=layers, points=points, t_range=t_range).matrix


def sublevel_diagram(values, edges=None):
    """Finite (birth, death) arrays of the sublevel sweep, persistence order."""
    d = _core.diagram(_core.sublevel_pairs(_field(values, edges)))
    return d.points[:, 0].copy(), d.points[:, 1].copy()


def superlevel_diagram(values, edges=None):
    """Finite (birth, death) arrays of the superlevel sweep, canonical orientation."""
    d = _core.diagram(_core.superlevel_pairs(_field(values, edges)))
    return d.points[:, 0].copy(), d.points[:, 1].copy()


def augment_image(array2d, fractions):
    """Channel stack of a 2D field, identical to the CLI channel output."""
    arr = np.asarray(array2d, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("augment_image expects a 2D array")
    return to_channels(arr, fractions=fractions)


def augment_graph(values, edges, epsilons, prune_base=False):
    """GNN arrays of a graph field, identical to the CLI gnn export."""
    return to_gnn_graph(values, epsilons=epsilons, edges=edges, prune_base=prune_base)
