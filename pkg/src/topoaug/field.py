"""Scalar fields on grids and graphs with a deterministic total order.

All downstream algorithms compare vertices through ``order_rank``, the
lexicographic order on (value, vertex index). Ties in raw values are thereby
broken once, at load time, and never consulted again.
"""

from __future__ import annotations

import io
import json
import os

import numpy as np

from ._kernels import edt_envelope_pass
from ._validation import as_float_array, check_edges, check_grid

GRID2D = "grid2d"
GRID3D = "grid3d"
GRAPH = "graph"

# ITU-R 601 luma weights for RGB -> grayscale conversion at load.
_LUMA = np.array([0.299, 0.587, 0.114])

_EDT_INF = np.int64(1) << 40


class ScalarField:
    """Immutable discrete scalar field: one value per vertex plus adjacency.

    Attributes
    ----------
    kind : one of "grid2d", "grid3d", "graph"
    shape : grid dimensions, or (n,) for graphs
    values : float64 array of length n (flat, row-major for grids)
    rank : strict total order, rank[v] = position of v under (value, index)
    order : inverse permutation, order[r] = vertex with rank r
    """

    def __init__(self, kind, shape, values, edges=None):
        values = np.ascontiguousarray(values, dtype=np.float64).ravel()
        n = values.size
        self.kind = kind
        self.shape = tuple(int(s) for s in shape)
        self.values = values
        self.n = n
        if kind == GRAPH:
            self._edges = check_edges(edges if edges is not None else [], n)
            if n > 1:
                deg = np.zeros(n, dtype=np.int64)
                np.add.at(deg, self._edges.ravel(), 1)
                if (deg == 0).any():
                    v = int(np.flatnonzero(deg == 0)[0])
                    raise ValueError(f"vertex {v} has no neighbors")
        else:
            if int(np.prod(self.shape)) != n:
                raise ValueError("shape does not match number of values")
            self._edges = None
        self.order = np.argsort(values, kind="stable")
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[self.order] = np.arange(n)
        self._csr = None
        for a in (self.values, self.order, self.rank):
            a.flags.writeable = False
        if self._edges is not None:
            self._edges.flags.writeable = False

    @property
    def edges(self):
        """Undirected domain edges as an (m, 2) array, canonical (lo, hi) order."""
        if self._edges is None:
            self._edges = _grid_edges(self.shape)
            self._edges.flags.writeable = False
        return self._edges

    def csr_adjacency(self):
        """Neighbor lists in CSR form (indptr, neighbors); built once, cached."""
        if self._csr is None:
            e = self.edges
            src = np.concatenate([e[:, 0], e[:, 1]])
            dst = np.concatenate([e[:, 1], e[:, 0]])
            perm = np.argsort(src, kind="stable")
            nbrs = np.ascontiguousarray(dst[perm])
            counts = np.bincount(src, minlength=self.n)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._csr = (indptr, nbrs)
        return self._csr

    def grid_view(self):
        if self.kind == GRAPH:
            raise ValueError("graph fields have no grid layout")
        return self.values.reshape(self.shape)


class BinaryMask:
    """Occupancy grid for distance-transform preprocessing (1 = obstacle/solid)."""

    def __init__(self, occupancy):
        occ = np.asarray(occupancy)
        if occ.ndim not in (2, 3):
            raise ValueError("mask must be 2D or 3D")
        if occ.size == 0:
            raise ValueError("mask is empty")
        self.occupancy = occ.astype(bool)
        self.shape = occ.shape
        self.kind = GRID2D if occ.ndim == 2 else GRID3D


def _grid_edges(shape):
    idx = np.arange(int(np.prod(shape)), dtype=np.int64).reshape(shape)
    pairs = []
    for ax in range(len(shape)):
        lo = np.moveaxis(idx, ax, 0)[:-1].ravel()
        hi = np.moveaxis(idx, ax, 0)[1:].ravel()
        pairs.append(np.stack([lo, hi], axis=1))
    e = np.concatenate(pairs, axis=0) if pairs else np.empty((0, 2), dtype=np.int64)
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    e = np.stack([lo, hi], axis=1)
    return e[np.lexsort((e[:, 1], e[:, 0]))]


def load_grid_field(raw, kind=None):
    """Build a grid field from a dense numeric array (2D or 3D).

    Rejects empty or non-finite input; vertex order is row-major.
    """
    arr = check_grid(raw, name="grid values")
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    inferred = GRID2D if arr.ndim == 2 else GRID3D
    if kind is not None and kind != inferred:
        raise ValueError(f"array is {inferred}, not {kind}")
    return ScalarField(inferred, arr.shape, arr)


def load_image_field(source):
    """Load a PNG/PGM image (8/16-bit grayscale; RGB converted by ITU-R 601 luma)."""
    from PIL import Image

    if isinstance(source, (bytes, bytearray)):
        img = Image.open(io.BytesIO(source))
    else:
        img = Image.open(source)
    if img.mode in ("RGB", "RGBA"):
        arr = np.asarray(img.convert("RGB"), dtype=np.float64)
        arr = arr @ _LUMA
    elif img.mode in ("L", "I", "I;16", "F"):
        arr = np.asarray(img, dtype=np.float64)
    else:
        arr = np.asarray(img.convert("L"), dtype=np.float64)
    return load_grid_field(arr)


def load_graph_field(vertex_values, edges):
    """Build a graph field from per-vertex scalars and an undirected edge list.

    Duplicate edges collapse; self-loops and out-of-range endpoints are rejected.
    """
    values = as_float_array(vertex_values, name="vertex values").ravel()
    return ScalarField(GRAPH, (values.size,), values, edges=edges)


def squared_distance_map(mask: BinaryMask):
    """Exact integer squared Euclidean distance to the nearest obstacle cell.

    Separable lower-envelope passes, one per dimension, each linear.
    """
    occ = mask.occupancy
    if not occ.any():
        raise ValueError("no obstacle cells")
    sq = np.where(occ, np.int64(0), _EDT_INF)
    for ax in range(occ.ndim):
        moved = np.moveaxis(sq, ax, -1)
        lines = np.ascontiguousarray(moved.reshape(-1, occ.shape[ax]))
        edt_envelope_pass(lines)
        sq = np.moveaxis(lines.reshape(moved.shape), -1, ax)
    return np.ascontiguousarray(sq)


def distance_transform(mask: BinaryMask) -> ScalarField:
    """Exact Euclidean distance field of a binary mask, as a grid ScalarField."""
    sq = squared_distance_map(mask)
    return ScalarField(mask.kind, mask.shape, np.sqrt(sq.astype(np.float64)))


def save_field(field: ScalarField, stem):
    """Snapshot a field as <stem>.npy (values) + <stem>.json (kind, shape, n[, edges])."""
    stem = os.fspath(stem)
    np.save(stem + ".npy", field.values.reshape(field.shape if field.kind != GRAPH else (field.n,)))
    meta = {"kind": field.kind, "shape": list(field.shape), "n": field.n}
    if field.kind == GRAPH:
        meta["edges"] = field.edges.tolist()
    with open(stem + ".json", "w") as fh:
        json.dump(meta, fh)


def load_field(stem) -> ScalarField:
    stem = os.fspath(stem)
    with open(stem + ".json") as fh:
        meta = json.load(fh)
    values = np.load(stem + ".npy")
    if meta["kind"] == GRAPH:
        return load_graph_field(values, meta["edges"])
    return load_grid_field(values.reshape(meta["shape"]))


def load_graph_json(source) -> ScalarField:
    """Graph field from JSON {"values": [...], "edges": [[i, j], ...]}."""
    if hasattr(source, "read"):
        data = json.load(source)
    elif isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = json.loads(source)
    return load_graph_field(data["values"], data["edges"])


def load_graph_csv(values_path, edges_path) -> ScalarField:
    """Graph field from two CSV files: values.csv (value) and edges.csv (src,dst)."""
    values = np.loadtxt(values_path, dtype=np.float64, delimiter=",", skiprows=1, ndmin=1)
    edges = np.loadtxt(edges_path, dtype=np.int64, delimiter=",", skiprows=1, ndmin=2)
    return load_graph_field(values, edges)
