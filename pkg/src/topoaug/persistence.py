"""Zero-dimensional persistence of sublevel and superlevel filtrations.

Vertices enter in rank order; a union-find over already-active neighbors
detects component merges. At a merge the younger extremum (later birth in
sweep order) dies at the merging vertex, which is recorded as the saddle,
and is absorbed into the eldest extremum of the merge group (elder rule,
decided by rank so ties are deterministic).
"""

from __future__ import annotations

import csv
import os

import numpy as np

from ._kernels import elder_merge_sweep
from .field import ScalarField

SUBLEVEL = "sublevel"
SUPERLEVEL = "superlevel"


class PersistencePairSet:
    """Finite extremum-saddle pairs of one sweep, sorted by ascending persistence.

    ``extremum`` holds minima for sublevel sweeps and maxima for superlevel
    ones; ``absorbed_into`` is the elder extremum surviving each merge.
    Essential (never-dying) extrema are kept separately: exactly one per
    connected component.
    """

    def __init__(self, kind, extremum, saddle, absorbed_into, birth, death, persistence, essential, essential_births, n):
        self.kind = kind
        self.extremum = extremum
        self.saddle = saddle
        self.absorbed_into = absorbed_into
        self.birth = birth
        self.death = death
        self.persistence = persistence
        self.essential = essential
        self.essential_births = essential_births
        self.n = n

    def __len__(self):
        return self.extremum.size


class PersistenceDiagram:
    """Multiset of (birth, death) points, death > birth, plus essential births."""

    def __init__(self, kind, points, essential_births):
        self.kind = kind
        self.points = points
        self.essential_births = essential_births


def _sweep(field: ScalarField, kind: str) -> PersistencePairSet:
    indptr, nbrs = field.csr_adjacency()
    if kind == SUBLEVEL:
        order = np.ascontiguousarray(field.order)
        rank = field.rank
    else:
        order = np.ascontiguousarray(field.order[::-1])
        rank = (field.n - 1) - field.rank
    ext, sad, absorbed, essential_mask = elder_merge_sweep(order, rank, indptr, nbrs)
    birth = field.values[ext]
    death = field.values[sad]
    pers = np.abs(death - birth)
    perm = np.lexsort((field.rank[ext], pers))
    essential = np.flatnonzero(essential_mask)
    essential = essential[np.argsort(field.rank[essential])]
    return PersistencePairSet(
        kind,
        ext[perm],
        sad[perm],
        absorbed[perm],
        birth[perm],
        death[perm],
        pers[perm],
        essential,
        field.values[essential],
        field.n,
    )


def sublevel_pairs(field: ScalarField) -> PersistencePairSet:
    """Minimum-saddle pairs of the sublevel sweep (increasing rank)."""
    return _sweep(field, SUBLEVEL)


def superlevel_pairs(field: ScalarField) -> PersistencePairSet:
    """Maximum-saddle pairs of the superlevel sweep (decreasing rank)."""
    return _sweep(field, SUPERLEVEL)


def diagram(pairs: PersistencePairSet) -> PersistenceDiagram:
    """Diagram of one pair set; zero-persistence points (value ties) are dropped.

    Points are oriented (lower, higher) so both kinds sit strictly above the
    diagonal; for superlevel pairs that swaps the raw (birth, death) order.
    """
    if pairs.kind not in (SUBLEVEL, SUPERLEVEL):
        raise ValueError(f"pair set has invalid kind {pairs.kind!r}")
    keep = pairs.persistence > 0
    lo = np.minimum(pairs.birth[keep], pairs.death[keep])
    hi = np.maximum(pairs.birth[keep], pairs.death[keep])
    return PersistenceDiagram(pairs.kind, np.stack([lo, hi], axis=1), np.sort(pairs.essential_births))


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Exact bottleneck distance between two diagrams of the same kind.

    Binary search over candidate distances with a bipartite perfect-matching
    feasibility test (points may match the diagonal at half persistence).
    Intended for desk-scale diagrams.
    """
    if d1.kind != d2.kind:
        raise ValueError("diagrams have different kinds")
    P, Q = d1.points, d2.points
    k1, k2 = len(P), len(Q)
    if k1 == 0 and k2 == 0:
        return 0.0
    diag1 = (P[:, 1] - P[:, 0]) / 2.0 if k1 else np.empty(0)
    diag2 = (Q[:, 1] - Q[:, 0]) / 2.0 if k2 else np.empty(0)
    if k1 and k2:
        cross = np.maximum(
            np.abs(P[:, 0, None] - Q[None, :, 0]), np.abs(P[:, 1, None] - Q[None, :, 1])
        )
        cands = np.concatenate([[0.0], cross.ravel(), diag1, diag2])
    else:
        cross = np.empty((k1, k2))
        cands = np.concatenate([[0.0], diag1, diag2])
    cands = np.unique(cands)

    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import maximum_bipartite_matching

    size = k1 + k2

    def feasible(delta):
        adj = np.zeros((size, size), dtype=bool)
        if k1 and k2:
            adj[:k1, :k2] = cross <= delta
        if k1:
            adj[:k1, k2:] = (diag1 <= delta)[:, None]
        if k2:
            adj[k1:, :k2] = (diag2 <= delta)[None, :]
        adj[k1:, k2:] = True
        match = maximum_bipartite_matching(csr_matrix(adj), perm_type="column")
        return not (match == -1).any()

    lo, hi = 0, cands.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def save_diagram_csv(pairs: PersistencePairSet, field: ScalarField, path):
    """CSV rows (birth, death, extremum_vertex, saddle_vertex, kind); essential rows use death=inf."""
    path = os.fspath(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["birth", "death", "extremum_vertex", "saddle_vertex", "kind"])
        for i in range(len(pairs)):
            w.writerow(
                [
                    repr(float(pairs.birth[i])),
                    repr(float(pairs.death[i])),
                    int(pairs.extremum[i]),
                    int(pairs.saddle[i]),
                    pairs.kind,
                ]
            )
        for v in pairs.essential:
            w.writerow([repr(float(field.values[v])), "inf", int(v), -1, pairs.kind])
