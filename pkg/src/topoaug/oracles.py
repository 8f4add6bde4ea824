"""Brute-force reference implementations for verification.

Deliberately naive, independent routes to the same answers as the fast
modules: full rescans instead of union-find, unmemoized chain walks, and
exhaustive enumerations. Used by ``topoaug verify`` and the test suite;
never by the production paths.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .field import BinaryMask, ScalarField
from .persistence import SUBLEVEL


def brute_force_squared_edt(mask: BinaryMask):
    """Nearest-obstacle squared distance by scanning every obstacle cell."""
    occ = mask.occupancy
    obstacles = np.argwhere(occ)
    coords = np.argwhere(np.ones_like(occ))
    diffs = coords[:, None, :] - obstacles[None, :, :]
    sq = (diffs * diffs).sum(axis=2).min(axis=1)
    return sq.reshape(occ.shape)


def _neighbor_lists(field: ScalarField):
    indptr, nbrs = field.csr_adjacency()
    return [nbrs[indptr[v] : indptr[v + 1]] for v in range(field.n)]


def brute_force_extrema(field: ScalarField):
    """Local minima/maxima by scanning every vertex's neighborhood ranks."""
    rank = field.rank
    minima, maxima = [], []
    for v, nb in enumerate(_neighbor_lists(field)):
        if all(rank[u] > rank[v] for u in nb):
            minima.append(v)
        if all(rank[u] < rank[v] for u in nb):
            maxima.append(v)
    return np.asarray(minima, dtype=np.int64), np.asarray(maxima, dtype=np.int64)


def naive_segment_labels(field: ScalarField):
    """Steepest chain following per vertex, no memoization."""
    rank = field.rank
    nbl = _neighbor_lists(field)

    def steepest_up(v):
        best = v
        for u in nbl[v]:
            if rank[u] > rank[best]:
                best = u
        return best if best != v else -1

    def steepest_down(v):
        best = v
        for u in nbl[v]:
            if rank[u] < rank[best]:
                best = u
        return best if best != v else -1

    n = field.n
    min_label = np.empty(n, dtype=np.int64)
    max_label = np.empty(n, dtype=np.int64)
    for v in range(n):
        c = v
        while True:
            t = steepest_up(c)
            if t < 0:
                break
            c = t
        max_label[v] = c
        c = v
        while True:
            t = steepest_down(c)
            if t < 0:
                break
            c = t
        min_label[v] = c
    return min_label, max_label


def sweep_pairs(field: ScalarField, kind: str):
    """Elder-rule pairs by recomputing connected components at every level.

    Activates vertices one rank step at a time and recomputes the active
    subgraph's components from scratch with scipy; merge events are read off
    by comparing component representatives between consecutive steps.

    Returns (pairs, essential): pairs as a list of
    (extremum, saddle, absorbed_into) tuples, essential as a sorted list.
    """
    n = field.n
    e = field.edges
    adj = csr_matrix(
        (np.ones(2 * len(e), dtype=np.int8), (np.concatenate([e[:, 0], e[:, 1]]), np.concatenate([e[:, 1], e[:, 0]]))),
        shape=(n, n),
    )
    sweep_rank = field.rank if kind == SUBLEVEL else (n - 1) - field.rank
    order = np.argsort(sweep_rank)
    active = np.zeros(n, dtype=bool)
    prev_reps: set[int] = set()
    pairs = []
    essential = []
    for v in order:
        active[v] = True
        idx = np.flatnonzero(active)
        ncomp, labels = connected_components(adj[idx][:, idx], directed=False)
        comps: dict[int, list[int]] = {}
        for pos, lab in enumerate(labels):
            comps.setdefault(int(lab), []).append(int(idx[pos]))
        reps = set()
        for members in comps.values():
            rep = min(members, key=lambda u: sweep_rank[u])
            reps.add(rep)
            olds = [r for r in prev_reps if r in members]
            if len(olds) >= 2:
                elder = min(olds, key=lambda u: sweep_rank[u])
                for dying in olds:
                    if dying != elder:
                        pairs.append((dying, int(v), elder))
            elif len(olds) == 0:
                essential.append(rep)  # new component born at v
        prev_reps = reps
    dead = {p[0] for p in pairs}
    essential = sorted(set(essential) - dead)
    return pairs, essential


def naive_simplified_partition(field: ScalarField, epsilon: float):
    """Region partition after canceling pairs below epsilon, one at a time.

    Pairs come from the sweep oracle; each cancellation rewrites the dying
    extremum's labels across the whole array (ascending persistence, ties by
    rank, so absorbers are rewritten after their absorbees).
    """
    min_label, max_label = naive_segment_labels(field)
    values, rank = field.values, field.rank
    for kind, labels in ((SUBLEVEL, min_label), ("superlevel", max_label)):
        pairs, _ = sweep_pairs(field, kind)
        decorated = sorted(
            pairs, key=lambda p: (abs(values[p[1]] - values[p[0]]), rank[p[0]])
        )
        for ext, sad, absorbed in decorated:
            if abs(values[sad] - values[ext]) < epsilon:
                labels[labels == ext] = absorbed
    return min_label, max_label


def brute_force_region_adjacency(region_id, edges):
    """Distinct region pairs linked by a domain edge, by scanning all edges."""
    seen = set()
    for x, y in edges:
        a, b = int(region_id[x]), int(region_id[y])
        if a != b:
            seen.add((min(a, b), max(a, b)))
    return sorted(seen)


def bottleneck_by_enumeration(points1, points2):
    """Exact bottleneck over all matchings; only for tiny diagrams."""
    P = [tuple(p) for p in points1]
    Q = [tuple(q) for q in points2]

    def diag_cost(p):
        return (p[1] - p[0]) / 2.0

    best = [np.inf]

    def recurse(i, used, cur):
        if cur >= best[0]:
            return
        if i == len(P):
            rest = max((diag_cost(Q[j]) for j in range(len(Q)) if j not in used), default=0.0)
            best[0] = min(best[0], max(cur, rest))
            return
        recurse(i + 1, used, max(cur, diag_cost(P[i])))
        for j in range(len(Q)):
            if j not in used:
                c = max(abs(P[i][0] - Q[j][0]), abs(P[i][1] - Q[j][1]))
                recurse(i + 1, used | {j}, max(cur, c))

    recurse(0, frozenset(), 0.0)
    return float(best[0]) if np.isfinite(best[0]) else 0.0


def random_grid_field(size, rng, three_d=False):
    from .field import load_grid_field

    shape = (size, size, size) if three_d else (size, size)
    return load_grid_field(rng.random(shape))


def pair_multiset(pairs_obj):
    """Canonical multiset view of a PersistencePairSet for oracle comparison."""
    return sorted(
        zip(pairs_obj.extremum.tolist(), pairs_obj.saddle.tolist(), pairs_obj.absorbed_into.tolist())
    )


def run_verification(size, trials, seed, three_d=False):
    """Oracle equivalence checks on random fields; first failure wins.

    Returns (report dict, failing field or None).
    """
    from . import hierarchy as H
    from . import morse, persistence
    from .dual import region_adjacency

    rng = np.random.default_rng(seed)
    checks = [
        "segmentation_matches_naive",
        "extrema_match_brute_force",
        "sublevel_pairs_match_sweep",
        "superlevel_pairs_match_sweep",
        "dual_adjacency_matches_brute_force",
        "region_counts_non_increasing",
        "simplification_nesting",
        "max_epsilon_single_region",
    ]
    results = {c: True for c in checks}
    failing_field = None
    first_failure = None

    for trial in range(trials):
        field = random_grid_field(size, rng, three_d=three_d)
        seg = morse.segment(field)
        grad = morse.build_gradient(field)
        crit = morse.find_critical(grad, field)
        sub = persistence.sublevel_pairs(field)
        sup = persistence.superlevel_pairs(field)

        def fail(name):
            nonlocal failing_field, first_failure
            results[name] = False
            if first_failure is None:
                first_failure = name
                failing_field = field

        nmin, nmax = naive_segment_labels(field)
        if not (np.array_equal(nmin, seg.min_label) and np.array_equal(nmax, seg.max_label)):
            fail("segmentation_matches_naive")
        bmin, bmax = brute_force_extrema(field)
        if not (np.array_equal(bmin, crit.minima) and np.array_equal(bmax, crit.maxima)):
            fail("extrema_match_brute_force")
        for kind, pairs, name in (
            (persistence.SUBLEVEL, sub, "sublevel_pairs_match_sweep"),
            (persistence.SUPERLEVEL, sup, "superlevel_pairs_match_sweep"),
        ):
            opairs, oess = sweep_pairs(field, kind)
            if sorted(opairs) != pair_multiset(pairs) or oess != sorted(pairs.essential.tolist()):
                fail(name)
        adjacency = region_adjacency(seg, field)
        if brute_force_region_adjacency(seg.region_id, field.edges.tolist()) != [
            (int(a), int(b)) for a, b in adjacency
        ]:
            fail("dual_adjacency_matches_brute_force")

        pool = np.concatenate([sub.persistence, sup.persistence])
        top = float(pool.max()) if pool.size else 0.0
        eps = [0.25 * top, 0.75 * top, np.nextafter(top, np.inf)] if pool.size else [0.5]
        h = H.build_hierarchy(field, H.ThresholdSchedule(np.unique(eps)), base=seg, sub=sub, sup=sup)
        counts = h.region_counts()
        if any(b > a for a, b in zip(counts, counts[1:])):
            fail("region_counts_non_increasing")
        s1 = H.simplify(seg, sub, sup, eps[0])
        s12 = H.simplify(s1, sub, sup, eps[-1])
        s2 = H.simplify(seg, sub, sup, eps[-1])
        if not (
            np.array_equal(s12.min_label, s2.min_label)
            and np.array_equal(s12.max_label, s2.max_label)
            and np.array_equal(s12.region_id, s2.region_id)
        ):
            fail("simplification_nesting")
        last = h.segmentations[-1]
        if pool.size and not (
            last.n_regions == 1
            and last.region_min[0] == field.order[0]
            and last.region_max[0] == field.order[-1]
        ):
            fail("max_epsilon_single_region")
        if first_failure is not None:
            break

    report = {
        "size": size,
        "trials": trials,
        "seed": seed,
        "properties": [{"name": c, "passed": bool(results[c])} for c in checks],
        "first_failure": first_failure,
        "passed": first_failure is None,
    }
    return report, failing_field
