"""Sequential hot loops, JIT-compiled with numba.

Everything here is single-threaded and deterministic; the vectorized callers
live in the public modules. With NUMBA_DISABLE_JIT=1 these run as plain
Python (slow but identical output).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def edt_envelope_pass(sq):
    """One separable pass of the exact squared Euclidean distance transform.

    ``sq`` is (n_lines, m) int64 of squared distances from earlier passes;
    each row is updated in place to min_j ((i-j)^2 + sq[j]) via the
    lower-envelope-of-parabolas method, linear per row.
    """
    n_lines, m = sq.shape
    v = np.empty(m, dtype=np.int64)      # parabola apex indices
    z = np.empty(m + 1, dtype=np.float64)  # envelope breakpoints
    out = np.empty(m, dtype=np.int64)
    for li in range(n_lines):
        f = sq[li]
        k = 0
        v[0] = 0
        z[0] = -np.inf
        z[1] = np.inf
        for i in range(1, m):
            s = ((f[i] + i * i) - (f[v[k]] + v[k] * v[k])) / (2.0 * (i - v[k]))
            while s <= z[k]:
                k -= 1
                s = ((f[i] + i * i) - (f[v[k]] + v[k] * v[k])) / (2.0 * (i - v[k]))
            k += 1
            v[k] = i
            z[k] = s
            z[k + 1] = np.inf
        k = 0
        for i in range(m):
            while z[k + 1] < i:
                k += 1
            d = i - v[k]
            out[i] = d * d + f[v[k]]
        sq[li] = out


@njit(cache=True)
def resolve_chains(nxt, order_asc):
    """Fixpoint labels of the pointer forest ``nxt`` (-1 terminates a chain).

    ``nxt`` must be strictly rank-increasing, so processing vertices in
    descending rank order resolves every chain in one O(n) pass.
    """
    n = nxt.shape[0]
    lab = np.empty(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        v = order_asc[i]
        t = nxt[v]
        lab[v] = v if t < 0 else lab[t]
    return lab


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


@njit(cache=True)
def elder_merge_sweep(order, rank, indptr, nbrs):
    """Union-find filtration sweep producing elder-rule merge pairs.

    Vertices are activated in ``order`` (ascending rank for the sublevel
    sweep). A vertex with no active neighbor births a component whose
    representative extremum it becomes. A vertex whose active neighbors span
    k >= 2 components records k-1 pairs (younger extremum, this vertex),
    each absorbed into the eldest extremum of the merge group; the elder is
    the one whose rank comes first in sweep order.

    Returns (extremum, saddle, absorbed_into, n_pairs, essential_mask).
    """
    n = order.shape[0]
    parent = np.arange(n)
    comp_ext = np.full(n, -1, dtype=np.int64)  # UF root -> representative extremum
    active = np.zeros(n, dtype=np.bool_)
    ext_out = np.empty(n, dtype=np.int64)
    sad_out = np.empty(n, dtype=np.int64)
    abs_out = np.empty(n, dtype=np.int64)
    essential = np.zeros(n, dtype=np.bool_)
    n_pairs = 0
    roots = np.empty(8, dtype=np.int64)
    for oi in range(n):
        v = order[oi]
        n_roots = 0
        for j in range(indptr[v], indptr[v + 1]):
            u = nbrs[j]
            if not active[u]:
                continue
            r = _find(parent, u)
            seen = False
            for t in range(n_roots):
                if roots[t] == r:
                    seen = True
                    break
            if not seen:
                if n_roots == roots.shape[0]:
                    grown = np.empty(roots.shape[0] * 2, dtype=np.int64)
                    grown[: roots.shape[0]] = roots
                    roots = grown
                roots[n_roots] = r
                n_roots += 1
        active[v] = True
        if n_roots == 0:
            comp_ext[v] = v  # birth: v is an extremum of this sweep
            essential[v] = True
            continue
        # eldest extremum = first in sweep order among the merging components
        eldest_r = roots[0]
        for t in range(1, n_roots):
            if rank[comp_ext[roots[t]]] < rank[comp_ext[eldest_r]]:
                eldest_r = roots[t]
        elder_ext = comp_ext[eldest_r]
        for t in range(n_roots):
            r = roots[t]
            if r == eldest_r:
                continue
            ext = comp_ext[r]
            ext_out[n_pairs] = ext
            sad_out[n_pairs] = v
            abs_out[n_pairs] = elder_ext
            essential[ext] = False
            n_pairs += 1
            parent[r] = eldest_r
        parent[_find(parent, v)] = _find(parent, eldest_r)
        comp_ext[_find(parent, eldest_r)] = elder_ext
    return ext_out[:n_pairs], sad_out[:n_pairs], abs_out[:n_pairs], essential


@njit(cache=True)
def tree_depths_and_roots(parent):
    """Depths and root ids of a forest whose parent ids always exceed child ids."""
    n = parent.shape[0]
    depth = np.zeros(n, dtype=np.int64)
    root = np.arange(n)
    for i in range(n - 1, -1, -1):
        p = parent[i]
        if p >= 0:
            depth[i] = depth[p] + 1
            root[i] = root[p]
    return depth, root


@njit(cache=True)
def dendrogram_build(ext_sorted_by_pers, absorbed_sorted_by_pers, ext_index, n_ext):
    """Merge dendrogram over extrema, pairs processed in ascending persistence.

    Leaves 0..n_ext-1 are extrema (in ``ext_index`` order); internal node
    n_ext+i is created by the i-th pair. Returns the parent array
    (-1 at roots); a node's parent always has a larger id.
    """
    n_pairs = ext_sorted_by_pers.shape[0]
    n_nodes = n_ext + n_pairs
    parent = np.full(n_nodes, -1, dtype=np.int64)
    uf = np.arange(n_nodes)
    top = np.arange(n_nodes)  # UF root -> current dendrogram top node
    for i in range(n_pairs):
        a = ext_index[ext_sorted_by_pers[i]]
        b = ext_index[absorbed_sorted_by_pers[i]]
        ra = _find(uf, a)
        rb = _find(uf, b)
        node = n_ext + i
        parent[top[ra]] = node
        parent[top[rb]] = node
        uf[ra] = rb
        top[_find(uf, rb)] = node
    return parent
