import numpy as np
import pytest

import topoaug
from topoaug.morse import NONE
from topoaug.oracles import brute_force_extrema, naive_segment_labels

from conftest import random_field, two_bump_values


class TestBuildGradient:
    def test_1x3_chains(self):
        f = topoaug.load_grid_field([0, 1, 2])
        g = topoaug.build_gradient(f)
        assert g.ascend_to.tolist() == [1, 2, NONE]
        assert g.descend_to.tolist() == [NONE, 0, 1]

    def test_single_vertex_both_none(self):
        g = topoaug.build_gradient(topoaug.load_grid_field([[42.0]]))
        assert g.ascend_to.tolist() == [NONE]
        assert g.descend_to.tolist() == [NONE]

    def test_3x3_row_major_steepest_neighbors(self):
        f = topoaug.load_grid_field(np.arange(9.0).reshape(3, 3))
        g = topoaug.build_gradient(f)
        # vertex 4 has 4-neighbors {1, 3, 5, 7}; steepest up is 7, steepest down 1
        assert g.ascend_to[4] == 7
        assert g.descend_to[4] == 1
        assert g.ascend_to[8] == NONE
        assert g.descend_to[0] == NONE

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_neighborhood_scan(self, seed):
        rng = np.random.default_rng(seed)
        f = random_field(rng, (7, 9))
        g = topoaug.build_gradient(f)
        indptr, nbrs = f.csr_adjacency()
        for v in range(f.n):
            nb = nbrs[indptr[v] : indptr[v + 1]]
            higher = nb[f.rank[nb] > f.rank[v]]
            lower = nb[f.rank[nb] < f.rank[v]]
            assert g.ascend_to[v] == (higher[np.argmax(f.rank[higher])] if len(higher) else NONE)
            assert g.descend_to[v] == (lower[np.argmin(f.rank[lower])] if len(lower) else NONE)

    def test_ascend_chain_has_no_cycles(self):
        rng = np.random.default_rng(5)
        f = random_field(rng, (16, 16))
        g = topoaug.build_gradient(f)
        asc = g.ascend_to
        ok = asc == NONE
        assert (f.rank[asc[~ok]] > f.rank[np.flatnonzero(~ok)]).all()


class TestFindCritical:
    def test_monotone_ramp_single_min_max(self, ramp8):
        crit = topoaug.find_critical(topoaug.build_gradient(ramp8), ramp8)
        assert crit.minima.tolist() == [0]
        assert crit.maxima.tolist() == [63]
        assert crit.min_values.tolist() == [0.0]

    def test_two_bump_exactly_two_maxima_at_centers(self, two_bump):
        crit = topoaug.find_critical(topoaug.build_gradient(two_bump), two_bump)
        assert crit.maxima.tolist() == [10 * 32 + 10, 22 * 32 + 22]
        bmin, bmax = brute_force_extrema(two_bump)
        assert np.array_equal(crit.maxima, bmax)
        assert np.array_equal(crit.minima, bmin)

    def test_checkerboard_matches_brute_force(self):
        vals = np.indices((4, 4)).sum(axis=0) % 2
        f = topoaug.load_grid_field(vals.astype(float))
        crit = topoaug.find_critical(topoaug.build_gradient(f), f)
        bmin, bmax = brute_force_extrema(f)
        assert np.array_equal(crit.minima, bmin)
        assert np.array_equal(crit.maxima, bmax)
        assert len(crit.minima) == 8  # every 0-cell is a strict local min

    def test_single_vertex_is_both(self):
        f = topoaug.load_grid_field([[1.0]])
        crit = topoaug.find_critical(topoaug.build_gradient(f), f)
        assert crit.minima.tolist() == [0] and crit.maxima.tolist() == [0]

    def test_global_extrema_are_critical(self):
        rng = np.random.default_rng(9)
        f = random_field(rng, (12, 5))
        crit = topoaug.find_critical(topoaug.build_gradient(f), f)
        assert f.order[0] in crit.minima
        assert f.order[-1] in crit.maxima
        assert not set(crit.minima.tolist()) & set(crit.maxima.tolist())

    def test_birth_counts_match_sweeps(self):
        rng = np.random.default_rng(10)
        for _ in range(5):
            f = random_field(rng, (10, 10))
            crit = topoaug.find_critical(topoaug.build_gradient(f), f)
            sub = topoaug.sublevel_pairs(f)
            sup = topoaug.superlevel_pairs(f)
            assert len(crit.minima) == len(sub) + len(sub.essential)
            assert len(crit.maxima) == len(sup) + len(sup.essential)


class TestSegment:
    def test_monotone_ramp_single_region(self, ramp8):
        seg = topoaug.segment(ramp8)
        assert seg.n_regions == 1
        assert seg.region_min.tolist() == [0] and seg.region_max.tolist() == [63]

    def test_1x7_hand_traced(self, field_1x7):
        seg = topoaug.segment(field_1x7)
        assert seg.min_label.tolist() == [0, 0, 0, 4, 4, 4, 4]
        assert seg.max_label.tolist() == [2, 2, 2, 2, 6, 6, 6]
        assert seg.region_id.tolist() == [0, 0, 0, 1, 2, 2, 2]
        assert list(zip(seg.region_min, seg.region_max)) == [(0, 2), (4, 2), (4, 6)]

    def test_extrema_label_themselves(self):
        rng = np.random.default_rng(3)
        f = random_field(rng, (14, 14))
        seg = topoaug.segment(f)
        crit = topoaug.find_critical(topoaug.build_gradient(f), f)
        assert (seg.min_label[crit.minima] == crit.minima).all()
        assert (seg.max_label[crit.maxima] == crit.maxima).all()

    @pytest.mark.parametrize("seed", range(6))
    def test_memoized_equals_naive_chains(self, seed):
        rng = np.random.default_rng(seed)
        shape = (rng.integers(1, 65), rng.integers(1, 65))
        f = random_field(rng, shape)
        seg = topoaug.segment(f)
        nmin, nmax = naive_segment_labels(f)
        assert np.array_equal(seg.min_label, nmin)
        assert np.array_equal(seg.max_label, nmax)

    def test_two_bump_matches_naive(self, two_bump):
        seg = topoaug.segment(two_bump)
        nmin, nmax = naive_segment_labels(two_bump)
        assert np.array_equal(seg.min_label, nmin)
        assert np.array_equal(seg.max_label, nmax)

    def test_region_ids_first_appearance_order(self):
        rng = np.random.default_rng(4)
        f = random_field(rng, (9, 9))
        seg = topoaug.segment(f)
        first_seen = {}
        for v, r in enumerate(seg.region_id.tolist()):
            first_seen.setdefault(r, v)
        assert sorted(first_seen) == list(first_seen)
        assert sorted(first_seen.values()) == list(first_seen.values())

    def test_translation_scaling_leave_segmentation_identical(self):
        rng = np.random.default_rng(6)
        vals = rng.random((11, 8))
        a = topoaug.segment(topoaug.load_grid_field(vals))
        for other in (vals + 100.0, vals * 0.125):
            b = topoaug.segment(topoaug.load_grid_field(other))
            assert np.array_equal(a.region_id, b.region_id)
            assert np.array_equal(a.min_label, b.min_label)

    def test_deterministic_across_runs(self):
        vals = two_bump_values(16, (4, 4), (11, 12), 9.0)
        runs = [topoaug.segment(topoaug.load_grid_field(vals)) for _ in range(3)]
        for s in runs[1:]:
            assert np.array_equal(s.region_id, runs[0].region_id)

    def test_graph_domain(self):
        f = topoaug.load_graph_field([0, 1, 2, 3, 4, 3, 2, 1], [(i, (i + 1) % 8) for i in range(8)])
        seg = topoaug.segment(f)
        # both arcs of the cycle flow from the unique min to the unique max:
        # one (m, M) pair, hence one region
        assert seg.n_regions == 1
        assert list(zip(seg.region_min, seg.region_max)) == [(0, 4)]
        nmin, nmax = naive_segment_labels(f)
        assert np.array_equal(seg.min_label, nmin)
        assert np.array_equal(seg.max_label, nmax)

    def test_export(self, tmp_path, field_1x7):
        import json

        seg = topoaug.segment(field_1x7)
        topoaug.morse.save_segmentation(seg, field_1x7, tmp_path / "seg")
        ids = np.load(tmp_path / "seg.npy")
        assert ids.shape == (1, 7)
        table = json.loads((tmp_path / "seg.json").read_text())
        assert table[0] == {"id": 0, "min_vertex": 0, "max_vertex": 2, "f_min": 0.0, "f_max": 2.0}
