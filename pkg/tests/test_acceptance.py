"""Acceptance suite: one test per primary criterion, at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass line per
criterion. Timing-sensitive tests run single-threaded (the kernels are
sequential by design).
"""

import hashlib
import json
import time

import numpy as np
import pytest
from click.testing import CliRunner

import topoaug
from topoaug.cli import main as cli_main
from topoaug.encode import persistence_image, persistence_landscape
from topoaug.hierarchy import ThresholdSchedule, thresholds_from_fractions
from topoaug.oracles import naive_segment_labels, pair_multiset, sweep_pairs
from topoaug.persistence import SUBLEVEL, SUPERLEVEL, PersistenceDiagram

from conftest import random_field, two_bump_values


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def _report(name):
    print(f"\nACCEPTANCE PASS: {name}")


class TestOracleEquivalencePersistence:
    def test_pair_multisets_match_threshold_sweep(self):
        """>=100 random fields per size (8x8, 16x16), sub+sup, exact multisets; <1min."""
        t0 = time.perf_counter()
        rng = np.random.default_rng(2024)
        for side in (8, 16):
            for _ in range(100):
                f = random_field(rng, (side, side))
                for kind, pairs in (
                    (SUBLEVEL, topoaug.sublevel_pairs(f)),
                    (SUPERLEVEL, topoaug.superlevel_pairs(f)),
                ):
                    opairs, oess = sweep_pairs(f, kind)
                    assert sorted(opairs) == pair_multiset(pairs)
                    assert oess == sorted(pairs.essential.tolist())
        # the 1x7 worked example, frozen values derived from the sweep oracle
        f7 = topoaug.load_grid_field([0, 1, 2, 1, 0, 1, 2])
        sub = topoaug.sublevel_pairs(f7)
        assert pair_multiset(sub) == [(4, 2, 0)] == sorted(sweep_pairs(f7, SUBLEVEL)[0])
        assert sub.persistence.tolist() == [2.0]
        sup = topoaug.superlevel_pairs(f7)
        assert pair_multiset(sup) == [(2, 4, 6)] == sorted(sweep_pairs(f7, SUPERLEVEL)[0])
        assert sup.persistence.tolist() == [2.0]
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"persistence oracle runtime {elapsed:.1f}s exceeds 1 minute"
        _report(f"persistence pair multisets match threshold-sweep oracle ({elapsed:.1f}s)")


class TestOracleEquivalenceSegmentation:
    def test_memoized_equals_naive_on_64x64(self):
        """>=50 random 64x64 fields, exact label equality; <1min."""
        t0 = time.perf_counter()
        rng = np.random.default_rng(77)
        for _ in range(50):
            f = random_field(rng, (64, 64))
            seg = topoaug.segment(f)
            nmin, nmax = naive_segment_labels(f)
            assert np.array_equal(seg.min_label, nmin)
            assert np.array_equal(seg.max_label, nmax)
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"segmentation oracle runtime {elapsed:.1f}s exceeds 1 minute"
        _report(f"memoized segmentation equals naive chain-following ({elapsed:.1f}s)")


def _test_fields():
    rng = np.random.default_rng(5)
    fields = [
        topoaug.load_grid_field([0, 1, 2, 1, 0, 1, 2]),
        topoaug.load_grid_field(np.add.outer(np.arange(8.0), np.arange(8.0))),
        topoaug.load_grid_field(two_bump_values()),
        topoaug.load_grid_field(rng.random((4, 5, 6))),
        topoaug.load_graph_field(rng.random(40), [(i, i + 1) for i in range(39)] + [(0, 39), (5, 20)]),
    ]
    fields += [random_field(rng, (rng.integers(2, 33), rng.integers(2, 33))) for _ in range(10)]
    return fields


class TestHierarchyContracts:
    def test_counts_final_level_and_nesting(self):
        """Non-increasing counts; eps beyond max pers -> one region labeled by
        the global extrema; direct == incremental simplification. Exact."""
        for f in _test_fields():
            seg = topoaug.segment(f)
            sub = topoaug.sublevel_pairs(f)
            sup = topoaug.superlevel_pairs(f)
            pool = np.concatenate([sub.persistence, sup.persistence])
            top = float(pool.max()) if pool.size else 1.0
            beyond = float(np.nextafter(top, np.inf))
            eps = np.unique([top * 0.25, top * 0.75, beyond]).tolist()
            h = topoaug.build_hierarchy(f, ThresholdSchedule(eps), base=seg, sub=sub, sup=sup)
            counts = h.region_counts()
            assert all(a >= b for a, b in zip(counts, counts[1:]))
            last = h.segmentations[-1]
            assert last.n_regions == 1
            assert last.region_min[0] == f.order[0] and last.region_max[0] == f.order[-1]
            for e1, e2 in [(eps[0], eps[-1]), (eps[0], eps[0]), (0.0, eps[0])]:
                via = topoaug.simplify(topoaug.simplify(seg, sub, sup, e1), sub, sup, e2)
                direct = topoaug.simplify(seg, sub, sup, max(e1, e2))
                assert np.array_equal(via.region_id, direct.region_id)
                assert np.array_equal(via.min_label, direct.min_label)
                assert np.array_equal(via.max_label, direct.max_label)
        _report("hierarchy contracts (monotone counts, global-extrema collapse, nesting)")


class TestStability:
    @pytest.mark.parametrize("delta", [0.01, 0.1])
    def test_bottleneck_bounded_by_noise(self, delta):
        """100 trials at 16x16: d_B(D(f), D(f+eta)) <= delta + 1e-9."""
        rng = np.random.default_rng(int(delta * 1000))
        for trial in range(100):
            vals = rng.random((16, 16))
            eta = rng.uniform(-delta, delta, size=vals.shape)
            f = topoaug.load_grid_field(vals)
            g = topoaug.load_grid_field(vals + eta)
            kind = topoaug.sublevel_pairs if trial % 2 == 0 else topoaug.superlevel_pairs
            d1 = topoaug.diagram(kind(f))
            d2 = topoaug.diagram(kind(g))
            db = topoaug.bottleneck(d1, d2)
            assert db <= delta + 1e-9, f"trial {trial}: d_B={db} > {delta}"
        _report(f"stability: bottleneck <= {delta} + 1e-9 over 100 trials")


class TestComplexity:
    def test_segment_scaling_and_pipeline_budget(self):
        """t_segment per-doubling ratio in [1.7, 2.6] over n in {2^16, 2^18, 2^20};
        1024x1024 k=4 pipeline under 10 s single-threaded."""
        rng = np.random.default_rng(9)
        warm = topoaug.load_grid_field(rng.random((64, 64)))
        topoaug.segment(warm)
        topoaug.build_hierarchy(warm, ThresholdSchedule([0.1]))

        times = {}
        for side, repeats in ((256, 7), (512, 5), (1024, 3)):
            f = topoaug.load_grid_field(rng.random((side, side)))
            times[side * side] = min(
                _timed(lambda: topoaug.segment(f)) for _ in range(repeats)
            )
        r1 = (times[2**18] / times[2**16]) ** 0.5
        r2 = (times[2**20] / times[2**18]) ** 0.5
        assert 1.7 <= r1 <= 2.6, f"per-doubling ratio 2^16->2^18 = {r1:.2f}"
        assert 1.7 <= r2 <= 2.6, f"per-doubling ratio 2^18->2^20 = {r2:.2f}"
        # same measurements, quadrupling form
        assert 3.0 <= r1 * r1 <= 6.0 and 3.0 <= r2 * r2 <= 6.0

        f = topoaug.load_grid_field(rng.random((1024, 1024)))
        t0 = time.perf_counter()
        seg = topoaug.segment(f)
        sub = topoaug.sublevel_pairs(f)
        sup = topoaug.superlevel_pairs(f)
        sched = thresholds_from_fractions(sub, sup, [0.2, 0.4, 0.6, 0.8])
        topoaug.build_hierarchy(f, sched, base=seg, sub=sub, sup=sup)
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"1024x1024 k=4 pipeline took {elapsed:.1f}s"
        _report(
            f"complexity: per-doubling ratios {r1:.2f}, {r2:.2f}; 1024^2 k=4 pipeline {elapsed:.1f}s"
        )


class TestEncoderCorrectness:
    def test_landscape_ordering_on_1000_random_diagrams(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            n = int(rng.integers(0, 20))
            pts = np.sort(rng.random((n, 2)), axis=1) * [1.0, 4.0]
            d = PersistenceDiagram(SUBLEVEL, pts, np.empty(0))
            pl = persistence_landscape(d, layers=5, points=25)
            assert (pl.matrix[:-1] >= pl.matrix[1:]).all()
            assert (pl.matrix >= 0).all()
        _report("landscape layer ordering on 1000 random diagrams")

    def test_persistence_image_linearity_exact_on_fixed_grid(self):
        ranges = ((0.0, 6.0), (0.0, 5.0))
        d1 = PersistenceDiagram(SUBLEVEL, np.array([[0.0, 2.0], [1.0, 3.0]]), np.empty(0))
        d2 = PersistenceDiagram(SUBLEVEL, np.array([[5.0, 9.0]]), np.empty(0))
        union = PersistenceDiagram(SUBLEVEL, np.vstack([d1.points, d2.points]), np.empty(0))
        kw = dict(resolution=20, sigma=0.1, ranges=ranges)
        assert np.array_equal(
            persistence_image(union, **kw).grid,
            persistence_image(d1, **kw).grid + persistence_image(d2, **kw).grid,
        )
        rng = np.random.default_rng(32)
        a = np.sort(rng.random((6, 2)), axis=1) * [1, 3]
        b = np.sort(rng.random((5, 2)), axis=1) * [1, 3]
        da = PersistenceDiagram(SUBLEVEL, a, np.empty(0))
        db = PersistenceDiagram(SUBLEVEL, b, np.empty(0))
        du = PersistenceDiagram(SUBLEVEL, np.vstack([a, b]), np.empty(0))
        kw2 = dict(resolution=12, sigma=0.3, ranges=((0, 1), (0, 3)))
        assert np.allclose(
            persistence_image(du, **kw2).grid,
            persistence_image(da, **kw2).grid + persistence_image(db, **kw2).grid,
            rtol=0,
            atol=1e-12,
        )
        _report("persistence-image linearity under diagram union")

    def test_reference_parameter_shapes(self):
        rng = np.random.default_rng(33)
        f = random_field(rng, (32, 32))
        d = topoaug.diagram(topoaug.sublevel_pairs(f))
        pi = persistence_image(d, resolution=20, sigma=0.1)
        assert pi.grid.shape == (20, 20) and pi.sigma == 0.1
        pl = persistence_landscape(d, layers=5, points=100)
        assert pl.matrix.shape == (5, 100)
        _report("reference encoder parameters (20x20, sigma=0.1, K=5, T=100)")

    def test_four_level_scheme_yields_eight_channels(self):
        rng = np.random.default_rng(34)
        f = random_field(rng, (32, 32))
        sub, sup = topoaug.sublevel_pairs(f), topoaug.superlevel_pairs(f)
        sched = thresholds_from_fractions(sub, sup, [0.3, 0.65, 1.0])
        cs = topoaug.to_channels(topoaug.build_hierarchy(f, sched, sub=sub, sup=sup))
        assert cs.data.shape[0] == 8
        _report("four-level scheme yields 8 channels")


class TestDeterminism:
    def test_manifest_hashes_identical_across_runs_and_threads(self, tmp_path):
        """Identical manifest hashes across 3 runs and thread counts {1, 4}."""
        rng = np.random.default_rng(42)
        inp = tmp_path / "input.npy"
        np.save(inp, rng.random((32, 32)))
        runner = CliRunner()
        digests = set()
        for i, threads in enumerate(("1", "1", "4")):
            out = tmp_path / f"run{i}"
            r = runner.invoke(
                cli_main,
                [
                    "augment", "--input", str(inp), "--fractions", "0.3,0.65,1.0",
                    "--channels", "--gnn", "--pi", "--landscape",
                    "--threads", threads, "--output", str(out),
                ],
            )
            assert r.exit_code == 0, r.output
            digests.add(hashlib.sha256((out / "manifest.json").read_bytes()).hexdigest())
            manifest = json.loads((out / "manifest.json").read_text())
            assert len(manifest["outputs"]) >= 6
        assert len(digests) == 1
        _report("manifest hashes identical across 3 runs and thread counts {1,4}")
