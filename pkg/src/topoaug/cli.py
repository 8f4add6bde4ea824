"""Command-line front end: augment, verify, bench, diagram, dual.

Exit codes: 0 ok, 1 property failure, 2 usage or I/O error. Outputs are
staged in a temporary directory and moved into place with the manifest
written last, so a manifest's presence marks a complete run.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import sys
import tempfile
import time

import click
import numpy as np

from . import encode, field as field_mod, hierarchy as hier, morse, persistence
from .dual import build_dual, save_dual_edges_csv, save_dual_json

THREADS_ENV = "TOPOAUG_THREADS"


def _threads_default():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _load_input(path, kind, binary_dt=False):
    if not os.path.exists(path):
        raise click.UsageError(f"input file not found: {path}")
    ext = os.path.splitext(path)[1].lower()
    if ext in (".png", ".pgm"):
        f = field_mod.load_image_field(path)
    elif ext == ".npy":
        arr = np.load(path)
        if binary_dt:
            return field_mod.distance_transform(field_mod.BinaryMask(arr != 0))
        f = field_mod.load_grid_field(arr)
    elif ext == ".json":
        f = field_mod.load_graph_json(path)
    else:
        raise click.UsageError(f"unsupported input extension: {ext}")
    if kind not in (None, "auto") and f.kind != kind:
        raise click.UsageError(f"input is {f.kind}, expected {kind}")
    return f


def _schedule(epsilons, fractions, sub, sup):
    if (epsilons is None) == (fractions is None):
        raise click.UsageError("exactly one of --epsilons or --fractions is required")
    if epsilons is not None:
        values = [float(x) for x in epsilons.split(",") if x]
        return hier.ThresholdSchedule(values)
    values = [float(x) for x in fractions.split(",") if x]
    return hier.thresholds_from_fractions(sub, sup, values)


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@click.group()
def main():
    """Morse-Smale persistence augmentation toolkit."""


@main.command()
@click.option("--input", "input_path", required=True, help="PNG/PGM image, .npy array, or graph JSON")
@click.option("--kind", type=click.Choice(["auto", "grid2d", "grid3d", "graph"]), default="auto")
@click.option("--epsilons", default=None, help="comma-separated persistence thresholds")
@click.option("--fractions", default=None, help="comma-separated pair fractions in [0,1]")
@click.option("--output", "output_dir", default="topoaug_out", show_default=True)
@click.option("--channels", "want_channels", is_flag=True, help="write the multi-channel stack")
@click.option("--gnn", "want_gnn", is_flag=True, help="write the hierarchical graph encoding")
@click.option("--pi", "want_pi", is_flag=True, help="write a persistence image (sublevel)")
@click.option("--landscape", "want_pl", is_flag=True, help="write a persistence landscape (sublevel)")
@click.option("--prune-base", is_flag=True, help="drop level-0 nodes from the GNN encoding")
@click.option("--pi-resolution", default=20, show_default=True)
@click.option("--pi-sigma", default=0.1, show_default=True)
@click.option("--pl-layers", default=5, show_default=True)
@click.option("--pl-points", default=100, show_default=True)
@click.option("--binary-dt", is_flag=True, help="treat a .npy input as a binary mask and take its distance transform")
@click.option("--threads", default=None, type=int, help=f"worker cap (default ${THREADS_ENV} or 1)")
def augment(
    input_path,
    kind,
    epsilons,
    fractions,
    output_dir,
    want_channels,
    want_gnn,
    want_pi,
    want_pl,
    prune_base,
    pi_resolution,
    pi_sigma,
    pl_layers,
    pl_points,
    binary_dt,
    threads,
):
    """Run the full pipeline and write artifacts plus a hashed manifest."""
    threads = threads if threads is not None else _threads_default()
    if threads < 1:
        raise click.UsageError("--threads must be >= 1")
    # All kernels are sequential and deterministic; the cap is accepted for
    # interface stability and never changes results.
    try:
        f = _load_input(input_path, kind, binary_dt=binary_dt)
    except (OSError, ValueError) as exc:
        raise click.UsageError(str(exc))

    seg = morse.segment(f)
    sub = persistence.sublevel_pairs(f)
    sup = persistence.superlevel_pairs(f)
    schedule = _schedule(epsilons, fractions, sub, sup)
    h = hier.build_hierarchy(f, schedule, base=seg, sub=sub, sup=sup)

    parent = os.path.dirname(os.path.abspath(output_dir)) or "."
    os.makedirs(parent, exist_ok=True)
    tmp = tempfile.mkdtemp(prefix=".topoaug-", dir=parent)
    try:
        morse.save_segmentation(seg, f, os.path.join(tmp, "segmentation"))
        hier.save_hierarchy_json(h, os.path.join(tmp, "hierarchy.json"))
        if want_channels:
            encode.save_channels(encode.to_channels(h), os.path.join(tmp, "channels"))
        if want_gnn:
            encode.save_gnn(encode.to_gnn_graph(h, prune_base=prune_base), os.path.join(tmp, "gnn"))
        if want_pi or want_pl:
            d = persistence.diagram(sub)
            if want_pi:
                pi = encode.persistence_image(d, resolution=pi_resolution, sigma=pi_sigma)
                np.save(os.path.join(tmp, "persistence_image.npy"), pi.grid)
            if want_pl:
                pl = encode.persistence_landscape(d, layers=pl_layers, points=pl_points)
                np.save(os.path.join(tmp, "persistence_landscape.npy"), pl.matrix)
        outputs = sorted(
            p for p in os.listdir(tmp) if os.path.isfile(os.path.join(tmp, p))
        )
        manifest = {
            "input": os.path.basename(input_path),
            "epsilons": [float(e) for e in h.epsilons],
            "outputs": [
                {
                    "path": p,
                    "sha256": _sha256(os.path.join(tmp, p)),
                    "bytes": os.path.getsize(os.path.join(tmp, p)),
                }
                for p in outputs
            ],
        }
        with open(os.path.join(tmp, "manifest.json"), "w") as fh:
            json.dump(manifest, fh, sort_keys=True)
        os.makedirs(output_dir, exist_ok=True)
        for p in outputs:
            os.replace(os.path.join(tmp, p), os.path.join(output_dir, p))
        os.replace(os.path.join(tmp, "manifest.json"), os.path.join(output_dir, "manifest.json"))
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    click.echo(f"wrote {len(outputs) + 1} files to {output_dir}")


@main.command()
@click.option("--size", default=16, show_default=True)
@click.option("--trials", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--report", "report_path", default=None, help="write the JSON report here")
def verify(size, trials, seed, report_path):
    """Run brute-force equivalence checks on random fields."""
    if size > 64:
        raise click.UsageError("verify size is capped at 64")
    if size < 1 or trials < 1:
        raise click.UsageError("size and trials must be positive")
    from .oracles import run_verification

    report, failing = run_verification(size, trials, seed)
    text = json.dumps(report, indent=2)
    if report_path:
        with open(report_path, "w") as fh:
            fh.write(text)
    click.echo(text)
    if not report["passed"]:
        stem = f"topoaug-failing-field-{seed}"
        field_mod.save_field(failing, stem)
        click.echo(f"failing field saved to {stem}.npy/.json", err=True)
        sys.exit(1)


@main.command()
@click.option("--sizes", default="65536,262144,1048576", show_default=True, help="vertex counts (square grids)")
@click.option("--k", default=4, show_default=True, help="number of thresholds")
@click.option("--seed", default=0, show_default=True)
@click.option("--repeats", default=3, show_default=True)
@click.option("--output", "output_path", default=None, help="write the CSV here instead of stdout")
def bench(sizes, k, seed, repeats, output_path):
    """Time segment and build_hierarchy on random square fields (CSV: n,t_segment,t_hierarchy)."""
    rows = bench_rows([int(s) for s in sizes.split(",") if s], k, seed, repeats)
    lines = ["n,t_segment,t_hierarchy"] + [f"{n},{ts:.6f},{th:.6f}" for n, ts, th in rows]
    text = "\n".join(lines)
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def bench_rows(sizes, k, seed, repeats):
    """Shared bench core (also driven by the acceptance suite)."""
    rng = np.random.default_rng(seed)
    rows = []
    warm = field_mod.load_grid_field(rng.random((64, 64)))  # compile kernels off the clock
    _run_pipeline(warm, k)
    for n in sizes:
        side = int(round(n**0.5))
        f = field_mod.load_grid_field(rng.random((side, side)))
        t_seg = min(_time(lambda: morse.segment(f), repeats))
        t_hier = min(_time(lambda: _run_pipeline(f, k), repeats))
        rows.append((side * side, t_seg, t_hier))
    return rows


def _run_pipeline(f, k):
    sub = persistence.sublevel_pairs(f)
    sup = persistence.superlevel_pairs(f)
    top = float(max(sub.persistence.max(initial=0.0), sup.persistence.max(initial=0.0)))
    eps = np.linspace(top / (k + 1), top, k) if top > 0 else np.arange(1, k + 1, dtype=float)
    return hier.build_hierarchy(f, hier.ThresholdSchedule(eps), sub=sub, sup=sup)


def _time(fn, repeats):
    out = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return out


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--kind", type=click.Choice(["auto", "grid2d", "grid3d", "graph"]), default="auto")
@click.option("--filtration", type=click.Choice(["sublevel", "superlevel", "both"]), default="both", show_default=True)
@click.option("--output", "output_stem", default="diagram", show_default=True)
def diagram(input_path, kind, filtration, output_stem):
    """Dump persistence pairs as CSV (birth, death, extremum, saddle, kind)."""
    try:
        f = _load_input(input_path, kind)
    except (OSError, ValueError) as exc:
        raise click.UsageError(str(exc))
    wrote = []
    if filtration in ("sublevel", "both"):
        p = persistence.sublevel_pairs(f)
        persistence.save_diagram_csv(p, f, f"{output_stem}_sublevel.csv")
        wrote.append(f"{output_stem}_sublevel.csv")
    if filtration in ("superlevel", "both"):
        p = persistence.superlevel_pairs(f)
        persistence.save_diagram_csv(p, f, f"{output_stem}_superlevel.csv")
        wrote.append(f"{output_stem}_superlevel.csv")
    click.echo("wrote " + ", ".join(wrote))


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--kind", type=click.Choice(["auto", "grid2d", "grid3d", "graph"]), default="auto")
@click.option("--output", "output_stem", default="dual", show_default=True)
def dual(input_path, kind, output_stem):
    """Dump the base-level dual graph as JSON plus an edge-list CSV."""
    try:
        f = _load_input(input_path, kind)
    except (OSError, ValueError) as exc:
        raise click.UsageError(str(exc))
    seg = morse.segment(f)
    g = build_dual(seg, f, persistence.sublevel_pairs(f), persistence.superlevel_pairs(f))
    save_dual_json(g, f"{output_stem}.json")
    save_dual_edges_csv(g, f"{output_stem}_edges.csv")
    click.echo(f"wrote {output_stem}.json, {output_stem}_edges.csv")


if __name__ == "__main__":
    main()
