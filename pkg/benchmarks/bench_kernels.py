#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the three hot paths on a realistic Enneper patch: ball-component
flood fill, the preconditioned CG solve behind solve_dirichlet, and
level-segment linking.  Run with --quick for a smaller mesh.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from minlab import _kernels, harmonic as hm, mesh as mm, surfaces as sf


def timeit(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller mesh")
    args = parser.parse_args()

    names = _kernels.available_backends()
    if "c" not in names:
        print("compiled backend not built (pip install -e . without MINLAB_PURE)")

    radius, target_h = (4.0, 0.05) if args.quick else (8.8, 0.035)
    spec = sf.ImmersionSpec("enneper", 1)
    print(f"building enneper patch covering B_{radius} at h={target_h} ...")
    mesh = mm.build_patch(spec, radius, target_h)
    print(f"{mesh.n_vertices} vertices, {mesh.n_triangles} triangles")
    mesh.adjacency  # build edge tables outside the timed region
    root = mesh.origin_vertex
    ball_r = radius * 0.9

    comp = mm.ball_component(mesh, root, ball_r)
    form = hm.assemble_energy(comp)
    theta = np.arctan2(
        mesh.params[comp.boundary_vertices, 1], mesh.params[comp.boundary_vertices, 0]
    )
    g = np.cos(3 * theta) + 0.5 * np.sin(theta)
    b = -(form.l_ib @ g)
    n = len(form.interior)
    x0 = np.zeros(n)

    x3 = hm.ScalarField.from_coordinate(mesh, 2)
    vals = x3.values[comp.vertices]
    level = float(np.percentile(vals, 60))

    rows = []
    for name in names:
        backend = _kernels.get_backend(name)

        center = mesh.positions[root]
        inside = (
            ((mesh.positions - center) ** 2).sum(axis=1)[mesh.triangles].max(axis=1)
            < ball_r**2
        ).astype(np.uint8)
        seeds = np.nonzero(inside)[0][:1].astype(np.int32)
        t_fill, _ = timeit(lambda: backend.flood_fill(mesh.adjacency, inside, seeds))

        t_pcg, (xs, relres, iters) = timeit(
            lambda: backend.pcg(
                form.l_ii.indptr, form.l_ii.indices, form.l_ii.data,
                b, form.l_ii.diagonal(), x0, 1e-10, 10 * n,
            ),
            repeats=1,
        )

        def extract():
            return hm.level_set(x3, level, comp)

        import minlab.harmonic as hmod

        saved = hmod.backend
        hmod.backend = backend
        try:
            t_link, ls = timeit(extract)
        finally:
            hmod.backend = saved

        rows.append((name, t_fill, t_pcg, iters, t_link, len(ls.components)))

    print(f"\n{'backend':<8} {'flood_fill':>12} {'pcg':>12} {'(iters)':>8} {'level_set':>12}")
    for name, t_fill, t_pcg, iters, t_link, _ in rows:
        print(f"{name:<8} {t_fill * 1e3:>10.1f}ms {t_pcg * 1e3:>10.1f}ms {iters:>8} {t_link * 1e3:>10.1f}ms")
    if len(rows) == 2:
        c, py = rows[0], rows[1]
        print(
            f"\nspeedup (numpy/c): flood_fill {py[1] / c[1]:.1f}x, "
            f"pcg {py[2] / c[2]:.1f}x, level_set {py[4] / c[4]:.1f}x"
        )


if __name__ == "__main__":
    main()
