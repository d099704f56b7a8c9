"""Time the numba and numpy paths of the distance kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 12288]

The workloads mirror certification of the pictured line in R^3 on the
default 3 x 64 x 64 cloud: cloud-to-curve distances over the spine's
segments, and mesh-to-cloud nearest-neighbour distances.
"""

import argparse
import time

import numpy as np

from tropspine import ComplexLine, kernels, sample_amoeba, spine_line
from tropspine.geometry import mesh_curve
from tropspine.spine import default_window


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(n_points, seed):
    line = ComplexLine([0, -1, 2j])
    sp = spine_line(line)
    cloud = sample_amoeba(line)
    rng = np.random.default_rng(seed)
    pts = cloud.points
    if n_points > len(pts):
        extra = pts[rng.integers(len(pts), size=n_points - len(pts))] + rng.normal(scale=0.1, size=(n_points - len(pts), 3))
        pts = np.vstack([pts, extra])
    else:
        pts = pts[:n_points]
    starts, vecs, tmax = sp.curve.segments()
    mesh = mesh_curve(sp.curve, default_window(sp.curve, cloud), 0.05)
    return {
        "segment_distances": lambda flag: kernels.segment_distances(pts, starts, vecs, tmax, use_numba=flag),
        "nearest_distances": lambda flag: kernels.nearest_distances(mesh, pts, use_numba=flag),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=3 * 64 * 64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    jobs = workloads(args.points, args.seed)
    print(f"{'kernel':<20} {'numpy [ms]':>12} {'numba [ms]':>12} {'speed-up':>9}  identical")
    for name, fn in jobs.items():
        ref = fn(False)
        t_np = best_of(lambda: fn(False), args.repeat)
        if kernels.HAS_NUMBA:
            fn(True)  # compile outside the timed region
            same = np.array_equal(ref, fn(True))
            t_nb = best_of(lambda: fn(True), args.repeat)
            print(f"{name:<20} {1e3 * t_np:>12.2f} {1e3 * t_nb:>12.2f} {t_np / t_nb:>8.1f}x  {same}")
        else:
            print(f"{name:<20} {1e3 * t_np:>12.2f} {'n/a':>12} {'':>9}  numba not installed")


if __name__ == "__main__":
    main()
