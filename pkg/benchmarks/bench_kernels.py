"""Timing comparison of the compiled and numpy kernel backends.

Runs each hot kernel at the default pipeline's working sizes, then one full
staged estimate, per backend.  Reruns are timed on identical inputs, so the
reported ratio is pure backend overhead.

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from pinchest import estimator, geometry, kernels, pilots
from pinchest.estimator import EstimatorConfig
from pinchest.geometry import Scatterer, Scene, WaveguideConfig
from pinchest.pilots import SubarrayLayout

CFG = WaveguideConfig()
LAYOUT = SubarrayLayout()


def _pipeline_inputs():
    scene = Scene(5.0, 0.31, (Scatterer(4.2, -0.8), Scatterer(7.5, 0.6)))
    h = geometry.synthesize_channel(CFG, scene)
    symbols = pilots.make_pilot_symbols(10.0, LAYOUT.slot_count)
    ne = pilots.receive_sequential(CFG, h, LAYOUT.near_indices(),
                                   symbols[:LAYOUT.near_count], 0.0)
    fe = pilots.receive_sequential(CFG, h, LAYOUT.far_indices(),
                                   symbols[LAYOUT.near_count:], 0.0)
    return ne, fe


def _cases():
    lam = CFG.wavelength_m
    pos = geometry.positions_for(CFG, LAYOUT.near_indices())
    angles = estimator.angle_grid(1024)
    distances = np.linspace(1.0, 15.0, 2048)
    rows = np.ascontiguousarray(
        kernels.near_field_atoms(lam, pos, 0.3, distances))
    rng = np.random.default_rng(0)
    w = rng.standard_normal(pos.size) + 1j * rng.standard_normal(pos.size)
    res = rng.standard_normal(pos.size) + 1j * rng.standard_normal(pos.size)
    ne, fe = _pipeline_inputs()
    est = EstimatorConfig(pursuit_order=3)
    return [
        ("first_order_atoms 1024x30",
         lambda: kernels.first_order_atoms(lam, pos, angles)),
        ("second_order_atoms 1024x30",
         lambda: kernels.second_order_atoms(lam, pos, angles, 4.5)),
        ("near_field_atoms 2048x30",
         lambda: kernels.near_field_atoms(lam, pos, 0.3, distances)),
        ("correlation_scores 2048x30",
         lambda: kernels.correlation_scores(rows, w, res)),
        ("algorithm1 (full pipeline)",
         lambda: estimator.algorithm1(ne, fe, CFG, LAYOUT, est)),
    ]


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=20,
                        help="timed repetitions per case; best is reported")
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not available; timing numpy only")

    results = {}
    for name in backends:
        kernels.set_backend(name)
        for label, fn in _cases():
            fn()  # warm up caches and allocators
            results[(label, name)] = _time(fn, args.repeats)

    width = max(len(label) for label, _ in _cases())
    header = f"{'kernel':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"{'ratio':>9}"
    print(header)
    print("-" * len(header))
    for label, _ in _cases():
        times = [results[(label, b)] for b in backends]
        row = f"{label:<{width}}  " + "".join(f"{t * 1e3:>10.3f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[1] / times[0]:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
