"""Time compiled vs pure-Python simplex kernels on identical reconstructions.

Usage: python3 benchmarks/bench_kernel.py [--trials N]
"""
import argparse
import time

from qstnoise._backend import get_kernel
from qstnoise.channel import ChannelParams, transmittance
from qstnoise.photons import RngStream, SourceParams, derive_stream_id, simulate_counts_full
from qstnoise.quantum import pure_state_density, sic_povm
from qstnoise.harness import generate_state_sample
from qstnoise.estimator import EstimatorOptions, reconstruct


def workload(n):
    povm = sic_povm()
    src = SourceParams(500)
    ch = ChannelParams(p_in_watts=1e-3, length_km=60.0)
    states = generate_state_sample(10, 20).states
    jobs = []
    for k in range(n):
        rho = pure_state_density(states[k % len(states)])
        streams = [RngStream(7, derive_stream_id(k, j)) for j in range(4)]
        counts = simulate_counts_full(rho, src, ch, povm, streams)
        jobs.append((counts, k))
    return jobs, src, transmittance(ch), povm


def run(kernel, jobs, src, eta, povm):
    t0 = time.perf_counter()
    out = [
        reconstruct(c, src, eta, povm, EstimatorOptions(rng_seed_for_restarts=k), kernel=kernel).t_hat
        for c, k in jobs
    ]
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    args = ap.parse_args()
    jobs, src, eta, povm = workload(args.trials)
    try:
        get_kernel("cython")
        cy = "cython"
    except ImportError:
        print("compiled kernel not built; only the Python timing is available")
        cy = None
    t_py, r_py = run("python", jobs, src, eta, povm)
    print(f"python: {t_py:.2f} s ({1e3 * t_py / len(jobs):.2f} ms/trial)")
    if cy is not None:
        t_cy, r_cy = run(cy, jobs, src, eta, povm)
        print(f"cython: {t_cy:.2f} s ({1e3 * t_cy / len(jobs):.2f} ms/trial)")
        print(f"speedup: {t_py / t_cy:.1f}x, results identical: {r_py == r_cy}")


if __name__ == "__main__":
    main()
