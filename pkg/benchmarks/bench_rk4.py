"""Compare the compiled RK4 kernel with the pure-Python fallback.

Usage: python3 benchmarks/bench_rk4.py [--steps 20000] [--dims 4,6,10]
"""
import argparse
import time

import numpy as np

from msgate import GateParams, basis_state, gate_hamiltonian
from msgate._backend import compiled_kernel
from msgate._rk4_py import rk4_fourier as python_kernel
from msgate.evolve import default_dt


def time_kernel(kernel, H, psi0, dt, steps, repeat=3):
    args = H.sparse()
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = kernel(H.freqs, *args, psi0, 0.0, dt, steps, steps)
        best = min(best, time.perf_counter() - t)
    return best, out[-1]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--dims", default="4,6,10", help="phonon truncations to time")
    args = ap.parse_args(argv)

    compiled = compiled_kernel()
    if compiled is None:
        print("compiled kernel not built; only the Python fallback is timed")
    print(f"{'N':>3} {'terms':>6} {'python us/step':>15} {'cython us/step':>15} {'speedup':>8} {'max |diff|':>11}")
    for N in (int(x) for x in args.dims.split(",")):
        p = GateParams(phonon_dim=N)
        H = gate_hamiltonian(p)
        psi0 = basis_state("g", "g", 0, N)
        dt = default_dt(p.nu)
        t_py, end_py = time_kernel(python_kernel, H, psi0, dt, args.steps)
        us_py = 1e6 * t_py / args.steps
        if compiled is None:
            print(f"{N:>3} {H.freqs.size:>6} {us_py:>15.2f} {'-':>15} {'-':>8} {'-':>11}")
            continue
        t_cy, end_cy = time_kernel(compiled, H, psi0, dt, args.steps)
        us_cy = 1e6 * t_cy / args.steps
        diff = np.max(np.abs(end_py - end_cy))
        print(f"{N:>3} {H.freqs.size:>6} {us_py:>15.2f} {us_cy:>15.2f} {us_py / us_cy:>8.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
