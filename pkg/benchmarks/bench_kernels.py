"""Compare the numba kernels with the pure-NumPy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so the ``EWITNESS_DISABLE_NUMBA`` flag
does not matter here. The first numba call is excluded (compilation or cache
load); each figure is the best of ``--repeat`` timed runs.
"""
import argparse
import time

import numpy as np

from ewitness import states
from ewitness.kernels import numba_impl, numpy_impl
from ewitness.linalg import JACOBI_MAX_SWEEPS, JACOBI_TOL
from ewitness.witness import _profile_coefficients, _start_vectors


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    g = rng.normal(size=(36, 36)) + 1j * rng.normal(size=(36, 36))
    h = (g + g.conj().T) / 2
    yield "jacobi 36x36", lambda impl: impl.jacobi_eigh(h, JACOBI_TOL, JACOBI_MAX_SWEEPS)

    for dims in ((2, 2), (3, 3)):
        rho = states.random_density_matrix(dims, seed=1)
        r4 = np.ascontiguousarray(rho.tensor())
        mus, nus = _start_vectors(dims, 50, 0)
        mus[-1], nus[-1] = np.eye(dims[0])[0], np.eye(dims[1])[0]
        yield (f"see-saw 51 restarts {dims[0]}x{dims[1]}",
               lambda impl, r4=r4, mus=mus, nus=nus: impl.seesaw_restarts(
                   r4, mus, nus, 1e-12, 500, JACOBI_TOL, JACOBI_MAX_SWEEPS))

    rho = states.random_density_matrix((3, 3), seed=2)
    D, P, Q = _profile_coefficients(rho, "real")
    xs = rng.dirichlet(np.ones(3), size=30)
    ys = rng.dirichlet(np.ones(3), size=30)
    yield "simplex PGD 30 starts 3x3", lambda impl: impl.simplex_pgd(D, P, Q, xs, ys, 0.1, 200)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"{'kernel':<30}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, run in cases():
        t_numba = best_of(lambda: run(numba_impl), args.repeat)
        t_numpy = best_of(lambda: run(numpy_impl), args.repeat)
        print(f"{name:<30}{1e3 * t_numba:>12.3f}{1e3 * t_numpy:>12.3f}"
              f"{t_numpy / t_numba:>9.1f}x")


if __name__ == "__main__":
    main()
