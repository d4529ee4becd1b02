"""Compares serial and process-pool Pruefer evolution

The same free-Jacobi trajectory grid is evolved in one chunk, in several chunks
on the serial map and in several chunks on a process pool.
"""

import timeit

import numpy as np

from gbvlab.pool import SerialMap, default_threads, worker_pool
from gbvlab.pruefer import free_jacobi, trajectory_grid

STEPS = 2000


def main():
    coeffs = free_jacobi()
    threads = default_threads()
    for grid_size in (16, 256, 4096):
        grid = np.linspace(0.1, 2 * np.pi - 0.1, grid_size)
        print(f"Evolving {STEPS} steps on a grid of {grid_size} points")
        with worker_pool(threads) as pool_map:
            runners = [
                ("single", lambda: trajectory_grid(coeffs, grid, STEPS)),
                (
                    "chunked-serial",
                    lambda: trajectory_grid(
                        coeffs, grid, STEPS, mapper=SerialMap(), chunks=threads
                    ),
                ),
                (
                    f"pool-{threads}",
                    lambda: trajectory_grid(
                        coeffs, grid, STEPS, mapper=pool_map, chunks=threads
                    ),
                ),
            ]
            for name, runner in runners:
                assert np.abs(runner().final_log_r).max() < 1e-9
                best = min(timeit.repeat(runner, number=1, repeat=3))
                print(f"  * [{name}]: {best * 1000:.1f}ms")


if __name__ == "__main__":
    main()
