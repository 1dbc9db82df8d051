"""Compare the compiled and pure-python state kernels on growing registers."""

from __future__ import annotations

import argparse
import time

import numpy as np

import abelqec._kernels_py as kpy

try:
    import abelqec._kernels_cy as kcy
except ImportError:
    kcy = None

SHAPES = (
    (2,) * 8,
    (2,) * 12,
    (2,) * 16,
    (4,) * 6,
    (4,) * 8,
    (6, 6, 6, 6),
    (36, 36),
)


def random_state(order: int, rng: np.random.Generator) -> np.ndarray:
    amps = rng.standard_normal(order) + 1j * rng.standard_normal(order)
    return amps / np.linalg.norm(amps)


def best_time(fn, repeats: int) -> float:
    """Wall-clock of the fastest of `repeats` calls, in seconds."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def dft(m: int) -> np.ndarray:
    grid = np.outer(np.arange(m), np.arange(m)) % m
    return np.exp((2j * np.pi / m) * grid) / np.sqrt(m)


def full_transform(kernels, amps: np.ndarray, moduli: tuple[int, ...]) -> np.ndarray:
    """Apply the per-factor DFT across every axis, like the group transform does."""
    out = amps
    for axis, m in enumerate(moduli):
        out = kernels.apply_axis_unitary(out, moduli, axis, dft(m))
    return out


def bench_shape(moduli: tuple[int, ...], repeats: int, rng: np.random.Generator) -> list[dict]:
    order = int(np.prod(moduli))
    amps = random_state(order, rng)
    shift = tuple(int(rng.integers(m)) for m in moduli)
    char = tuple(int(rng.integers(m)) for m in moduli)
    lcm = int(np.lcm.reduce(np.asarray(moduli, dtype=np.int64)))
    mid = len(moduli) // 2
    matrix = dft(moduli[mid])
    tasks = {
        "translate": lambda k: k.translate(amps, moduli, shift),
        "phase": lambda k: k.phase_multiply(amps, moduli, char, lcm),
        "axis-unitary": lambda k: k.apply_axis_unitary(amps, moduli, mid, matrix),
        "full-transform": lambda k: full_transform(k, amps, moduli),
    }
    rows = []
    for name, task in tasks.items():
        t_py = best_time(lambda: task(kpy), repeats)
        t_cy = best_time(lambda: task(kcy), repeats) if kcy is not None else float("nan")
        rows.append(
            {
                "moduli": "x".join(str(m) for m in moduli),
                "order": order,
                "kernel": name,
                "pure_us": t_py * 1e6,
                "cython_us": t_cy * 1e6,
                "speedup": t_py / t_cy if kcy is not None else float("nan"),
            }
        )
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=30, help="timing repeats per kernel")
    parser.add_argument("--seed", type=int, default=7, help="state/shift generator seed")
    args = parser.parse_args()

    if kcy is None:
        print("compiled backend not built; timing the pure-python kernels only")
    rng = np.random.default_rng(args.seed)
    header = f"{'group':>14} {'dim':>7} {'kernel':>15} {'pure (us)':>12} {'cython (us)':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for moduli in SHAPES:
        for row in bench_shape(moduli, args.repeats, rng):
            print(
                f"{row['moduli']:>14} {row['order']:>7} {row['kernel']:>15} "
                f"{row['pure_us']:>12.1f} {row['cython_us']:>12.1f} {row['speedup']:>8.2f}"
            )


if __name__ == "__main__":
    main()
