"""Benchmark the compiled assembly kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 8,16,32,48] [--repeats 5]

Times the three hot kernels (rate-tensor construction, collision-superoperator
assembly, double-commutator assembly) on random Hermitian instances and prints
one table per kernel with the per-call time of each backend and the ratio.
"""
import argparse
import time

import numpy as np

from qfgr._kernels import pykernels

try:
    from qfgr._kernels import _ckernels
except ImportError:
    _ckernels = None


def random_instance(n, seed=0):
    rng = np.random.default_rng(seed)
    energies = np.sort(rng.uniform(0.0, n - 1.0, n))
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return energies, (b + b.conj().T) / 2


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.3f} s "


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="8,16,32,48")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _ckernels is None:
        print("compiled kernels not available; showing numpy backend only")

    backends = [("python", pykernels)]
    if _ckernels is not None:
        backends.append(("c", _ckernels))

    for label, case in [
        ("rate tensor (conventional)", "rates_conv"),
        ("rate tensor (symmetrized)", "rates_symm"),
        ("collision superoperator", "superop"),
        ("double commutator (8 ops)", "dc"),
    ]:
        print(f"\n{label}")
        header = f"{'n':>4}" + "".join(f"{name:>14}" for name, _ in backends)
        if len(backends) == 2:
            header += f"{'python/c':>12}"
        print(header)
        for n in sizes:
            energies, hp = random_instance(n)
            p = pykernels.build_rate_tensor(hp, energies, 1.0, 0.05, False, False)
            ops = np.ascontiguousarray(
                [np.diag(energies).astype(complex) + 0.1 * k * hp for k in range(8)]
            )
            row = [f"{n:>4}"]
            measured = []
            for _, mod in backends:
                if case == "rates_conv":
                    fn = lambda m=mod: m.build_rate_tensor(hp, energies, 1.0, 0.05, False, False)
                elif case == "rates_symm":
                    fn = lambda m=mod: m.build_rate_tensor(hp, energies, 1.0, 0.05, False, True)
                elif case == "superop":
                    fn = lambda m=mod: m.rate_superoperator(p)
                else:
                    fn = lambda m=mod: m.double_commutator_superoperator(ops)
                t = best_of(fn, args.repeats)
                measured.append(t)
                row.append(fmt(t))
            if len(measured) == 2:
                row.append(f"{measured[0] / measured[1]:>10.2f}x")
            print("".join(f"{c:>14}" if i else c for i, c in enumerate(row)))


if __name__ == "__main__":
    main()
