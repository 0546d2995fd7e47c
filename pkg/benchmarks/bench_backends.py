"""Compare the numba and numpy sliding-window engines.

Both engines get identical pre-padded planes, so this measures the kernels
alone. The jitted engine is warmed up before timing. Run as::

    python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from stackmorph import _kernels_numpy

try:
    from stackmorph import _kernels_numba
except ImportError:
    _kernels_numba = None


def _inputs(side, m, seed):
    rng = np.random.default_rng(seed)
    # 3x3 window, offsets pre-shifted for a one-pixel pad on every side.
    dys, dxs = np.divmod(np.arange(9, dtype=np.int64), 3)
    padded_grey = rng.integers(0, m + 1, (side + 2, side + 2)).astype(np.int32)
    padded_bits = (padded_grey > m // 2).astype(np.uint8)
    table = rng.integers(0, 2, 512).astype(np.uint8)
    return padded_grey, padded_bits, dys, dxs, table


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    m = 255
    engines = [("numpy", _kernels_numpy)]
    if _kernels_numba is not None:
        engines.append(("numba", _kernels_numba))
        # compile outside the timed region
        g, b, dys, dxs, table = _inputs(16, m, 0)
        _kernels_numba.apply_set_kernel(b, dys, dxs, table, 16, 16)
        _kernels_numba.apply_stack_kernel(g, dys, dxs, table, m, 16, 16)
    else:
        print("numba not importable; timing the numpy engine only")

    print(f"{'engine':<8} {'image':<10} {'set (ms)':>10} {'stack (ms)':>12}")
    timings = {}
    for side in (256, 512):
        grey, bits, dys, dxs, table = _inputs(side, m, 1)
        reference = None
        for name, mod in engines:
            set_s = _time(lambda: mod.apply_set_kernel(bits, dys, dxs, table, side, side))
            stack_s = _time(
                lambda: mod.apply_stack_kernel(grey, dys, dxs, table, m, side, side)
            )
            out = mod.apply_stack_kernel(grey, dys, dxs, table, m, side, side)
            if reference is None:
                reference = out
            elif not np.array_equal(reference, out):
                raise SystemExit(f"engines disagree at {side}x{side}")
            timings[(name, side)] = stack_s
            print(
                f"{name:<8} {side}x{side:<6} {set_s * 1e3:>10.2f} {stack_s * 1e3:>12.2f}"
            )
    if _kernels_numba is not None:
        for side in (256, 512):
            ratio = timings[("numpy", side)] / timings[("numba", side)]
            print(f"stack speedup at {side}x{side}: {ratio:.1f}x")


if __name__ == "__main__":
    main()
