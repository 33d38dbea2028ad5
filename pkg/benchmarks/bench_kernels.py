"""Benchmark the compiled recurrence kernels against the pure-Python
twins.

Both backends implement identical algorithms (and agree bitwise); this
script measures what the C extension actually buys.  Run with

    python3 benchmarks/bench_kernels.py
"""

import timeit

from cyclores import _kernels_py as py_kernels

try:
    from cyclores import _kernels_cy as cy_kernels
except ImportError:
    cy_kernels = None


CASES = [
    ("hermite_norm(s=50,  u=3.2)", "hermite_norm", (50, 3.2)),
    ("hermite_norm(s=200, u=14.0)", "hermite_norm", (200, 14.0)),
    ("laguerre_i(5, 3, 2.5)", "laguerre_i", (5, 3, 2.5)),
    ("laguerre_i(120, 95, 18.0)", "laguerre_i", (120, 95, 18.0)),
    ("laguerre_i(500, 470, 40.0)", "laguerre_i", (500, 470, 40.0)),
    ("ln_row(s=100,   zeta=9,   m<=400)", "displacement_ln_row", (100, 9.0, 400)),
    ("ln_row(s=2500,  zeta=25,  m<=3200)", "displacement_ln_row", (2500, 25.0, 3200)),
    ("ln_row(s=40000, zeta=100, m<=44100)", "displacement_ln_row", (40000, 100.0, 44100)),
]


def best_seconds(func, args):
    timer = timeit.Timer(lambda: func(*args))
    loops, total = timer.autorange()
    return min(total / loops, *(t / loops for t in timer.repeat(repeat=2, number=loops)))


def fmt_time(seconds):
    if seconds < 1e-6:
        return f"{seconds * 1e9:8.1f} ns"
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    return f"{seconds * 1e3:8.1f} ms"


def main():
    if cy_kernels is None:
        print("compiled extension not available; nothing to compare")

    width = max(len(label) for label, _, _ in CASES)
    header = f"{'kernel call':<{width}}  {'python':>11}  {'cython':>11}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, name, args in CASES:
        t_py = best_seconds(getattr(py_kernels, name), args)
        if cy_kernels is None:
            print(f"{label:<{width}}  {fmt_time(t_py)}")
            continue
        t_cy = best_seconds(getattr(cy_kernels, name), args)
        print(
            f"{label:<{width}}  {fmt_time(t_py)}  {fmt_time(t_cy)}"
            f"  {t_py / t_cy:7.1f}x"
        )


if __name__ == "__main__":
    main()
