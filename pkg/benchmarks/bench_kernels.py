"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the truncated product and the divided difference on random sparse
polynomials shaped like the engine's workloads, then an end-to-end
Grassmannian I-function run under each backend (via the
FLAGMIRROR_PURE_PYTHON switch in a subprocess).
"""
import argparse
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from flagmirror.algebra import _pykernels as py

try:
    from flagmirror.algebra import _ckernels as cy
except ImportError:
    cy = None


def random_terms(rng, nvars, nterms, maxexp):
    bias = py.bias_key(nvars)
    out = {}
    for _ in range(nterms):
        key = bias
        for i in range(nvars):
            key += rng.randint(0, maxexp) << (py.FIELD * i)
        out[key] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
    return out


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


END_TO_END = ("from flagmirror.ifunctions import FlagSetup, grassmann_i;"
              "import time; t=time.perf_counter();"
              "grassmann_i(FlagSetup((2,), (0,)*5), dmax=3);"
              "print(time.perf_counter()-t)")


def end_to_end(pure):
    env = dict(os.environ)
    if pure:
        env["FLAGMIRROR_PURE_PYTHON"] = "1"
    else:
        env.pop("FLAGMIRROR_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    if cy is None:
        print("compiled kernels not built; only the Python backend is timed")
    nvars = 5
    weights = (1, 1, 1, 0, 0)
    caps = (-1, -1, 3, -1, -1)
    a = random_terms(rng, nvars, 300, 4)
    b = random_terms(rng, nvars, 300, 4)
    p = random_terms(rng, nvars, 2000, 6)
    rows = []
    for name, fn in [
        ("mul_trunc", lambda m: m.mul_trunc(a, b, nvars, weights, 8, caps)),
        ("divided_difference", lambda m: m.divided_difference(p, 0, 1, nvars)),
    ]:
        t_py = best_of(lambda: fn(py), args.repeat)
        t_cy = best_of(lambda: fn(cy), args.repeat) if cy else None
        if cy:
            assert fn(py) == fn(cy), f"{name}: backends disagree"
        rows.append((name, t_py, t_cy))
    rows.append(("grassmann_i Gr(2,5) d<=3", end_to_end(True), end_to_end(False) if cy else None))
    print(f"{'workload':28s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}")
    for name, t_py, t_cy in rows:
        sp = f"{t_py / t_cy:8.1f}" if t_cy else "     n/a"
        cys = f"{t_cy:12.4f}" if t_cy else "         n/a"
        print(f"{name:28s} {t_py:12.4f} {cys} {sp}")


if __name__ == "__main__":
    main()
