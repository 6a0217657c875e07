"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import timeit

import numpy as np

from cubesect import _backend, _gk, _pykernels
from cubesect import sinc_quad as sq


def _panel_case(n_factors, n_panels, repeated=False):
    edges = np.linspace(0.0, 200.0, n_panels + 1)
    kinds = np.zeros(n_factors, dtype=np.int32)
    kinds[0] = 2
    if repeated:  # the diagonal direction: one weight throughout
        weights = np.full(n_factors, 1 / math.sqrt(n_factors))
    else:
        weights = np.linspace(0.3, 1.2, n_factors)
    return edges[:-1].copy(), edges[1:].copy(), kinds, weights


def _best(stmt, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(stmt, number=1), 1e-6)))
    return min(timeit.repeat(stmt, number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        ck = _backend.load("cython")
    except ImportError:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rows = []
    for n_factors, n_panels, rep in [(4, 256, False), (10, 256, False), (10, 4096, False), (10, 4096, True)]:
        lo, hi, k, w = _panel_case(n_factors, n_panels, rep)
        gk = (_gk.NODES, _gk.KRONROD_WEIGHTS, _gk.GAUSS_WEIGHTS)
        tc = _best(lambda: ck.panel_sums(lo, hi, k, w, *gk), args.repeat)
        tp = _best(lambda: _pykernels.panel_sums(lo, hi, k, w, *gk), args.repeat)
        tag = " equal weights" if rep else ""
        rows.append((f"panel_sums n={n_factors} panels={n_panels}{tag}", tc, tp))

    for n in (8, 14, 20):
        w = np.linspace(0.5, 1.5, n)
        x = float(w.sum())
        tc = _best(lambda: ck.signed_power_sum(w, x, n - 1), args.repeat)
        tp = _best(lambda: _pykernels.signed_power_sum(w, x, n - 1), args.repeat)
        rows.append((f"signed_power_sum n={n}", tc, tp))

    d = [1 / math.sqrt(8)] * 8
    for backend in ("cython", "python"):
        cfg = sq.QuadratureConfig(backend=backend)
        t = _best(lambda: sq.beta_entry(d, 0, cfg), args.repeat)
        rows.append((f"beta_entry n=8 end-to-end [{backend}]", t, None))

    print(f"{'case':44s} {'cython':>12s} {'python':>12s} {'speedup':>8s}")
    for name, tc, tp in rows:
        if tp is None:
            print(f"{name:44s} {tc * 1e3:10.3f}ms")
        else:
            print(f"{name:44s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
