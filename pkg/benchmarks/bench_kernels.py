"""Time the compiled kernel against the pure-Python fallback.

Both kernels run the same adaptive scheme on the same workloads, so the
ratio is pure interpreter overhead.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import time

import numpy as np

from chirptls import ChirpDrive, TlsParams, build_grid
from chirptls._kernels import _python

try:
    from chirptls._kernels import _native
except ImportError:
    _native = None

TWO_PI = 2.0 * math.pi


def _workloads():
    s = TlsParams(delta0=TWO_PI * 6.0)
    eta = TWO_PI * 0.027
    chirp = ChirpDrive(
        omega0=TWO_PI * 5.9, alpha=1.5 * eta * eta, eta=eta, n_periods=178
    )
    harmonic = ChirpDrive(
        omega0=TWO_PI * 5.97, alpha=0.0, eta=TWO_PI * 0.3, n_periods=1500
    )
    return (
        ("chirped transfer, 178 periods, tol 1e-10", s, chirp, 1e-10, 1e-12),
        ("scan point, 1500 periods, tol 1e-6", s, harmonic, 1e-6, 1e-9),
    )


def _time(kernel, s, d, rel_tol, abs_tol, repeat):
    g = build_grid(d)
    r0 = np.array([-1.0, 0.0, 0.0])
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        kernel.propagate_segments(
            0, s.delta, s.u, s.v, d.eta, d.omega0, d.alpha,
            g.t, r0, rel_tol, abs_tol, math.inf, 1e-2, True,
        )
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(
        description="compare propagation kernel backends"
    )
    ap.add_argument("--repeat", type=int, default=3, help="best-of runs")
    args = ap.parse_args()
    for label, s, d, rel_tol, abs_tol, in _workloads():
        t_py = _time(_python, s, d, rel_tol, abs_tol, args.repeat)
        line = f"{label}: python {t_py * 1e3:8.2f} ms"
        if _native is not None:
            t_nat = _time(_native, s, d, rel_tol, abs_tol, args.repeat)
            line += f", native {t_nat * 1e3:8.2f} ms, speedup x{t_py / t_nat:.1f}"
        else:
            line += ", native kernel unavailable"
        print(line)


if __name__ == "__main__":
    main()
