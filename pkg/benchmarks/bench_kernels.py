"""Compare the compiled and pure-Python diagonal flow kernels.

Times single kernel calls at several sizes and one full torus flow per
backend.  Run with ``python benchmarks/bench_kernels.py [--repeat N]``.
"""

from __future__ import annotations

import argparse
import importlib
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from gitkit import _pykernels

SIZES = ((4, 1), (8, 2), (32, 3), (128, 4))

FLOW_SNIPPET = """
import time, numpy as np
from gitkit import kernels, torus, ProjectivePoint, integrate_flow
rng = np.random.default_rng(0)
group = torus(rng.integers(-3, 4, size=(8, 2)).tolist())
x = ProjectivePoint(rng.standard_normal(8) + 1j * rng.standard_normal(8))
integrate_flow(x, group)
t = time.perf_counter()
for _ in range({repeat}):
    integrate_flow(x, group)
print(kernels.BACKEND, (time.perf_counter() - t) / {repeat})
"""


def time_kernels(module, repeat: int) -> dict:
    rng = np.random.default_rng(0)
    out = {}
    for k, d in SIZES:
        s = rng.standard_normal(k + d)
        lam = rng.integers(-3, 4, size=(k, d)).astype(float)
        row = {}
        for name in ("diag_rhs", "diag_jac", "diag_observe"):
            fn = getattr(module, name)
            row[name] = min(timeit.repeat(lambda: fn(s, lam, 1.0), number=repeat, repeat=3)) / repeat
        out[f"k={k},d={d}"] = row
    return out


def time_flow(pure: bool, repeat: int) -> tuple[str, float]:
    env = dict(os.environ)
    if pure:
        env["GITKIT_PURE_PYTHON"] = "1"
    else:
        env.pop("GITKIT_PURE_PYTHON", None)
    res = subprocess.run(
        [sys.executable, "-c", FLOW_SNIPPET.format(repeat=repeat)], env=env, capture_output=True, text=True, check=True
    )
    backend, secs = res.stdout.split()
    return backend, float(secs)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=2000)
    parser.add_argument("--flow-repeat", type=int, default=5)
    args = parser.parse_args(argv)
    try:
        ck = importlib.import_module("gitkit._ckernels")
    except ImportError:
        print("compiled kernels are not built; only the fallback is timed", file=sys.stderr)
        ck = None
    report = {"python": time_kernels(_pykernels, args.repeat)}
    if ck is not None:
        report["cython"] = time_kernels(ck, args.repeat)
        report["speedup"] = {
            size: {name: report["python"][size][name] / report["cython"][size][name] for name in row}
            for size, row in report["cython"].items()
        }
    flows = {}
    for pure in (True, False):
        backend, secs = time_flow(pure, args.flow_repeat)
        flows[backend] = secs
    report["flow_seconds"] = flows
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
