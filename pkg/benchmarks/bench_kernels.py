"""Compiled vs fallback timing for the Glushkov corpus kernels.

Run: python benchmarks/bench_kernels.py [--count 3000] [--max-size 200]

The fallback is measured in a child process started with
RENACOUNT_DISABLE_NUMBA=1, since the flag is read once at import.  Both
paths must return the same statistics table; the script exits 1 if not.
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

_CHILD = r"""
import json, sys, time
import numpy as np
from renacount import _jit
from renacount.kernels import corpus_stats, random_corpus
seed, count, k, lo, hi, runs = map(int, sys.argv[1:7])
t0 = time.perf_counter()
corpus = random_corpus(seed, count, k, lo, hi, 0.05)
t_gen = time.perf_counter() - t0
best = float("inf")
for _ in range(runs):
    t0 = time.perf_counter()
    st = corpus_stats(corpus[0], corpus[1], corpus[2], corpus[4])
    best = min(best, time.perf_counter() - t0)
print(json.dumps({"numba": _jit.USING_NUMBA, "gen": t_gen, "stats": best,
                  "digest": int(np.asarray(st, dtype=np.int64).sum()),
                  "rows": st.shape[0], "nodes": int(corpus[4][-1])}))
"""


def _run(disable: bool, args) -> dict:
    env = dict(os.environ)
    env["RENACOUNT_DISABLE_NUMBA"] = "1" if disable else "0"
    argv = [sys.executable, "-c", _CHILD, str(args.seed), str(args.count), str(args.k),
            "1", str(args.max_size), str(args.runs)]
    out = subprocess.run(argv, env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=3000)
    ap.add_argument("--max-size", type=int, default=200)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--runs", type=int, default=3)
    args = ap.parse_args()

    # warm the on-disk numba cache so compile time is not billed to the kernel
    _run(False, argparse.Namespace(**{**vars(args), "count": 10, "runs": 1}))
    fast = _run(False, args)
    slow = _run(True, args)
    print(f"corpus: {fast['rows']} expressions, {fast['nodes']} nodes (k={args.k}, size <= {args.max_size})")
    print(f"{'path':10s} {'generate [s]':>14s} {'stats [s]':>12s} {'nodes/s':>14s}")
    for name, r in (("numba", fast), ("fallback", slow)):
        print(f"{name:10s} {r['gen']:14.4f} {r['stats']:12.4f} {r['nodes'] / r['stats']:14.3e}")
    print(f"speedup (stats): {slow['stats'] / fast['stats']:.1f}x")
    if fast["digest"] != slow["digest"]:
        print("MISMATCH: the two paths disagree")
        return 1
    print("both paths agree")
    return 0


if __name__ == "__main__":
    sys.exit(main())
