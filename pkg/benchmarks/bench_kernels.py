"""Compiled vs pure-Python kernels on the workloads the library actually runs.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""
import argparse
import time

import numpy as np

from shiftlab import _pykernels, boost, kernels
from shiftlab.core import SftSpec, ShiftSpec
from shiftlab.graph import determinize, trim


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def workloads(quick):
    gm = ShiftSpec(sft=SftSpec.from_words("01", ["11"]))
    plan = boost.manual_plan(gm, 9, 2, M="100000000", C="01", S="", f=3)
    K = 2 if quick else 3
    fam = boost.gamma(plan, K)
    coded = boost._encode_words(fam.words, ("0", "1"))

    rng = np.random.default_rng(0)
    size = 40 if quick else 120
    mat = rng.integers(0, 2, size=(size, size)).astype(float)
    mat[np.arange(size), (np.arange(size) + 1) % size] = 1
    mat += np.eye(size)

    g = trim(determinize(gm.graph))
    trans = np.full((len(g.vertices), 2), -1, dtype=np.intc)
    vi = g.vertex_index
    for e in g.edges:
        trans[vi[e.source], int(e.label)] = vi[e.target]
    rt_fam = boost.gamma(plan, 1)
    rt_coded = boost._encode_words(rt_fam.words, ("0", "1"))
    max_len = 22 if quick else 28
    empty = np.zeros(0, dtype=np.intc)

    return [
        (f"perron power iteration ({size}x{size})", lambda m: m.collatz_power(mat, 1e-12, 10**6)),
        (f"overlap scan (|Gamma_{K}| = {len(fam.words)}, eta = {fam.eta})",
         lambda m: m.first_overlap(coded, 1, fam.eta - 1)),
        (f"round trip, all cycles up to {max_len}",
         lambda m: m.roundtrip_cycles(trans, rt_coded, plan.k, empty, 1, max_len, 2)[0]),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)

    compiled = kernels.compiled_backend
    print(f"backend selected at import: {kernels.BACKEND}")
    print(f"{'workload':48} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, run in workloads(args.quick):
        t_py, out_py = best_of(lambda: run(_pykernels), args.repeat)
        if compiled is None:
            print(f"{name:48} {t_py:10.4f} {'-':>11} {'-':>8}")
            continue
        t_c, out_c = best_of(lambda: run(compiled), args.repeat)
        same = out_py == out_c if not isinstance(out_py, tuple) else np.allclose(out_py[:2], out_c[:2])
        print(f"{name:48} {t_py:10.4f} {t_c:11.4f} {t_py / t_c:7.1f}x" + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
