"""Compare the numba kernels with the numpy/Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Each row times one kernel on the same input through both paths and checks
that the answers agree.  With ``TFSMT_DISABLE_JIT=1`` only the fallback runs.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from tfsmt import kernels
from tfsmt.distinguishing import revealing_combs
from tfsmt.encoding import encode_not_phi_alpha
from tfsmt.engine import FaultModel
from tfsmt.generator import random_fault_model
from tfsmt.kernels import MachineTables, batch_conforms, batch_outputs, count_models, scaled_test
from tfsmt.models import load_bundled
from tfsmt.oracle import enumerate_mutants
from tfsmt.timed import TimedSequence


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    m = random_fault_model(6, 2, 2, 3, 5, 4, seed=0)
    mutants = list(enumerate_mutants(m))
    spec_t, tables = MachineTables([m.spec]), MachineTables(mutants)
    test = TimedSequence.parse("i0@0 i1@1.5 i1@4 i0@4 i1@9 i0@12.5")
    inp, times, scale = scaled_test(m, test)
    yield (f"outputs ({len(mutants)} mutants)",
           lambda jit: batch_outputs(tables, inp, times, scale, jit=jit), np.array_equal)
    yield (f"conforms ({len(mutants)} mutants)",
           lambda jit: batch_conforms(spec_t, tables, jit=jit), np.array_equal)

    small = random_fault_model(4, 2, 2, 3, 4, 3, seed=1)
    fm = FaultModel(small)
    f = fm.phi_m()
    for t in ["i0@0 i1@2 i0@2.5", "i1@1 i1@1 i0@5"]:
        f = f & encode_not_phi_alpha(revealing_combs(fm.da, TimedSequence.parse(t)), fm.varmap)
    n = len(fm.varmap)
    yield (f"count models ({n} vars)", lambda jit: count_models(f, n, jit=jit), lambda a, b: a == b)

    tftp = FaultModel(load_bundled("tftp"))
    g = tftp.phi_m()
    for t in ["RRQ@0 ACK1@1 ACK2@2.5", "RRQ@0 ACK1@0 ERROR@6", "RRQ@0 ACK1@0 ACK2@0 ACK3@0"]:
        g = g & encode_not_phi_alpha(revealing_combs(tftp.da, TimedSequence.parse(t)), tftp.varmap)
    codes, starts, lens = g.arrays()
    nv = len(tftp.varmap)
    yield (f"cdcl (tftp, {nv} vars, {len(g)} clauses)",
           lambda jit: kernels.cdcl_arrays(nv, codes, starts, lens, jit=jit)[0], lambda a, b: a == b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"backend: {kernels.backend()}")
    print(f"{'kernel':44s} {'numba s':>10s} {'fallback s':>11s} {'speedup':>8s}")
    for name, fn, same in cases():
        slow, ref = best_of(lambda: fn(False), args.repeat)
        if kernels.JIT_ENABLED:
            fn(True)  # compile or load from cache
            fast, got = best_of(lambda: fn(True), args.repeat)
            assert same(got, ref), f"{name}: paths disagree"
            print(f"{name:44s} {fast:10.4f} {slow:11.4f} {slow / fast:7.1f}x")
        else:
            print(f"{name:44s} {'-':>10s} {slow:11.4f} {'-':>8s}")


if __name__ == "__main__":
    main()
