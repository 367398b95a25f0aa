"""Compare the numba kernels with the numpy fallback.

The JIT switch is read at import time, so each backend runs in its own child
process. Both children solve the same seeded workloads; the parent checks that
their answers agree and prints the timings.

    python3 benchmarks/bench_kernels.py [--seed 0] [--repeat 3]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time


def workloads(seed):
    import numpy as np

    from idsolve import kernels
    from idsolve.generators import gnp, random_set_system
    from idsolve.trees import rooted_trees

    rng = random.Random(seed)
    graphs = [gnp(14, rng.choice([0.2, 0.4]), rng) for _ in range(6)]
    systems = [random_set_system(8, 16, rng) for _ in range(6)]
    trees = list(rooted_trees(8))

    def lds():
        out = []
        for g in graphs:
            closed = np.array([g.closed_mask(v) for v in range(g.n)], dtype=np.int64)
            opened = np.array([g.nbr_mask(v) for v in range(g.n)], dtype=np.int64)
            out.append([int(v) for v in kernels.smallest_lds(closed, opened)])
        return out

    def tc():
        out = []
        for s in systems:
            res = kernels.smallest_separating_family(np.array(s.item_masks(), dtype=np.int64), len(s.tests))
            out.append(None if res is None else [int(j) for j in res])
        return out

    def tree_dp():
        out = []
        for t in trees:
            indptr, indices = t.csr()
            out.append(kernels.tree_type_table(indptr, indices, t.n, t.root, -1)[:, 0].tolist())
        return out

    return {"lds_brute_n14": lds, "tc_brute_u8": tc, "tree_dp_n8": tree_dp}


def child(seed, repeat):
    from idsolve._accel import USE_NUMBA

    report = {"numba": USE_NUMBA, "results": {}}
    for name, fn in workloads(seed).items():
        t0 = time.perf_counter()
        answer = fn()  # first call includes JIT compilation
        first = time.perf_counter() - t0
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        report["results"][name] = {"first": first, "best": best, "answer": answer}
    print(json.dumps(report))


def run_backend(flag, seed, repeat):
    env = dict(os.environ, IDSOLVE_NUMBA=flag)
    cmd = [sys.executable, __file__, "--child", "--seed", str(seed), "--repeat", str(repeat)]
    out = subprocess.run(cmd, env=env, check=True, capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        child(args.seed, args.repeat)
        return
    jit = run_backend("1", args.seed, args.repeat)
    ref = run_backend("0", args.seed, args.repeat)
    print(f"{'workload':<16}{'numba first':>13}{'numba best':>12}{'numpy best':>12}{'speedup':>9}  agree")
    ok = True
    for name, a in jit["results"].items():
        b = ref["results"][name]
        agree = a["answer"] == b["answer"]
        ok &= agree
        speed = b["best"] / a["best"] if a["best"] > 0 else float("inf")
        print(f"{name:<16}{a['first']:>12.3f}s{a['best']:>11.4f}s{b['best']:>11.4f}s{speed:>8.1f}x  {agree}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
