"""Compare the compiled and pure kernel lanes on representative workloads.

Microbenchmarks call both lane modules directly on identical inputs; the
end-to-end row rebuilds a completed fibre in a subprocess per lane, using
the DIALECTICA_PURE environment switch the dispatcher honours.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--skip-e2e]
"""
import argparse
import os
import random
import subprocess
import sys
import time

from dialectica._kernels import pure

try:
    from dialectica._kernels import _fast
except ImportError:
    _fast = None


def timed(fn, args_list, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best


def workloads(seed=0, count=4000):
    rng = random.Random(seed)
    jobs = {}

    nw = 2
    ne = 16
    jobs["reindex_mask"] = [
        (rng.getrandbits(ne * nw),
         [rng.randrange(ne) for _ in range(ne)], nw)
        for _ in range(count)]

    fibs = [[] for _ in range(8)]
    for d in range(ne):
        fibs[rng.randrange(8)].append(d)
    jobs["exists_image"] = [
        (rng.getrandbits(ne * nw), fibs, nw) for _ in range(count)]
    jobs["forall_preimage"] = jobs["exists_image"]

    ups = (0b01, 0b10)
    jobs["imp_mask"] = [
        (rng.getrandbits(ne * nw), rng.getrandbits(ne * nw), ne, nw, ups)
        for _ in range(count)]

    na, nb = 4, 4
    jobs["exists_gap_g"] = [
        (rng.getrandbits(na * nw), rng.getrandbits(na * nb * nw),
         na, nb, nw)
        for _ in range(count)]
    jobs["forall_gap_g"] = jobs["exists_gap_g"]

    ni, nu, nx, nv, ny = 2, 2, 2, 2, 2
    jobs["witness_pair"] = [
        (rng.getrandbits(ni * nu * nx * nw),
         rng.getrandbits(ni * nv * ny * nw), ni, nu, nx, nv, ny, nw)
        for _ in range(count)]
    return jobs


E2E_SNIPPET = """
import time
from dialectica.doctrine import powerset_doctrine
from dialectica.dial import build_dial_fibre, check_preorder
from dialectica import _kernels
D = powerset_doctrine((2, 2))
start = time.perf_counter()
fib = build_dial_fibre(D, D.universe[0])
check_preorder(D, fib, seed=0)
print(f"{_kernels.BACKEND} {time.perf_counter() - start:.3f}")
"""


def run_e2e(force_pure):
    env = dict(os.environ)
    if force_pure:
        env["DIALECTICA_PURE"] = "1"
    else:
        env.pop("DIALECTICA_PURE", None)
    out = subprocess.run([sys.executable, "-c", E2E_SNIPPET],
                         capture_output=True, text=True, env=env, check=True)
    backend, seconds = out.stdout.split()
    return backend, float(seconds)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5,
                    help="timing repetitions; the best run is reported")
    ap.add_argument("--count", type=int, default=4000,
                    help="calls per kernel per repetition")
    ap.add_argument("--skip-e2e", action="store_true",
                    help="skip the subprocess end-to-end comparison")
    args = ap.parse_args()

    if _fast is None:
        print("compiled lane not built; showing the pure lane only\n")

    rows = []
    for name, job in workloads(count=args.count).items():
        pure_fn = getattr(pure, name)
        pure_t = timed(pure_fn, job, args.repeat)
        if _fast is not None:
            fast_args = [tuple(list(a) if isinstance(a, list) else a
                               for a in call) for call in job]
            fast_t = timed(getattr(_fast, name), fast_args, args.repeat)
        else:
            fast_t = None
        rows.append((name, pure_t, fast_t))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':{width}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, pure_t, fast_t in rows:
        if fast_t is None:
            print(f"{name:{width}}  {pure_t * 1e3:>8.2f}ms  "
                  f"{'-':>10}  {'-':>8}")
        else:
            print(f"{name:{width}}  {pure_t * 1e3:>8.2f}ms  "
                  f"{fast_t * 1e3:>8.2f}ms  {pure_t / fast_t:>7.1f}x")

    if not args.skip_e2e:
        print()
        for force_pure in (True, False) if _fast is not None else (True,):
            backend, seconds = run_e2e(force_pure)
            print(f"completed fibre over the terminal object "
                  f"({backend} lane): {seconds:.3f}s")


if __name__ == "__main__":
    main()
