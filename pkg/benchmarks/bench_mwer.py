#!/usr/bin/env python3
"""Benchmark the minimum-WER resegmentation kernels: compiled extension vs
pure-Python fallback on document-scale synthetic inputs.

    python3 benchmarks/bench_mwer.py [--sizes 500,1000,2000] [--repeat 3]
"""

import argparse
import random
import time

from ssteval._kernels import get_backend


def make_instance(rng, n_hyp, n_segments, seg_len, vocab=400, noise=0.25):
    """Reference segments plus a hypothesis derived from them with word
    noise, roughly what a candidate-vs-interpreting alignment looks like."""
    ref = [
        [rng.randrange(vocab) for _ in range(max(1, int(rng.gauss(seg_len, 3))))]
        for _ in range(n_segments)
    ]
    hyp = []
    for seg in ref:
        for tok in seg:
            roll = rng.random()
            if roll < noise * 0.4:
                continue  # dropped token
            if roll < noise:
                hyp.append(rng.randrange(vocab))  # substituted token
            else:
                hyp.append(tok)
    offsets = [0]
    flat = []
    for seg in ref:
        flat.extend(seg)
        offsets.append(len(flat))
    return hyp, flat, offsets


def bench(kernel, instances, repeat):
    best = None
    result = None
    for _ in range(repeat):
        started = time.perf_counter()
        for hyp, ref, offsets in instances:
            result = kernel.mwer_partition(hyp, ref, offsets)
        elapsed = time.perf_counter() - started
        best = elapsed if best is None else min(best, elapsed)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="500,1000,2000",
                        help="hypothesis lengths in tokens")
    parser.add_argument("--segments", type=int, default=40)
    parser.add_argument("--docs", type=int, default=5,
                        help="instances per measurement")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    compiled = get_backend("compiled")
    pure = get_backend("python")
    if compiled is pure:
        print("note: compiled extension not built; comparing python with itself")

    print(f"{'hyp tokens':>10} {'segments':>9} {'python':>12} {'compiled':>12} {'speedup':>9}")
    rng = random.Random(args.seed)
    for size in (int(s) for s in args.sizes.split(",")):
        seg_len = max(2, size // args.segments)
        instances = [
            make_instance(rng, size, args.segments, seg_len)
            for _ in range(args.docs)
        ]
        t_py, res_py = bench(pure, instances, args.repeat)
        t_cy, res_cy = bench(compiled, instances, args.repeat)
        assert (list(res_py[0]), res_py[1]) == (list(res_cy[0]), res_cy[1]), \
            "backends disagree"
        print(f"{size:>10} {args.segments:>9} {t_py * 1000:>10.1f}ms "
              f"{t_cy * 1000:>10.1f}ms {t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
