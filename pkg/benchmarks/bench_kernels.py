"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each case runs once untimed (numba compiles on first call), then reports the
best of N runs for both paths and checks that their outputs agree.
"""
import argparse
import time

import numpy as np

from reeskit import _kernels
from reeskit.automaton import load_automaton
from reeskit.engine import WordSpace
from reeskit.rook import builtin_semigroup


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def act_case(name, tokens, depth):
    aut = load_automaton(name)
    comp = aut.compiled
    arr = WordSpace(aut, aut.graph.vertices[0], depth).array
    g = np.array([comp["code"]((t, 1)) for t in tokens], dtype=np.int64)
    args = (comp["out"], comp["rest"], comp["rest_len"], comp["inv_of"], g, arr)

    def run(use):
        return lambda: _kernels.act_words(*args, use_numba=use)
    a, b = run(True)(), run(False)()
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    return f"act_words {name} depth {depth} ({len(arr)} words)", run(True), run(False)


def assoc_case(key):
    t = np.ascontiguousarray(builtin_semigroup(key).t, dtype=np.int64)
    jit = _kernels._load()["assoc"]
    assert jit(t) == _kernels._assoc_numpy(t)
    return f"associativity {key} ({len(t)} elements)", lambda: jit(t), lambda: _kernels._assoc_numpy(t)


def rook_case(key, n, count):
    S = builtin_semigroup(key)
    J = S.join_table_with_zero
    rng = np.random.default_rng(0)
    idem = np.array(S.idem_idx)
    # diagonal idempotent matrices always have joins, so every product succeeds
    mats = []
    for _ in range(count):
        a = np.full((n, n), S.z, dtype=np.int64)
        np.fill_diagonal(a, rng.choice(idem, n))
        mats.append(a)

    def run(use):
        return lambda: [_kernels.rook_multiply(S.t, J, a, b, S.z, use_numba=use)
                        for a, b in zip(mats, mats[1:])]
    for (c1, _), (c2, _) in zip(run(True)(), run(False)()):
        assert np.array_equal(c1, c2)
    return f"rook_multiply {key} {n}x{n} x{count}", run(True), run(False)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels._load() is False:
        raise SystemExit("numba is not installed; nothing to compare")
    cases = [
        act_case("adding", ["a"] * 7, 14),
        act_case("grigorchuk", list("abcdabcd"), 12),
        assoc_case("In:4"),
        rook_case("In:3", 12, 200),
    ]
    print(f"{'case':52s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for label, fast, slow in cases:
        tf, ts = best_of(fast, args.repeat), best_of(slow, args.repeat)
        print(f"{label:52s} {tf * 1e3:9.2f}ms {ts * 1e3:9.2f}ms {ts / tf:7.1f}x")


if __name__ == "__main__":
    main()
