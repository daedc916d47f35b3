"""Hot loops with a numba path and a pure-numpy fallback.

Set REESKIT_NO_NUMBA=1 to force the numpy path. numba is imported lazily
so that light commands never pay its start-up cost.
"""
from __future__ import annotations

import os

import numpy as np

_ENV = "REESKIT_NO_NUMBA"
_jit = None  # dict of compiled functions once loaded, False if unavailable

OK, UNDEFINED, OVERFLOW = 0, 1, 2


def numba_enabled() -> bool:
    if os.environ.get(_ENV, "").strip().lower() in ("1", "true", "yes", "on"):
        return False
    return _load() is not False


def backend() -> str:
    return "numba" if numba_enabled() else "numpy"


def _load():
    global _jit
    if _jit is not None:
        return _jit
    try:
        import numba
    except ImportError:  # pragma: no cover
        _jit = False
        return _jit
    njit = numba.njit(cache=True, nogil=True)
    _jit = {
        "assoc": njit(_assoc_loop),
        "act": njit(_act_loop),
        "rook": njit(_rook_loop),
    }
    return _jit


# associativity of a (partial) table, -1 = undefined

def _assoc_loop(t):
    n = t.shape[0]
    for a in range(n):
        for b in range(n):
            ab = t[a, b]
            if ab < 0:
                continue
            for c in range(n):
                bc = t[b, c]
                if bc < 0:
                    continue
                if t[ab, c] != t[a, bc]:
                    return a, b, c
    return -1, -1, -1


def _assoc_numpy(t):
    n = t.shape[0]
    for a in range(n):
        ab = t[a]  # (b,)
        ok_ab = ab >= 0
        bc = t  # (b, c)
        lhs = np.where(ok_ab[:, None], t[np.where(ok_ab, ab, 0)], -2)
        rhs = np.where(bc >= 0, t[a][np.where(bc >= 0, bc, 0)], -2)
        mask = ok_ab[:, None] & (bc >= 0) & (lhs != rhs)
        if mask.any():
            b, c = np.argwhere(mask)[0]
            return a, int(b), int(c)
    return -1, -1, -1


def associativity_violation(table: np.ndarray):
    t = np.ascontiguousarray(table, dtype=np.int64)
    if t.size == 0:
        return None
    fn = _load()["assoc"] if numba_enabled() else _assoc_numpy
    a, b, c = fn(t)
    return None if a < 0 else (int(a), int(b), int(c))


# automaton action on a batch of words
#
# out[s, x]      output letter or -1 when x is outside the input alphabet of s
# rest[s, x, :]  restriction word (token indices), rest_len[s, x] its length
# inv_of[s]      index of the formal inverse token
# g              the acting token word, leftmost first
# words          (N, L) letter indices, -1 padded

def _act_loop(out, rest, rest_len, inv_of, g, words, cap):
    n, L = words.shape
    res = np.full((n, L), -1, dtype=np.int64)
    status = np.zeros(n, dtype=np.int64)
    cur = np.empty(cap, dtype=np.int64)
    tmp = np.empty(cap, dtype=np.int64)
    for i in range(n):
        k = g.shape[0]
        for t in range(k):
            cur[t] = g[t]
        for j in range(L):
            x = words[i, j]
            if x < 0:
                break
            p = cap
            bad = False
            for t in range(k - 1, -1, -1):
                s = cur[t]
                y = out[s, x]
                if y < 0:
                    bad = True
                    break
                ln = rest_len[s, x]
                if p - ln < 0:
                    status[i] = 2
                    bad = True
                    break
                for u in range(ln - 1, -1, -1):
                    p -= 1
                    tmp[p] = rest[s, x, u]
                x = y
            if bad:
                if status[i] == 0:
                    status[i] = 1
                break
            res[i, j] = x
            k = 0
            for q in range(p, cap):
                u = tmp[q]
                if k > 0 and cur[k - 1] == inv_of[u]:
                    k -= 1
                else:
                    cur[k] = u
                    k += 1
    return res, status


def _act_numpy(out, rest, rest_len, inv_of, g, words, cap):
    n, L = words.shape
    res = np.full((n, L), -1, dtype=np.int64)
    status = np.zeros(n, dtype=np.int64)
    stack = [(tuple(int(s) for s in g), np.arange(n), 0)]
    while stack:
        toks, rows, j = stack.pop()
        if j >= L or rows.size == 0:
            continue
        col = words[rows, j]
        live = rows[col >= 0]
        col = col[col >= 0]
        for x in np.unique(col):
            sub = live[col == x]
            y = int(x)
            parts = []
            ok = True
            for s in reversed(toks):
                z = out[s, y]
                if z < 0:
                    ok = False
                    break
                parts.append(tuple(rest[s, y, :rest_len[s, y]]))
                y = int(z)
            if not ok:
                status[sub] = UNDEFINED
                continue
            res[sub, j] = y
            red: list[int] = []
            for part in reversed(parts):
                for u in part:
                    u = int(u)
                    if red and red[-1] == inv_of[u]:
                        red.pop()
                    else:
                        red.append(u)
            if len(red) > cap:
                status[sub] = OVERFLOW
                continue
            stack.append((tuple(red), sub, j + 1))
    return res, status


def act_words(out, rest, rest_len, inv_of, g, words, cap=4096, use_numba=None):
    if use_numba is None:
        use_numba = numba_enabled()
    g = np.ascontiguousarray(g, dtype=np.int64)
    words = np.ascontiguousarray(words, dtype=np.int64)
    cap = max(cap, g.shape[0] + 1)
    if use_numba:
        return _load()["act"](out, rest, rest_len, inv_of, g, words, cap)
    return _act_numpy(out, rest, rest_len, inv_of, g, words, cap)


# rook matrix product: c_ij = join_k a_ik b_kj

def _rook_loop(mul, join, A, B, zero):
    n = A.shape[0]
    m = B.shape[1]
    C = np.full((n, m), zero, dtype=np.int64)
    for i in range(n):
        for j in range(m):
            acc = zero
            for k in range(A.shape[1]):
                p = mul[A[i, k], B[k, j]]
                acc = join[acc, p]
                if acc < 0:
                    return C, i, j
            C[i, j] = acc
    return C, -1, -1


def _rook_numpy(mul, join, A, B, zero):
    P = mul[A[:, :, None], B[None, :, :]]  # (i, k, j)
    acc = np.full((A.shape[0], B.shape[1]), zero, dtype=np.int64)
    bad = np.zeros(acc.shape, dtype=bool)
    for k in range(A.shape[1]):
        nxt = join[np.where(bad, zero, acc), P[:, k, :]]
        bad |= nxt < 0
        acc = np.where(bad, -1, nxt)
    if bad.any():
        # report the first failure in row-major order, as the loop kernel does
        i, j = np.argwhere(bad)[0]
        return acc, int(i), int(j)
    return acc, -1, -1


def rook_multiply(mul, join, A, B, zero, use_numba=None):
    """Returns (C, bad) where bad is the first (i, j) whose join failed, else None."""
    if use_numba is None:
        use_numba = numba_enabled()
    A = np.ascontiguousarray(A, dtype=np.int64)
    B = np.ascontiguousarray(B, dtype=np.int64)
    fn = _load()["rook"] if use_numba else _rook_numpy
    C, i, j = fn(mul, join, A, B, zero)
    return C, (None if i < 0 else (int(i), int(j)))
