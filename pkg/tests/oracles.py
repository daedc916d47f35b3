"""Independent brute-force oracles used by the tests.

None of these import the code paths they check against: they recompute
answers from first principles (integers, affine maps, prefix comparison,
exhaustive enumeration).
"""
from __future__ import annotations

import itertools
from fractions import Fraction


# -- dyadic adding machine: x = 0, y = 1, least significant digit first

def dyadic_value(word: str) -> int:
    return sum(1 << i for i, c in enumerate(word) if c == "y")


def dyadic_word(value: int, n: int) -> str:
    return "".join("y" if value >> i & 1 else "x" for i in range(n))


def dyadic_act(m: int, word: str) -> tuple[str, int]:
    """(a^m . w, exponent of a^m|_w)."""
    n = len(word)
    total = dyadic_value(word) + m
    return dyadic_word(total % (1 << n), n), total >> n if total >= 0 else -((-total + (1 << n) - 1) >> n)


# -- BS(1,2) = <a, t | a^2 t = t a> as affine maps of Q: a(x) = x + 1, t(x) = 2x

def affine(word_tokens) -> tuple[Fraction, Fraction]:
    """Compose the maps of the tokens (rightmost applied first); returns (m, c) for x -> m x + c."""
    m, c = Fraction(1), Fraction(0)
    gens = {"a": (Fraction(1), Fraction(1)), "A": (Fraction(1), Fraction(-1)),
            "t": (Fraction(2), Fraction(0)), "T": (Fraction(1, 2), Fraction(0))}
    for tok in word_tokens:
        gm, gc = gens[tok]
        # (current) o g : x -> m (gm x + gc) + c
        m, c = m * gm, m * gc + c
    return m, c


def letters_to_mixed(w: str) -> str:
    names = {"a": "a", "A": "a^-1", "t": "t", "T": "t^-1"}
    return " ".join(names[c] for c in w)


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != x:
            self.parent[x] = self.parent.setdefault(p, p)
            x, p = p, self.parent[p]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _inv(w: str) -> str:
    return w[::-1].swapcase()


def relation_components(relator: str = "aatAT", max_len: int = 8) -> UnionFind:
    """Union-find over words in {a, A, t, T} of length <= max_len.

    Moves: delete a cancelling pair, or replace a subword u by v^-1 when
    u v is a cyclic conjugate of the relator or its inverse. Moves are
    symmetric, so the components are the classes of the relation closure
    restricted to words of bounded length.
    """
    subs = set()
    for r in (relator, _inv(relator)):
        for k in range(len(r)):
            c = r[k:] + r[:k]
            for i in range(1, len(c)):
                subs.add((c[:i], _inv(c[i:])))
    uf = UnionFind()
    for n in range(max_len + 1):
        for tup in itertools.product("aAtT", repeat=n):
            w = "".join(tup)
            uf.find(w)
            for i in range(n - 1):
                if w[i] == w[i + 1].swapcase():
                    uf.union(w, w[:i] + w[i + 2:])
            for u, v in subs:
                start = w.find(u)
                while start >= 0:
                    nw = w[:start] + v + w[start + len(u):]
                    if len(nw) <= max_len:
                        uf.union(w, nw)
                    start = w.find(u, start + 1)
    return uf


# -- polycyclic monoid by direct prefix comparison on pairs of strings

def polycyclic_mul(s, t):
    """[x1, y1][x2, y2] over P_n with words as tuples; None is zero."""
    if s is None or t is None:
        return None
    x1, y1 = s
    x2, y2 = t
    if x2[:len(y1)] == y1:
        return (x1 + x2[len(y1):], y2)
    if y1[:len(x2)] == x2:
        return (x1, y2 + y1[len(x2):])
    return None


# -- rook matrices over {0, 1}: partial permutation matrices

def partial_perm_product(A, B):
    n = len(A)
    return [[int(any(A[i][k] and B[k][j] for k in range(n))) for j in range(n)] for i in range(n)]


# -- K(S) from brute-force D-classes of diagonal idempotents in M_2(S)

def _m2_matrices(S):
    """All 2x2 rook matrices as tuples of element indices (a, b, c, d)."""
    t, inv, z = S.t, S.inv_idx, S.z
    n = len(S)
    out = []
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if t[inv[a], b] != z or t[inv[c], d] != z:  # rows
            continue
        if t[a, inv[c]] != z or t[b, inv[d]] != z:  # columns
            continue
        out.append((a, b, c, d))
    return out


def k_group_via_m2(S):
    """K(S) computed only from D-classes of idempotents in M_2(S).

    Returns (rank, torsion) using a separate integer row reduction so that
    no library code participates in the answer.
    """
    t, inv, z = S.t, S.inv_idx, S.z
    J = S.join_table.copy()
    r = list(range(len(S)))
    for i in r:
        J[z, i] = J[i, z] = i

    def mul(A, B):
        a, b, c, d = A
        e, f, g, h = B
        return (J[t[a, e], t[b, g]], J[t[a, f], t[b, h]],
                J[t[c, e], t[d, g]], J[t[c, f], t[d, h]])

    def minv(A):
        a, b, c, d = A
        return (inv[a], inv[c], inv[b], inv[d])

    idem = [e for e in r if t[e, e] == e]
    diag = {(e, f): (e, z, z, f) for e in idem for f in idem}
    uf = UnionFind()
    index = {v: k for k, v in diag.items()}
    for A in _m2_matrices(S):
        left, right = mul(A, minv(A)), mul(minv(A), A)
        if left in index and right in index:
            uf.union(index[left], index[right])
    classes = sorted({uf.find(k) for k in diag})
    col = {c: i for i, c in enumerate(classes)}
    zero = col[uf.find((z, z))]
    rows = [[0] * len(classes) for _ in range(1)]
    rows[0][zero] = 1
    for (e, f) in diag:
        row = [0] * len(classes)
        row[col[uf.find((e, f))]] += 1
        row[col[uf.find((e, z))]] -= 1
        row[col[uf.find((f, z))]] -= 1
        rows.append(row)
    return _cokernel_invariants(rows, len(classes))


def _cokernel_invariants(rows, n):
    """(free rank, torsion) of Z^n / rowspace(rows) by plain Euclidean diagonalisation."""
    from math import gcd
    m = [list(r) for r in rows if any(r)]
    diag = []
    while m:
        # bring a nonzero entry of minimal absolute value to (0, 0)
        i, j = min(((i, j) for i, r in enumerate(m) for j, v in enumerate(r) if v),
                   key=lambda p: abs(m[p[0]][p[1]]))
        m[0], m[i] = m[i], m[0]
        for r in m:
            r[0], r[j] = r[j], r[0]
        p = m[0][0]
        clean = True
        for r in m[1:]:
            q = r[0] // p
            for k in range(len(r)):
                r[k] -= q * m[0][k]
            clean &= r[0] == 0
        for k in range(1, len(m[0])):
            q = m[0][k] // p
            for r in m:
                r[k] -= q * r[0]
            clean &= m[0][k] == 0
        if not clean:
            continue
        diag.append(abs(p))
        m = [r[1:] for r in m[1:]]
        m = [r for r in m if any(r)]
    # turn the diagonal into a divisor chain
    g = sorted(d for d in diag if d > 1)
    changed = True
    while changed:
        changed = False
        for a in range(len(g)):
            for b in range(a + 1, len(g)):
                x, y = g[a], g[b]
                if y % x:
                    d = gcd(x, y)
                    g[a], g[b] = d, x * y // d
                    changed = True
        g = sorted(v for v in g if v > 1)
    return n - len(diag), tuple(g)
