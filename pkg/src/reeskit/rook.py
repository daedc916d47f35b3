"""Finite inverse semigroups with zero, their orthogonal joins, and rook matrices."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (AssociativityError, DomainError, MissingInverseError, MoveError,
                     NotCompleteError, OrthogonalityError, ParseError, ReesError)
from .groupoid import FiniteGroupoid, parse_table_text


@dataclass
class Report:
    ok: bool
    detail: str = ""
    error: type | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        return f"OK: {self.detail}" if self.ok else f"FAIL: {self.detail}"


def verify_inverse_semigroup(elements, table: np.ndarray, zero: str | None = None) -> Report:
    """Total, associative, unique inverses, commuting idempotents, zero absorbs."""
    elements = list(elements)
    n = len(elements)
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (n, n):
        return Report(False, "table is not square over the element list", ParseError)
    if (t < 0).any():
        i, j = np.argwhere(t < 0)[0]
        return Report(False, f"product {elements[i]}*{elements[j]} is undefined", ParseError, (i, j))
    bad = _kernels.associativity_violation(t)
    if bad is not None:
        a, b, c = (elements[i] for i in bad)
        return Report(False, f"({a}*{b})*{c} != {a}*({b}*{c})", AssociativityError, bad)
    r = np.arange(n)
    # s t s = s and t s t = t
    sts = t[t[r[:, None], r[None, :]], r[:, None]]  # (s t) s
    tst = t[t[r[None, :], r[:, None]], r[None, :]]  # (t s) t
    cand = (sts == r[:, None]) & (tst == r[None, :])
    counts = cand.sum(axis=1)
    for s in range(n):
        if counts[s] != 1:
            what = "no inverse" if counts[s] == 0 else "several inverses"
            return Report(False, f"element {elements[s]} has {what}", MissingInverseError, (s,))
    idem = np.flatnonzero(t[r, r] == r)
    sub = t[np.ix_(idem, idem)]
    if not (sub == sub.T).all():
        i, j = np.argwhere(sub != sub.T)[0]
        return Report(False, f"idempotents {elements[idem[i]]} and {elements[idem[j]]} do not commute",
                      AssociativityError, (idem[i], idem[j]))
    if zero is not None:
        if zero not in elements:
            return Report(False, f"zero {zero} is not an element", ParseError)
        z = elements.index(zero)
        if not ((t[z] == z).all() and (t[:, z] == z).all()):
            return Report(False, f"{zero} is not a zero", DomainError)
    return Report(True, f"inverse semigroup with {n} elements")


class FiniteInverseSemigroup:
    def __init__(self, elements, table, zero: str | None = "0", name: str = ""):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.name = name
        t = np.asarray(table, dtype=np.int64)
        rep = verify_inverse_semigroup(self.elements, t, zero)
        if not rep:
            raise (rep.error or ReesError)(rep.detail)
        self.t = t
        self.t.flags.writeable = False
        n = len(self.elements)
        r = np.arange(n)
        cand = (t[t[r[:, None], r[None, :]], r[:, None]] == r[:, None]) & \
               (t[t[r[None, :], r[:, None]], r[None, :]] == r[None, :])
        self.inv_idx = np.argmax(cand, axis=1)
        self.zero = zero
        self.z = self.index[zero] if zero is not None else -1
        self.idem_idx = np.flatnonzero(t[r, r] == r)

    @classmethod
    def from_products(cls, elements, products: dict, zero="0", name=""):
        elements = list(elements)
        idx = {e: i for i, e in enumerate(elements)}
        t = np.full((len(elements), len(elements)), -1, dtype=np.int64)
        for (a, b), c in products.items():
            t[idx[a], idx[b]] = idx[c]
        return cls(elements, t, zero, name)

    # element level
    def __len__(self):
        return len(self.elements)

    def mul(self, a: str, b: str) -> str:
        return self.elements[self.t[self.index[a], self.index[b]]]

    def inv(self, a: str) -> str:
        return self.elements[self.inv_idx[self.index[a]]]

    @property
    def idempotents(self) -> list[str]:
        return [self.elements[i] for i in self.idem_idx]

    def is_idempotent(self, a: str) -> bool:
        i = self.index[a]
        return self.t[i, i] == i

    @cached_property
    def leq_matrix(self) -> np.ndarray:
        """L[s, t] iff s <= t, i.e. s = t s^-1 s."""
        n = len(self)
        r = np.arange(n)
        ss = self.t[self.inv_idx, r]  # s^-1 s
        return (self.t[:, ss].T == r[:, None])

    def leq(self, a: str, b: str) -> bool:
        return bool(self.leq_matrix[self.index[a], self.index[b]])

    @cached_property
    def orth_matrix(self) -> np.ndarray:
        t, inv, z = self.t, self.inv_idx, self.z
        return (t[:, inv] == z) & (t[inv, :] == z)

    def orthogonal(self, a: str, b: str) -> bool:
        return bool(self.orth_matrix[self.index[a], self.index[b]])

    @cached_property
    def join_table(self) -> np.ndarray:
        """join[s, t] = s v t for orthogonal pairs with a least upper bound, else -1."""
        n = len(self)
        L = self.leq_matrix
        by_up = {}
        for m in range(n):
            by_up.setdefault(L[m].tobytes(), m)
        J = np.full((n, n), -1, dtype=np.int64)
        for s, u in zip(*np.nonzero(self.orth_matrix)):
            up = L[s] & L[u]
            J[s, u] = by_up.get(up.tobytes(), -1)
        return J

    @cached_property
    def join_table_with_zero(self) -> np.ndarray:
        """join_table with 0 v s = s v 0 = s filled in, for the rook kernel."""
        J = self.join_table.copy()
        J[self.z, :] = np.arange(len(self))
        J[:, self.z] = np.arange(len(self))
        return J

    def join(self, a: str, b: str) -> str:
        j = self.join_table[self.index[a], self.index[b]]
        if j < 0:
            if not self.orthogonal(a, b):
                raise OrthogonalityError(f"{a} and {b} are not orthogonal")
            raise NotCompleteError(f"{a} and {b} have no join")
        return self.elements[j]

    @property
    def is_commutative(self) -> bool:
        return bool((self.t == self.t.T).all())

    def d_related(self, e: str, f: str) -> bool:
        i, j = self.index[e], self.index[f]
        r = np.arange(len(self))
        return bool(((self.t[r, self.inv_idx] == i) & (self.t[self.inv_idx, r] == j)).any())

    def d_witness_element(self, e: str, f: str) -> str | None:
        i, j = self.index[e], self.index[f]
        r = np.arange(len(self))
        hit = np.flatnonzero((self.t[r, self.inv_idx] == i) & (self.t[self.inv_idx, r] == j))
        return self.elements[hit[0]] if hit.size else None

    def d_classes(self) -> list[list[str]]:
        """D-classes of E(S), in order of first idempotent."""
        out: list[list[str]] = []
        for e in self.idempotents:
            for cls in out:
                if self.d_related(cls[0], e):
                    cls.append(e)
                    break
            else:
                out.append([e])
        return out

    def to_text(self) -> str:
        lines = ["[elements]", " ".join(self.elements), "[table]"]
        for a in self.elements:
            for b in self.elements:
                lines.append(f"{a} {b} -> {self.mul(a, b)}")
        if self.zero is not None:
            lines += ["[zero]", self.zero]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"FiniteInverseSemigroup({self.name or len(self)})"


def verify_orthogonal_completeness(S: FiniteInverseSemigroup) -> Report:
    """Every orthogonal pair has a join and multiplication distributes over it."""
    if S.z < 0:
        return Report(False, "no zero", DomainError)
    J = S.join_table
    t = S.t
    pairs = np.argwhere(S.orth_matrix)
    for s, u in pairs:
        j = J[s, u]
        if j < 0:
            return Report(False, f"orthogonal pair {S.elements[s]}, {S.elements[u]} has no join",
                          NotCompleteError, (s, u))
        left = J[t[:, s], t[:, u]]  # a s v a u
        right = J[t[s, :], t[u, :]]
        bad = np.flatnonzero(left != t[:, j])
        if bad.size:
            a = S.elements[bad[0]]
            return Report(False, f"{a}*({S.elements[s]} v {S.elements[u]}) does not distribute",
                          NotCompleteError, (bad[0], s, u))
        bad = np.flatnonzero(right != t[j, :])
        if bad.size:
            a = S.elements[bad[0]]
            return Report(False, f"({S.elements[s]} v {S.elements[u]})*{a} does not distribute",
                          NotCompleteError, (s, u, bad[0]))
    return Report(True, f"orthogonally complete, {len(pairs)} orthogonal pairs")


def require_complete(S: FiniteInverseSemigroup):
    rep = verify_orthogonal_completeness(S)
    if not rep:
        raise NotCompleteError(rep.detail)


# -- builtins

def symmetric_inverse_monoid(n: int) -> FiniteInverseSemigroup:
    """I_n: partial bijections of {1..n}; id lists images, '-' for undefined, '0' the empty map."""
    if not 1 <= n <= 6:
        raise DomainError("I_n is built for 1 <= n <= 6")
    maps = []
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for img in itertools.permutations(range(n), k):
                m = [-1] * n
                for d, i in zip(dom, img):
                    m[d] = i
                maps.append(tuple(m))
    maps.sort(key=lambda m: (-sum(v >= 0 for v in m), m))

    def name(m):
        if all(v < 0 for v in m):
            return "0"
        return "".join(str(v + 1) if v >= 0 else "-" for v in m)

    idx = {m: i for i, m in enumerate(maps)}
    t = np.empty((len(maps), len(maps)), dtype=np.int64)
    for i, a in enumerate(maps):
        for j, b in enumerate(maps):
            # (a b)(p) = a(b(p))
            t[i, j] = idx[tuple(a[b[p]] if b[p] >= 0 else -1 for p in range(n))]
    return FiniteInverseSemigroup([name(m) for m in maps], t, "0", f"I{n}")


ATOMS = "pqrstu"


def boolean_algebra(n: int) -> FiniteInverseSemigroup:
    """B_n: subsets of n atoms under intersection; '0' is the empty set."""
    if not 1 <= n <= len(ATOMS):
        raise DomainError(f"B_n is built for 1 <= n <= {len(ATOMS)}")
    subsets = sorted(range(1 << n), key=lambda m: (-bin(m).count("1"), m))
    names = ["".join(ATOMS[i] for i in range(n) if m >> i & 1) or "0" for m in subsets]
    idx = {m: i for i, m in enumerate(subsets)}
    t = np.array([[idx[a & b] for b in subsets] for a in subsets], dtype=np.int64)
    return FiniteInverseSemigroup(names, t, "0", f"B{n}")


def group_with_zero(G: FiniteGroupoid, name: str = "") -> FiniteInverseSemigroup:
    if "0" in G.index:
        raise DomainError("group already has an element named 0")
    elements = list(G.elements) + ["0"]
    n = len(elements)
    t = np.full((n, n), n - 1, dtype=np.int64)
    gt = G.table_index()
    t[:n - 1, :n - 1] = np.where(gt >= 0, gt, n - 1)
    return FiniteInverseSemigroup(elements, t, "0", name or "G0")


def direct_product(S: FiniteInverseSemigroup, T: FiniteInverseSemigroup) -> FiniteInverseSemigroup:
    m, n = len(S), len(T)
    names = [f"({a},{b})" for a in S.elements for b in T.elements]
    i = np.arange(m * n)
    s, t = i // n, i % n
    table = S.t[s[:, None], s[None, :]] * n + T.t[t[:, None], t[None, :]]
    zero = f"({S.zero},{T.zero})"
    return FiniteInverseSemigroup(names, table, zero, f"{S.name}x{T.name}")


def idempotent_subsemigroup(S: FiniteInverseSemigroup) -> FiniteInverseSemigroup:
    idx = S.idem_idx
    pos = {int(e): k for k, e in enumerate(idx)}
    t = np.vectorize(pos.get)(S.t[np.ix_(idx, idx)])
    return FiniteInverseSemigroup([S.elements[i] for i in idx], t, S.zero, f"E({S.name})")


def parse_semigroup(text: str, name: str = "") -> FiniteInverseSemigroup:
    elements, _, products, zero = parse_table_text(text)
    if zero is None:
        raise ParseError("semigroup table needs a [zero] line")
    missing = [(a, b) for a in elements for b in elements if (a, b) not in products]
    if missing:
        a, b = missing[0]
        raise ParseError(f"semigroup table is missing {a} {b}")
    return FiniteInverseSemigroup.from_products(elements, products, zero, name)


def builtin_semigroup(key: str) -> FiniteInverseSemigroup:
    """`In:3`, `Bn:2`, `G0:C2`, `G0:C3`, `G0:S3`."""
    from .groupoid import cyclic_group, symmetric_group_3
    kind, _, arg = key.partition(":")
    try:
        if kind == "In":
            return symmetric_inverse_monoid(int(arg))
        if kind == "Bn":
            return boolean_algebra(int(arg))
        if kind == "G0":
            if arg == "S3":
                return group_with_zero(symmetric_group_3(), "S3^0")
            if arg.startswith("C"):
                return group_with_zero(cyclic_group(int(arg[1:])), f"{arg}^0")
    except ValueError:
        pass
    raise ParseError(f"unknown builtin semigroup {key!r}")


# -- rook matrices

class RookMatrix:
    def __init__(self, S: FiniteInverseSemigroup, entries, check: bool = True):
        self.S = S
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError("rook matrices are square")
        self.a = a
        self.a.flags.writeable = False
        if check:
            bad = rook_violation(S, a)
            if bad is not None:
                raise OrthogonalityError(bad)

    @classmethod
    def from_names(cls, S, rows) -> "RookMatrix":
        return cls(S, [[S.index[x] for x in row] for row in rows])

    @classmethod
    def parse(cls, S, text: str) -> "RookMatrix":
        rows = []
        for r in text.split(";"):
            toks = r.replace(",", " ").split()
            for x in toks:
                if x not in S.index:
                    raise ParseError(f"unknown element {x!r}")
            rows.append(toks)
        return cls.from_names(S, rows)

    @classmethod
    def zero(cls, S, n: int) -> "RookMatrix":
        return cls(S, np.full((n, n), S.z, dtype=np.int64), check=False)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def names(self) -> list[list[str]]:
        return [[self.S.elements[x] for x in row] for row in self.a]

    def __str__(self):
        return "; ".join(" ".join(row) for row in self.names())

    def __eq__(self, other):
        return isinstance(other, RookMatrix) and other.S is self.S and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.a.tobytes())

    def __repr__(self):
        return f"RookMatrix({self})"


def rook_violation(S: FiniteInverseSemigroup, a: np.ndarray) -> str | None:
    t, inv, z = S.t, S.inv_idx, S.z
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                x, y = a[i, j], a[i, k]
                if t[inv[x], y] != z:
                    return f"row {i + 1}: {S.elements[x]} and {S.elements[y]} break the row condition"
                x, y = a[j, i], a[k, i]
                if t[x, inv[y]] != z:
                    return f"column {i + 1}: {S.elements[x]} and {S.elements[y]} break the column condition"
    return None


def _same(A: RookMatrix, B: RookMatrix):
    if A.S is not B.S:
        raise DomainError("matrices over different semigroups")
    if A.n != B.n:
        raise DomainError(f"dimension mismatch {A.n} vs {B.n}")


def mat_multiply(A: RookMatrix, B: RookMatrix) -> RookMatrix:
    """c_ij = join over k of a_ik b_kj."""
    _same(A, B)
    S = A.S
    C, bad = _kernels.rook_multiply(S.t, S.join_table_with_zero, A.a, B.a, S.z)
    if bad is not None:
        raise NotCompleteError(f"entry {bad[0] + 1},{bad[1] + 1} of the product has no join")
    return RookMatrix(S, C, check=False)


def mat_inverse(A: RookMatrix) -> RookMatrix:
    return RookMatrix(A.S, A.S.inv_idx[A.a.T], check=False)


def mat_leq(A: RookMatrix, B: RookMatrix) -> bool:
    _same(A, B)
    return bool(A.S.leq_matrix[A.a, B.a].all())


def mat_orthogonal(A: RookMatrix, B: RookMatrix) -> bool:
    _same(A, B)
    z = RookMatrix.zero(A.S, A.n)
    try:
        return mat_multiply(A, mat_inverse(B)) == z and mat_multiply(mat_inverse(A), B) == z
    except NotCompleteError:
        return False


def mat_join(A: RookMatrix, B: RookMatrix) -> RookMatrix:
    _same(A, B)
    if not mat_orthogonal(A, B):
        raise OrthogonalityError("matrices are not orthogonal")
    J = A.S.join_table_with_zero[A.a, B.a]
    if (J < 0).any():
        i, j = np.argwhere(J < 0)[0]
        raise NotCompleteError(f"entries at {i + 1},{j + 1} have no join")
    return RookMatrix(A.S, J)


def mat_tensor(A: RookMatrix, B: RookMatrix) -> RookMatrix:
    """(A (x) B)[(i,k),(j,l)] = a_ij b_kl, for commutative S."""
    if A.S is not B.S:
        raise DomainError("matrices over different semigroups")
    if not A.S.is_commutative:
        raise DomainError("tensor products need a commutative semigroup")
    t = A.S.t
    m, n = A.n, B.n
    out = t[A.a[:, None, :, None], B.a[None, :, None, :]].reshape(m * n, m * n)
    return RookMatrix(A.S, out)


def diagonal(S: FiniteInverseSemigroup, es) -> RookMatrix:
    n = len(es)
    a = np.full((n, n), S.z, dtype=np.int64)
    for i, e in enumerate(es):
        if not S.is_idempotent(e):
            raise DomainError(f"{e} is not an idempotent")
        a[i, i] = S.index[e]
    return RookMatrix(S, a, check=False)


def diagonal_entries(A: RookMatrix) -> tuple[str, ...] | None:
    """The tuple E when A = Delta(E), else None."""
    a = A.a
    off = a.copy()
    np.fill_diagonal(off, A.S.z)
    if (off != A.S.z).any():
        return None
    es = tuple(A.S.elements[x] for x in np.diag(a))
    return es if all(A.S.is_idempotent(e) for e in es) else None


# -- D-class moves on diagonal idempotents

def d_witness(S: FiniteInverseSemigroup, move: tuple, E) -> tuple[RookMatrix, tuple[str, ...]]:
    """Witness A with A A^-1 = Delta(E), A^-1 A = Delta(F) for one move.

    Moves: ("slide", i, j), ("combine", i, j), ("split", i, j, f, g), ("swap", i, s).
    Indices are 0-based.
    """
    E = tuple(E)
    n = len(E)
    for e in E:
        if not S.is_idempotent(e):
            raise MoveError(f"{e} is not an idempotent")
    ix = S.index
    a = np.full((n, n), S.z, dtype=np.int64)
    for k, e in enumerate(E):
        a[k, k] = ix[e]
    kind = move[0]

    def slots(*ks):
        for k in ks:
            if not 0 <= k < n:
                raise MoveError(f"slot {k} out of range for {n} entries")
        if len(set(ks)) != len(ks):
            raise MoveError("move needs distinct slots")

    if kind == "slide":
        _, i, j = move
        slots(i, j)
        a[i, i] = a[j, j] = S.z
        a[i, j], a[j, i] = ix[E[i]], ix[E[j]]
    elif kind == "combine":
        _, i, j = move
        slots(i, j)
        if not S.orthogonal(E[i], E[j]):
            raise MoveError(f"{E[i]} and {E[j]} are not orthogonal")
        a[j, j] = S.z
        a[j, i] = ix[E[j]]
    elif kind == "split":
        _, i, j, f, g = move
        slots(i, j)
        if E[j] != S.zero:
            raise MoveError("split needs an empty target slot")
        if not (S.is_idempotent(f) and S.is_idempotent(g) and S.orthogonal(f, g)
                and S.join(f, g) == E[i]):
            raise MoveError(f"{E[i]} is not the orthogonal join of {f} and {g}")
        # inverse of the combine witness for (f, g)
        a[i, i] = ix[f]
        a[i, j] = ix[g]
    elif kind == "swap":
        _, i, s = move
        slots(i)
        if S.mul(s, S.inv(s)) != E[i]:
            raise MoveError(f"{s} {s}^-1 is not {E[i]}")
        a[i, i] = ix[s]
    else:
        raise MoveError(f"unknown move {kind!r}")
    A = RookMatrix(S, a)
    left = mat_multiply(A, mat_inverse(A))
    right = mat_multiply(mat_inverse(A), A)
    if diagonal_entries(left) != E:
        raise MoveError("witness does not satisfy A A^-1 = Delta(E)")  # pragma: no cover
    F = diagonal_entries(right)
    if F is None:
        raise MoveError("witness does not give a diagonal idempotent")  # pragma: no cover
    return A, F


def d_related(S: FiniteInverseSemigroup, E, F, bound: int | None = None) -> str:
    """'yes', 'no' or 'unknown' for Delta(E) D Delta(F), searching with `bound` extra slots."""
    require_complete(S)
    if bound is None:
        bound = len(S.idem_idx)
    z = S.zero
    start = tuple(sorted(e for e in E if e != z))
    goal = tuple(sorted(f for f in F if f != z))
    cap = max(len(E), len(F)) + bound
    idem = [e for e in S.idempotents if e != z]
    dclass = {e: [f for f in idem if f != e and S.d_related(e, f)] for e in idem}
    splits = {e: [(f, g) for f, g in itertools.combinations(idem, 2)
                  if S.orthogonal(f, g) and S.join(f, g) == e] for e in idem}
    seen = {start}
    todo = deque([start])
    blocked = False
    while todo:
        cur = todo.popleft()
        if cur == goal:
            return "yes"
        nxt = []
        for k, e in enumerate(cur):
            rest = cur[:k] + cur[k + 1:]
            nxt += [rest + (f,) for f in dclass[e]]
            for f, g in splits[e]:
                if len(cur) + 1 > cap:
                    blocked = True
                    break
                nxt.append(rest + (f, g))
            for m in range(k + 1, len(cur)):
                f = cur[m]
                if S.orthogonal(e, f):
                    nxt.append(tuple(x for i, x in enumerate(cur) if i not in (k, m)) + (S.join(e, f),))
        for s in nxt:
            s = tuple(sorted(s))
            if s not in seen:
                seen.add(s)
                todo.append(s)
    if not blocked:
        return "no"
    from .ktheory import k_class
    return "no" if k_class(S, start) != k_class(S, goal) else "unknown"
