"""K-groups of finite orthogonally complete inverse semigroups.

K(S) is the Grothendieck group of the monoid generated by D-classes of
idempotents with [e] + [f] = [e v f] for orthogonal e, f and [0] = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ParseError
from .graph import DirectedGraph, one_vertex_graph
from .rook import (FiniteInverseSemigroup, Report, direct_product, idempotent_subsemigroup,
                   require_complete)
from .snf import AbelianGroup, IntMatrix, matmul, smith_normal_form


@dataclass(frozen=True)
class AMonoidPresentation:
    classes: tuple[tuple[str, ...], ...]  # D-classes of E(S)
    zero: int  # index of the class of 0
    relations: tuple[tuple[int, int, int], ...]  # [i] + [j] = [k]

    def label(self, i: int) -> str:
        return f"[{self.classes[i][0]}]"

    def class_of(self, e: str) -> int:
        for i, c in enumerate(self.classes):
            if e in c:
                return i
        raise DomainError(f"{e} is not an idempotent")

    def lines(self) -> list[str]:
        out = ["generators: " + " ".join(self.label(i) for i in range(len(self.classes)))]
        out.append(f"identity: {self.label(self.zero)}")
        out += [f"{self.label(i)} + {self.label(j)} = {self.label(k)}" for i, j, k in self.relations]
        return out

    def __str__(self):
        return "\n".join(self.lines())


def a_presentation(S: FiniteInverseSemigroup) -> AMonoidPresentation:
    require_complete(S)
    classes = tuple(tuple(c) for c in S.d_classes())
    where = {e: i for i, c in enumerate(classes) for e in c}
    rels = []
    seen = set()
    idem = S.idempotents
    for a, e in enumerate(idem):
        for f in idem[a + 1:]:
            if e == S.zero or f == S.zero or not S.orthogonal(e, f):
                continue
            i, j = sorted((where[e], where[f]))
            rel = (i, j, where[S.join(e, f)])
            if rel not in seen:
                seen.add(rel)
                rels.append(rel)
    return AMonoidPresentation(classes, where[S.zero], tuple(rels))


def relation_matrix(p: AMonoidPresentation) -> tuple[list[list[int]], list[int]]:
    """Rows of the relation lattice over the nonzero generators, and those generators."""
    gens = [i for i in range(len(p.classes)) if i != p.zero]
    col = {g: c for c, g in enumerate(gens)}
    rows = []
    for i, j, k in p.relations:
        row = [0] * len(gens)
        for g, sign in ((i, 1), (j, 1), (k, -1)):
            if g != p.zero:
                row[col[g]] += sign
        if any(row):
            rows.append(row)
    return rows, gens


def k_group(S: FiniteInverseSemigroup) -> AbelianGroup:
    rows, gens = relation_matrix(a_presentation(S))
    return smith_normal_form(IntMatrix.from_rows(rows, len(gens))).group


class KCoordinates:
    """Canonical coordinates of elements of a cokernel Z^n / rowspace(rows)."""

    def __init__(self, rows, n: int):
        self.n = n
        res = smith_normal_form(IntMatrix.from_rows(rows, n))
        self.V = res.V
        self.d = list(res.invariant_factors)
        self.group = res.group

    def __call__(self, v) -> tuple[int, ...]:
        w = matmul([list(v)], self.V, self.n)[0] if self.n else []
        return tuple(x % self.d[i] if i < len(self.d) else x for i, x in enumerate(w))


def _kdata(S: FiniteInverseSemigroup):
    data = S.__dict__.get("_kdata")
    if data is None:
        p = a_presentation(S)
        rows, gens = relation_matrix(p)
        data = (p, gens, KCoordinates(rows, len(gens)))
        S.__dict__["_kdata"] = data
    return data


def k_class(S: FiniteInverseSemigroup, es) -> tuple[int, ...]:
    """Canonical K(S) coordinates of [Delta(e1, ..., em)]."""
    p, gens, coords = _kdata(S)
    col = {g: c for c, g in enumerate(gens)}
    v = [0] * len(gens)
    for e in es:
        i = p.class_of(e)
        if i != p.zero:
            v[col[i]] += 1
    return coords(v)


# -- graphs

def cuntz_graph(n: int) -> DirectedGraph:
    return one_vertex_graph([f"x{i}" for i in range(1, n + 1)])


def k_group_cuntz_krieger(g: DirectedGraph) -> AbelianGroup:
    """Free abelian group on vertices modulo a = sum of d(x) over r(x) = a.

    Only vertices that receive edges carry a relation.
    """
    idx = {v: i for i, v in enumerate(g.vertices)}
    rows = []
    for a in g.vertices:
        into = g.edges_into(a)
        if not into:
            continue
        row = [0] * len(g.vertices)
        row[idx[a]] += 1
        for x in into:
            row[idx[g.dom[x]]] -= 1
        rows.append(row)
    return smith_normal_form(IntMatrix.from_rows(rows, len(g.vertices))).group


# -- functoriality checks

@dataclass
class Comparison:
    ok: bool
    lhs: AbelianGroup
    rhs: AbelianGroup
    what: str

    def __bool__(self):
        return self.ok

    def __str__(self):
        rel = "==" if self.ok else "!="
        return f"{'OK' if self.ok else 'FAIL'}: {self.what}: {self.lhs} {rel} {self.rhs}"


def k_product_check(S: FiniteInverseSemigroup, T: FiniteInverseSemigroup) -> Comparison:
    lhs = k_group(direct_product(S, T))
    rhs = k_group(S) + k_group(T)
    return Comparison(lhs == rhs, lhs, rhs, f"K({S.name} x {T.name}) vs K({S.name}) x K({T.name})")


def k_commutative_check(S: FiniteInverseSemigroup) -> Comparison:
    if not S.is_commutative:
        raise DomainError(f"{S.name or 'semigroup'} is not commutative")
    lhs = k_group(S)
    rhs = k_group(idempotent_subsemigroup(S))
    return Comparison(lhs == rhs, lhs, rhs, f"K({S.name}) vs K(E({S.name}))")


# -- traces

def parse_trace(text: str, S: FiniteInverseSemigroup) -> dict[str, Fraction]:
    tau = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"trace line {n}: expected `ELEMENT VALUE`")
        e, v = parts
        if e not in S.index:
            raise ParseError(f"trace line {n}: unknown element {e!r}")
        try:
            tau[e] = Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"trace line {n}: bad value {v!r}") from None
    return tau


def fixed_point_trace(S: FiniteInverseSemigroup, n: int) -> dict[str, Fraction]:
    """tau(s) = |fixed points of s| / n on the builtin I_n."""
    return {s: Fraction(sum(1 for i, c in enumerate(s) if c == str(i + 1)) if s != "0" else 0, n)
            for s in S.elements}


def _identity(S: FiniteInverseSemigroup):
    t = S.t
    r = np.arange(len(S))
    for e in S.idem_idx:
        if (t[e] == r).all() and (t[:, e] == r).all():
            return S.elements[e]
    return None


def validate_trace(S: FiniteInverseSemigroup, tau) -> Report:
    missing = [s for s in S.elements if s not in tau]
    if missing:
        return Report(False, f"trace undefined at {missing[0]}", DomainError, (missing[0],))
    tau = {k: Fraction(v) for k, v in tau.items()}
    for e in S.idempotents:
        if tau[e] < 0:
            return Report(False, f"tau({e}) = {tau[e]} is negative", DomainError, (e,))
    if S.zero is not None and tau[S.zero] != 0:
        return Report(False, f"tau({S.zero}) = {tau[S.zero]} but the zero must map to 0", DomainError, (S.zero,))
    one = _identity(S)
    if one is not None and tau[one] != 1:
        return Report(False, f"tau({one}) = {tau[one]}, not normalised", DomainError, (one,))
    J = S.join_table
    for i, j in zip(*np.nonzero(J >= 0)):
        s, t, u = S.elements[i], S.elements[j], S.elements[J[i, j]]
        if tau[u] != tau[s] + tau[t]:
            return Report(False, f"tau({u}) != tau({s}) + tau({t}) for the join {s} v {t}",
                          DomainError, (s, t))
    el = S.elements
    for i in range(len(S)):
        for j in range(i + 1, len(S)):
            st, ts = el[S.t[i, j]], el[S.t[j, i]]
            if tau[st] != tau[ts]:
                return Report(False, f"tau({el[i]} {el[j]}) = {tau[st]} but tau({el[j]} {el[i]}) = {tau[ts]}",
                              DomainError, (el[i], el[j]))
    return Report(True, "trace is positive, normalised, additive and tracial")


def trace_on_k(S: FiniteInverseSemigroup, tau) -> dict[str, Fraction]:
    """Value of the induced homomorphism on each nonzero D-class generator."""
    rep = validate_trace(S, tau)
    if not rep:
        raise DomainError(rep.detail)
    p = a_presentation(S)
    out = {}
    for i, cls in enumerate(p.classes):
        if i == p.zero:
            continue
        vals = {Fraction(tau[e]) for e in cls}
        if len(vals) != 1:  # pragma: no cover - excluded by traciality
            raise DomainError(f"trace is not constant on the D-class of {cls[0]}")
        out[p.label(i)] = vals.pop()
    return out
