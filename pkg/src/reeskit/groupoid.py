"""Finite groups and groupoids given by a partial multiplication table."""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .errors import (AssociativityError, CompositionError, MissingInverseError,
                     ParseError)
from .graph import read_sections


class FiniteGroupoid:
    """Validated groupoid. `a * b` is defined iff dom(a) == ran(b).

    Element order is the declared order and is used for every tie-break.
    """

    def __init__(self, elements, identities, index_table: np.ndarray, *,
                 vertex_of: Mapping[str, str] | None = None,
                 approximate: bool = False, depth: int | None = None,
                 words: Mapping[str, tuple] | None = None, stable: bool | None = None):
        self.elements = tuple(elements)
        self.identities = tuple(identities)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self._t = index_table
        self.vertex_of = dict(vertex_of) if vertex_of else {e: e for e in self.identities}
        self.approximate = approximate
        self.depth = depth
        self.stable = stable
        self.words = dict(words) if words else {}
        self._identity_at = {v: e for e, v in self.vertex_of.items()}
        self._derive()

    def _derive(self):
        n = len(self.elements)
        t = self._t
        idx_ids = [self.index[e] for e in self.identities]
        for i in idx_ids:
            if t[i, i] != i:
                raise AssociativityError(f"identity {self.elements[i]} is not idempotent")
        dom = [-1] * n
        ran = [-1] * n
        for g in range(n):
            ds = [e for e in idx_ids if t[g, e] == g]
            rs = [e for e in idx_ids if t[e, g] == g]
            if len(ds) != 1 or len(rs) != 1:
                name = self.elements[g]
                if not ds or not rs:
                    raise MissingInverseError(f"element {name} has no two-sided identity")
                raise AssociativityError(f"element {name} has several identities on one side")
            dom[g], ran[g] = ds[0], rs[0]
        self._dom, self._ran = dom, ran
        for a in range(n):
            for b in range(n):
                defined = t[a, b] >= 0
                if dom[a] == ran[b] and not defined:
                    raise MissingInverseError(
                        f"product {self.elements[a]}*{self.elements[b]} is undefined")
                if dom[a] != ran[b] and defined:
                    raise CompositionError(
                        f"product {self.elements[a]}*{self.elements[b]} defined across identities")
        inv = [-1] * n
        for g in range(n):
            for h in range(n):
                if t[g, h] == ran[g] and t[h, g] == dom[g]:
                    inv[g] = h
                    break
            else:
                raise MissingInverseError(f"element {self.elements[g]} has no inverse")
        self._inv = inv
        bad = _kernels.associativity_violation(t)
        if bad is not None:
            a, b, c = (self.elements[i] for i in bad)
            raise AssociativityError(f"({a}*{b})*{c} != {a}*({b}*{c})")

    # element level
    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.index

    @property
    def is_group(self) -> bool:
        return len(self.identities) == 1

    def mul(self, a: str, b: str) -> str:
        r = self._t[self.index[a], self.index[b]]
        if r < 0:
            raise CompositionError(f"{a}*{b} is undefined (dom({a}) != ran({b}))")
        return self.elements[r]

    def defined(self, a: str, b: str) -> bool:
        return self._t[self.index[a], self.index[b]] >= 0

    def inv(self, g: str) -> str:
        return self.elements[self._inv[self.index[g]]]

    def dom(self, g: str) -> str:
        return self.elements[self._dom[self.index[g]]]

    def ran(self, g: str) -> str:
        return self.elements[self._ran[self.index[g]]]

    def is_identity(self, g: str) -> bool:
        return self._dom[self.index[g]] == self.index[g]

    def identity(self, vertex: str | None = None) -> str:
        if vertex is None:
            if not self.is_group:
                raise CompositionError("groupoid has several identities")
            return self.identities[0]
        return self._identity_at[vertex]

    def vertex(self, g: str) -> tuple[str, str]:
        """(domain vertex, range vertex)."""
        return self.vertex_of[self.dom(g)], self.vertex_of[self.ran(g)]

    def product(self, gs: Iterable[str], vertex: str | None = None) -> str:
        acc = None
        for g in gs:
            acc = g if acc is None else self.mul(acc, g)
        return self.identity(vertex) if acc is None else acc

    def table_index(self) -> np.ndarray:
        return self._t.copy()

    def order_of(self, g: str) -> int:
        e = self.dom(g)
        if e != self.ran(g):
            raise CompositionError(f"{g} is not a loop")
        k, p = 1, g
        while p != e:
            p = self.mul(p, g)
            k += 1
        return k

    def to_text(self) -> str:
        lines = ["[elements]", " ".join(self.elements), "[identities]", " ".join(self.identities), "[table]"]
        for a in self.elements:
            for b in self.elements:
                if self.defined(a, b):
                    lines.append(f"{a} {b} -> {self.mul(a, b)}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        kind = "group" if self.is_group else "groupoid"
        tag = f", approximate depth={self.depth}" if self.approximate else ""
        return f"FiniteGroupoid({kind} of order {len(self)}{tag})"


def _index_table(elements, products: Mapping[tuple[str, str], str]) -> np.ndarray:
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    t = np.full((n, n), -1, dtype=np.int64)
    for (a, b), c in products.items():
        for z in (a, b, c):
            if z not in index:
                raise ParseError(f"table mentions undeclared element {z!r}")
        t[index[a], index[b]] = index[c]
    return t


def groupoid_from_table(elements, identities, products: Mapping[tuple[str, str], str],
                        **meta) -> FiniteGroupoid:
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise ParseError("duplicate element id")
    for e in identities:
        if e not in elements:
            raise ParseError(f"identity {e!r} is not an element")
    return FiniteGroupoid(elements, identities, _index_table(elements, products), **meta)


def parse_table_text(text: str):
    """Returns (elements, identities, products, zero or None)."""
    sec = read_sections(text)
    if "elements" not in sec or "table" not in sec:
        raise ParseError("table file needs [elements] and [table]")
    elements = tuple(t for line in sec["elements"] for t in line.split())
    identities = tuple(t for line in sec.get("identities", []) for t in line.split())
    zero = None
    if "zero" in sec:
        z = [t for line in sec["zero"] for t in line.split()]
        if len(z) != 1:
            raise ParseError("[zero] needs exactly one id")
        zero = z[0]
    products = {}
    for line in sec["table"]:
        if "->" not in line:
            raise ParseError(f"table row {line!r} lacks '->'")
        lhs, rhs = line.split("->")
        ab, c = lhs.split(), rhs.split()
        if len(ab) != 2 or len(c) != 1:
            raise ParseError(f"table row {line!r} must read 'a b -> c'")
        key = (ab[0], ab[1])
        if key in products and products[key] != c[0]:
            raise ParseError(f"conflicting rows for {ab[0]} {ab[1]}")
        products[key] = c[0]
    return elements, identities, products, zero


def parse_groupoid(text: str) -> FiniteGroupoid:
    elements, identities, products, _ = parse_table_text(text)
    if not identities:
        raise ParseError("groupoid table needs an [identities] line")
    return groupoid_from_table(elements, identities, products)


def group_from_permutations(gens: Mapping[str, tuple[int, ...]], identity: str = "1",
                            sep: str = "") -> FiniteGroupoid:
    """Closure of permutations (images of 0..n-1); elements named by shortlex words."""
    names = list(gens)
    n = len(next(iter(gens.values())))
    ident = tuple(range(n))
    found = {ident: identity}
    order = [ident]
    frontier = [(ident, ())]
    while frontier:
        nxt = []
        for p, w in frontier:
            for g in names:
                q = tuple(p[i] for i in gens[g])  # p after g: (p g)(i) = p(g(i))
                if q not in found:
                    found[q] = sep.join(w + (g,))
                    order.append(q)
                    nxt.append((q, w + (g,)))
        frontier = nxt
    elements = [found[p] for p in order]
    products = {}
    for p in order:
        for q in order:
            products[(found[p], found[q])] = found[tuple(p[i] for i in q)]
    return groupoid_from_table(elements, [identity], products)


def cyclic_group(n: int, gen: str = "g") -> FiniteGroupoid:
    names = ["1"] + [gen if k == 1 else f"{gen}{k}" for k in range(1, n)]
    products = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
    return groupoid_from_table(names, ["1"], products)


def symmetric_group_3() -> FiniteGroupoid:
    return group_from_permutations({"s": (1, 0, 2), "r": (1, 2, 0)})
