"""The inverse semigroup S(M) of a left Rees monoid or category.

Elements are [xg, y] with x, y words and g a group element, plus a zero.
The representative keeps the group part on the left, so equality is
syntactic on (x, g, y).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

from .errors import CompositionError, DomainError, ParseError
from .graph import DirectedGraph, Word, concat, one_vertex_graph
from .groupoid import cyclic_group
from .rees import ActionSystem, table_system


@dataclass(frozen=True)
class AISElement:
    x: Word
    g: Any
    y: Word


ZERO = None  # the zero of S(M)


def trivial_system(graph: DirectedGraph, name: str = "") -> ActionSystem:
    """Trivial group acting trivially, so S(M) is the graph inverse semigroup."""
    if not graph.single_vertex:
        raise DomainError("the trivial system is built on one-vertex graphs")
    G = cyclic_group(1)
    act = {("1", x): x for x in graph.letters}
    res = {("1", x): "1" for x in graph.letters}
    return table_system(graph, G, act, res, name)


def polycyclic(n: int) -> ActionSystem:
    """P_n: the free monoid on x1..xn with the trivial group."""
    return trivial_system(one_vertex_graph([f"x{i}" for i in range(1, n + 1)]), f"P{n}")


def make(sys: ActionSystem, x: Word, g, y: Word) -> AISElement:
    b = sys.backend
    if x.domain != b.ran(g) or b.dom(g) != y.domain:
        raise CompositionError("[xg, y] needs d(x) = r(g) and d(g) = d(y)")
    return AISElement(x, g, y)


def _strip(w: Word, prefix: Word):
    """The v with w = prefix v, or None."""
    n = len(prefix)
    if w.range != prefix.range or w.letters[:n] != prefix.letters:
        return None
    rest = w.letters[n:]
    return Word(rest, w.domain, prefix.domain) if rest else Word((), prefix.domain, prefix.domain)


def ais_multiply(sys: ActionSystem, s, t):
    if s is ZERO or t is ZERO:
        return ZERO
    b = sys.backend
    x1, g1, y1 = s.x, s.g, s.y
    x2, g2, y2 = t.x, t.g, t.y
    p = _strip(x2, y1)
    if p is not None:
        # x2 = y1 p: [x1 (g1.p), (g1|_p) g2, y2]
        return AISElement(concat(x1, sys.act(g1, p)), b.mul(sys.restrict(g1, p), g2), y2)
    q = _strip(y1, x2)
    if q is not None:
        # y1 = x2 q: [x1 g1 (g2^-1|_q)^-1, y2 (g2^-1.q)]
        gi = b.inv(g2)
        return AISElement(x1, b.mul(g1, b.inv(sys.restrict(gi, q))), concat(y2, sys.act(gi, q)))
    return ZERO


def ais_inverse(sys: ActionSystem, s):
    if s is ZERO:
        return ZERO
    return AISElement(s.y, sys.backend.inv(s.g), s.x)


def ais_is_idempotent(sys: ActionSystem, s) -> bool:
    return s is ZERO or (s.x == s.y and sys.backend.is_identity(s.g))


def ais_equal(sys: ActionSystem, s, t) -> bool:
    if s is ZERO or t is ZERO:
        return s is t
    return s.x == t.x and s.y == t.y and sys.backend.eq(s.g, t.g)


def ais_leq(sys: ActionSystem, s, t) -> bool:
    """[xg, y] <= [zh, w] iff y = wv, x = z(h.v) and g = h|_v for some v."""
    if s is ZERO:
        return True
    if t is ZERO:
        return False
    v = _strip(s.y, t.y)
    if v is None:
        return False
    if sys.backend.dom(t.g) != v.range:
        return False
    return (s.x == concat(t.x, sys.act(t.g, v))
            and sys.backend.eq(s.g, sys.restrict(t.g, v)))


def gauge_member(s) -> bool:
    return s is ZERO or len(s.x) == len(s.y)


# -- literals

def _word(sys: ActionSystem, text: str, anchor=None) -> Word:
    return sys.graph.word(sys.graph.tokenize(text), anchor)


def parse_ais(sys: ActionSystem, text: str):
    text = text.strip()
    if text == "0":
        return ZERO
    if not (text.startswith("[") and text.endswith("]")) or "," not in text:
        raise ParseError(f"expected [WORD|G, WORD] or 0, got {text!r}")
    left, right = text[1:-1].rsplit(",", 1)
    e = sys.parse_element(left.strip())
    y = _word(sys, right.strip(), anchor=sys.backend.dom(e.g))
    return make(sys, e.word, e.g, y)


def _fw(w: Word) -> str:
    return str(w) or "ε"


def format_ais(sys: ActionSystem, s) -> str:
    if s is ZERO:
        return "0"
    return f"[{_fw(s.x)}|{sys.fmt_g(s.g)}, {_fw(s.y)}]"


def idempotent(sys: ActionSystem, x: Word) -> AISElement:
    return AISElement(x, sys.backend.identity(x.domain), x)


def elements_up_to(sys: ActionSystem, length: int, group=None):
    """All [xg, y] with |x|, |y| <= length; group defaults to the finite backend's elements."""
    b = sys.backend
    gs = list(group) if group is not None else b.elements()
    words = {v: [sys.graph.empty(v)] + [sys.graph.word(w) for w in sys.graph.words(v, length)]
             for v in sys.graph.vertices}
    by_dom: dict[str, list[Word]] = {}
    for ws in words.values():
        for w in ws:
            by_dom.setdefault(w.domain, []).append(w)
    out = []
    for g in gs:
        for x in by_dom.get(b.ran(g), []):
            for y in by_dom.get(b.dom(g), []):
                out.append(AISElement(x, g, y))
    return out


# -- orthogonal sets of idempotents and the Lenz arrow

def _leaves(graph: DirectedGraph, x: Word, depth: int):
    """Extensions xz of length depth, stopping early at vertices with no incoming letters."""
    frontier = [x]
    out = []
    while frontier:
        nxt = []
        for w in frontier:
            into = graph.edges_into(w.domain)
            if len(w) >= depth or not into:
                out.append(w)
                continue
            nxt += [Word(w.letters + (e,), graph.dom[e], w.range) for e in into]
        frontier = nxt
    return out


def _prefix_comparable(u: Word, v: Word) -> bool:
    if u.range != v.range:
        return False
    n = min(len(u), len(v))
    return u.letters[:n] == v.letters[:n]


def _idempotent_words(sys: ActionSystem, A):
    out = []
    for s in A:
        if s is ZERO:
            continue
        if not ais_is_idempotent(sys, s):
            raise DomainError(f"{format_ais(sys, s)} is not an idempotent")
        out.append(s.x)
    return out


def is_orthogonal_set(sys: ActionSystem, A) -> bool:
    ws = _idempotent_words(sys, A)
    return all(not _prefix_comparable(u, v) for u, v in itertools.combinations(ws, 2))


def lenz_arrow(sys: ActionSystem, A, B) -> bool:
    """A -> B: every nonzero idempotent below an element of A meets some element of B."""
    xs = _idempotent_words(sys, A)
    ys = _idempotent_words(sys, B)
    for x in xs:
        depth = max([len(x)] + [len(y) for y in ys])
        for leaf in _leaves(sys.graph, x, depth):
            if not any(_prefix_comparable(leaf, y) for y in ys):
                return False
    return True


def ck_equiv(sys: ActionSystem, A, B) -> bool:
    return lenz_arrow(sys, A, B) and lenz_arrow(sys, B, A)
