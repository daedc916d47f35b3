"""Left Rees monoids and categories as Zappa-Szep products X* ⋈ G.

An ActionSystem couples a graph of letters with a group(oid) backend that
knows g.x and g|_x on letters. Three backends exist: a finite table, the
infinite cyclic group acting as a cyclic odometer, and raw automaton words
compared up to a depth bound.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from .automaton import Automaton, GroupoidWord, format_tokens, free_reduce
from .engine import enumerate_groupoid, run, signature
from .errors import (CapExceeded, CompositionError, ParseError, PartialActionError,
                     UnsupportedError)
from .graph import DirectedGraph, Word, concat, format_letters
from .groupoid import FiniteGroupoid


# -- backends

class TableBackend:
    kind = "table"
    finite = True

    def __init__(self, G: FiniteGroupoid, act: dict, res: dict, tokens: dict | None = None,
                 approximate: bool = False, vertex: str | None = None):
        self.G = G
        # a table group acting on a one-vertex graph lives at that vertex
        self.vertex = vertex if G.is_group else None
        self._act = act
        self._res = res
        self.tokens = dict(tokens or {})
        self.approximate = approximate

    def identity(self, vertex=None):
        return self.G.identities[0] if self.G.is_group else self.G.identity(vertex)

    def mul(self, g, h):
        return self.G.mul(g, h)

    def inv(self, g):
        return self.G.inv(g)

    def key(self, g):
        return g

    def eq(self, g, h):
        return g == h

    def is_identity(self, g):
        return self.G.is_identity(g)

    def dom(self, g):
        return self.vertex or self.G.vertex_of[self.G.dom(g)]

    def ran(self, g):
        return self.vertex or self.G.vertex_of[self.G.ran(g)]

    def fmt(self, g):
        return "1" if self.G.is_identity(g) and self.G.is_group else g

    def elements(self):
        return list(self.G.elements)

    def generators(self):
        if self.tokens:
            gens = list(dict.fromkeys(self.tokens.values()))
            return gens + [self.G.inv(g) for g in gens]
        return [g for g in self.G.elements if not self.G.is_identity(g)]

    def parse(self, text: str, anchor=None):
        acc = None
        for tok in text.split():
            if tok in ("1", "ε"):
                continue
            m = re.fullmatch(r"(.+?)(?:\^(-?\d+))?", tok)
            base, power = m.group(1), int(m.group(2) or 1)
            if base in self.tokens:
                g = self.tokens[base]
            elif base in self.G.index:
                g = base
            else:
                raise ParseError(f"unknown group token {tok!r}")
            if power < 0:
                g = self.G.inv(g)
            for _ in range(abs(power)):
                acc = g if acc is None else self.G.mul(acc, g)
        if acc is None:
            return self.G.identity(anchor if not self.G.is_group else None)
        return acc

    def act_letter(self, g, x):
        try:
            return self._act[(g, x)]
        except KeyError:
            raise PartialActionError(f"{g} does not act on {x}") from None

    def restrict_letter(self, g, x):
        try:
            return self._res[(g, x)]
        except KeyError:
            raise PartialActionError(f"{g} does not act on {x}") from None


class ZBackend:
    """The infinite cyclic group <a> acting as a cyclic odometer.

    Digit i is the letter at position i of `digits`; a.i = i+1 mod n and
    a|_i = a when i lies in the carry set, else 1.
    """

    kind = "z"
    finite = False
    approximate = False

    def __init__(self, digits, carry, gen: str = "a", vertex: str = "v"):
        self.digits = tuple(digits)
        self.n = len(self.digits)
        self.pos = {x: i for i, x in enumerate(self.digits)}
        self.carry = frozenset(carry)
        self.gen = gen
        self.vertex = vertex
        # prefix counts of carry digits over one period starting at each digit
        self._cnt = [[sum(1 for j in range(r) if (i + j) % self.n in self.carry)
                      for r in range(self.n + 1)] for i in range(self.n)]

    def identity(self, vertex=None):
        return 0

    def mul(self, g, h):
        return g + h

    def inv(self, g):
        return -g

    def key(self, g):
        return g

    def eq(self, g, h):
        return g == h

    def is_identity(self, g):
        return g == 0

    def dom(self, g):
        return self.vertex

    ran = dom

    def fmt(self, g):
        if g == 0:
            return "1"
        return self.gen if g == 1 else f"{self.gen}^{g}"

    def generators(self):
        return [1, -1]

    def parse(self, text: str, anchor=None):
        total = 0
        for tok in text.split():
            if tok in ("1", "ε"):
                continue
            m = re.fullmatch(re.escape(self.gen) + r"(?:\^(-?\d+))?", tok)
            if not m:
                raise ParseError(f"unknown group token {tok!r}")
            total += int(m.group(1) or 1)
        return total

    def act_letter(self, m, x):
        return self.digits[(self.pos[x] + m) % self.n]

    def carries(self, i: int, m: int) -> int:
        """Number of j in [0, m) with (i + j) mod n in the carry set, m >= 0."""
        q, r = divmod(m, self.n)
        return q * len(self.carry) + self._cnt[i][r]

    def restrict_letter(self, m, x):
        i = self.pos[x]
        if m >= 0:
            return self.carries(i, m)
        j = (i + m) % self.n  # a^m|_x = (a^-m|_{a^m.x})^-1
        return -self.carries(j, -m)


class WordsBackend:
    """Freely reduced state words; equality is depth-bounded."""

    kind = "words"
    finite = False
    approximate = True

    def __init__(self, aut: Automaton, depth: int):
        self.aut = aut
        self.depth = depth

    def identity(self, vertex=None):
        return self.aut.identity(vertex)

    def mul(self, g, h):
        if g.domain != h.range:
            raise CompositionError(f"{g} * {h} is not composable")
        return self.aut.word(g.tokens + h.tokens, anchor=h.domain)

    def inv(self, g):
        return self.aut.word(tuple((s, -e) for s, e in reversed(g.tokens)), anchor=g.range)

    def key(self, g):
        return (g.domain, g.range, signature(self.aut, g, self.depth).tobytes())

    def eq(self, g, h):
        return g.tokens == h.tokens or self.key(g) == self.key(h)

    def is_identity(self, g):
        return not g.tokens or self.key(g) == self.key(self.aut.identity(g.domain))

    def dom(self, g):
        return g.domain

    def ran(self, g):
        return g.range

    def fmt(self, g):
        return str(g)

    def generators(self):
        return [self.aut.word(((q, 1),)) for q in self.aut.states] + \
               [self.aut.word(((q, -1),)) for q in self.aut.states]

    def parse(self, text: str, anchor=None):
        return self.aut.parse_word(text, anchor)

    def act_letter(self, g, x):
        out, _ = run(self.aut, g.tokens, (x,))
        return out[0]

    def restrict_letter(self, g, x):
        _, rest = run(self.aut, g.tokens, (x,))
        return self.aut.word(rest, anchor=self.aut.graph.dom[x])


def detect_odometer(aut: Automaton):
    """(digits, carry set) when the automaton is a one-state cyclic odometer generating Z.

    With n digits and carry set K, a^(nq) restricts to a^(q|K|) everywhere. If
    K is empty or everything, a^n acts trivially and the group is finite, so
    only 0 < |K| < n qualifies.
    """
    if not aut.one_vertex or len(aut.states) != 1:
        return None
    q = aut.states[0]
    letters = aut.graph.letters
    if set(aut.inputs(q)) != set(letters):
        return None
    digits = [letters[0]]
    while len(digits) < len(letters):
        nxt = aut.transitions[(q, digits[-1])][0]
        if nxt in digits:
            return None
        digits.append(nxt)
    if aut.transitions[(q, digits[-1])][0] != digits[0]:
        return None
    carry = set()
    for i, x in enumerate(digits):
        w = aut.transitions[(q, x)][1]
        if w == ((q, 1),):
            carry.add(i)
        elif w:
            return None
    if not 0 < len(carry) < len(digits):
        return None
    return digits, carry


# -- the system

@dataclass(frozen=True)
class ReesElement:
    word: Word
    g: Any

    def __str__(self):
        return f"{self.word}|{self.g}"


class ActionSystem:
    def __init__(self, graph: DirectedGraph, backend, name: str = "", automaton: Automaton | None = None):
        self.graph = graph
        self.backend = backend
        self.name = name
        self.automaton = automaton

    @property
    def approximate(self) -> bool:
        return self.backend.approximate

    @classmethod
    def from_automaton(cls, aut: Automaton, backend: str = "auto", depth: int = 6,
                       cap: int = 1000) -> "ActionSystem":
        if backend in ("auto", "z"):
            odo = detect_odometer(aut)
            if odo is not None:
                digits, carry = odo
                return cls(aut.graph, ZBackend(digits, carry, aut.states[0], aut.graph.vertices[0]),
                           aut.name, aut)
            if backend == "z":
                raise UnsupportedError("automaton is not a one-state cyclic odometer")
        if backend == "table":
            G = enumerate_groupoid(aut, depth, cap, check_stable=True)
            return cls(aut.graph, _table_from_groupoid(aut, G), aut.name, aut)
        if backend == "auto":
            G = _stable_groupoid(aut, depth, cap)
            if G is not None:
                return cls(aut.graph, _table_from_groupoid(aut, G), aut.name, aut)
        if backend in ("auto", "words"):
            return cls(aut.graph, WordsBackend(aut, depth), aut.name, aut)
        raise ValueError(f"unknown backend {backend!r}")

    # group level helpers
    def g(self, text: str, anchor=None):
        return self.backend.parse(text, anchor)

    def fmt_g(self, g) -> str:
        return self.backend.fmt(g)

    # words
    def act(self, g, w: Word) -> Word:
        b = self.backend
        if b.dom(g) != w.range:
            raise CompositionError(f"{b.fmt(g)} cannot act on {w or 'empty word'}")
        out = []
        for x in w:
            out.append(b.act_letter(g, x))
            g = b.restrict_letter(g, x)
        if not out:
            return self.graph.empty(b.ran(g))
        return self.graph.word(out)

    def restrict(self, g, w: Word):
        b = self.backend
        if b.dom(g) != w.range:
            raise CompositionError(f"{b.fmt(g)} cannot act on {w or 'empty word'}")
        for x in w:
            g = b.restrict_letter(g, x)
        return g

    # elements
    def element(self, word: Word, g=None) -> ReesElement:
        b = self.backend
        if g is None:
            g = b.identity(word.domain if not self.graph.single_vertex else None)
        if word.domain != b.ran(g):
            raise CompositionError(f"word {word} and group element {b.fmt(g)} do not compose")
        return ReesElement(word, g)

    def parse_element(self, text: str) -> ReesElement:
        if "|" in text:
            wt, gt = text.split("|", 1)
        else:
            wt, gt = text, ""
        letters = self.graph.tokenize(wt)
        b = self.backend
        if letters:
            word = self.graph.word(letters)
            g = b.parse(gt, anchor=word.domain)
        else:
            g = b.parse(gt, anchor=None)
            word = self.graph.empty(b.ran(g))
        return self.element(word, g)

    def fmt(self, s: ReesElement) -> str:
        return f"{format_letters(s.word.letters)}|{self.backend.fmt(s.g)}"

    def dom(self, s: ReesElement) -> str:
        return self.backend.dom(s.g)

    def ran(self, s: ReesElement) -> str:
        return s.word.range

    def multiply(self, a: ReesElement, b: ReesElement) -> ReesElement:
        """(x, g)(y, h) = (x (g.y), g|_y h)."""
        if self.backend.dom(a.g) != b.word.range:
            raise CompositionError(f"{self.fmt(a)} * {self.fmt(b)}: domain and range differ")
        gy = self.act(a.g, b.word)
        return ReesElement(concat(a.word, gy), self.backend.mul(self.restrict(a.g, b.word), b.g))

    def equal(self, a: ReesElement, b: ReesElement) -> bool:
        return a.word == b.word and self.backend.eq(a.g, b.g)

    def group_relations(self) -> list[str]:
        if self.automaton is None:
            return []
        out = []
        for lhs, rhs in self.automaton.relations:
            if all(not f.split("|", 1)[0].strip() for f in (lhs + "*" + rhs).replace("=", "*").split("*")):
                out.append(f"{lhs.replace('|', '').strip() or '1'} = {rhs.replace('|', '').strip() or '1'}")
        return out


def _stable_groupoid(aut: Automaton, depth: int, cap: int):
    """First quotient whose class count does not grow one level deeper, or None.

    Equal counts at d and d + 1 mean the two equivalences agree on all state
    words; since the d + 2 classes are determined by the letter action and the
    d + 1 classes of restrictions, the partition is then fixed at every depth.
    """
    try:
        prev = enumerate_groupoid(aut, 1, cap)
        for d in range(1, depth + 1):
            nxt = enumerate_groupoid(aut, d + 1, cap)
            if len(nxt) == len(prev):
                prev.stable = True
                return prev
            prev = nxt
    except CapExceeded:
        pass
    return None


def _table_from_groupoid(aut: Automaton, G: FiniteGroupoid) -> TableBackend:
    graph = aut.graph
    act, res = {}, {}
    for name in G.elements:
        toks = G.words[name]
        d, _ = G.vertex(name)
        for x in graph.edges_into(d):
            try:
                out, rest = run(aut, toks, (x,))
            except PartialActionError:
                continue
            h = G.classify(aut.word(rest, anchor=graph.dom[x]))
            if h is None:
                raise UnsupportedError(f"restriction of {name} at {x} left the enumerated groupoid")
            act[(name, x)] = out[0]
            res[(name, x)] = h
    tokens = {}
    for q in aut.states:
        c = G.classify(aut.word(((q, 1),)))
        tokens[q] = c
    return TableBackend(G, act, res, tokens, approximate=not bool(G.stable))


def table_system(graph: DirectedGraph, G: FiniteGroupoid, action: dict, restriction: dict,
                 name: str = "") -> ActionSystem:
    """A system given directly by letter tables {(g, x): y} and {(g, x): h}."""
    vertex = graph.vertices[0] if graph.single_vertex else None
    return ActionSystem(graph, TableBackend(G, dict(action), dict(restriction), vertex=vertex), name)


# -- stabilizers and structure

@dataclass
class Stabilizer:
    letter: Word
    elements: list | None  # None when infinite and described by `index`
    index: int | None = None  # Z backend: stabilizer is <a^index>
    exact: bool = True

    def __contains__(self, g):
        if self.elements is not None:
            return g in self.elements
        return g % self.index == 0


def _ball(sys: ActionSystem, vertex: str | None, radius: int, limit: int = 4000):
    """Distinct elements reachable by words of length <= radius, BFS order."""
    b = sys.backend
    start = b.identity(vertex)
    seen = {b.key(start): start}
    order = [start]
    frontier = [start]
    gens = b.generators()
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in gens:
                if b.dom(g) != b.ran(s):
                    continue
                h = b.mul(g, s)
                k = b.key(h)
                if k not in seen:
                    seen[k] = h
                    order.append(h)
                    nxt.append(h)
                    if len(order) >= limit:
                        return order
        frontier = nxt
    return order


def _loops_at(sys: ActionSystem, vertex: str, radius: int):
    b = sys.backend
    if b.finite:
        return [g for g in b.elements() if b.dom(g) == vertex and b.ran(g) == vertex]
    # words backend: loops are products of loops; search all words of the ball
    if sys.graph.single_vertex:
        return _ball(sys, None, radius)
    return [g for g in _ball(sys, vertex, radius) if b.ran(g) == vertex]


def stabilizer(sys: ActionSystem, x: Word, radius: int = 4) -> Stabilizer:
    b = sys.backend
    if b.kind == "z":
        # the cycle of a through x has length = period of a on this level
        w, p = x, 0
        while True:
            w = sys.act(1, w)
            p += 1
            if w == x:
                return Stabilizer(x, None, p)
    elems = [g for g in _loops_at(sys, x.range, radius) if b.dom(g) == x.range and sys.act(g, x) == x]
    return Stabilizer(x, elems, exact=not b.approximate and b.finite)


def phi(sys: ActionSystem, x: Word, radius: int = 4):
    """g -> g|_x on the stabilizer of x (a dict, or a function for the Z backend)."""
    st = stabilizer(sys, x, radius)
    if st.elements is None:
        return lambda g: sys.restrict(g, x) if g % st.index == 0 else None
    return {sys.backend.key(g): sys.restrict(g, x) for g in st.elements}


def rho(sys: ActionSystem, x: Word, radius: int = 4):
    b = sys.backend
    if b.kind == "z":
        return lambda g: sys.restrict(g, x)
    return {b.key(g): sys.restrict(g, x) for g in _loops_at(sys, x.range, radius)}


@dataclass
class Verdict:
    value: bool
    witness: tuple | None = None
    exact: bool = True
    note: str = ""

    def __bool__(self):
        return self.value


def _letter_words(sys: ActionSystem):
    return [sys.graph.word((x,)) for x in sys.graph.letters]


def is_right_cancellative(sys: ActionSystem, radius: int = 4) -> Verdict:
    """phi_x injective for every letter x; witness (x, g, h) with phi_x(g) = phi_x(h)."""
    b = sys.backend
    if b.kind == "z":
        # the carry set is a proper nonempty subset, so K > 0
        return Verdict(True, note="phi_x(a^(kn)) = a^(k|K|) is injective")
    exact = True
    for xw in _letter_words(sys):
        x = xw.letters[0]
        first: dict = {}
        for g in stabilizer(sys, xw, radius).elements:
            r = sys.restrict(g, xw)
            k = b.key(r)
            if k in first and not b.eq(first[k][0], g):
                g0, r0 = first[k]
                same_word = b.kind == "words" and r0.tokens == r.tokens
                return Verdict(False, (x, g0, g), exact=(b.kind != "words" or same_word),
                               note="" if b.kind != "words" else
                               f"elements distinguished exactly; restrictions compared to depth {b.depth}")
            first.setdefault(k, (g, r))
        exact = exact and not b.approximate
    note = "" if exact else f"no collision among words of length <= {radius} (depth {getattr(b, 'depth', '-')})"
    return Verdict(True, exact=exact, note=note)


def is_symmetric(sys: ActionSystem, radius: int = 4) -> Verdict:
    """rho_x : G -> G, g -> g|_x bijective for every letter x."""
    b = sys.backend
    if b.kind == "z":
        # some digit does not carry, and a^j, a^(j+1) restrict alike across it
        for xw in _letter_words(sys):
            i = b.pos[xw.letters[0]]
            for j in range(b.n):
                if (i + j) % b.n not in b.carry:
                    return Verdict(False, (xw.letters[0], j, j + 1))
    exact = True
    for xw in _letter_words(sys):
        x = xw.letters[0]
        loops = _loops_at(sys, xw.range, radius)
        first: dict = {}
        images = set()
        for g in loops:
            r = sys.restrict(g, xw)
            k = b.key(r)
            images.add(k)
            if k in first and not b.eq(first[k][0], g):
                return Verdict(False, (x, first[k][0], g), exact=not b.approximate)
            first.setdefault(k, (g, r))
        if b.finite:
            targets = {b.key(g) for g in _loops_at(sys, xw.domain, radius)}
            if images != targets or len(loops) != len(targets):
                return Verdict(False, (x, None, None), note="rho_x is not onto")
        exact = exact and not b.approximate
    return Verdict(True, exact=exact)


def _orbit(sys: ActionSystem, w: Word) -> list[Word]:
    b = sys.backend
    gens = b.generators()
    seen = {w: None}
    frontier = [w]
    while frontier:
        nxt = []
        for u in frontier:
            for s in gens:
                if b.dom(s) != u.range:
                    continue
                v = sys.act(s, u)
                if v not in seen:
                    seen[v] = None
                    nxt.append(v)
        frontier = nxt
    return list(seen)


def orbits(sys: ActionSystem) -> list[list[str]]:
    done: set[str] = set()
    out = []
    for x in sys.graph.letters:
        if x in done:
            continue
        orb = {u.letters[0] for u in _orbit(sys, sys.graph.word((x,)))}
        block = [y for y in sys.graph.letters if y in orb]
        done.update(block)
        out.append(block)
    return out


def green_R(sys: ActionSystem, a: ReesElement, b: ReesElement) -> bool:
    return a.word == b.word


def green_J(sys: ActionSystem, a: ReesElement, b: ReesElement) -> bool:
    if len(a.word) != len(b.word):
        return False
    if a.word.is_empty:
        return True
    return b.word in set(_orbit(sys, a.word))
