"""Typed invertible automata and words over their states.

A transition `q x -> y ; w` means q.x = y and q|_x = w. With one vertex this
is a classical Mealy automaton; with several vertices the alphabet is typed
and the states are arrows between vertices.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import CompositionError, ParseError, PartialActionError
from .graph import DirectedGraph, parse_edge_lines, parse_keyvals, parse_vertices, read_sections

Token = tuple[str, int]

_RESERVED = set("^|*;=,") | {" "}


def free_reduce(tokens: Iterable[Token]) -> tuple[Token, ...]:
    out: list[Token] = []
    for t in tokens:
        if out and out[-1][0] == t[0] and out[-1][1] == -t[1]:
            out.pop()
        else:
            out.append(t)
    return tuple(out)


def invert_tokens(tokens: Iterable[Token]) -> tuple[Token, ...]:
    return tuple((s, -e) for s, e in reversed(tuple(tokens)))


def format_tokens(tokens) -> str:
    if not tokens:
        return "1"
    return " ".join(s if e == 1 else f"{s}^-1" for s, e in tokens)


@dataclass(frozen=True)
class GroupoidWord:
    """Product g1 ... gk of states and inverted states, acting rightmost first."""

    tokens: tuple[Token, ...]
    domain: str
    range: str

    def __str__(self) -> str:
        return format_tokens(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def is_identity_word(self) -> bool:
        return not self.tokens


class Automaton:
    def __init__(self, graph: DirectedGraph, states, transitions, relations=(), name: str = ""):
        """states: [(id, domain, range)]; transitions: {(q, x): (y, tokens)}."""
        self.graph = graph
        self.name = name
        self.states = tuple(s for s, _, _ in states)
        self.sdom = {s: d for s, d, _ in states}
        self.sran = {s: r for s, _, r in states}
        taken = set(graph.vertices) | set(graph.letters)
        for s in self.states:
            if s == "1" or s in taken or any(c in _RESERVED for c in s) or not s:
                raise ParseError(f"bad or clashing state id {s!r}")
            if self.sdom[s] not in graph.vertices or self.sran[s] not in graph.vertices:
                raise ParseError(f"state {s} uses an undeclared vertex")
            taken.add(s)
        if len(set(self.states)) != len(self.states):
            raise ParseError("duplicate state id")
        self.transitions: dict[tuple[str, str], tuple[str, tuple[Token, ...]]] = {}
        for (q, x), (y, w) in transitions.items():
            if q not in self.sdom:
                raise ParseError(f"transition for unknown state {q!r}")
            if x not in graph.dom or y not in graph.dom:
                raise ParseError(f"transition {q} {x} uses an unknown letter")
            for s, _ in w:
                if s not in self.sdom:
                    raise ParseError(f"restriction of {q} at {x} uses unknown state {s!r}")
            self.transitions[(q, x)] = (y, tuple(w))
        self.relations = tuple(relations)
        # inverse transitions when lambda_q is injective
        self._inv: dict[tuple[str, str], tuple[str, tuple[Token, ...]]] = {}
        self.invertible = True
        for q in self.states:
            seen: dict[str, str] = {}
            for x in self.inputs(q):
                y, w = self.transitions[(q, x)]
                if y in seen:
                    self.invertible = False
                    continue
                seen[y] = x
                self._inv[(q, y)] = (x, invert_tokens(w))

    # -- structure
    @property
    def one_vertex(self) -> bool:
        return self.graph.single_vertex

    def inputs(self, q: str) -> tuple[str, ...]:
        return tuple(x for x in self.graph.letters if (q, x) in self.transitions)

    def outputs(self, q: str) -> tuple[str, ...]:
        return tuple(self.transitions[(q, x)][0] for x in self.inputs(q))

    def tok_dom(self, t: Token) -> str:
        return self.sdom[t[0]] if t[1] == 1 else self.sran[t[0]]

    def tok_ran(self, t: Token) -> str:
        return self.sran[t[0]] if t[1] == 1 else self.sdom[t[0]]

    def word(self, tokens: Iterable[Token], anchor: str | None = None, reduce: bool = True) -> GroupoidWord:
        tokens = tuple(tokens)
        if reduce:
            tokens = free_reduce(tokens)
        for s, e in tokens:
            if s not in self.sdom:
                raise ParseError(f"unknown state {s!r}")
        for a, b in zip(tokens, tokens[1:]):
            if self.tok_dom(a) != self.tok_ran(b):
                raise CompositionError(f"state word {format_tokens((a, b))} is not composable")
        if not tokens:
            if anchor is None:
                if not self.one_vertex:
                    raise CompositionError("identity word needs a vertex anchor")
                anchor = self.graph.vertices[0]
            return GroupoidWord((), anchor, anchor)
        return GroupoidWord(tokens, self.tok_dom(tokens[-1]), self.tok_ran(tokens[0]))

    def identity(self, vertex: str | None = None) -> GroupoidWord:
        return self.word((), vertex)

    def parse_tokens(self, text: str) -> tuple[Token, ...]:
        out = []
        for tok in text.split():
            if tok in ("1", "ε"):
                continue
            m = re.fullmatch(r"(.+?)(?:\^(-?\d+))?", tok)
            name, power = m.group(1), int(m.group(2) or 1)
            if name not in self.sdom:
                raise ParseError(f"unknown state token {tok!r}")
            e = 1 if power > 0 else -1
            out.extend([(name, e)] * abs(power))
        return tuple(out)

    def parse_word(self, text: str, anchor: str | None = None) -> GroupoidWord:
        return self.word(self.parse_tokens(text), anchor)

    def step(self, t: Token, x: str) -> tuple[str, tuple[Token, ...]]:
        """(t.x, t|_x) for a single token."""
        q, e = t
        table = self.transitions if e == 1 else self._inv
        try:
            return table[(q, x)]
        except KeyError:
            side = "input" if e == 1 else "output"
            raise PartialActionError(f"letter {x} is outside the {side} alphabet of {q}") from None

    # -- compiled tables for the batch kernels
    @cached_property
    def compiled(self):
        letters = self.graph.letters
        lidx = {x: i for i, x in enumerate(letters)}
        sidx = {s: i for i, s in enumerate(self.states)}
        n_tok = 2 * len(self.states)

        def code(t: Token) -> int:
            return 2 * sidx[t[0]] + (0 if t[1] == 1 else 1)

        rests = {}
        for q in self.states:
            for x in self.inputs(q):
                rests[(code((q, 1)), lidx[x])] = self.transitions[(q, x)]
            for (q2, y), v in self._inv.items():
                if q2 == q:
                    rests[(code((q, -1)), lidx[y])] = v
        maxlen = max([len(w) for _, w in rests.values()] + [1])
        out = np.full((n_tok, len(letters)), -1, dtype=np.int64)
        rest = np.zeros((n_tok, len(letters), maxlen), dtype=np.int64)
        rest_len = np.zeros((n_tok, len(letters)), dtype=np.int64)
        for (s, x), (y, w) in rests.items():
            out[s, x] = lidx[y]
            rest_len[s, x] = len(w)
            for k, t in enumerate(w):
                rest[s, x, k] = code(t)
        inv_of = np.array([i ^ 1 for i in range(n_tok)], dtype=np.int64)
        return {"out": out, "rest": rest, "rest_len": rest_len, "inv_of": inv_of,
                "lidx": lidx, "code": code, "maxlen": maxlen}

    # -- identity and text form
    def _key(self):
        return (self.graph.vertices, self.graph.edges,
                tuple((s, self.sdom[s], self.sran[s]) for s in self.states),
                tuple(sorted(self.transitions.items())), self.relations)

    def __eq__(self, other):
        return isinstance(other, Automaton) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"# {self.name}")
        lines += ["[vertices]", " ".join(self.graph.vertices), "[alphabet]"]
        lines += self.graph.edge_lines()
        lines.append("[states]")
        lines += [f"{s} range={self.sran[s]} domain={self.sdom[s]}" for s in self.states]
        lines.append("[transitions]")
        for q in self.states:
            for x in self.inputs(q):
                y, w = self.transitions[(q, x)]
                lines.append(f"{q} {x} -> {y} ; {format_tokens(w)}")
        if self.relations:
            lines.append("[relations]")
            lines += [f"{lhs} = {rhs}" for lhs, rhs in self.relations]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"Automaton({self.name or 'unnamed'}: {len(self.states)} states, {len(self.graph.letters)} letters)"

    def with_transition(self, q: str, x: str, y: str, w: tuple[Token, ...]) -> "Automaton":
        trans = dict(self.transitions)
        trans[(q, x)] = (y, tuple(w))
        states = [(s, self.sdom[s], self.sran[s]) for s in self.states]
        return Automaton(self.graph, states, trans, self.relations, self.name)


def parse_automaton(text: str, name: str = "") -> Automaton:
    sec = read_sections(text)
    for req in ("alphabet", "states", "transitions"):
        if req not in sec:
            raise ParseError(f"automaton file lacks [{req}]")
    unknown = set(sec) - {"vertices", "alphabet", "states", "transitions", "relations"}
    if unknown:
        raise ParseError(f"unknown section(s): {', '.join(sorted(unknown))}")
    verts = parse_vertices(sec)
    graph = DirectedGraph(verts, parse_edge_lines(sec["alphabet"], verts, "letter"))
    states = []
    for line in sec["states"]:
        parts = line.split()
        kv = parse_keyvals(parts[1:], f"state {parts[0]}: ")
        if len(verts) == 1:
            kv.setdefault("range", verts[0])
            kv.setdefault("domain", verts[0])
        if set(kv) != {"range", "domain"}:
            raise ParseError(f"state {parts[0]}: expected range= and domain=")
        states.append((parts[0], kv["domain"], kv["range"]))
    snames = {s for s, _, _ in states}
    trans = {}
    for line in sec["transitions"]:
        m = re.fullmatch(r"(\S+)\s+(\S+)\s*->\s*(\S+)\s*;\s*(.*)", line)
        if not m:
            raise ParseError(f"bad transition line {line!r}")
        q, x, y, rw = m.groups()
        w = []
        for tok in rw.split():
            if tok == "1":
                continue
            inv = tok.endswith("^-1")
            s = tok[:-3] if inv else tok
            if s not in snames:
                raise ParseError(f"transition {q} {x}: unknown state {tok!r}")
            w.append((s, -1 if inv else 1))
        if (q, x) in trans:
            raise ParseError(f"duplicate transition for {q} {x}")
        trans[(q, x)] = (y, free_reduce(w))
    rels = []
    for line in sec.get("relations", []):
        if line.count("=") != 1:
            raise ParseError(f"relation {line!r} needs exactly one '='")
        lhs, rhs = (" ".join(s.split()) for s in line.split("="))
        rels.append((lhs, rhs))
    if not name:
        m = re.match(r"\s*#\s*(.+)", text)
        name = m.group(1).strip() if m else ""
    return Automaton(graph, states, trans, rels, name)


BUILTIN_AUTOMATA = ("adding", "bs-2-3", "bs3", "sierpinski", "cantor", "carpet",
                    "grigorchuk", "typed-adding", "typed-acyclic")


def builtin_text(name: str) -> str:
    stem = name[:-4] if name.endswith(".aut") else name
    return resources.files("reeskit.data").joinpath(f"{stem}.aut").read_text(encoding="utf-8")


def load_automaton(path_or_name: str) -> Automaton:
    """A path on disk, else the name of a shipped automaton (with or without .aut)."""
    p = Path(path_or_name)
    if p.is_file():
        return parse_automaton(p.read_text(encoding="utf-8"))
    stem = p.name[:-4] if p.name.endswith(".aut") else p.name
    if stem in BUILTIN_AUTOMATA:
        return parse_automaton(builtin_text(stem))
    raise FileNotFoundError(f"no automaton file or builtin named {path_or_name!r}")


def bs_machine(k: int, n: int) -> Automaton:
    """Letters 0..n-1, a.i = i+1 mod n; the first k arrows loop back to a."""
    if not 0 <= k <= n or n < 2:
        raise ValueError("need 0 <= k <= n and n >= 2")
    graph = DirectedGraph(["v"], [(str(i), "v", "v") for i in range(n)])
    trans = {("a", str(i)): (str((i + 1) % n), (("a", 1),) if i < k else ()) for i in range(n)}
    rel = (f"|{' '.join(['a'] * n)} * 0|", f"0|{' '.join(['a'] * k) if k else '1'}")
    return Automaton(graph, [("a", "v", "v")], trans, [rel], f"BS({k},{n}) machine")
