"""Directed graphs, words (paths) and the line-oriented section file format."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CompositionError, ParseError

_HEADER = re.compile(r"^\[([A-Za-z_][\w-]*)\]$")


def read_sections(text: str) -> dict[str, list[str]]:
    """Split text into `[section]` blocks of stripped, comment-free lines."""
    sections: dict[str, list[str]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            current = m.group(1).lower()
            if current in sections:
                raise ParseError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = []
            continue
        if current is None:
            raise ParseError(f"line {lineno}: content before any section header")
        sections[current].append(line)
    return sections


def parse_keyvals(parts: Iterable[str], lineno_hint: str = "") -> dict[str, str]:
    out = {}
    for p in parts:
        if "=" not in p:
            raise ParseError(f"{lineno_hint}expected key=value, got {p!r}")
        k, v = p.split("=", 1)
        out[k] = v
    return out


@dataclass(frozen=True)
class Word:
    """A path x1...xn stored left to right.

    For consecutive letters d(x_i) = r(x_{i+1}); the word has range r(x1)
    and domain d(xn). The empty word is anchored at a vertex.
    """

    letters: tuple[str, ...]
    domain: str
    range: str

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    @property
    def is_empty(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return format_letters(self.letters)


def format_letters(letters) -> str:
    if not letters:
        return ""
    if all(len(x) == 1 for x in letters):
        return "".join(letters)
    return " ".join(letters)


def concat(w1: Word, w2: Word) -> Word:
    if w1.domain != w2.range:
        raise CompositionError(
            f"cannot concatenate {str(w1) or 'empty'} (domain {w1.domain}) "
            f"with {str(w2) or 'empty'} (range {w2.range})")
    return Word(w1.letters + w2.letters, w2.domain, w1.range)


class DirectedGraph:
    """Vertices plus edges `id: domain -> range`."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]):
        self.vertices = tuple(vertices)
        self.edges = tuple((e, d, r) for e, d, r in edges)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ParseError("duplicate vertex id")
        if not self.vertices:
            raise ParseError("graph needs at least one vertex")
        self.dom: dict[str, str] = {}
        self.ran: dict[str, str] = {}
        for e, d, r in self.edges:
            if not e or not d or not r:
                raise ParseError("empty token in edge declaration")
            if e in vset or e in self.dom:
                raise ParseError(f"edge id {e!r} clashes with another id")
            if d not in vset or r not in vset:
                raise ParseError(f"edge {e!r} uses an undeclared vertex")
            self.dom[e] = d
            self.ran[e] = r
        self.letters = tuple(e for e, _, _ in self.edges)
        self._into: dict[str, tuple[str, ...]] = {
            v: tuple(e for e in self.letters if self.ran[e] == v) for v in self.vertices}

    @property
    def single_vertex(self) -> bool:
        return len(self.vertices) == 1

    def edges_into(self, v: str) -> tuple[str, ...]:
        """Letters x with r(x) = v, in declaration order."""
        return self._into[v]

    def empty(self, v: str | None = None) -> Word:
        if v is None:
            if not self.single_vertex:
                raise CompositionError("empty word needs a vertex anchor on a multi-vertex graph")
            v = self.vertices[0]
        if v not in self.vertices:
            raise ParseError(f"unknown vertex {v!r}")
        return Word((), v, v)

    def word(self, letters, anchor: str | None = None) -> Word:
        letters = tuple(letters)
        if not letters:
            return self.empty(anchor)
        for x in letters:
            if x not in self.dom:
                raise ParseError(f"unknown letter {x!r}")
        for a, b in zip(letters, letters[1:]):
            if self.dom[a] != self.ran[b]:
                raise CompositionError(f"letters {a} {b} are not composable")
        return Word(letters, self.dom[letters[-1]], self.ran[letters[0]])

    def tokenize(self, text: str) -> tuple[str, ...]:
        """Split a word literal: space separated, or greedy longest match."""
        text = text.strip()
        if text in ("", "ε", "1"):
            if text == "1" and "1" in self.dom:
                return ("1",)
            return ()
        if " " in text:
            return tuple(text.split())
        names = sorted(self.letters, key=len, reverse=True)
        out = []
        i = 0
        while i < len(text):
            for n in names:
                if text.startswith(n, i):
                    out.append(n)
                    i += len(n)
                    break
            else:
                raise ParseError(f"cannot split {text!r} into letters at position {i}")
        return tuple(out)

    def parse_word(self, text: str, anchor: str | None = None) -> Word:
        return self.word(self.tokenize(text), anchor)

    def words(self, v: str, max_len: int, min_len: int = 1) -> list[tuple[str, ...]]:
        """All words with range v and length in [min_len, max_len], shortlex order."""
        out: list[tuple[str, ...]] = []
        level: list[tuple[tuple[str, ...], str]] = [((), v)]
        for n in range(1, max_len + 1):
            nxt = []
            for w, end in level:
                for x in self._into[end]:
                    nxt.append((w + (x,), self.dom[x]))
            level = nxt
            if n >= min_len:
                out.extend(w for w, _ in level)
            if not level:
                break
        return out

    def edge_lines(self) -> list[str]:
        return [f"{e} range={r} domain={d}" for e, d, r in self.edges]

    def to_text(self) -> str:
        return "[vertices]\n" + " ".join(self.vertices) + "\n[edges]\n" + "\n".join(self.edge_lines()) + "\n"

    def __repr__(self) -> str:
        return f"DirectedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def parse_edge_lines(lines: list[str], vertices: tuple[str, ...], what: str = "edge"):
    edges = []
    for line in lines:
        parts = line.split()
        kv = parse_keyvals(parts[1:], f"{what} {parts[0]}: ")
        if len(vertices) == 1:
            kv.setdefault("range", vertices[0])
            kv.setdefault("domain", vertices[0])
        if set(kv) != {"range", "domain"}:
            raise ParseError(f"{what} {parts[0]}: expected range= and domain=")
        edges.append((parts[0], kv["domain"], kv["range"]))
    return edges


def parse_vertices(sections: dict[str, list[str]]) -> tuple[str, ...]:
    if "vertices" not in sections:
        return ("v",)
    return tuple(t for line in sections["vertices"] for t in line.split())


def parse_graph(text: str) -> DirectedGraph:
    sec = read_sections(text)
    verts = parse_vertices(sec)
    return DirectedGraph(verts, parse_edge_lines(sec.get("edges", []), verts))


def one_vertex_graph(letters: Iterable[str], vertex: str = "v") -> DirectedGraph:
    return DirectedGraph([vertex], [(x, vertex, vertex) for x in letters])
