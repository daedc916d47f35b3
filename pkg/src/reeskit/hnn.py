"""HNN presentations of left Rees monoids and transversal rewriting.

A presentation has one stable letter per orbit of G on the alphabet, with
h t = t rho(h) for h in the stabilizer H of the orbit representative.
hnn_normal_form rewrites positive words to g1 t g2 t ... u with each g_i in
a fixed left transversal of H; britton_normal_form also handles t^-1 and
removes pinches.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DecompositionError, DomainError, NotCancellativeError, ParseError, UnsupportedError
from .graph import read_sections
from .groupoid import parse_groupoid
from .rees import ActionSystem, TableBackend, ZBackend, orbits, stabilizer


# -- stable letter data

class _Stable:
    name: str
    range: str
    domain: str
    letter: str | None

    def decompose(self, u):
        raise NotImplementedError

    def decompose_image(self, u):
        raise NotImplementedError


class CyclicStable(_Stable):
    """G = <a>, H = <a^n>, rho(a^(nq)) = a^(kq)."""

    def __init__(self, name, n: int, k: int, transversal=None, letter=None, vertex="v"):
        if n < 1:
            raise DomainError("stabilizer index must be positive")
        self.name, self.n, self.k, self.letter = name, n, k, letter
        self.range = self.domain = vertex
        self.transversal = list(transversal) if transversal is not None else list(range(n))
        if sorted(t % n for t in self.transversal) != list(range(n)):
            raise DecompositionError(f"{self.transversal} is not a transversal of a^{n}")
        self.image_transversal = list(range(k)) if k else []

    @property
    def injective(self) -> bool:
        return self.k != 0

    def in_subgroup(self, g) -> bool:
        return g % self.n == 0

    def subgroup_generators(self):
        return [self.n]

    def rho(self, h):
        if h % self.n:
            raise DecompositionError(f"a^{h} is not in the subgroup a^{self.n}")
        return h // self.n * self.k

    def rho_inv(self, g):
        if not self.k or g % self.k:
            raise DecompositionError(f"a^{g} is not in the image of rho")
        return g // self.k * self.n

    def decompose(self, u):
        for t in self.transversal:
            if (u - t) % self.n == 0:
                return t, u - t
        raise DecompositionError(f"a^{u} has no coset representative")  # pragma: no cover

    def decompose_image(self, u):
        if not self.k:
            raise NotCancellativeError("rho is not injective")
        r = u % self.k
        return r, u - r


class FiniteStable(_Stable):
    def __init__(self, name, backend, subgroup, rho, transversal=None, image_transversal=None,
                 letter=None):
        self.name, self.backend, self.letter = name, backend, letter
        self.H = list(subgroup)
        self._rho = dict(rho)
        b = backend
        if set(self._rho) != set(self.H):
            raise DomainError(f"rho for {name} must be defined exactly on the subgroup")
        one = self.H[0] if self.H else None
        if not self.H or not b.is_identity(one):
            raise DomainError(f"subgroup for {name} must list its identity first")
        self.range = b.ran(one)
        self.domain = b.ran(self._rho[one])
        if not b.is_identity(self._rho[one]):
            raise DomainError(f"rho for {name} does not fix the identity")
        for g in self.H:
            for h in self.H:
                gh = b.mul(g, h)
                if gh not in self._rho:
                    raise DomainError(f"subgroup for {name} is not closed: {b.fmt(g)} {b.fmt(h)}")
                if self._rho[gh] != b.mul(self._rho[g], self._rho[h]):
                    raise DomainError(f"rho for {name} is not a homomorphism at ({b.fmt(g)}, {b.fmt(h)})")
        self.image = list(dict.fromkeys(self._rho[h] for h in self.H))
        self._inv = {v: h for h, v in self._rho.items()} if self.injective else {}
        pool = [g for g in b.elements() if b.dom(g) == self.range]
        self.transversal = list(transversal) if transversal is not None else _transversal(b, pool, self.H)
        pool_img = [g for g in b.elements() if b.dom(g) == self.domain]
        self.image_transversal = (list(image_transversal) if image_transversal is not None
                                  else _transversal(b, pool_img, self.image))
        _check_transversal(b, pool, self.H, self.transversal, name)
        _check_transversal(b, pool_img, self.image, self.image_transversal, name + "'")

    @property
    def injective(self) -> bool:
        return len(self.image) == len(self.H)

    def in_subgroup(self, g) -> bool:
        return g in self._rho

    def subgroup_generators(self):
        gens: list = []
        span = {self.H[0]}
        for h in self.H:
            if h in span:
                continue
            gens.append(h)
            span = _closure(self.backend, span | {h})
        return gens

    def rho(self, h):
        try:
            return self._rho[h]
        except KeyError:
            raise DecompositionError(f"{self.backend.fmt(h)} is not in the subgroup of {self.name}") from None

    def rho_inv(self, g):
        try:
            return self._inv[g]
        except KeyError:
            raise DecompositionError(f"{self.backend.fmt(g)} is not in the image of rho") from None

    def _split(self, u, reps, sub):
        b = self.backend
        for g in reps:
            if b.ran(g) != b.ran(u):
                continue
            h = b.mul(b.inv(g), u)
            if h in sub:
                return g, h
        raise DecompositionError(f"{b.fmt(u)} has no coset representative for {self.name}")

    def decompose(self, u):
        return self._split(u, self.transversal, self._rho)

    def decompose_image(self, u):
        if not self.injective:
            raise NotCancellativeError(f"rho for {self.name} is not injective")
        return self._split(u, self.image_transversal, self._inv)


def _closure(b, elems):
    out = set(elems)
    while True:
        new = {b.mul(g, h) for g in out for h in out if b.dom(g) == b.ran(h)} - out
        if not new:
            return out
        out |= new


def _transversal(b, pool, H):
    """First element, in declared order, of every left coset gH."""
    reps, covered = [], set()
    for g in pool:
        if g in covered:
            continue
        reps.append(g)
        covered.update(b.mul(g, h) for h in H)
    return reps


def _check_transversal(b, pool, H, T, name):
    seen = set()
    for g in T:
        coset = frozenset(b.mul(g, h) for h in H)
        if coset & seen:
            raise DecompositionError(f"transversal for {name} repeats a coset at {b.fmt(g)}")
        seen |= coset
    if not any(b.is_identity(g) for g in T):
        raise DecompositionError(f"transversal for {name} must contain 1")
    if seen != set(pool):
        raise DecompositionError(f"transversal for {name} misses some cosets")


# -- presentations

@dataclass
class HNNPresentation:
    group: object  # a rees backend
    stable: list
    generators: list[str] = field(default_factory=list)
    relations: list[str] = field(default_factory=list)

    def index(self, name: str) -> int:
        for i, s in enumerate(self.stable):
            if s.name == name:
                return i
        raise ParseError(f"unknown stable letter {name!r}")

    def stable_relations(self) -> list[str]:
        b = self.group
        out = []
        for s in self.stable:
            for h in s.subgroup_generators():
                out.append(f"{b.fmt(h)} {s.name} = {s.name} {b.fmt(s.rho(h))}")
        return out

    def display(self) -> str:
        gens = self.generators + [s.name for s in self.stable]
        rels = self.relations + self.stable_relations()
        return f"<{', '.join(gens)} | {', '.join(rels)}>"

    def to_text(self) -> str:
        b = self.group
        lines = ["[group]"]
        if isinstance(b, ZBackend):
            lines.append(f"zk k=1 gen={b.gen}")
        else:
            lines.append(f"table={getattr(self, 'source', 'inline')}")
        lines.append("[stable]")
        for s in self.stable:
            if isinstance(s, CyclicStable):
                body = (f"subgroup={b.fmt(s.n)} rho={b.fmt(s.n)}->{b.fmt(s.k)} "
                        f"transversal={','.join(b.fmt(t) for t in s.transversal)}")
            else:
                body = (f"subgroup={','.join(b.fmt(h) for h in s.H)} "
                        f"rho={','.join(f'{b.fmt(h)}->{b.fmt(s.rho(h))}' for h in s.H)} "
                        f"transversal={','.join(b.fmt(t) for t in s.transversal)}")
            letter = f" letter={s.letter}" if s.letter else ""
            lines.append(f"{s.name} range={s.range} domain={s.domain}{letter} {body}")
        return "\n".join(lines) + "\n"


def hnn_presentation(sys: ActionSystem, representatives: dict | None = None,
                     names: list[str] | None = None) -> HNNPresentation:
    """One stable letter per orbit; H is the stabilizer of the representative and rho = phi_x."""
    b = sys.backend
    gens = list(sys.automaton.states) if sys.automaton is not None else []
    rels = sys.group_relations()
    if isinstance(b, ZBackend):
        x = b.digits[0]
        name = (names or ["t"])[0]
        st = CyclicStable(name, b.n, b.carries(0, b.n), letter=x, vertex=b.vertex)
        return HNNPresentation(b, [st], gens, rels)
    if not isinstance(b, TableBackend):
        raise UnsupportedError("HNN presentations need a finite group(oid)")
    orbs = orbits(sys)
    if names is None:
        names = ["t"] if len(orbs) == 1 else [f"t{i + 1}" for i in range(len(orbs))]
    reps = dict(representatives or {})
    stable = []
    for i, orb in enumerate(orbs):
        x = orb[0]
        for y in orb:
            if reps.get(i) == y or reps.get(orb[0]) == y:
                x = y
        xw = sys.graph.word((x,))
        H = stabilizer(sys, xw).elements
        rho = {h: sys.restrict(h, xw) for h in H}
        stable.append(FiniteStable(names[i], b, H, rho, letter=x))
    return HNNPresentation(b, stable, gens, rels)


# -- mixed words

@dataclass(frozen=True)
class NormalForm:
    parts: tuple  # (g, stable index, +1/-1)
    tail: object

    def tokens(self):
        out = []
        for g, i, e in self.parts:
            out += [("g", g), ("t", i, e)]
        out.append(("g", self.tail))
        return out


def parse_mixed(p: HNNPresentation, text: str):
    out = []
    names = {s.name: i for i, s in enumerate(p.stable)}
    for tok in text.split():
        if tok in ("1", "ε"):
            continue
        m = re.fullmatch(r"(.+?)(?:\^(-?\d+))?", tok)
        base, power = m.group(1), int(m.group(2) or 1)
        if base in names:
            e = 1 if power > 0 else -1
            out += [("t", names[base], e)] * abs(power)
        else:
            out.append(("g", p.group.parse(tok)))
    return out


def format_mixed(p: HNNPresentation, nf: NormalForm) -> str:
    b = p.group
    out = []
    for tok in nf.tokens():
        if tok[0] == "g":
            if not b.is_identity(tok[1]):
                out.append(b.fmt(tok[1]))
        else:
            name = p.stable[tok[1]].name
            out.append(name if tok[2] == 1 else f"{name}^-1")
    return " ".join(out) if out else "1"


def _start(p: HNNPresentation, tokens):
    """Identity at the range vertex of the first token."""
    b = p.group
    if not tokens:
        return b.identity(None)
    tok = tokens[0]
    if tok[0] == "g":
        return b.identity(b.ran(tok[1]))
    s = p.stable[tok[1]]
    return b.identity(s.range if tok[2] == 1 else s.domain)


def hnn_normal_form(p: HNNPresentation, word) -> NormalForm:
    """Rewrite u t_i to g t_i rho_i(h) where u = g h, g in T_i, h in H_i."""
    tokens = parse_mixed(p, word) if isinstance(word, str) else list(word)
    b = p.group
    u = _start(p, tokens)
    parts = []
    for tok in tokens:
        if tok[0] == "g":
            u = b.mul(u, tok[1])
            continue
        if tok[2] != 1:
            raise DomainError("hnn_normal_form takes positive words; use britton_normal_form")
        s = p.stable[tok[1]]
        g, h = s.decompose(u)
        parts.append((g, tok[1], 1))
        u = s.rho(h)
    return NormalForm(tuple(parts), u)


def britton_normal_form(p: HNNPresentation, word) -> NormalForm:
    """Britton normal form relative to the transversals T_i and T_i' of rho_i(H_i)."""
    for s in p.stable:
        if not s.injective:
            raise NotCancellativeError(f"rho for {s.name} is not injective")
    tokens = parse_mixed(p, word) if isinstance(word, str) else list(word)
    b = p.group
    u = _start(p, tokens)
    parts: list = []
    for tok in tokens:
        if tok[0] == "g":
            u = b.mul(u, tok[1])
            continue
        _, i, e = tok
        s = p.stable[i]
        if e == 1:
            g, h = s.decompose(u)
            if b.is_identity(g) and parts and parts[-1][1:] == (i, -1):
                u = b.mul(parts.pop()[0], s.rho(h))
            else:
                parts.append((g, i, 1))
                u = s.rho(h)
        else:
            g, k = s.decompose_image(u)
            if b.is_identity(g) and parts and parts[-1][1:] == (i, 1):
                u = b.mul(parts.pop()[0], s.rho_inv(k))
            else:
                parts.append((g, i, -1))
                u = s.rho_inv(k)
    return NormalForm(tuple(parts), u)


# -- presentation files

_KV = re.compile(r"\s(?=[A-Za-z_]+=)")


def _split_kv(line: str) -> tuple[str, dict[str, str]]:
    first, _, rest = line.strip().partition(" ")
    out = {}
    for chunk in _KV.split(" " + rest):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ParseError(f"expected key=value, got {chunk!r}")
        k, v = chunk.split("=", 1)
        out[k] = v.strip()
    return first, out


def _elems(b, text: str):
    return [b.parse(t.strip()) for t in text.split(",") if t.strip()]


def parse_presentation(text: str, base: Path | None = None) -> HNNPresentation:
    sec = read_sections(text)
    if "group" not in sec or "stable" not in sec or len(sec["group"]) != 1:
        raise ParseError("presentation needs one [group] line and a [stable] section")
    gline = sec["group"][0]
    kind, kv = _split_kv(gline)
    gens: list[str] = []
    rels: list[str] = []
    if kind == "zk":
        if kv.get("k", "1") != "1":
            raise UnsupportedError("only the rank one case zk k=1 is supported")
        b = ZBackend((), (), kv.get("gen", "a"))
        gens = [b.gen]
    elif kind.startswith("table="):
        path = Path(kind[6:])
        if base is not None and not path.is_absolute():
            path = base / path
        b = TableBackend(parse_groupoid(path.read_text()), {}, {}, vertex="v")
    elif kind.startswith("automaton="):
        from .automaton import load_automaton
        name = kind.split("=", 1)[1]
        cand = base / name if base is not None else None
        aut = load_automaton(str(cand) if cand is not None and cand.exists() else name)
        sys = ActionSystem.from_automaton(aut, "table", depth=int(kv.get("depth", 6)))
        b = sys.backend
        gens, rels = list(aut.states), sys.group_relations()
    else:
        raise ParseError(f"unknown group line {gline!r}")
    stable = []
    for line in sec["stable"]:
        name, kv = _split_kv(line)
        try:
            if isinstance(b, ZBackend):
                (n,) = _elems(b, kv["subgroup"])
                lhs, rhs = kv["rho"].split("->")
                if b.parse(lhs) != n:
                    raise ParseError("rho must be given on the subgroup generator")
                k = b.parse(rhs)
                if n < 0 or k < 0:
                    raise UnsupportedError("use a positive subgroup generator and image")
                T = _elems(b, kv["transversal"]) if "transversal" in kv else None
                stable.append(CyclicStable(name, n, k, T, kv.get("letter"), b.vertex))
            else:
                H = _elems(b, kv["subgroup"])
                rho = {}
                for pair in kv["rho"].split(","):
                    lhs, rhs = pair.split("->")
                    rho[b.parse(lhs.strip())] = b.parse(rhs.strip())
                for h in H:
                    if b.is_identity(h):
                        rho.setdefault(h, h)
                T = _elems(b, kv["transversal"]) if "transversal" in kv else None
                T2 = _elems(b, kv["image_transversal"]) if "image_transversal" in kv else None
                stable.append(FiniteStable(name, b, H, rho, T, T2, kv.get("letter")))
        except KeyError as e:
            raise ParseError(f"stable letter {name} is missing {e.args[0]}=") from None
    p = HNNPresentation(b, stable, gens, rels)
    p.source = gline
    return p


def load_presentation(path_or_name: str) -> HNNPresentation:
    path = Path(path_or_name)
    if path.exists():
        return parse_presentation(path.read_text(encoding="utf-8"), path.parent)
    from importlib import resources
    res = resources.files("reeskit.data") / f"{path_or_name.removesuffix('.hnn')}.hnn"
    if not res.is_file():
        raise ParseError(f"no presentation file or builtin named {path_or_name!r}")
    return parse_presentation(res.read_text(encoding="utf-8"))
