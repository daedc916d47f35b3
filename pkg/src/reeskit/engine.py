"""The action/restriction recursion and everything computed from it."""
from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from . import _kernels
from .automaton import Automaton, GroupoidWord, Token, format_tokens, free_reduce
from .errors import (CapExceeded, CompositionError, ParseError, PartialActionError,
                     UnsupportedError)
from .graph import Word
from .groupoid import FiniteGroupoid


# -- single words

def run(aut: Automaton, tokens: tuple[Token, ...], letters) -> tuple[tuple[str, ...], tuple[Token, ...]]:
    """(g.w, g|_w) for a token word g, letter by letter."""
    out = []
    cur = tuple(tokens)
    for x in letters:
        parts = []
        for t in reversed(cur):
            x, rest = aut.step(t, x)
            parts.append(rest)
        out.append(x)
        cur = free_reduce(tok for part in reversed(parts) for tok in part)
    return tuple(out), cur


def _check_typing(g: GroupoidWord, w: Word):
    if g.domain != w.range:
        raise CompositionError(f"{g} has domain {g.domain} but the word has range {w.range}")


def act(aut: Automaton, g: GroupoidWord, w: Word) -> Word:
    _check_typing(g, w)
    out, _ = run(aut, g.tokens, w.letters)
    if not out:
        return aut.graph.empty(g.range)
    return aut.graph.word(out)


def restrict(aut: Automaton, g: GroupoidWord, w: Word) -> GroupoidWord:
    _check_typing(g, w)
    _, rest = run(aut, g.tokens, w.letters)
    return aut.word(rest, anchor=w.domain)


def wreath_recursion(aut: Automaton, g: GroupoidWord):
    """(images of the letters in order, restrictions at each letter)."""
    if not aut.one_vertex:
        raise UnsupportedError("wreath recursion is defined for one-vertex automata only")
    graph = aut.graph
    perm, rests = [], []
    for x in graph.letters:
        w = graph.word((x,))
        perm.append(act(aut, g, w).letters[0])
        rests.append(restrict(aut, g, w))
    return tuple(perm), tuple(rests)


def format_wreath(aut: Automaton, g: GroupoidWord) -> str:
    perm, rests = wreath_recursion(aut, g)
    letters = aut.graph.letters
    moved = [f"{x}->{y}" for x, y in zip(letters, perm) if x != y]
    p = "id" if not moved else " ".join(moved)
    return f"{g} = ({p}; ({', '.join(str(r) for r in rests)}))"


# -- batches of words

class WordSpace:
    """All words with a given range vertex up to a length, as int arrays."""

    def __init__(self, aut: Automaton, vertex: str, depth: int, min_len: int = 1):
        graph = aut.graph
        self.words = graph.words(vertex, depth, min_len)
        lidx = aut.compiled["lidx"]
        self.depth = depth
        arr = np.full((len(self.words), max(depth, 1)), -1, dtype=np.int64)
        for i, w in enumerate(self.words):
            arr[i, :len(w)] = [lidx[x] for x in w]
        self.array = arr
        self.base = len(graph.letters) + 1
        if self.base ** max(depth, 1) >= 2 ** 62:
            raise UnsupportedError("depth too large for integer word keys")
        self.powers = self.base ** np.arange(max(depth, 1), dtype=np.int64)
        keys = self.keys(arr)
        self.order = np.argsort(keys)
        self.sorted_keys = keys[self.order]

    def keys(self, arr: np.ndarray) -> np.ndarray:
        return (arr + 1) @ self.powers

    def index_of(self, arr: np.ndarray, status: np.ndarray) -> np.ndarray:
        keys = self.keys(arr)
        pos = np.searchsorted(self.sorted_keys, keys)
        pos = np.clip(pos, 0, len(self.sorted_keys) - 1)
        found = self.sorted_keys[pos] == keys if len(keys) else np.zeros(0, bool)
        idx = np.where(found & (status == 0), self.order[pos], -1)
        return idx


def _space(aut: Automaton, vertex: str, depth: int) -> WordSpace:
    cache = aut.__dict__.setdefault("_spaces", {})
    key = (vertex, depth)
    if key not in cache:
        cache[key] = WordSpace(aut, vertex, depth)
    return cache[key]


def act_batch(aut: Automaton, tokens, arr: np.ndarray, reduce: bool = True):
    comp = aut.compiled
    code = comp["code"]
    toks = free_reduce(tokens) if reduce else tuple(tokens)
    g = np.array([code(t) for t in toks], dtype=np.int64)
    if g.size == 0:
        return arr.copy(), np.zeros(arr.shape[0], dtype=np.int64)
    res, status = _kernels.act_words(comp["out"], comp["rest"], comp["rest_len"], comp["inv_of"], g, arr)
    if (status == _kernels.OVERFLOW).any():
        raise UnsupportedError("restriction words grew past the kernel buffer")
    return res, status


def signature(aut: Automaton, g: GroupoidWord, depth: int) -> np.ndarray:
    """Index map from words at d(g) to words at r(g), lengths 1..depth; -1 if undefined."""
    src = _space(aut, g.domain, depth)
    dst = _space(aut, g.range, depth)
    if not src.words:
        return np.zeros(0, dtype=np.int64)
    res, status = act_batch(aut, g.tokens, src.array)
    return dst.index_of(res, status)


def equivalent_states(aut: Automaton, g: GroupoidWord, h: GroupoidWord, depth: int,
                      other: Automaton | None = None) -> bool:
    """g ~ h up to words of length `depth` (h read in `other` if given)."""
    other = other or aut
    if (g.domain, g.range) != (h.domain, h.range):
        return False
    sg = signature(aut, g, depth)
    sh = signature(other, h, depth)
    if other is not aut:
        # index spaces coincide when the graphs agree
        if aut.graph.edges != other.graph.edges:
            return False
    return bool(np.array_equal(sg, sh))


def same_automaton_action(a: Automaton, b: Automaton, depth: int) -> bool:
    """Every state of `a` acts like the same-named state of `b` to the given depth."""
    if a.states != b.states or a.graph.edges != b.graph.edges:
        return False
    for q in a.states:
        ga, gb = a.word(((q, 1),)), b.word(((q, 1),))
        if not equivalent_states(a, ga, gb, depth, other=b):
            return False
    return True


# -- automaton groupoid

def enumerate_groupoid(aut: Automaton, depth: int, cap: int = 1000,
                       check_stable: bool = False) -> FiniteGroupoid:
    """Closure of the states and their inverses modulo depth-bounded equivalence."""
    if not aut.invertible:
        raise UnsupportedError("automaton is not invertible")
    verts = aut.graph.vertices
    gens = [(q, 1) for q in aut.states] + [(q, -1) for q in aut.states]
    gen_sig = {t: signature(aut, aut.word((t,)), depth) for t in gens}
    reps: list[tuple[tuple[Token, ...], str, str, np.ndarray]] = []
    seen: dict[tuple, int] = {}

    def add(tokens, d, r, sig):
        key = (d, r, sig.tobytes())
        if key in seen:
            return None
        if len(reps) >= cap:
            raise CapExceeded(f"more than {cap} classes at depth {depth}")
        seen[key] = len(reps)
        reps.append((tokens, d, r, sig))
        return len(reps) - 1

    frontier = []
    for v in verts:
        n = len(_space(aut, v, depth).words)
        i = add((), v, v, np.arange(n, dtype=np.int64))
        frontier.append(i)
    while frontier:
        nxt = []
        for i in frontier:
            toks, d, r, sig = reps[i]
            for t in gens:
                if aut.tok_ran(t) != d:
                    continue
                gs = gen_sig[t]
                new_sig = np.where(gs >= 0, sig[np.clip(gs, 0, None)], -1) if gs.size else gs
                j = add(free_reduce(toks + (t,)), aut.tok_dom(t), r, new_sig)
                if j is not None:
                    nxt.append(j)
        frontier = nxt

    def name(i):
        toks, d, r, _ = reps[i]
        if not toks:
            return "1" if len(verts) == 1 else f"1_{d}"
        return format_tokens(toks)

    names = [name(i) for i in range(len(reps))]
    n = len(reps)
    table = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        ta, da, ra, sa = reps[a]
        for b in range(n):
            tb, db, rb, sb = reps[b]
            if da != rb:
                continue
            prod = np.where(sb >= 0, sa[np.clip(sb, 0, None)], -1) if sb.size else sb
            table[a, b] = seen[(db, ra, prod.tobytes())]
    stable = None
    if check_stable:
        try:
            stable = len(enumerate_groupoid(aut, depth + 1, cap)) == n
        except CapExceeded:
            stable = False
    identities = names[:len(verts)]
    G = FiniteGroupoid(
        names, identities, table,
        vertex_of={names[i]: verts[i] for i in range(len(verts))},
        approximate=True, depth=depth, stable=stable,
        words={names[i]: reps[i][0] for i in range(n)})

    def classify(g: GroupoidWord):
        key = (g.domain, g.range, signature(aut, g, depth).tobytes())
        i = seen.get(key)
        return None if i is None else names[i]

    G.classify = classify
    return G


# -- element literals `WORD|GTOKENS` and the product used by relations

def parse_pair(aut: Automaton, text: str):
    """Returns (letters, tokens) without typing; '|' separates the parts."""
    text = text.strip()
    if "|" in text:
        w, g = text.split("|", 1)
    else:
        w, g = text, ""
    letters = aut.graph.tokenize(w)
    for x in letters:
        if x not in aut.graph.dom:
            raise ParseError(f"unknown letter {x!r}")
    return letters, aut.parse_tokens(g)


def eval_product(aut: Automaton, text: str):
    """Evaluate `F1 * F2 * ...` to a normal form (letters, tokens)."""
    word: tuple[str, ...] = ()
    g: tuple[Token, ...] = ()
    for factor in text.split("*"):
        y, h = parse_pair(aut, factor)
        out, rest = run(aut, g, y)
        word = word + out
        g = free_reduce(rest + h)
    return word, g


@dataclass
class AxiomReport:
    ok: bool
    depth: int
    multi_vertex: bool = False
    axiom: str | None = None
    detail: str = ""
    checks: dict = field(default_factory=dict)

    def __str__(self) -> str:
        if self.ok:
            names = "(SS1)-(SS8), (C1)-(C3)" if self.multi_vertex else "(SS1)-(SS8)"
            return f"OK: axioms {names} hold to depth {self.depth}"
        return f"FAIL: {self.axiom} {self.detail}"


def _fmt_letters(ls) -> str:
    from .graph import format_letters
    return format_letters(ls) or "ε"


def verify_axioms(aut: Automaton, depth: int) -> AxiomReport:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    multi = not aut.one_vertex
    rep = AxiomReport(True, depth, multi)

    def fail(axiom, detail):
        rep.ok, rep.axiom, rep.detail = False, axiom, detail
        return rep

    graph = aut.graph
    # structure: typing and bijectivity on letters
    for q in aut.states:
        for x in aut.inputs(q):
            if graph.ran[x] != aut.sdom[q]:
                return fail("(C1)", f"{q} reads {x} but r({x}) != d({q})")
            y, w = aut.transitions[(q, x)]
            if graph.ran[y] != aut.sran[q]:
                return fail("(C1)", f"r({q}.{x}) = r({y}) != r({q})")
            try:
                gw = aut.word(w, anchor=graph.dom[x])
            except CompositionError as e:
                return fail("(C2)", f"restriction of {q} at {x}: {e}")
            if gw.domain != graph.dom[x]:
                return fail("(C3)", f"d({q}|_{x}) = {gw.domain} != d({x}) = {graph.dom[x]}")
            if gw.range != graph.dom[y]:
                return fail("(C2)", f"d({q}.{x}) = d({y}) = {graph.dom[y]} != r({q}|_{x}) = {gw.range}")
        outs = aut.outputs(q)
        if len(set(outs)) != len(outs):
            dup = next(y for y in outs if outs.count(y) > 1)
            xs = [x for x in aut.inputs(q) if aut.transitions[(q, x)][0] == dup]
            return fail("(SS2)", f"{q} is not invertible: {q}.{xs[0]} = {q}.{xs[1]} = {dup}, "
                                 f"so ({q}^-1 {q}).{xs[1]} != {xs[1]}")
    ins = {q: set(aut.inputs(q)) for q in aut.states}
    outs = {q: set(aut.outputs(q)) for q in aut.states}
    for q in aut.states:
        if not any(ins[q] == outs[p] for p in aut.states):
            return fail("(partition)", f"no state has output alphabet equal to the input alphabet of {q}")
    rep.checks["structure"] = True

    toks = [(q, e) for q in aut.states for e in (1, -1)]
    spaces = {v: _space(aut, v, depth) for v in graph.vertices}

    # (SS1) identity acts trivially, (SS7) identity restricts to identity
    for v in graph.vertices:
        for w in spaces[v].words[: min(len(spaces[v].words), 64)]:
            out, rest = run(aut, (), w)
            if out != w:
                return fail("(SS1)", f"1.{_fmt_letters(w)} != {_fmt_letters(w)}")
            if rest:
                return fail("(SS7)", f"1|_{_fmt_letters(w)} = {format_tokens(rest)}")
    # (SS3)/(SS5) empty word
    for t in toks:
        out, rest = run(aut, (t,), ())
        if out or rest != (t,):
            return fail("(SS3)", f"{format_tokens((t,))} on the empty word")

    # (SS4) g.(xu) = (g.x)(g|_x . u), batched over all words to depth
    for t in toks:
        sp = spaces[aut.tok_dom(t)]
        if not sp.words:
            continue
        full, st = act_batch(aut, (t,), sp.array)
        if (st == _kernels.UNDEFINED).any():
            i = int(np.argmax(st == _kernels.UNDEFINED))
            return fail("(SS4)", f"{format_tokens((t,))} is undefined on {_fmt_letters(sp.words[i])}")
        lidx = aut.compiled["lidx"]
        first = sp.array[:, 0]
        for x in dict.fromkeys(w[0] for w in sp.words):
            y, rest = aut.step(t, x)
            rows = np.nonzero(first == lidx[x])[0]
            tail = sp.array[rows, 1:]
            if tail.shape[1] == 0:
                continue
            sub, st2 = act_batch(aut, rest, tail)
            if (full[rows, 0] != lidx[y]).any() or not np.array_equal(full[rows, 1:], sub):
                bad = rows[np.argmax((full[rows, 1:] != sub).any(axis=1))]
                return fail("(SS4)", f"{format_tokens((t,))} on {_fmt_letters(sp.words[bad])}")
    rep.checks["SS4"] = True

    # (SS2) (gh).w = g.(h.w) on unreduced products, including g h = g g^-1
    for g in toks:
        for h in toks:
            if aut.tok_dom(g) != aut.tok_ran(h):
                continue
            sp = spaces[aut.tok_dom(h)]
            if not sp.words:
                continue
            both, st = act_batch(aut, (g, h), sp.array, reduce=False)
            mid, st1 = act_batch(aut, (h,), sp.array)
            seq, st2 = act_batch(aut, (g,), mid)
            if not (np.array_equal(both, seq) and np.array_equal(st, np.maximum(st1, st2))):
                i = int(np.argmax((both != seq).any(axis=1) | (st != np.maximum(st1, st2))))
                return fail("(SS2)", f"({format_tokens((g, h))}).{_fmt_letters(sp.words[i])} "
                                     f"!= {format_tokens((g,))}.({format_tokens((h,))}.{_fmt_letters(sp.words[i])})")
            if g[0] == h[0] and g[1] == -h[1]:
                ident = np.array_equal(both, sp.array)
                if not ident:
                    i = int(np.argmax((both != sp.array).any(axis=1)))
                    return fail("(SS2)", f"({format_tokens((g, h))}).{_fmt_letters(sp.words[i])} != "
                                         f"{_fmt_letters(sp.words[i])}")
    rep.checks["SS2"] = True

    # (SS6)/(SS8) on restriction words, syntactically, for short words
    short = min(depth, 3)
    for g in toks:
        for v_words in [spaces[aut.tok_dom(g)].words]:
            for w in v_words:
                if len(w) > short:
                    break
                _, whole = run(aut, (g,), w)
                _, first = run(aut, (g,), w[:1])
                _, then = run(aut, first, w[1:])
                if whole != then:
                    return fail("(SS6)", f"{format_tokens((g,))}|_{_fmt_letters(w)} != "
                                         f"({format_tokens((g,))}|_{w[0]})|_{_fmt_letters(w[1:])}")
        for h in toks:
            if aut.tok_dom(g) != aut.tok_ran(h):
                continue
            for w in spaces[aut.tok_dom(h)].words:
                if len(w) > short:
                    break
                _, lhs = run(aut, (g, h), w)
                hw, hr = run(aut, (h,), w)
                _, gr = run(aut, (g,), hw)
                if lhs != free_reduce(gr + hr):
                    return fail("(SS8)", f"({format_tokens((g, h))})|_{_fmt_letters(w)}")
    rep.checks["SS6"] = rep.checks["SS8"] = True

    # declared relations, compared in the Zappa-Szep product
    for lhs, rhs in aut.relations:
        try:
            lw, lg = eval_product(aut, lhs)
            rw, rg = eval_product(aut, rhs)
        except (PartialActionError, ParseError) as e:
            return fail("(SS2)", f"relation `{lhs} = {rhs}` cannot be evaluated: {e}")
        if lw != rw:
            return fail("(SS2)", f"relation `{lhs} = {rhs}` fails: action gives "
                                 f"{_fmt_letters(lw)}, expected {_fmt_letters(rw)}")
        try:
            anchor = None
            if lw:
                anchor = graph.dom[lw[-1]]
            elif lg:
                anchor = aut.tok_dom(lg[-1])
            elif rg:
                anchor = aut.tok_dom(rg[-1])
            if anchor is None:
                continue
            a = aut.word(lg, anchor=anchor)
            b = aut.word(rg, anchor=anchor)
        except CompositionError as e:
            return fail("(SS8)", f"relation `{lhs} = {rhs}`: {e}")
        if not equivalent_states(aut, a, b, depth):
            return fail("(SS8)", f"relation `{lhs} = {rhs}` fails: restriction gives "
                                 f"{a}, expected {b} (differ within depth {depth})")
    rep.checks["relations"] = len(aut.relations)
    return rep
