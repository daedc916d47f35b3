"""HNN presentations, transversal rewriting and Britton normal forms."""
import random

import pytest
from hypothesis import given, strategies as st

from oracles import affine, letters_to_mixed
from reeskit.automaton import load_automaton
from reeskit.errors import DecompositionError, NotCancellativeError, ParseError
from reeskit.hnn import (CyclicStable, britton_normal_form, format_mixed, hnn_normal_form,
                         hnn_presentation, load_presentation, parse_mixed, parse_presentation)
from reeskit.rees import ActionSystem, orbits, stabilizer

BS = load_presentation("bs12")
SIER = load_presentation("sierpinski")


def _system(name):
    return ActionSystem.from_automaton(load_automaton(name))


def nf(p, w):
    return format_mixed(p, hnn_normal_form(p, w))


def bnf(p, w):
    return format_mixed(p, britton_normal_form(p, w))


# -- presentations

def test_sierpinski_presentation_with_chosen_representative():
    sysm = _system("sierpinski")
    p = hnn_presentation(sysm, {"L": "T"})
    assert p.display() == "<s, r, t | s s = 1, r r r = 1, s r = r r s, s t = t s>"
    (stable,) = p.stable
    assert stable.letter == "T" and len(stable.H) == 2


def test_sierpinski_default_representative_is_conjugate():
    sysm = _system("sierpinski")
    b = sysm.backend
    (st_l,) = hnn_presentation(sysm).stable
    (st_t,) = hnn_presentation(sysm, {"L": "T"}).stable
    assert st_l.letter == "L"
    # r.L = T, so H_T = r H_L r^-1
    r = b.parse("r")
    assert sysm.act(r, sysm.graph.word(("L",))).letters == ("T",)
    assert {b.mul(b.mul(r, h), b.inv(r)) for h in st_l.H} == set(st_t.H)


def test_cantor_presentation():
    p = hnn_presentation(_system("cantor"))
    assert p.display() == "<s, t | s s = 1>"
    assert len(p.stable[0].H) == 1


def test_carpet_presentation():
    sysm = _system("carpet")
    p = hnn_presentation(sysm)
    assert [s.name for s in p.stable] == ["t1", "t2"]
    rels = p.stable_relations()
    assert "s r t1 = t1 s r" in rels and "s t2 = t2 s" in rels


def test_adding_machine_presentation():
    p = hnn_presentation(_system("adding"))
    assert p.display() == "<a, t | a^2 t = t a>"
    assert isinstance(p.stable[0], CyclicStable)


def test_words_backend_unsupported():
    from reeskit.errors import UnsupportedError
    with pytest.raises(UnsupportedError):
        hnn_presentation(_system("grigorchuk"))


# -- normal forms

def test_transversal_rewriting_examples():
    assert nf(SIER, "s t") == "t s"
    assert nf(SIER, "t") == "t"
    assert nf(BS, "a^5 t a^3") == "a t a^5"
    nf_t = hnn_normal_form(SIER, "t")
    assert len(nf_t.parts) == 1 and SIER.group.is_identity(nf_t.parts[0][0])


def test_britton_examples():
    assert bnf(BS, "t^-1 a^2 t") == "a"
    assert bnf(BS, "t t^-1") == "1"
    assert bnf(BS, "a t^-1 a^4 t") == "a^3"


def test_normal_form_idempotent():
    for w in ("a^5 t a^3", "t a t^-1 a^-3 t", "a^-7 t^-1 a t a"):
        once = bnf(BS, w)
        assert bnf(BS, once) == once


def test_non_injective_rho_rejected():
    text = "[group]\nzk k=1 gen=a\n[stable]\nt range=v domain=v subgroup=a^2 rho=a^2->1\n"
    p = parse_presentation(text)
    with pytest.raises(NotCancellativeError):
        britton_normal_form(p, "t")


def test_bad_transversal():
    with pytest.raises(DecompositionError):
        parse_presentation("[group]\nzk k=1 gen=a\n[stable]\n"
                           "t range=v domain=v subgroup=a^2 rho=a^2->a transversal=1,a^2\n")


def test_presentation_file_errors():
    with pytest.raises(ParseError):
        parse_presentation("[stable]\nt subgroup=a\n")
    with pytest.raises(ParseError):
        load_presentation("no-such-presentation")


def test_presentation_text_round_trip():
    text = BS.to_text()
    again = parse_presentation(text)
    assert again.to_text() == text
    assert nf(again, "a^5 t a^3") == "a t a^5"


# -- relation invariance (fuzzed)

def _random_positive(p, rnd, n):
    toks = []
    gens = p.group.generators()
    for _ in range(n):
        if rnd.random() < 0.3:
            toks.append(("t", rnd.randrange(len(p.stable)), 1))
        else:
            toks.append(("g", rnd.choice(gens)))
    return toks


def _apply_relation(p, toks, rnd):
    """Replace one t_i by h^-1 t_i rho_i(h) for a random h in H_i."""
    spots = [k for k, t in enumerate(toks) if t[0] == "t"]
    if not spots:
        return toks
    k = rnd.choice(spots)
    s = p.stable[toks[k][1]]
    b = p.group
    if isinstance(s, CyclicStable):
        h = s.n * rnd.randint(-3, 3)
    else:
        h = rnd.choice(s.H)
    return toks[:k] + [("g", b.inv(h)), toks[k], ("g", s.rho(h))] + toks[k + 1:]


@pytest.mark.parametrize("p", [BS, SIER], ids=["bs12", "sierpinski"])
def test_normal_form_invariant_under_relations(p):
    rnd = random.Random(7)
    b = p.group
    for _ in range(300):
        toks = _random_positive(p, rnd, rnd.randint(1, 8))
        moved = toks
        for _ in range(rnd.randint(1, 3)):
            moved = _apply_relation(p, moved, rnd)
        a, c = hnn_normal_form(p, toks), hnn_normal_form(p, moved)
        assert [(b.key(g), i, e) for g, i, e in a.parts] == [(b.key(g), i, e) for g, i, e in c.parts]
        assert b.eq(a.tail, c.tail)


letters = st.text(alphabet="aAtT", max_size=10)


@given(letters, letters)
def test_britton_matches_affine_oracle(u, v):
    same_nf = bnf(BS, letters_to_mixed(u) or "1") == bnf(BS, letters_to_mixed(v) or "1")
    assert same_nf == (affine(u) == affine(v))


@given(letters)
def test_britton_output_is_equivalent(u):
    out = bnf(BS, letters_to_mixed(u) or "1")
    toks = parse_mixed(BS, out)
    back = ""
    for tok in toks:
        if tok[0] == "g":
            back += ("a" if tok[1] > 0 else "A") * abs(tok[1])
        else:
            back += "t" if tok[2] == 1 else "T"
    assert affine(back) == affine(u)


def test_stabilizer_sizes_match_orbits():
    for name in ("sierpinski", "carpet", "cantor"):
        sysm = _system(name)
        order = len(sysm.backend.elements())
        for orb in orbits(sysm):
            x = sysm.graph.word((orb[0],))
            assert len(orb) * len(stabilizer(sysm, x).elements) == order
