"""The numba kernels agree with the numpy fallback."""
import os
import subprocess
import sys

import numpy as np
import pytest

from reeskit import _kernels
from reeskit.automaton import load_automaton
from reeskit.engine import WordSpace
from reeskit.rook import symmetric_inverse_monoid

needs_numba = pytest.mark.skipif(_kernels._load() is False, reason="numba not installed")


def _both(fn, *args):
    return fn(*args, use_numba=True), fn(*args, use_numba=False)


@needs_numba
@pytest.mark.parametrize("name,tokens", [
    ("adding", ["a"] * 5), ("grigorchuk", ["a", "b", "a", "c", "d"]),
    ("sierpinski", ["s", "r", "r"]), ("typed-acyclic", ["g1"]), ("bs3", ["a", "b", "c"]),
])
def test_act_words_agree(name, tokens):
    aut = load_automaton(name)
    comp = aut.compiled
    for inverse in (False, True):
        toks = [(t, -1 if inverse else 1) for t in tokens]
        g = aut.word(toks, reduce=False)
        arr = WordSpace(aut, g.domain, 6).array
        if not len(arr):
            continue
        codes = np.array([comp["code"](t) for t in toks])
        (r1, s1), (r2, s2) = _both(_kernels.act_words, comp["out"], comp["rest"], comp["rest_len"],
                                   comp["inv_of"], codes, arr)
        assert np.array_equal(r1, r2) and np.array_equal(s1, s2)


@needs_numba
def test_act_overflow_status_agrees():
    aut = load_automaton("adding")
    comp = aut.compiled
    arr = np.full((1, 40), 1, dtype=np.int64)  # yyy...y keeps carrying a
    codes = np.zeros(3, dtype=np.int64)
    (r1, s1), (r2, s2) = _both(_kernels.act_words, comp["out"], comp["rest"], comp["rest_len"],
                               comp["inv_of"], codes, arr)
    assert np.array_equal(s1, s2)


@needs_numba
def test_associativity_kernel_agrees():
    S = symmetric_inverse_monoid(3)
    t = np.array(S.t)
    assert _kernels._load()["assoc"](t) == _kernels._assoc_numpy(t) == (-1, -1, -1)
    rnd = np.random.default_rng(0)
    for _ in range(20):
        bad = t.copy()
        i, j = rnd.integers(0, len(S), 2)
        bad[i, j] = (bad[i, j] + 1) % len(S)
        a = _kernels._load()["assoc"](bad)
        b = _kernels._assoc_numpy(bad)
        assert (a[0] < 0) == (b[0] < 0)


@needs_numba
def test_rook_kernel_agrees():
    S = symmetric_inverse_monoid(2)
    J = S.join_table_with_zero
    rnd = np.random.default_rng(1)
    for _ in range(200):
        A = rnd.integers(0, len(S), (3, 3))
        B = rnd.integers(0, len(S), (3, 3))
        (c1, b1), (c2, b2) = _both(_kernels.rook_multiply, S.t, J, A, B, S.z)
        assert b1 == b2
        if b1 is None:
            assert np.array_equal(c1, c2)


def test_env_flag_selects_numpy():
    code = "from reeskit import _kernels; print(_kernels.backend())"
    env = dict(os.environ, REESKIT_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_path_end_to_end():
    code = ("from reeskit.automaton import load_automaton; from reeskit.engine import verify_axioms;"
            "print(verify_axioms(load_automaton('sierpinski'), 4))")
    env = dict(os.environ, REESKIT_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "OK: axioms (SS1)-(SS8) hold to depth 4"
