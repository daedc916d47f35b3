"""Command line goldens, exit codes and determinism."""
import subprocess
import sys

import pytest

from reeskit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.rstrip("\n"), out.err


GOLDENS = [
    (["mul", "--automaton", "sierpinski.aut", "--left", "L|r s r", "--right", "RTL|s"], "LLTR|r s r s"),
    (["kgroup", "--builtin", "Cuntz:3"], "Z/2"),
    (["verify", "--automaton", "adding.aut", "--depth", "4"], "OK: axioms (SS1)-(SS8) hold to depth 4"),
    (["orbits", "--automaton", "carpet"], "{L1 L2 R1 R2} {T S1 S2 B}"),
    (["cancellative", "--automaton", "grigorchuk"], "false (0, b, c)"),
    (["cancellative", "--automaton", "adding"], "true"),
    (["symmetric", "--automaton", "adding"], "false (x, 1, a)"),
    (["symmetric", "--automaton", "sierpinski"], "true"),
    (["wreath", "--automaton", "grigorchuk", "--element", "b"], "b = (id; (a, c))"),
    (["act", "--automaton", "adding", "--element", "a", "--word", "yy"], "xx"),
    (["restrict", "--automaton", "adding", "--element", "a", "--word", "yy"], "a"),
    (["hnn-presentation", "--automaton", "cantor"], "<s, t | s s = 1>"),
    (["hnn-presentation", "--automaton", "adding"], "<a, t | a^2 t = t a>"),
    (["nf-hnn", "--presentation", "bs12", "--word", "a^5 t a^3"], "a t a^5"),
    (["nf-britton", "--presentation", "bs12", "--word", "a t^-1 a^4 t"], "a^3"),
    (["ais", "mul", "--automaton", "P3", "--left", "[x1|1, x2]", "--right", "[x2 x1|1, x3]"], "[x1 x1|1, x3]"),
    (["ais", "inv", "--automaton", "sierpinski", "--element", "[L|s, T]"], "[T|s, L]"),
    (["ais", "gauge", "--automaton", "P2", "--element", "[x1 x2|1, x1]"], "false"),
    (["kgroup", "--builtin", "Bn:3"], "Z^3"),
    (["kgroup", "--builtin", "In:4"], "Z"),
]


@pytest.mark.parametrize("argv,expected", GOLDENS, ids=[" ".join(g[0][:2]) for g in GOLDENS])
def test_goldens(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == expected


def test_lines_format(capsys):
    code, out, _ = run(capsys, "kgroup", "--builtin", "In:2", "--format", "lines")
    assert code == 0
    assert out.splitlines() == ["generators: [12] [-2] [0]", "identity: [0]", "[-2] + [-2] = [12]", "K: Z"]
    code, out, _ = run(capsys, "--format", "lines", "orbits", "--automaton", "carpet")
    assert out.splitlines() == ["L1 L2 R1 R2", "T S1 S2 B"]


def test_ck_graph_file(capsys, tmp_path):
    f = tmp_path / "g.graph"
    f.write_text("[vertices]\na b\n[edges]\ne1 range=a domain=b\ne2 range=b domain=a\ne3 range=b domain=b\n")
    assert run(capsys, "kgroup", "--ck", str(f))[:2] == (0, "0")


def test_trace_command(capsys, tmp_path):
    f = tmp_path / "t.trace"
    f.write_text("12 1\n21 0\n-1 0\n-2 1/2\n1- 1/2\n2- 0\n0 0\n")
    assert run(capsys, "trace", "--builtin", "In:2", "--trace", str(f))[:2] == (0, "[12]=1 [-2]=1/2")
    f.write_text("12 1\n21 0\n-1 0\n-2 1/3\n1- 2/3\n2- 0\n0 0\n")
    code, out, _ = run(capsys, "trace", "--builtin", "In:2", "--trace", str(f))
    assert code == 1 and out.startswith("FAIL:")


@pytest.mark.parametrize("argv", [
    ["verify", "--automaton", "nosuch"],
    ["mul", "--automaton", "sierpinski", "--left", "L|q", "--right", "T|s"],
    ["nf-hnn", "--presentation", "nosuch", "--word", "t"],
    ["kgroup", "--builtin", "Cuntz:x"],
    ["ais", "mul", "--automaton", "P2", "--left", "[x1|1, x1]"],
])
def test_parse_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("parse error")


def test_domain_error_exit_1(capsys, tmp_path):
    bad = tmp_path / "broken.aut"
    bad.write_text("[vertices]\nv\n[alphabet]\nx range=v domain=v\ny range=v domain=v\n"
                   "[states]\na\n[transitions]\na x -> y ; 1\na y -> x ; 1\n")
    assert run(capsys, "verify", "--automaton", str(bad), "--depth", "3")[0] == 0
    code, _, err = run(capsys, "hnn-presentation", "--automaton", "grigorchuk")
    assert code == 1 and err.startswith("error")


def test_failed_verify_exit_1(capsys, tmp_path):
    bad = tmp_path / "broken.aut"
    bad.write_text("[vertices]\nv\n[alphabet]\nx range=v domain=v\ny range=v domain=v\n"
                   "[states]\na\n[transitions]\na x -> y ; 1\na y -> x ; 1\n[relations]\n|a a = |\n"
                   "|a * y| = x|a\n")
    code, out, _ = run(capsys, "verify", "--automaton", str(bad), "--depth", "3")
    assert code == 1 and out.startswith("FAIL:")


def test_deterministic_subprocess():
    argv = [sys.executable, "-m", "reeskit.cli", "hnn-presentation", "--automaton", "carpet"]
    outs = {subprocess.run(argv, capture_output=True, text=True, check=True).stdout for _ in range(2)}
    assert len(outs) == 1
    assert outs.pop().strip() == "<s, r, t1, t2 | s s = 1, r r r r = 1, s r s = r r r, s r t1 = t1 s r, s t2 = t2 s>"
