import subprocess
import sys

import pytest

from algomodes.amd import AmdError, load_amd, parse_amd, save_amd, serialize_amd
from algomodes.cli import main
from algomodes.combinators import comp_predicate, constant, p_seq, rewriting
from algomodes.core import run
from algomodes.corpus import (
    dfa_all, dfa_even0, itm_alternating, nfa_end01, pda_anbn, pda_even0, t_double, t_even, t_odd,
    tm_anbn_decider,
)
from algomodes.theorems import bounded, Poly
from algomodes.dovetail import stream_match

MINIMAL_DFA = """model: dfa
states: q
input_alphabet: 0 1
start: q
accept: q
transitions:
  q 0 -> q
  q 1 -> q
"""


@pytest.mark.parametrize("make", [t_double, dfa_even0, nfa_end01, pda_anbn, pda_even0, itm_alternating,
                                  rewriting, tm_anbn_decider, lambda: constant(None)])
def test_round_trip(make):
    m = make()
    text = serialize_amd(m)
    back = parse_amd(text)
    assert back == m and back.name == m.name
    assert serialize_amd(back) == text


def test_minimal_document():
    m = parse_amd(MINIMAL_DFA)
    assert m.model == "dfa" and run(m, "0110", 10).word == "1"


def test_undeclared_state_names_line():
    bad = MINIMAL_DFA.replace("q 1 -> q", "q 1 -> q9")
    with pytest.raises(AmdError, match="q9") as e:
        parse_amd(bad)
    assert e.value.line == 8 and e.value.col == 10


@pytest.mark.parametrize("text, needle", [
    (MINIMAL_DFA.replace("model: dfa", "model: lba"), "unknown model"),
    (MINIMAL_DFA.replace("q 1 -> q", "q 0 -> q"), "two transitions"),
    (MINIMAL_DFA.replace("start: q\n", ""), "start"),
    (MINIMAL_DFA.replace("accept: q", "accept: q\ncolour: red"), "unknown key"),
    (MINIMAL_DFA.replace("q 1 -> q", "q 2 -> q"), "undeclared symbol"),
    (MINIMAL_DFA.replace("q 1 -> q", "q 1 q"), "->"),
])
def test_parse_errors(text, needle):
    with pytest.raises(AmdError, match=needle) as e:
        parse_amd(text)
    assert e.value.line >= 1


def test_corpus_t_double_file_runs_like_the_oracle(tmp_path):
    save_amd(t_double(), tmp_path / "t.amd")
    m = load_amd(tmp_path / "t.amd")
    r = run(m, "11", 500)
    assert (r.word, r.steps_used) == ("1111", 18)


def test_composite_files(tmp_path):
    for m in (p_seq(rewriting(), comp_predicate("1"), constant("1")), stream_match(t_even(), 8),
              bounded(dfa_even0(), Poly((16, 0, 4)), Poly((2, 1)))):
        save_amd(m, tmp_path / "c.amd")
        assert load_amd(tmp_path / "c.amd") == m


def cli(*args, capsys):
    code = main([str(a) for a in args])
    return code, capsys.readouterr().out


@pytest.fixture
def files(tmp_path):
    for name, m in {"double": t_double(), "even": t_even(), "odd": t_odd(), "rw": rewriting(),
                    "c1": constant("1"), "is1": comp_predicate("1"), "dfa": dfa_even0(),
                    "all": dfa_all(), "nfa": nfa_end01()}.items():
        save_amd(m, tmp_path / f"{name}.amd")
    (tmp_path / "even.txt").write_text("eps\n11\n1111\n111111\n11111111\n")
    (tmp_path / "all.txt").write_text("@all\n")
    return tmp_path


def test_cli_run(files, capsys):
    assert cli("run", files / "double.amd", "11", capsys=capsys) == (0, "produced\t1111\tsteps=18\n")
    code, out = cli("run", files / "even.amd", "1", "--budget", "30", capsys=capsys)
    assert code == 1 and out.startswith("exhausted")
    assert cli("run", files / "double.amd", "eps", capsys=capsys)[0] == 0


def test_cli_enumerate(files, capsys):
    assert cli("enumerate", files / "rw.amd", "--rounds", "3", capsys=capsys) == (0, "*0**0*1*\n")
    code, out = cli("enumerate", files / "rw.amd", "--rounds", "2", "--verbose", capsys=capsys)
    assert out.splitlines() == ["2\t1\t1\t", "2\t2\t2\t0"]


def test_cli_verify(files, capsys):
    assert cli("verify", "--mode", "accept", files / "even.amd", "--set", files / "even.txt",
               capsys=capsys) == (0, "accept\ttrue\t\n")
    code, out = cli("verify", "--mode", "decide", files / "even.amd", "--set", files / "even.txt",
                    capsys=capsys)
    assert code == 1 and out.startswith("decide\tfalse\t")
    assert cli("verify", "--mode", "compute", files / "rw.amd", "--set", files / "all.txt",
               "--maxlen", "4", capsys=capsys)[0] == 0


def test_cli_compose_and_transform(files, capsys):
    out_path = files / "sub" / "c.amd"
    out_path.parent.mkdir()
    code, _ = cli("compose", "p_seq", files / "c1.amd", files / "rw.amd", files / "is1.amd", "-o", out_path,
                  capsys=capsys)
    assert code == 0 and run(load_amd(out_path), "1", 100).word == "1"
    code, _ = cli("transform", "--rule", "thm2.3", files / "even.amd", files / "odd.amd",
                  "-o", files / "d.amd", capsys=capsys)
    assert code == 0
    assert cli("verify", "--mode", "decide", files / "d.amd", "--set", files / "even.txt",
               capsys=capsys)[0] == 0
    assert cli("transform", "--rule", "nope", files / "even.amd", "-o", files / "x.amd", capsys=capsys)[0] == 2
    assert cli("transform", "--rule", "prop2.8", files / "even.amd", "-o", files / "x.amd",
               capsys=capsys)[0] == 2


def test_cli_equiv(files, capsys):
    cli("transform", "--rule", "determinize", files / "nfa.amd", "-o", files / "det.amd", capsys=capsys)
    assert cli("equiv", files / "nfa.amd", files / "det.amd", capsys=capsys)[0] == 0
    assert cli("equiv", "--exact-dfa", files / "dfa.amd", files / "all.amd", capsys=capsys) == (1, "different\t0\n")


def test_cli_power(files, capsys, tmp_path):
    cls = tmp_path / "pda"
    cls.mkdir()
    save_amd(pda_anbn(), cls / "anbn.amd")
    (cls / "class.txt").write_text("name: PDA\nmodels: pda\nproduces_output: no\n")
    fa = tmp_path / "dfa"
    fa.mkdir()
    save_amd(dfa_all("ab"), fa / "all.amd")
    (fa / "class.txt").write_text("name: DFA\nmodels: dfa\nproduces_output: no\ndfa_search_states: 6\n")
    (tmp_path / "bat.txt").write_text("anbn: eps ab aabb aaabbb aaaabbbb\n")
    code, out = cli("power", cls, tmp_path / "bat.txt", "--alphabet", "ab", "--against", fa, capsys=capsys)
    assert code == 0
    assert "anbn\t0\t1\t1\t1\t1" in out
    assert "compare\tacceptable\tPDA >= DFA\twitness=anbn" in out


def test_usage_errors_exit_2(files, capsys):
    assert cli("run", files / "missing.amd", "1", capsys=capsys)[0] == 2
    bad = files / "bad.amd"
    bad.write_text(MINIMAL_DFA.replace("q 1 -> q", "q 1 -> q9"))
    assert main(["run", str(bad), "1"]) == 2
    assert "8:10: undeclared state 'q9'" in capsys.readouterr().err
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "algomodes", "run", str(files / "double.amd"), "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "produced\t11\tsteps=8\n"
