import pytest

from algomodes.combinators import (
    comp_predicate, conj_parallel, constant, disj_parallel, p_conj_parallel, p_disj_parallel,
    p_disj_seq, p_seq, rewriting, seq_compose,
)
from algomodes.core import MachineError, Status, relation_of, run
from algomodes.corpus import t_delay, t_even, t_loop, t_odd, tm_even0_decider
from algomodes.models import make_fa, tm_predicate_from_dfa
from algomodes.modes import BoundedDomain, computable_set, decides, weakly_decides
from algomodes.theorems import weak_decider_from_acceptor

B = 10_000
D3 = BoundedDomain.of("01", 3)
D6 = BoundedDomain.of("01", 6)
U8 = BoundedDomain.of("1", 8)
EVEN_U = {w for w in U8 if len(w) % 2 == 0}


def always(bit, alphabet="01"):
    return constant(bit, alphabet)


def even_length(alphabet="01"):
    rules = [(q, a, "o" if q == "e" else "e") for q in "eo" for a in alphabet]
    return tm_predicate_from_dfa(make_fa(rules, "e", ["e"], alphabet), name="even_len")


def same_relation(m1, m2, d):
    return relation_of(m1, d, B) == relation_of(m2, d, B)


def test_rewriting_and_constant():
    assert run(rewriting(), "101", B).word == "101"
    assert run(rewriting(), "", B).word == ""
    assert run(rewriting("ab"), "aba", B).word == "aba"
    assert all(run(constant("1"), u, B).word == "1" for u in D3)
    assert all(run(constant(None), u, b).status is Status.EXHAUSTED for u in D3 for b in (0, 7, B))
    assert run(constant(""), "11", B).word == ""


def test_seq_compose():
    assert same_relation(seq_compose(tm_even0_decider(), rewriting()), tm_even0_decider(), D6)
    s = seq_compose(constant("1"), t_even())
    assert run(s, "11", B).word == "1"
    assert run(s, "1", B).status is Status.EXHAUSTED
    assert same_relation(seq_compose(rewriting(), rewriting()), rewriting(), D6)
    with pytest.raises(MachineError):
        seq_compose(t_even(), rewriting("01"))


def test_disj_parallel():
    assert run(disj_parallel(constant("x"), constant("y")), "0", B).word == "x"
    assert run(disj_parallel(t_loop(), rewriting()), "01", B).word == "01"
    both = disj_parallel(weak_decider_from_acceptor(t_even()), weak_decider_from_acceptor(t_odd()))
    assert all(run(both, u, B).produced for u in U8)


def test_disj_parallel_halts_within_twice_the_budget():
    for b in (1, 5, 20):
        for k in range(0, 15):
            fast = t_delay(k)
            r = run(fast, "0", b)
            if r.produced:
                assert run(disj_parallel(t_loop(), fast), "0", 2 * b + 2).produced
                assert run(disj_parallel(fast, t_loop()), "0", 2 * b + 2).produced


def test_conj_parallel():
    assert run(conj_parallel(rewriting(), rewriting()), "01", B).word == "01#01"
    assert all(run(conj_parallel(t_loop(), rewriting()), u, 500).status is Status.EXHAUSTED for u in D3)
    assert run(conj_parallel(t_even(), rewriting("1")), "11", B).word == "11#11"


def test_p_seq():
    w = rewriting()
    assert same_relation(p_seq(w, always("1"), tm_even0_decider()),
                         seq_compose(w, tm_even0_decider()), D6)
    assert computable_set(p_seq(w, always("0"), w), D6, B) == frozenset()
    ev = p_seq(w, even_length(), w)
    assert relation_of(ev, D6, B) == {(u, u) for u in D6 if len(u) % 2 == 0}


def test_p_conj_parallel():
    w = rewriting()
    assert same_relation(p_conj_parallel(t_loop(), always("0"), w), w, D3)
    assert computable_set(p_conj_parallel(t_loop(), always("1"), w), D3, 2000) == frozenset()
    wd = tm_even0_decider()
    m = p_conj_parallel(w, comp_predicate("1"), wd)
    expected = {u: (u if u.count("0") % 2 == 0 else "0") for u in D6}
    assert all(run(m, u, B).word == expected[u] for u in D6)


def test_p_disj_parallel():
    a, b = constant("x", "01"), constant("y", "01")
    assert run(p_disj_parallel(a, always("1", "01xy"), b), "0", B).word == "x"
    assert computable_set(p_disj_parallel(a, always("0", "01xy"), b), D3, B) == frozenset()
    fast_bad = t_delay(2, output="0")
    slow_good = t_delay(9, output="1")
    assert run(fast_bad, "", B).steps_used < run(slow_good, "", B).steps_used
    race = p_disj_parallel(fast_bad, comp_predicate("1"), slow_good)
    assert run(race, "", B).word == "1"
    assert run(disj_parallel(fast_bad, slow_good), "", B).word == "0"


def test_p_disj_seq():
    wd = tm_even0_decider()
    assert all(run(p_disj_seq(wd, always("1"), rewriting()), u, B).word == run(wd, u, B).word for u in D6)
    weak = weak_decider_from_acceptor(t_even())
    comp = p_disj_seq(weak, always("0", "1"), rewriting("1"))
    assert computable_set(comp, U8, B) == EVEN_U
    acc = p_disj_seq(weak, always("0", "1"), constant(None, "1"))
    assert {u for u in U8 if run(acc, u, B).produced} == set()
    acc1 = p_disj_seq(weak, comp_predicate("1"), constant(None, "1"))
    assert {u for u in U8 if run(acc1, u, B).produced} == EVEN_U


def test_comp_predicate():
    p = comp_predicate("ab", "ab")
    assert run(p, "ab", B).word == "1"
    assert run(p, "ba", B).word == "0"
    assert run(comp_predicate("", "ab"), "", B).word == "1"
    assert all(run(p, u, B).steps_used == len(u) + 1 for u in BoundedDomain.of("ab", 4))


def test_seq_associativity():
    a, b, c = tm_even0_decider(), rewriting(), seq_compose(rewriting(), rewriting())
    assert same_relation(seq_compose(seq_compose(always("1"), a), b),
                         seq_compose(always("1"), seq_compose(a, b)), D6)
    assert same_relation(seq_compose(seq_compose(a, b), c), seq_compose(a, seq_compose(b, c)), D6)


def test_composites_report_steps_within_budget():
    race = disj_parallel(t_delay(30), t_loop())
    for b in range(0, 80, 7):
        r = run(race, "0", b)
        assert r.steps_used <= b
    assert decides(tm_even0_decider(), {u for u in D6 if u.count("0") % 2 == 0}, D6, B).holds
    assert weakly_decides(weak_decider_from_acceptor(t_even()), EVEN_U, U8, B).holds
