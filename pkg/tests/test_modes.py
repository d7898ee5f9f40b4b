import pytest

from algomodes.combinators import comp_predicate, constant, p_seq, rewriting
from algomodes.corpus import dfa_even0, fixed_corpus, t_even, t_loop, tm_even0_decider
from algomodes.dovetail import padded_total, schedule_cost
from algomodes.modes import (
    Acceptance, BoundedDomain, ModeVerdict, accepted_set, accepts, codecides, computable_set,
    decides, enumerates, verify, weakly_decides,
)
from algomodes.models import dfa_complement
from algomodes.theorems import codecider_from_decider, weak_decider_from_decider

B = 10_000
D8 = BoundedDomain.of("01", 8)
U6 = BoundedDomain.of("1", 6)
EVEN0 = frozenset(w for w in D8 if w.count("0") % 2 == 0)


def test_domain_size():
    assert len(D8) == 511 == len(D8.words())
    assert len(BoundedDomain.of("abc", 3)) == 1 + 3 + 9 + 27
    assert "0101" in D8 and "2" not in D8


def test_computable_set_examples():
    assert computable_set(constant(None), D8, B) == frozenset()
    assert computable_set(rewriting(), D8, B) == frozenset(D8)
    assert computable_set(t_even(), U6, B) == {"", "11", "1111", "111111"}


def test_enumerates_examples():
    assert enumerates(rewriting(), set(D8), D8, B).holds
    v = enumerates(t_even(), {"", "11", "1111", "111111"}, U6, B)
    assert not v.holds and v.witness[0] == "1"
    target = {"", "11", "1111", "111111"}
    assert enumerates(padded_total(t_even(), 7), target, BoundedDomain.of("1", 30), schedule_cost(7)).holds


def test_accepts_examples():
    assert all(accepts(rewriting(), u, B) is Acceptance.ACCEPTED for u in D8)
    assert all(accepts(t_loop(), u, b) is Acceptance.NOT_WITHIN_BUDGET for u in ("", "01") for b in (0, 10, B))
    w = weak_decider_from_decider(dfa_even0())
    assert accepted_set(w, D8, B) == EVEN0


def test_decision_modes():
    assert weakly_decides(constant("1"), set(D8), D8, B).holds
    assert decides(dfa_even0(), EVEN0, D8, B).holds
    assert decides(tm_even0_decider(), EVEN0, D8, B).holds
    assert decides(dfa_complement(dfa_even0()), set(D8) - EVEN0, D8, B).holds


def test_failing_verdict_has_witness():
    v = decides(rewriting(), EVEN0, D8, B)
    assert not v.holds and v.witness[0] == ""
    assert v.line().startswith("decide\tfalse\tε:")
    with pytest.raises(ValueError):
        ModeVerdict("decide", False)


def test_codecide_is_weak_decide_of_the_complement():
    for m in fixed_corpus():
        d = BoundedDomain.of(m.input_alphabet, 4)
        for X in (set(), {""}, set(d), {w for w in d if len(w) % 2}):
            assert codecides(m, X, d, 500).holds == weakly_decides(m, set(d) - X, d, 500).holds


def test_decider_filtered_to_weak_decider():
    d = tm_even0_decider()
    assert decides(d, EVEN0, D8, B).holds
    assert weakly_decides(p_seq(constant("1"), comp_predicate("1"), d), EVEN0, D8, B).holds
    assert codecides(codecider_from_decider(d), EVEN0, D8, B).holds


def test_verdicts_stay_true_with_more_budget():
    w = weak_decider_from_decider(dfa_even0())
    for b in (40, 200, B):
        assert weakly_decides(w, EVEN0, D8, b).holds


def test_verify_dispatch():
    assert verify("accept", rewriting(), set(D8), D8, B).holds
    with pytest.raises(ValueError):
        verify("guess", rewriting(), set(), D8, B)
