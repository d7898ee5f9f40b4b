import random

from hypothesis import given, settings, strategies as st

from algomodes.amd import parse_amd, serialize_amd
from algomodes.combinators import disj_parallel, rewriting, seq_compose
from algomodes.core import Alphabet, is_function, relation_of, run, shortlex_index, shortlex_word
from algomodes.corpus import random_dfa, random_nfa, random_tm
from algomodes.dovetail import bidiagonal_stream, emission_table
from algomodes.models import fa_final_states, itm_run_limit, nfa_to_dfa
from algomodes.modes import BoundedDomain, codecides, weakly_decides
from algomodes.theorems import dfa_equiv_exact, limit_decider

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
alphabets = st.sampled_from(["01", "ab", "1", "abc"])
D4 = BoundedDomain.of("01", 4).words()
fast = settings(max_examples=60, deadline=None, derandomize=True)


def tm(seed):
    return random_tm(random.Random(seed))


@fast
@given(alphabets, st.data())
def test_shortlex_bijection(alpha, data):
    a = Alphabet.of(alpha)
    w = data.draw(st.text(alphabet=alpha, max_size=10))
    assert shortlex_word(shortlex_index(w, a), a) == w
    n = data.draw(st.integers(0, 10 ** 6))
    assert shortlex_index(shortlex_word(n, a), a) == n


@fast
@given(seeds, st.integers(0, 60), st.integers(0, 200), st.text(alphabet="01", max_size=5))
def test_budget_monotone(seed, b, extra, u):
    m = tm(seed)
    r = run(m, u, b)
    assert r.steps_used <= b
    if r.produced:
        r2 = run(m, u, b + extra)
        assert (r2.word, r2.steps_used) == (r.word, r.steps_used)


@fast
@given(seeds, seeds, st.integers(0, 80), st.text(alphabet="01", max_size=4))
def test_composites_budget_monotone(s1, s2, b, u):
    for m in (disj_parallel(tm(s1), tm(s2)), seq_compose(tm(s1), tm(s2))):
        r = run(m, u, b)
        assert r.steps_used <= b
        if r.produced:
            assert run(m, u, b + 50) == r


@fast
@given(seeds)
def test_runs_are_reproducible_and_functional(seed):
    m = tm(seed)
    assert [run(m, u, 40) for u in D4] == [run(m, u, 40) for u in D4]
    assert is_function(relation_of(m, D4, 40))


@fast
@given(seeds)
def test_rewriting_is_an_identity(seed):
    m = tm(seed)
    rel = relation_of(m, D4, 50)
    assert relation_of(seq_compose(m, rewriting()), D4, 200) >= rel
    assert relation_of(seq_compose(rewriting(), m), D4, 200) >= rel


@fast
@given(seeds, seeds, seeds)
def test_seq_compose_associative(s1, s2, s3):
    a, b, c = tm(s1), tm(s2), tm(s3)
    budget = 3000  # stage costs add up the same way on both sides
    left = relation_of(seq_compose(seq_compose(a, b), c), D4, budget)
    right = relation_of(seq_compose(a, seq_compose(b, c)), D4, budget)
    assert left == right


@fast
@given(seeds, seeds, st.integers(1, 40))
def test_disj_parallel_halts_within_twice_the_budget(s1, s2, b):
    a, c = tm(s1), tm(s2)
    race = disj_parallel(a, c)
    for u in D4[:7]:
        if run(a, u, b).produced or run(c, u, b).produced:
            assert run(race, u, 2 * b + 2).produced


@fast
@given(seeds)
def test_determinization_preserves_language(seed):
    n = random_nfa(random.Random(seed))
    d = nfa_to_dfa(n)
    for w in BoundedDomain.of("01", 6):
        assert bool(fa_final_states(n, w) & n.accept) == bool(fa_final_states(d, w) & d.accept)


@fast
@given(seeds, seeds)
def test_exact_equivalence_agrees_with_enumeration(s1, s2):
    a, b = random_dfa(random.Random(s1)), random_dfa(random.Random(s2))
    same, w = dfa_equiv_exact(a, b)
    diffs = [x for x in BoundedDomain.of("01", 10)
             if bool(fa_final_states(a, x) & a.accept) != bool(fa_final_states(b, x) & b.accept)]
    assert same == (not diffs)
    if not same:
        assert w == diffs[0]


@fast
@given(seeds, st.integers(200, 2000))
def test_limit_stabilization_is_monotone(seed, b):
    m = limit_decider(tm(seed))
    for u in D4[:5]:
        lim = itm_run_limit(m, u, b, 100)
        if lim.stable:
            later = itm_run_limit(m, u, b + 500, 100)
            assert later.stable and (later.value, later.stabilized_at) == (lim.value, lim.stabilized_at)


@fast
@given(seeds, st.sets(st.sampled_from(D4)))
def test_codecide_metamorphic(seed, X):
    m = tm(seed)
    assert codecides(m, X, D4, 60).holds == weakly_decides(m, set(D4) - X, D4, 60).holds


@fast
@given(seeds)
def test_amd_round_trip(seed):
    rng = random.Random(seed)
    for m in (random_tm(rng), random_dfa(rng), random_nfa(rng)):
        text = serialize_amd(m)
        assert parse_amd(text) == m and serialize_amd(parse_amd(text)) == text


@settings(max_examples=25, deadline=None, derandomize=True)
@given(seeds, st.integers(2, 18))
def test_emission_fast_path(seed, rounds):
    T = tm(seed)
    assert list(emission_table(T, rounds).emissions) == bidiagonal_stream(T, rounds)
