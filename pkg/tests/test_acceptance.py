"""Acceptance checks, one test per criterion; see the summary section of the pytest report."""
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from algomodes.combinators import rewriting
from algomodes.core import Status, run, run_metered, shortlex_word
from algomodes.corpus import (
    dfa_all, dfa_even0, fixed_corpus, halting_battery, language_battery, pda_anbn, random_dfa,
    random_nfa, random_tm,
)
from algomodes.dovetail import (
    bidiagonal_stream, first_inputs, format_emission, padded_total, range_oracle, schedule_cost,
)
from algomodes.models import (
    dfa_complement, dfa_from_words, fa_final_states, itm_run_limit, nfa_to_dfa, tm_predicate_from_dfa,
)
from algomodes.modes import BoundedDomain, accepted_set, accepts_set, computes, decides, indicated_set
from algomodes.theorems import (
    ClassDescriptor, Poly, acceptor_from_weak_decider, compare_power, computer_from_acceptor,
    computer_from_weak_decider, computers_from_decider, decider_from_acceptors, decider_round_trip,
    dfa_equiv_exact, find_dfa, functional_equiv, limit_decider, power_report, resource_bounded_class,
    weak_decider_from_acceptor, weak_decider_from_decider,
)

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).parent / "data" / "schedule_rewriting_golden.tsv"
B = 10 ** 4
ROUNDS = 64


def stream_set(T):
    return {e.output for e in bidiagonal_stream(T, ROUNDS)}


def oracle_set(T):
    return range_oracle(T, first_inputs(T, ROUNDS), ROUNDS)


def enumeration_battery():
    rng = random.Random(7)
    return [random_tm(rng) for _ in range(30)] + fixed_corpus()


@pytest.mark.criterion(1)
def test_dovetail_matches_range_oracle():
    start = time.perf_counter()
    bad = [T.name for T in enumeration_battery() if stream_set(T) != oracle_set(T)]
    elapsed = time.perf_counter() - start
    assert bad == []
    assert elapsed < 10, f"{elapsed:.1f}s"


@pytest.mark.criterion(2)
def test_round_schedule_golden_trace():
    got = "".join(format_emission(e, verbose=True) + "\n" for e in bidiagonal_stream(rewriting(), 10)[:20])
    assert got.encode() == GOLDEN.read_bytes()


@pytest.mark.criterion(3)
def test_padded_total_enumerates():
    checked = 0
    for T in enumeration_battery():
        stream = bidiagonal_stream(T, ROUNDS)
        if not stream:
            continue
        p = padded_total(T, ROUNDS)
        budget = schedule_cost(ROUNDS)
        words = [shortlex_word(k, T.input_alphabet) for k in range(max(50, len(stream)))]
        results = [run(p, u, budget) for u in words]
        assert all(r.status is Status.PRODUCED for r in results[:50]), T.name
        assert {r.word for r in results} == stream_set(T), T.name
        checked += 1
    assert checked > 0


def _battery_round_trips(name, D, domain):
    X = accepted_set(D, domain, B)
    W = weak_decider_from_decider(D)
    yield "computer from weak decider", computes(computer_from_weak_decider(W), X, domain, B).holds
    yield "weak decider from acceptor", indicated_set(weak_decider_from_acceptor(D), domain, B) == X
    yield "computer from acceptor", computes(computer_from_acceptor(D), X, domain, B).holds
    yield "acceptor from weak decider", accepts_set(acceptor_from_weak_decider(W), X, domain, B).holds
    yield "decider round trip via computers", decider_round_trip(D, domain, B).holds
    yield "decider from two acceptors", functional_equiv(D, decider_from_acceptors(D, dfa_complement(D)), "decide", domain, B).holds


@pytest.mark.criterion(4)
def test_mode_round_trips():
    start = time.perf_counter()
    failed = [(name, rule) for name, D, domain in language_battery(8)
              for rule, ok in _battery_round_trips(name, D, domain) if not ok]
    elapsed = time.perf_counter() - start
    assert failed == []
    assert elapsed < 30, f"{elapsed:.1f}s"


@pytest.mark.criterion(5)
def test_condition_failure_counterexamples():
    dom = BoundedDomain.of("01", 4).words()
    three = frozenset({"", "01", "110"})
    d = tm_predicate_from_dfa(dfa_from_words(three, "01"), "dec3")
    assert decides(d, three, dom, B).holds
    binary = ClassDescriptor("TM01", (d,), closures=frozenset({"dra", "c1", "pseq"}),
                             allowed_outputs=frozenset({"0", "1"}))
    row, = power_report(binary, [("three", three)], dom, B).rows
    assert row.flags["decidable"] and not row.flags["computable"]
    # lifting the output restriction restores the implication
    free = ClassDescriptor("TM", binary.members, binary.closures)
    row, = power_report(free, [("three", three)], dom, B).rows
    assert row.flags["decidable"] and row.flags["computable"]

    dom8 = BoundedDomain.of("01", 8).words()
    even0 = accepted_set(dfa_even0(), dom8, B)
    silent = ClassDescriptor("DFA", (dfa_even0(),), models=frozenset({"dfa"}), produces_output=False)
    row, = power_report(silent, [("even0", even0)], dom8, B).rows
    assert row.flags["acceptable"] and not row.flags["computable"]


def _accepts(d, w):
    return bool(fa_final_states(d, w) & d.accept)


@pytest.mark.criterion(6)
def test_equivalence_engines():
    rng = random.Random(11)
    d10 = BoundedDomain.of("01", 10).words()
    pairs = []
    for i in range(50):
        a = random_dfa(rng)
        # every other pair is equivalent by construction
        b = nfa_to_dfa(a) if i % 2 else random_dfa(rng)
        pairs.append((a, b))
    for a, b in pairs:
        same, witness = dfa_equiv_exact(a, b)
        diffs = [w for w in d10 if _accepts(a, w) != _accepts(b, w)]
        assert same == (not diffs)
        assert witness == (diffs[0] if diffs else None)
    assert sum(dfa_equiv_exact(a, b)[0] for a, b in pairs) >= 25

    d8 = BoundedDomain.of("01", 8).words()
    for _ in range(50):
        n = random_nfa(rng)
        d = nfa_to_dfa(n)
        assert d.model == "dfa"
        assert all(_accepts(n, w) == _accepts(d, w) for w in d8)


@pytest.mark.criterion(7)
def test_pda_strictly_above_dfa():
    start = time.perf_counter()
    dom = BoundedDomain.of("ab", 8).words()
    anbn = frozenset("a" * n + "b" * n for n in range(5))
    assert find_dfa(anbn, "ab", 8, 6) is None
    assert accepted_set(pda_anbn(), dom, B) == anbn
    battery = [("anbn", anbn)]
    pda = ClassDescriptor("PDA", (pda_anbn(),), models=frozenset({"pda"}), produces_output=False)
    dfa = ClassDescriptor("DFA", (dfa_all("ab"),), closures=frozenset({"complement"}),
                          models=frozenset({"dfa"}), produces_output=False, dfa_search_states=6)
    c = compare_power(power_report(pda, battery, dom, B), power_report(dfa, battery, dom, B), "acceptable")
    assert c.left_strictly_above and c.only_left == {"anbn"}
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"{elapsed:.1f}s"


@pytest.mark.criterion(8)
def test_limit_decider_on_halting_battery():
    pairs = halting_battery()
    assert len(pairs) == 20 and sum(h for _, _, h in pairs) == 10
    for m, u, halts in pairs:
        lim = itm_run_limit(limit_decider(m), u, B, 10 ** 3)
        assert lim.stable and lim.value == ("1" if halts else "0"), m.name


def _within(machine, domain, steps=None, cells=None):
    for u in domain:
        out, use = run_metered(machine, u, B)
        if steps is not None and out.status is Status.PRODUCED and use.steps > steps(len(u)):
            return False
        if cells is not None and use.cells_visited > cells(len(u)):
            return False
    return True


@pytest.mark.criterion(9)
def test_resource_bounded_round_trips():
    dom = BoundedDomain.of("01", 8).words()
    base = ClassDescriptor("TM", (tm_predicate_from_dfa(dfa_even0()),))
    quad, lin = Poly((16, 0, 4)), Poly((2, 1))
    assert _within(computers_from_decider(dfa_even0(), "tag")[0], dom, steps=quad)
    assert _within(computers_from_decider(dfa_even0(), "rewriting")[0], dom, cells=lin)
    assert decider_round_trip(dfa_even0(), dom, B, "tag", resource_bounded_class(base, quad)).holds
    assert decider_round_trip(dfa_even0(), dom, B, "rewriting", resource_bounded_class(base, None, lin)).holds


def _cli(*args):
    r = subprocess.run([sys.executable, "-m", "algomodes", *map(str, args)], cwd=ROOT,
                       capture_output=True, check=False)
    return r.returncode, r.stdout, r.stderr


@pytest.mark.criterion(10)
def test_repeated_commands_are_byte_identical(tmp_path):
    c = ROOT / "corpus"
    commands = [
        ("run", c / "tm_anbn.amd", "aabb"),
        ("enumerate", c / "rewriting.amd", "--rounds", "12", "--verbose"),
        ("verify", "--mode", "decide", c / "dfa_even0.amd", "--set", c / "even_unary.txt", "--maxlen", "6"),
        ("power", c / "classes" / "pda", c / "battery_ab.txt", "--alphabet", "ab",
         "--against", c / "classes" / "dfa"),
        ("equiv", c / "nfa_end01.amd", c / "dfa_all.amd"),
        ("equiv", "--exact-dfa", c / "dfa_even0.amd", c / "dfa_all.amd"),
    ]
    for rule, inputs in (("determinize", [c / "nfa_end01.amd"]), ("prop2.3", [c / "is1.amd"]),
                         ("thm2.3", [c / "t_even.amd", c / "t_odd.amd"])):
        commands.append(("transform", "--rule", rule, *inputs, "-o", tmp_path / f"{rule}.amd"))
    for cmd in commands:
        first = _cli(*cmd)
        files = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
        second = _cli(*cmd)
        assert first == second, cmd
        assert first[0] in (0, 1), (cmd, first[2])
        assert files == {p.name: p.read_bytes() for p in tmp_path.iterdir()}, cmd
