"""Fixed example machines and seeded random generators used across tests."""
from __future__ import annotations

import random

from .combinators import constant, rewriting
from .core import BLANK, MachineDescription, PdaRule, Alphabet
from .models import make_fa, make_tm, tm_predicate_from_dfa

_ = BLANK


def t_loop(alphabet="01") -> MachineDescription:
    """Single state, moves right forever."""
    sigma = Alphabet.of(alphabet)
    rules = [("q", a, "q", a, "R") for a in (*sigma, _)]
    return make_tm(rules, "q", [], sigma, extra_states=["h"], name="T_loop")


def t_double() -> MachineDescription:
    """Unary doubler: 1^n -> 1^(2n)."""
    rules = [
        ("q0", "1", "q1", "X", "R"),
        ("q0", "Y", "q4", "1", "R"),
        ("q0", _, "h", _, "S"),
        ("q1", "1", "q1", "1", "R"),
        ("q1", "Y", "q1", "Y", "R"),
        ("q1", _, "q2", "Y", "L"),
        ("q2", "1", "q2", "1", "L"),
        ("q2", "Y", "q2", "Y", "L"),
        ("q2", "X", "q0", "X", "R"),
        ("q4", "Y", "q4", "1", "R"),
        ("q4", _, "q5", _, "L"),
        ("q5", "1", "q5", "1", "L"),
        ("q5", "X", "q5", "1", "L"),
        ("q5", _, "h", _, "R"),
    ]
    return make_tm(rules, "q0", ["h"], "1", name="T_double")


def t_even() -> MachineDescription:
    """Echoes 1^k and halts iff k is even; loops right otherwise."""
    rules = [
        ("e", "1", "o", "1", "R"),
        ("e", _, "h", _, "S"),
        ("o", "1", "e", "1", "R"),
        ("o", _, "o", _, "R"),
    ]
    return make_tm(rules, "e", ["h"], "1", name="T_even")


def t_odd() -> MachineDescription:
    rules = [
        ("e", "1", "o", "1", "R"),
        ("e", _, "e", _, "R"),
        ("o", "1", "e", "1", "R"),
        ("o", _, "h", _, "S"),
    ]
    return make_tm(rules, "e", ["h"], "1", name="T_odd")


def dfa_even0() -> MachineDescription:
    """Words over {0,1} with an even number of 0s."""
    rules = [("e", "0", "o"), ("e", "1", "e"), ("o", "0", "e"), ("o", "1", "o")]
    return make_fa(rules, "e", ["e"], "01", name="DFA_even0")


def dfa_all(alphabet="01") -> MachineDescription:
    return make_fa([("q", a, "q") for a in alphabet], "q", ["q"], alphabet, name="DFA_all")


def nfa_end01() -> MachineDescription:
    """Words ending in 01."""
    rules = [("a", "0", "a"), ("a", "1", "a"), ("a", "0", "b"), ("b", "1", "c")]
    return make_fa(rules, "a", ["c"], "01", model="nfa", name="N_end01")


def pda_anbn() -> MachineDescription:
    """a^n b^n (n >= 0) by empty stack."""
    rules = (
        PdaRule("q", "a", "Z", "q", "AZ"),
        PdaRule("q", "a", "A", "q", "AA"),
        PdaRule("q", "b", "A", "p", ""),
        PdaRule("p", "b", "A", "p", ""),
        PdaRule("p", "", "Z", "p", ""),
        PdaRule("q", "", "Z", "q", ""),
    )
    m = MachineDescription(model="pda", input_alphabet=Alphabet.of("ab"), states=("q", "p"),
                           start="q", accept=frozenset(), transitions=rules,
                           stack_alphabet=Alphabet.of("ZA", allow_reserved=True), start_stack="Z",
                           acceptance="empty_stack")
    return m.with_name("PDA_anbn")


def pda_even0() -> MachineDescription:
    """Final-state PDA that ignores its stack and tracks the parity of 0s."""
    rules = (
        PdaRule("e", "0", "", "o", ""),
        PdaRule("e", "1", "", "e", ""),
        PdaRule("o", "0", "", "e", ""),
        PdaRule("o", "1", "", "o", ""),
    )
    m = MachineDescription(model="pda", input_alphabet=Alphabet.of("01"), states=("e", "o"),
                           start="e", accept=frozenset({"e"}), transitions=rules,
                           stack_alphabet=Alphabet.of("Z", allow_reserved=True), start_stack="Z")
    return m.with_name("PDA_even0")


def pda_empty() -> MachineDescription:
    m = MachineDescription(model="pda", input_alphabet=Alphabet.of("ab"), states=("q",), start="q",
                           accept=frozenset(), transitions=(), stack_alphabet=Alphabet.of("Z"),
                           start_stack="Z", acceptance="final_state")
    return m.with_name("PDA_empty")


def tm_anbn_decider() -> MachineDescription:
    """Writes 1 on a^n b^n, 0 otherwise: strips an a from the left and a b
    from the right until the tape is empty or a mismatch shows up."""
    rules = [
        ("s0", "a", "s1", _, "R"),
        ("s0", "b", "rE", "b", "S"),
        ("s0", _, "h", "1", "S"),
        ("s1", "a", "s1", "a", "R"),
        ("s1", "b", "s1", "b", "R"),
        ("s1", _, "s2", _, "L"),
        ("s2", "b", "s3", _, "L"),
        ("s2", "a", "rL", "a", "S"),
        ("s2", _, "h", "0", "S"),
        ("s3", "a", "s3", "a", "L"),
        ("s3", "b", "s3", "b", "L"),
        ("s3", _, "s0", _, "R"),
        ("rL", "a", "rL", "a", "L"),
        ("rL", "b", "rL", "b", "L"),
        ("rL", _, "rE", _, "R"),
        ("rE", "a", "rE", _, "R"),
        ("rE", "b", "rE", _, "R"),
        ("rE", _, "h", "0", "S"),
    ]
    return make_tm(rules, "s0", ["h"], "ab", name="TM_anbn")


def tm_even0_decider() -> MachineDescription:
    return tm_predicate_from_dfa(dfa_even0(), name="TM_even0")


def itm_single_write() -> MachineDescription:
    """Writes 1 to its output tape on the first step, then idles."""
    rules = [("s", a, "w", a, "S", "1") for a in ("0", "1", _)]
    rules += [("w", a, "w", a, "R") for a in ("0", "1", _)]
    return make_tm(rules, "s", [], "01", model="itm", name="ITM_write1")


def itm_alternating() -> MachineDescription:
    """Flips its output between 0 and 1 on every step."""
    rules = []
    for a in ("0", "1", _):
        rules.append(("z", a, "o", a, "S", "0"))
        rules.append(("o", a, "z", a, "S", "1"))
    return make_tm(rules, "z", [], "01", model="itm", name="ITM_alternate")


def t_delay(k: int, alphabet="01", output: str | None = None) -> MachineDescription:
    """Halts after exactly k + 1 steps (k spacer moves to the right, then a halt),
    leaving ``output`` (default: the input) on the tape."""
    sigma = Alphabet.of(alphabet)
    rules = []
    tape = (*sigma, _)
    first = "d0"
    # erase the input first if a fixed output is requested
    if output is not None:
        first = "er"
        rules += [("er", a, "er", _, "R") for a in sigma]
        rules.append(("er", _, "wr0" if output else "d0", _, "S"))
        for i, c in enumerate(output):
            nxt = f"wr{i + 1}" if i + 1 < len(output) else "d0"
            rules.append((f"wr{i}", _, nxt, c, "R" if i + 1 < len(output) else "S"))
    for i in range(k):
        rules += [(f"d{i}", a, f"d{i + 1}", a, "S") for a in tape]
    rules += [(f"d{k}", a, "h", a, "S") for a in tape]
    return make_tm(rules, first, ["h"], sigma, name=f"T_delay{k}")


def t_countdown(k: int) -> MachineDescription:
    """Moves right over k blank cells and halts: k + 1 steps on the empty input."""
    rules = []
    for i in range(k):
        rules += [(f"c{i}", a, f"c{i + 1}", a, "R") for a in ("0", "1", _)]
    rules += [(f"c{k}", a, "h", a, "S") for a in ("0", "1", _)]
    return make_tm(rules, "c0", ["h"], "01", name=f"T_count{k}")


def t_bouncer() -> MachineDescription:
    """Structurally non-halting: swings between two cells forever."""
    rules = []
    for a in ("0", "1", _):
        rules.append(("l", a, "r", a, "R"))
        rules.append(("r", a, "l", a, "L"))
    return make_tm(rules, "l", [], "01", extra_states=["h"], name="T_bounce")


def halting_battery() -> list[tuple[MachineDescription, str, bool]]:
    """Twenty (machine, input, halts) pairs with halting status fixed by construction."""
    pairs = []
    for k in (0, 5, 17, 36, 60, 111, 200, 287, 398, 499):
        pairs.append((t_countdown(k), "", True))
    loops = [t_loop(), t_bouncer(), constant(None), t_even(), t_odd()]
    inputs = ["", "01", "1", "1", "11"]
    for m, u in zip(loops, inputs):
        pairs.append((m, u, False))
    for u in ("111", "11111", "1111111"):
        pairs.append((t_even(), u, False))
    for u in ("0", "10"):
        pairs.append((t_loop(), u, False))
    return pairs


def fixed_corpus() -> list[MachineDescription]:
    """Turing machines used by the enumeration checks."""
    return [rewriting(), constant("1"), constant(None), constant(""), t_loop(), t_even(),
            t_odd(), t_double(), tm_anbn_decider(), tm_even0_decider(), t_delay(3)]


# ------------------------------------------------------------ random machines

def random_tm(rng: random.Random, max_states: int = 4, alphabet="01") -> MachineDescription:
    """Random deterministic TM with up to ``max_states`` working states plus a halt state."""
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    tape = (*alphabet, _)
    rules = []
    for q in states:
        for a in tape:
            roll = rng.random()
            if roll < 0.1:
                continue  # leave a hole: machine gets stuck there
            nxt = "h" if roll < 0.3 else rng.choice(states)
            rules.append((q, a, nxt, rng.choice(tape), rng.choice("LRS")))
    return make_tm(rules, "q0", ["h"], alphabet, extra_states=["h"],
                   name=f"rand_tm_{rng.getrandbits(24):06x}")


def random_dfa(rng: random.Random, max_states: int = 5, alphabet="01") -> MachineDescription:
    n = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    rules = [(q, a, rng.choice(states)) for q in states for a in alphabet]
    accept = [q for q in states if rng.random() < 0.5]
    return make_fa(rules, "s0", accept, alphabet, states=states)


def random_nfa(rng: random.Random, max_states: int = 5, alphabet="01") -> MachineDescription:
    n = rng.randint(1, max_states)
    states = [f"n{i}" for i in range(n)]
    rules = []
    for q in states:
        for a in (*alphabet, ""):
            for r in states:
                if rng.random() < (0.1 if a == "" else 0.3):
                    rules.append((q, a, r))
    accept = [q for q in states if rng.random() < 0.4]
    return make_fa(rules, "n0", accept, alphabet, model="nfa", states=states)


# ------------------------------------------------------------ language battery

def _fa(rules, accept, alphabet, name):
    return make_fa(rules, rules[0][0], accept, alphabet, name=name)


def language_battery(max_length: int = 8) -> list[tuple[str, MachineDescription, list[str]]]:
    """Twelve regular sets, each as (name, dfa, bounded domain words)."""
    from .models import dfa_complement, dfa_from_words, nfa_to_dfa
    from .modes import BoundedDomain

    d01 = BoundedDomain.of("01", max_length).words()
    du = BoundedDomain.of("1", max_length).words()
    parity = [("e", "1", "o"), ("o", "1", "e")]
    return [
        ("even0", dfa_even0(), d01),
        ("all", dfa_all(), d01),
        ("none", dfa_complement(dfa_all()).with_name("DFA_none"), d01),
        ("end01", nfa_to_dfa(nfa_end01()).with_name("DFA_end01"), d01),
        ("has11", _fa([("a", "0", "a"), ("a", "1", "b"), ("b", "0", "a"), ("b", "1", "c"),
                       ("c", "0", "c"), ("c", "1", "c")], ["c"], "01", "DFA_has11"), d01),
        ("len_mod3", _fa([("a", "0", "b"), ("a", "1", "b"), ("b", "0", "c"), ("b", "1", "c"),
                          ("c", "0", "a"), ("c", "1", "a")], ["a"], "01", "DFA_len3"), d01),
        ("starts1", _fa([("s", "0", "n"), ("s", "1", "y"), ("y", "0", "y"), ("y", "1", "y"),
                         ("n", "0", "n"), ("n", "1", "n")], ["y"], "01", "DFA_starts1"), d01),
        ("eps", dfa_from_words([""], "01").with_name("DFA_eps"), d01),
        ("finite4", dfa_from_words(["0", "1", "01", "110"], "01").with_name("DFA_fin4"), d01),
        ("even_unary", _fa(parity, ["e"], "1", "DFA_even1"), du),
        ("odd_unary", _fa(parity, ["o"], "1", "DFA_odd1"), du),
        ("short_unary", dfa_from_words(["", "1", "11", "111"], "1").with_name("DFA_le3"), du),
    ]
