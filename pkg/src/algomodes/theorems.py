"""Constructive transformations between modes, equivalence checks, class
power reports and resource-bounded / inductive instantiations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .combinators import (
    comp_predicate, constant, conj_parallel, disj_parallel, p_disj_seq, p_seq, rewriting,
    seq_compose,
)
from .core import (
    BLANK, SEPARATOR, Alphabet, MachineDescription, MachineError, ResourceUsage,
    Status, composite_kind, exhausted, output_alphabet, output_alphabet_rule,
    relation_of, run, run_metered, words_up_to,
)
from .dovetail import emission_table, stream_match
from .models import (
    dfa_complement, make_tm, nfa_to_dfa, tm_predicate_from_dfa,
)
from .modes import ModeVerdict, decision_value, reads_by_state


def _alpha(m: MachineDescription) -> list[str]:
    """Alphabet that covers both the inputs and the results of ``m``."""
    return sorted(set(m.input_alphabet.symbols) | output_alphabet(m))


# ------------------------------------------------------ mode transformations

def computer_from_weak_decider(w: MachineDescription) -> MachineDescription:
    """F-disjunctive sequential composition of W with rewriting, F = 0."""
    never = constant("0", sorted(output_alphabet(w)))
    return p_disj_seq(w, never, rewriting(w.input_alphabet)).with_name(f"computer({w.name})")


def weak_decider_from_acceptor(a: MachineDescription) -> MachineDescription:
    return seq_compose(constant("1", sorted(output_alphabet(a))), a).with_name(f"weak({a.name})")


def computer_from_acceptor(a: MachineDescription) -> MachineDescription:
    return computer_from_weak_decider(weak_decider_from_acceptor(a))


def acceptor_from_weak_decider(w: MachineDescription) -> MachineDescription:
    """Keep W's halting exactly where it indicates 1; elsewhere fall into a silent machine."""
    is_one = comp_predicate("1", sorted(output_alphabet(w)))
    return p_disj_seq(w, is_one, constant(None, w.input_alphabet)).with_name(f"acceptor({w.name})")


def decider_from_weak_and_co(w: MachineDescription, c: MachineDescription) -> MachineDescription:
    yes = seq_compose(constant("1", sorted(output_alphabet(w))), w)
    no = seq_compose(constant("0", sorted(output_alphabet(c))), c)
    return disj_parallel(yes, no).with_name(f"decider({w.name},{c.name})")


def weak_decider_from_computer(t: MachineDescription, rounds: int) -> MachineDescription:
    """Enumerate all outputs of T and compare each with the input."""
    return stream_match(t, rounds).with_name(f"match({t.name})")


def acceptor_from_computer(t: MachineDescription, rounds: int) -> MachineDescription:
    # halting with the indicator already is acceptance
    return weak_decider_from_computer(t, rounds)


def decider_from_computers(t_x: MachineDescription, t_cx: MachineDescription, rounds: int) -> MachineDescription:
    return decider_from_weak_and_co(weak_decider_from_computer(t_x, rounds),
                                    weak_decider_from_computer(t_cx, rounds))


def decider_from_acceptors(a_x: MachineDescription, a_cx: MachineDescription) -> MachineDescription:
    return decider_from_weak_and_co(weak_decider_from_acceptor(a_x), weak_decider_from_acceptor(a_cx))


def as_total_decider(d: MachineDescription) -> MachineDescription:
    """Turn an automaton read by accepting state into a machine writing 1/0."""
    if d.model == "nfa":
        d = nfa_to_dfa(d)
    if d.model == "dfa":
        return tm_predicate_from_dfa(d, name=f"tm({d.name})")
    if d.model == "composite" and d.kind == "bounded" and reads_by_state(d.components[0]):
        inner = as_total_decider(d.components[0])
        return bounded(inner, d.param("step_bound"), d.param("cell_bound"))
    if d.model == "pda":
        raise MachineError("pda deciders must be converted by hand")
    return d


def weak_decider_from_decider(d: MachineDescription) -> MachineDescription:
    d = as_total_decider(d)
    out = sorted(output_alphabet(d))
    return p_seq(constant("1", out), comp_predicate("1", out), d)


def codecider_from_decider(d: MachineDescription) -> MachineDescription:
    d = as_total_decider(d)
    out = sorted(output_alphabet(d))
    return p_seq(constant("1", out), comp_predicate("0", out), d)


def _strip_two(alphabet) -> MachineDescription:
    """Erases the first two cells of its input."""
    sigma = Alphabet.of(alphabet, allow_reserved=True)
    rules = [("k0", a, "k1", BLANK, "R") for a in sigma]
    rules += [("k1", a, "h", BLANK, "R") for a in sigma]
    rules += [("k0", BLANK, "h", BLANK, "S"), ("k1", BLANK, "h", BLANK, "S")]
    return make_tm(rules, "k0", ["h"], sigma, name="strip2")


def _tag_predicate(tag: str, alphabet) -> MachineDescription:
    """1 iff the input starts with ``tag`` followed by the separator."""
    from .models import make_fa
    sigma = list(alphabet)
    rules = []
    for a in sigma:
        rules.append(("t0", a, "t1" if a == tag else "no"))
        rules.append(("t1", a, "yes" if a == SEPARATOR else "no"))
        rules.append(("yes", a, "yes"))
        rules.append(("no", a, "no"))
    return tm_predicate_from_dfa(make_fa(rules, "t0", ["yes"], sigma), name=f"tag{tag}")


def computers_from_decider(d: MachineDescription, via: str = "tag") -> tuple[MachineDescription, MachineDescription]:
    """Split a 1/0 decider into computers of X and of its complement.

    With ``via="tag"`` the decider runs next to a rewriting copy of the input,
    giving ``1#u`` or ``0#u``; a tag predicate then lets the input through to
    a machine that strips the tag.  With ``via="rewriting"`` the weak decider
    and the codecider are each turned into computers by the rewriting
    construction, which never holds more than the input on tape.
    """
    if via == "rewriting":
        return (computer_from_weak_decider(weak_decider_from_decider(d)).with_name(f"computer_X({d.name})"),
                computer_from_weak_decider(codecider_from_decider(d)).with_name(f"computer_CX({d.name})"))
    if via != "tag":
        raise ValueError(f"unknown split {via!r}")
    dec = as_total_decider(d)
    sigma = dec.input_alphabet
    tagged = conj_parallel(dec, rewriting(sigma))
    alpha = sorted(output_alphabet(tagged))
    strip = _strip_two(alpha)
    comp_x = p_seq(strip, _tag_predicate("1", alpha), tagged).with_name(f"computer_X({d.name})")
    comp_cx = p_seq(strip, _tag_predicate("0", alpha), tagged).with_name(f"computer_CX({d.name})")
    return comp_x, comp_cx


def matched_rounds(machines: Iterable[MachineDescription], domain: Sequence[str], budget: int) -> int:
    """Rounds after which every input of ``domain`` has had its full run."""
    worst = 2
    domain = list(domain)
    for t in machines:
        for u in domain:
            r = run(t, u, budget)
            if r.status is Status.PRODUCED:
                worst = max(worst, r.steps_used)
    return max(worst, len(domain), 2)


def matched_budget(machines: Iterable[MachineDescription], rounds: int) -> int:
    """Budget that lets a race of stream matchers over ``machines`` finish."""
    worst = 0
    for t in machines:
        tab = emission_table(t, rounds)
        worst = max(worst, tab.total_cost + tab.total_compare_cost)
    return 2 * (worst + 8) + 2


def partition_verdict(t_x, t_cx, domain, budget) -> ModeVerdict:
    """Do the ranges of the two computers partition ``domain``?"""
    domain = list(domain)
    rx = {z for _, z in relation_of(t_x, domain, budget)} & set(domain)
    rcx = {z for _, z in relation_of(t_cx, domain, budget)} & set(domain)
    for u in domain:
        if u in rx and u in rcx:
            return ModeVerdict("decide", False, (u, "in both ranges", "in exactly one"))
        if u not in rx and u not in rcx:
            return ModeVerdict("decide", False, (u, "in neither range", "in exactly one"))
    return ModeVerdict("decide", True)


# ---------------------------------------------------------- equivalence

def _mode_value(m, r, mode):
    if mode in ("compute", "enumerate"):
        return r.word if r.status is Status.PRODUCED else None
    if mode == "accept":
        return r.status is Status.PRODUCED
    if mode in ("weak_decide", "codecide"):
        return r.status is Status.PRODUCED and r.word == "1"
    if mode == "decide":
        return decision_value(m, r)
    raise ValueError(f"unknown mode {mode!r}")


def functional_equiv(m1, m2, mode: str, domain, budget: int, budget2: int | None = None) -> ModeVerdict:
    """Extensional equality of the two machines' mode relation over ``domain``.

    ``budget2`` lets the second machine run at its own (matched) budget.
    """
    b2 = budget if budget2 is None else budget2
    for u in domain:
        v1 = _mode_value(m1, run(m1, u, budget), mode)
        v2 = _mode_value(m2, run(m2, u, b2), mode)
        if v1 != v2:
            return ModeVerdict(mode, False, (u, v2, v1))
    return ModeVerdict(mode, True)


def dfa_equiv_exact(d1: MachineDescription, d2: MachineDescription) -> tuple[bool, str | None]:
    """Exact language equality by breadth-first search of the product automaton.

    Returns ``(True, None)`` or ``(False, w)`` with ``w`` the shortlex-least
    distinguishing word.
    """
    for d in (d1, d2):
        if d.model != "dfa":
            raise MachineError(f"dfa_equiv_exact needs dfa inputs, got {d.model!r}")
    if set(d1.input_alphabet.symbols) != set(d2.input_alphabet.symbols):
        raise MachineError("alphabet mismatch")
    t1 = {(r.state, r.read): r.next for r in d1.transitions}
    t2 = {(r.state, r.read): r.next for r in d2.transitions}
    start = (d1.start, d2.start)
    seen = {start}
    frontier = [(start, "")]
    while frontier:
        nxt = []
        for (p, q), w in frontier:
            if (p in d1.accept) != (q in d2.accept):
                return False, w
            for a in d1.input_alphabet:
                pair = (t1[(p, a)], t2[(q, a)])
                if pair not in seen:
                    seen.add(pair)
                    nxt.append((pair, w + a))
        frontier = nxt
    return True, None


# --------------------------------------------------------- bounded dfa search

def find_dfa(language: Iterable[str], alphabet, max_length: int, max_states: int):
    """Search all DFAs with at most ``max_states`` states for one that agrees
    with ``language`` on every word of length <= ``max_length``.

    States are numbered in order of first use, so every DFA is visited once up
    to renaming of its reachable part.  Returns a dfa description or None.
    """
    from .models import make_fa
    sigma = list(Alphabet.of(alphabet).symbols)
    words = list(words_up_to(Alphabet.of(alphabet), max_length))
    target = set(language)
    want = [w in target for w in words]
    index = {w: i for i, w in enumerate(words)}
    parent = [0] + [index[w[:-1]] for w in words[1:]]
    last = [None] + [w[-1] for w in words[1:]]
    state_of = [0] * len(words)
    labels = [want[0]]
    trans: dict = {}

    def solve(i):
        while i < len(words):
            key = (state_of[parent[i]], last[i])
            t = trans.get(key)
            if t is None:
                for cand in range(min(len(labels) + 1, max_states)):
                    if cand < len(labels) and labels[cand] != want[i]:
                        continue
                    fresh = cand == len(labels)
                    if fresh:
                        labels.append(want[i])
                    trans[key] = cand
                    state_of[i] = cand
                    if solve(i + 1):
                        return True
                    del trans[key]
                    if fresh:
                        labels.pop()
                return False
            if labels[t] != want[i]:
                return False
            state_of[i] = t
            i += 1
        return True

    if not solve(1):
        return None
    n = len(labels)
    rules = []
    for q in range(n):
        for a in sigma:
            # transitions the sample never exercised go to state 0
            rules.append((f"s{q}", a, f"s{trans.get((q, a), 0)}"))
    return make_fa(rules, "s0", [f"s{q}" for q in range(n) if labels[q]], sigma,
                   states=[f"s{q}" for q in range(n)], name="found")


def distinguishable_prefixes(language: Iterable[str], alphabet, max_length: int) -> list[str]:
    """Greedy set of words that are pairwise separated by a suffix within the length bound.

    Its size is a lower bound on the states of any DFA that agrees with the
    language up to ``max_length``.
    """
    a = Alphabet.of(alphabet)
    target = set(language)
    words = list(words_up_to(a, max_length))
    chosen: list[str] = []
    for w in words:
        ok = True
        for c in chosen:
            room = max_length - max(len(w), len(c))
            if not any(((w + s) in target) != ((c + s) in target) for s in words_up_to(a, room)):
                ok = False
                break
        if ok:
            chosen.append(w)
    return chosen


def decider_round_trip(d: MachineDescription, domain, budget: int, via: str = "tag",
                       cls: "ClassDescriptor | None" = None) -> ModeVerdict:
    """Decider -> two computers -> decider, compared with the original.

    Inside ``cls`` the two computers run under the class's resource bounds.
    The rebuilt decider gets the matched budget of its dovetailing.
    """
    domain = list(domain)
    cx, ccx = computers_from_decider(d, via)
    if cls is not None:
        cx, ccx = cls.admit(cx), cls.admit(ccx)
    split = partition_verdict(cx, ccx, domain, budget)
    if not split.holds:
        return split
    rounds = matched_rounds([cx, ccx], domain, budget)
    rebuilt = decider_from_computers(cx, ccx, rounds)
    return functional_equiv(d, rebuilt, "decide", domain, budget, matched_budget([cx, ccx], rounds))


# ---------------------------------------------------------------- classes

@dataclass(frozen=True)
class Poly:
    """Polynomial in the input length, lowest coefficient first."""

    coeffs: tuple[int, ...]

    def __call__(self, n: int) -> int:
        return sum(c * n ** i for i, c in enumerate(self.coeffs))

    def __str__(self):
        def term(i, c):
            k = "" if c == 1 and i else str(c)
            return k if i == 0 else f"{k}n" if i == 1 else f"{k}n^{i}"
        terms = [term(i, c) for i, c in reversed(list(enumerate(self.coeffs))) if c]
        return "+".join(terms) or "0"


def bounded(m: MachineDescription, step_bound: Poly | None, cell_bound: Poly | None = None) -> MachineDescription:
    params = (("step_bound", step_bound), ("cell_bound", cell_bound))
    b = MachineDescription(model="composite", input_alphabet=m.input_alphabet, kind="bounded",
                           components=(m,), params=params)
    return b.with_name(f"bounded({m.name})")


@composite_kind("bounded")
def _run_bounded(m, u, budget):
    inner, = m.components
    sb = m.param("step_bound")
    cb = m.param("cell_bound")
    limit = budget if sb is None else min(budget, sb(len(u)))
    r, use = run_metered(inner, u, limit)
    if cb is not None and use.cells_visited > cb(len(u)):
        return exhausted(limit), ResourceUsage(limit, use.cells_visited)
    if r.status is Status.PRODUCED:
        return r, use
    return exhausted(r.steps_used if r.rejected else limit, r.rejected), use


@output_alphabet_rule("bounded")
def _out_bounded(m):
    return output_alphabet(m.components[0])


CLOSURES = frozenset({"dra", "c1", "c0", "dp", "pseq", "complement"})


@dataclass(frozen=True)
class ClassDescriptor:
    name: str
    members: tuple[MachineDescription, ...]
    closures: frozenset[str] = frozenset()
    models: frozenset[str] = frozenset({"dfa", "nfa", "pda", "tm", "itm", "composite"})
    step_bound: Poly | None = None
    cell_bound: Poly | None = None
    produces_output: bool = True
    allowed_outputs: frozenset[str] | None = None
    dfa_search_states: int = 0

    def __post_init__(self):
        for m in self.members:
            if m.model not in self.models:
                raise MachineError(f"class {self.name} does not admit model {m.model!r}")
        unknown = set(self.closures) - CLOSURES
        if unknown:
            raise MachineError(f"unknown closure constructions {sorted(unknown)}")

    def admit(self, m: MachineDescription) -> MachineDescription:
        if self.step_bound is None and self.cell_bound is None:
            return m
        return bounded(m, self.step_bound, self.cell_bound)


def resource_bounded_class(base: ClassDescriptor, step_bound: Poly | None,
                           cell_bound: Poly | None = None) -> ClassDescriptor:
    limits = [f"{k}<={b}" for k, b in (("steps", step_bound), ("cells", cell_bound)) if b is not None]
    return ClassDescriptor(f"{base.name}[{', '.join(limits)}]", base.members,
                           base.closures, base.models, step_bound, cell_bound, base.produces_output,
                           base.allowed_outputs, base.dfa_search_states)


FLAGS = ("computable", "acceptable", "weakly_decidable", "codecidable", "decidable")


@dataclass
class PowerRow:
    language: str
    flags: dict
    witnesses: dict = field(default_factory=dict)


@dataclass
class PowerReport:
    class_name: str
    rows: list[PowerRow]
    notes: list[str] = field(default_factory=list)

    def attained(self, flag: str) -> frozenset[str]:
        return frozenset(r.language for r in self.rows if r.flags[flag])

    def to_tsv(self) -> str:
        lines = ["language\t" + "\t".join(FLAGS)]
        for r in self.rows:
            lines.append(r.language + "\t" + "\t".join("1" if r.flags[f] else "0" for f in FLAGS))
        return "\n".join(lines) + "\n"


@dataclass
class _Profile:
    machine: MachineDescription
    results: list  # per domain word: result word or None (halting results only)
    sets: dict


def _profile(m, domain, budget, produces_output):
    results, decisions = [], []
    for u in domain:
        r = run(m, u, budget)
        results.append(r.word if r.status is Status.PRODUCED else None)
        decisions.append(decision_value(m, r))
    rng = frozenset(z for z in results if z is not None) if produces_output else frozenset()
    accepted = frozenset(u for u, z in zip(domain, results) if z is not None)
    ones = frozenset(u for u, z in zip(domain, results) if z == "1")
    silent_elsewhere = all(z is None or z == "1" for z in results)
    total_decider = all(d in ("0", "1") for d in decisions)
    decided = frozenset(u for u, d in zip(domain, decisions) if d == "1") if total_decider else None
    # a total automaton read by state codecides under the swapped reading
    co = frozenset(domain) - decided if decided is not None and reads_by_state(m) else None
    return _Profile(m, results, {
        "range": rng, "accepted": accepted,
        "weak": ones if silent_elsewhere else None,
        "co_read": co,
        "decided": decided,
    })


def _candidates(c: ClassDescriptor) -> list[MachineDescription]:
    out = list(c.members)
    base = list(c.members)
    if "complement" in c.closures:
        out += [dfa_complement(m) for m in base if m.model == "dfa"]
    if "pseq" in c.closures:
        for m in base:
            if m.model in ("tm", "composite") and output_alphabet(m):
                try:
                    out += [weak_decider_from_decider(m), codecider_from_decider(m)]
                except MachineError:
                    pass
    if "c1" in c.closures:
        out += [weak_decider_from_acceptor(m) for m in list(out) if m.model != "itm"]
    if "c0" in c.closures:
        out += [acceptor_from_weak_decider(m) for m in list(out) if m.model != "itm"]
    if "dra" in c.closures:
        out += [computer_from_weak_decider(m) for m in list(out) if m.model != "itm"]
    return [c.admit(m) for m in out]


def power_report(c: ClassDescriptor, battery: Sequence[tuple[str, Iterable[str]]], domain,
                 budget: int) -> PowerReport:
    """Which battery languages the class attains in each mode on ``domain``."""
    domain = list(domain)
    battery = [(name, frozenset(s)) for name, s in battery]
    profiles = []
    for m in _candidates(c):
        p = _profile(m, domain, budget, c.produces_output)
        if c.allowed_outputs is not None and not {z for z in p.results if z is not None} <= c.allowed_outputs:
            continue  # the construction leaves the class
        profiles.append(p)
    everything = frozenset(domain)
    rows, notes = [], []
    for name, x in battery:
        flags = dict.fromkeys(FLAGS, False)
        wit: dict = {}
        co = everything - x
        for p in profiles:
            hits = {
                "computable": p.sets["range"] == x,
                "acceptable": p.sets["accepted"] == x,
                "weakly_decidable": p.sets["weak"] == x,
                "codecidable": p.sets["weak"] == co or p.sets["co_read"] == co,
                "decidable": p.sets["decided"] == x,
            }
            for f, ok in hits.items():
                if ok and not flags[f]:
                    flags[f] = True
                    wit[f] = p.machine.name
        if not (flags["acceptable"] and flags["decidable"]) and c.dfa_search_states:
            found = find_dfa(x, _domain_alphabet(domain), _max_len(domain), c.dfa_search_states)
            if found is not None:
                for f in ("acceptable", "weakly_decidable", "codecidable", "decidable"):
                    if not flags[f]:
                        flags[f] = True
                        wit[f] = f"dfa search ({len(found.states)} states)"
            else:
                notes.append(f"{name}: no dfa with <= {c.dfa_search_states} states agrees on the domain")
        if "dp" in c.closures and flags["weakly_decidable"] and flags["codecidable"] and not flags["decidable"]:
            w = next(p.machine for p in profiles if p.sets["weak"] == x)
            k = next(p.machine for p in profiles if p.sets["weak"] == co)
            d = c.admit(decider_from_weak_and_co(w, k))
            if _profile(d, domain, budget, True).sets["decided"] == x:
                flags["decidable"] = True
                wit["decidable"] = d.name
        rows.append(PowerRow(name, flags, wit))
    return PowerReport(c.name, rows, notes)


def _domain_alphabet(domain):
    syms = sorted({s for w in domain for s in w})
    return "".join(syms)


def _max_len(domain):
    return max((len(w) for w in domain), default=0)


@dataclass(frozen=True)
class Comparison:
    flag: str
    verdict: str  # "=", "<=", ">=", "incomparable"
    only_left: frozenset[str]
    only_right: frozenset[str]

    @property
    def left_strictly_above(self) -> bool:
        return self.verdict == ">=" and bool(self.only_left)


def compare_power(left: PowerReport, right: PowerReport, flag: str) -> Comparison:
    a, b = left.attained(flag), right.attained(flag)
    if a == b:
        v = "="
    elif a >= b:
        v = ">="
    elif a <= b:
        v = "<="
    else:
        v = "incomparable"
    return Comparison(flag, v, a - b, b - a)


def inclusion_violations(report: PowerReport, closures: Iterable[str]) -> list[str]:
    """Mode inclusions the class's closure conditions promise, checked row by row."""
    closures = set(closures)
    rules = []
    if "dra" in closures:
        rules.append(("weakly_decidable", "computable"))
    if "c1" in closures:
        rules.append(("acceptable", "weakly_decidable"))
    if {"c1", "dra"} <= closures:
        rules.append(("acceptable", "computable"))
    if "c0" in closures:
        rules.append(("weakly_decidable", "acceptable"))
    bad = []
    for row in report.rows:
        for src, dst in rules:
            if row.flags[src] and not row.flags[dst]:
                bad.append(f"{row.language}: {src} but not {dst}")
        if "dp" in closures:
            both = row.flags["weakly_decidable"] and row.flags["codecidable"]
            if row.flags["decidable"] != both:
                bad.append(f"{row.language}: decidable != weakly_decidable and codecidable")
    return bad


# -------------------------------------------------------- inductive deciding

def limit_decider(t: MachineDescription) -> MachineDescription:
    """Inductive machine whose limit output says whether T halts on the input.

    It writes 0 on its output tape, then runs T's program; the transition
    into a halting state of T writes 1 instead and parks in an idle state.
    Halting of T at step s therefore shows up at step s + 1 and never changes
    again.
    """
    if t.model != "tm":
        raise MachineError("limit_decider needs a tm")
    tape = list(t.tape_alphabet)
    idle = "lim_idle"
    boot = "lim_boot"
    rules = []
    for a in tape:
        if t.start in t.accept:
            rules.append((boot, a, idle, a, "S", "1"))
        else:
            rules.append((boot, a, t.start, a, "S", "0"))
        rules.append((idle, a, idle, a, "S"))
    for r in t.transitions:
        if r.next in t.accept:
            rules.append((r.state, r.read, idle, r.write, r.move, "1"))
        elif r.state not in t.accept:
            rules.append((r.state, r.read, r.next, r.write, r.move))
    m = make_tm(rules, boot, [], t.input_alphabet, model="itm", extra_states=t.states)
    return m.with_name(f"limit({t.name})")
