"""Simulators for the five base models and constructions between them."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .core import (
    BLANK, Alphabet, FaRule, MachineDescription, MachineError, PdaRule, ResourceUsage,
    RunOutcome, Status, TmRule, exhausted, produced, simulator, check_word,
)


# ---------------------------------------------------------------- builders

def make_tm(rules: Iterable[tuple], start: str, accept: Iterable[str], input_alphabet,
            model: str = "tm", extra_states: Iterable[str] = (), name: str = "") -> MachineDescription:
    """Build a tm/itm from ``(state, read, next, write, move[, out])`` tuples.

    States and the tape alphabet are collected from the rules.
    """
    rules = tuple(TmRule(*r) for r in rules)
    sigma = Alphabet.of(input_alphabet, allow_reserved=True)
    accept = frozenset(accept)
    states = [start]
    for r in rules:
        for q in (r.state, r.next):
            if q not in states:
                states.append(q)
    for q in (*accept, *extra_states):
        if q not in states:
            states.append(q)
    tape = sigma.union([BLANK] + [r.read for r in rules] + [r.write for r in rules])
    m = MachineDescription(model=model, input_alphabet=sigma, states=tuple(states), start=start,
                           accept=accept, transitions=rules, tape_alphabet=tape)
    return m.with_name(name)


def make_fa(transitions: Iterable[tuple], start: str, accept: Iterable[str], input_alphabet,
            model: str = "dfa", states: Iterable[str] = (), name: str = "") -> MachineDescription:
    rules = tuple(FaRule(*r) for r in transitions)
    order = [start, *states]
    for r in rules:
        for q in (r.state, r.next):
            if q not in order:
                order.append(q)
    for q in accept:
        if q not in order:
            order.append(q)
    m = MachineDescription(model=model, input_alphabet=Alphabet.of(input_alphabet, allow_reserved=True),
                           states=tuple(dict.fromkeys(order)), start=start,
                           accept=frozenset(accept), transitions=rules)
    return m.with_name(name)


def _require(m: MachineDescription, *models: str) -> None:
    if m.model not in models:
        raise MachineError(f"expected model in {models}, got {m.model!r}")


# -------------------------------------------------------------- tm and itm

_COMPILED: dict[int, dict] = {}


def _table(m: MachineDescription) -> dict:
    key = id(m)
    hit = _COMPILED.get(key)
    if hit is not None and hit[0] is m:
        return hit[1]
    table = {(r.state, r.read): r for r in m.transitions}
    _COMPILED[key] = (m, table)
    return table


def tm_output(tape: dict, blank: str = BLANK) -> str:
    """Maximal blank-free word starting at the leftmost non-blank cell."""
    cells = [p for p, s in tape.items() if s != blank]
    if not cells:
        return ""
    p = min(cells)
    out = []
    while tape.get(p, blank) != blank:
        out.append(tape[p])
        p += 1
    return "".join(out)


@dataclass
class ItmConfiguration:
    state: str
    tape: dict
    head: int
    output: str = ""
    last_output_change_step: int = 0


def _simulate_tape(m: MachineDescription, u: str, budget: int):
    """Shared tm/itm loop.

    Returns ``(config, steps, halted, stuck, lo, hi)``; ``lo..hi`` is the
    (contiguous) interval of visited cells.
    """
    table = _table(m)
    blank = m.blank
    accept = m.accept
    tape = {i: s for i, s in enumerate(u)}
    cfg = ItmConfiguration(m.start, tape, 0)
    head = 0
    state = m.start
    lo = hi = 0
    steps = 0
    is_itm = m.model == "itm"
    while True:
        if state in accept:
            cfg.state, cfg.head = state, head
            return cfg, steps, True, False, lo, hi
        if steps >= budget:
            break
        read = tape.get(head, blank)
        rule = table.get((state, read))
        if rule is None:
            cfg.state, cfg.head = state, head
            return cfg, steps, False, True, lo, hi
        if rule.next == state and rule.write == read and (not is_itm or rule.out is None or rule.out == cfg.output):
            # self-loops that can never leave: stationary, or drifting over blank tape
            if rule.move == "S":
                steps = budget
                break
            if read == blank:
                written = [p for p, s in tape.items() if s != blank]
                if rule.move == "R" and (not written or head > max(written)):
                    hi = max(hi, head + (budget - steps))
                    steps = budget
                    break
                if rule.move == "L" and (not written or head < min(written)):
                    lo = min(lo, head - (budget - steps))
                    steps = budget
                    break
        tape[head] = rule.write
        if is_itm and rule.out is not None and rule.out != cfg.output:
            cfg.output = rule.out
            cfg.last_output_change_step = steps + 1
        state = rule.next
        if rule.move == "R":
            head += 1
            if head > hi:
                hi = head
        elif rule.move == "L":
            head -= 1
            if head < lo:
                lo = head
        steps += 1
    cfg.state, cfg.head = state, head
    return cfg, steps, False, False, lo, hi


@simulator("tm")
def _run_tm(m, u, budget):
    cfg, steps, halted, stuck, lo, hi = _simulate_tape(m, u, budget)
    usage = ResourceUsage(steps, hi - lo + 1)
    if halted:
        return produced(tm_output(cfg.tape, m.blank), steps), usage
    return exhausted(steps, rejected=stuck), usage


def default_window(budget: int) -> int:
    return min(budget, max(100, budget // 10))


@dataclass(frozen=True)
class LimitOutcome:
    value: str
    stabilized_at: int
    window: int
    verdict: str  # "stable" | "unstable"
    halted: bool = False
    steps: int = 0

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"


def _itm_limit(m, u, budget, window):
    cfg, steps, halted, stuck, lo, hi = _simulate_tape(m, u, budget)
    usage = ResourceUsage(steps if not stuck else budget, hi - lo + 1)
    if halted:
        # a halting itm delivers its work tape like an ordinary tm
        value = tm_output(cfg.tape, m.blank)
        change = steps if value != cfg.output else cfg.last_output_change_step
        return LimitOutcome(value, change, window, "stable", True, steps), usage
    # a stuck machine idles for the rest of the budget without touching its output
    stable = cfg.last_output_change_step <= budget - window
    return LimitOutcome(cfg.output, cfg.last_output_change_step, window,
                        "stable" if stable else "unstable", False, budget), usage


def itm_run_limit(m: MachineDescription, u: str, budget: int, window: int) -> LimitOutcome:
    """Run an inductive machine for ``budget`` steps and judge its output tape.

    The verdict is ``stable`` iff the output tape was not changed during the
    last ``window`` steps.
    """
    _require(m, "itm")
    if window > budget:
        raise MachineError("window must not exceed budget")
    check_word(u, m.input_alphabet)
    return _itm_limit(m, u, budget, window)[0]


@simulator("itm")
def _run_itm(m, u, budget):
    lim, usage = _itm_limit(m, u, budget, default_window(budget))
    if lim.halted:
        return produced(lim.value, lim.steps), usage
    if lim.stable:
        return RunOutcome(Status.LIMIT_STABLE, budget, lim.value, lim.stabilized_at), usage
    return exhausted(budget), usage


# ------------------------------------------------------------ dfa and nfa

def _eps_closure(states: frozenset, eps: dict) -> frozenset:
    todo = list(states)
    seen = set(states)
    while todo:
        q = todo.pop()
        for r in eps.get(q, ()):
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return frozenset(seen)


def _fa_index(m):
    hit = _COMPILED.get(id(m))
    if hit is not None and hit[0] is m:
        return hit[1]
    delta: dict = {}
    eps: dict = {}
    for r in m.transitions:
        if r.read:
            delta.setdefault((r.state, r.read), []).append(r.next)
        else:
            eps.setdefault(r.state, []).append(r.next)
    _COMPILED[id(m)] = (m, (delta, eps))
    return delta, eps


def fa_final_states(m: MachineDescription, w: str) -> frozenset:
    """Set of states reachable after reading ``w`` (subset simulation)."""
    delta, eps = _fa_index(m)
    current = _eps_closure(frozenset([m.start]), eps)
    for a in w:
        nxt = set()
        for q in current:
            nxt.update(delta.get((q, a), ()))
        current = _eps_closure(frozenset(nxt), eps)
    return current


def _run_fa(m, u, budget):
    need = len(u) + 1  # one step per symbol plus the end-of-input check
    if budget < need:
        return exhausted(budget), ResourceUsage(budget, max(1, budget))
    usage = ResourceUsage(need, need)
    if fa_final_states(m, u) & m.accept:
        return produced("1", need), usage
    return exhausted(need, rejected=True), usage


simulator("dfa")(_run_fa)
simulator("nfa")(_run_fa)


def nfa_to_dfa(n: MachineDescription) -> MachineDescription:
    """Subset construction over the reachable subsets, with a dead state."""
    _require(n, "nfa", "dfa")
    delta, eps = _fa_index(n)
    start = _eps_closure(frozenset([n.start]), eps)
    names = {start: "S0"}
    order = [start]
    rules = []
    i = 0
    while i < len(order):
        subset = order[i]
        i += 1
        for a in n.input_alphabet:
            nxt = set()
            for q in subset:
                nxt.update(delta.get((q, a), ()))
            target = _eps_closure(frozenset(nxt), eps)
            if target not in names:
                names[target] = f"S{len(names)}"
                order.append(target)
            rules.append((names[subset], a, names[target]))
    accept = [names[s] for s in order if s & n.accept]
    return make_fa(rules, "S0", accept, n.input_alphabet, states=[names[s] for s in order],
                   name=f"det({n.name})" if n.name else "")


def dfa_complement(d: MachineDescription) -> MachineDescription:
    _require(d, "dfa")
    accept = [q for q in d.states if q not in d.accept]
    return make_fa(d.transitions, d.start, accept, d.input_alphabet, states=d.states,
                   name=f"co({d.name})" if d.name else "")


def dfa_from_words(words: Iterable[str], alphabet) -> MachineDescription:
    """Trie automaton accepting exactly the given finite set."""
    sigma = Alphabet.of(alphabet, allow_reserved=True)
    words = sorted(set(words), key=lambda w: (len(w), w))
    ids = {"": "t0"}
    for w in words:
        check_word(w, sigma)
        for k in range(1, len(w) + 1):
            ids.setdefault(w[:k], f"t{len(ids)}")
    rules = []
    for prefix, q in ids.items():
        for a in sigma:
            rules.append((q, a, ids.get(prefix + a, "dead")))
    rules += [("dead", a, "dead") for a in sigma]
    return make_fa(rules, "t0", [ids[w] for w in words], sigma, states=list(ids.values()) + ["dead"])


def tm_predicate_from_dfa(d: MachineDescription, name: str = "") -> MachineDescription:
    """A 1/0-writing Turing machine that decides the language of ``d``.

    It erases its input left to right while tracking the automaton state and
    writes ``1`` or ``0`` on the first blank, taking |w| + 1 steps.
    """
    _require(d, "dfa")
    rules = []
    for r in d.transitions:
        rules.append((f"p_{r.state}", r.read, f"p_{r.next}", BLANK, "R"))
    for q in d.states:
        rules.append((f"p_{q}", BLANK, "halt", "1" if q in d.accept else "0", "S"))
    return make_tm(rules, f"p_{d.start}", ["halt"], d.input_alphabet, name=name or f"dec({d.name})")


def acceptance_by_state_vs_result(m: MachineDescription, domain: Iterable[str], budget: int) -> bool:
    """Does acceptance by an accepting state coincide with producing "1"?"""
    _require(m, "dfa", "nfa")
    from .core import run
    for u in domain:
        by_state = bool(fa_final_states(m, u) & m.accept) and len(u) + 1 <= budget
        r = run(m, u, budget)
        by_result = r.status is Status.PRODUCED and r.word == "1"
        if by_state != by_result:
            return False
    return True


# --------------------------------------------------------------------- pda

@simulator("pda")
def _run_pda(m, u, budget):
    """Breadth-first search over configurations; one step per expansion."""
    rules_by_state: dict = {}
    for r in m.transitions:
        rules_by_state.setdefault(r.state, []).append(r)
    start = (m.start, 0, m.start_stack)
    queue = deque([start])
    seen = {start}
    steps = 0
    far = 0
    n = len(u)
    empty_stack = m.acceptance == "empty_stack"
    while queue:
        if steps >= budget:
            return exhausted(budget), ResourceUsage(budget, far + 1)
        state, pos, stack = queue.popleft()
        steps += 1
        far = max(far, pos)
        if pos == n and (not stack if empty_stack else state in m.accept):
            return produced("1", steps), ResourceUsage(steps, far + 1)
        for r in rules_by_state.get(state, ()):
            if r.read:
                if pos >= n or u[pos] != r.read:
                    continue
            if r.pop and not stack.startswith(r.pop):
                continue
            nxt = (r.next, pos + (1 if r.read else 0), r.push + stack[len(r.pop):])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return exhausted(steps, rejected=True), ResourceUsage(steps, far + 1)


def _fresh(prefix: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = prefix
    i = 0
    while name in taken:
        i += 1
        name = f"{prefix}{i}"
    return name


def pda_convert_acceptance(p: MachineDescription, target: str) -> MachineDescription:
    """Convert between final-state and empty-stack acceptance."""
    _require(p, "pda")
    if target not in ("final_state", "empty_stack"):
        raise MachineError(f"unknown acceptance convention {target!r}")
    if target == p.acceptance:
        return p
    bottom = next(c for c in "$%&@!^~" if c not in p.stack_alphabet)
    stack_alpha = p.stack_alphabet.union([bottom])
    s0 = _fresh("cv_start", p.states)
    rules = [PdaRule(s0, "", bottom, p.start, p.start_stack + bottom), *p.transitions]
    states = [s0, *p.states]
    if target == "final_state":
        f = _fresh("cv_final", states)
        states.append(f)
        rules += [PdaRule(q, "", bottom, f, "") for q in p.states]
        accept = frozenset([f])
        acceptance = "final_state"
    else:
        e = _fresh("cv_drain", states)
        states.append(e)
        for g in stack_alpha:
            rules += [PdaRule(q, "", g, e, "") for q in sorted(p.accept)]
            rules.append(PdaRule(e, "", g, e, ""))
        accept = frozenset()
        acceptance = "empty_stack"
    m = MachineDescription(model="pda", input_alphabet=p.input_alphabet, states=tuple(states),
                           start=s0, accept=accept, transitions=tuple(rules),
                           stack_alphabet=stack_alpha, start_stack=bottom, acceptance=acceptance)
    return m.with_name(f"{p.name}->{target}" if p.name else "")
