"""Bidiagonal covering: run a machine on every input for every step allowance.

Round ``m`` (m = 2, 3, ...) gives each of the inputs 1..m a fresh
simulation of ``m`` steps; whenever the simulation reaches a final state an
emission is written.  The reference path below walks the twelve-stage
control loop literally and restarts the simulated machine for every
(round, input) slot.  :func:`emission_table` is a memoized fast path that
must agree with it emission for emission.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple

from .core import (
    MARKER, MachineDescription, MachineError, ResourceUsage, Status, composite_kind, exhausted,
    output_alphabet_rule, output_alphabet, produced, run, shortlex_index, shortlex_word,
)
from .models import itm_run_limit


class Emission(NamedTuple):
    round: int
    input_index: int
    halt_step: int
    output: str


@dataclass
class DovetailState:
    """Counters of the enumerator: A1 holds m, A2 holds n, A3 holds t."""

    m: int = 0
    n: int = 0
    t: int = 0
    stage: int = 1
    sim_step: int = 0  # steps the copy cT has simulated in the current slot
    slot: tuple | None = None  # (halt_step, word) of the current slot, or None
    trace: list = field(default_factory=list)


def _slot_fn(T: MachineDescription, window: int | None) -> Callable[[int, int], tuple | None]:
    """Fresh simulation of T on input n with an allowance of m steps."""
    if T.model not in ("tm", "itm", "composite"):
        raise MachineError(f"bidiagonal covering needs a tm, itm or composite, got {T.model!r}")

    def slot(n, m):
        u = shortlex_word(n - 1, T.input_alphabet)
        if T.model == "itm":
            w = m if window is None else min(window, m)
            lim = itm_run_limit(T, u, m, w)
            if lim.halted:
                return max(lim.steps, 1), lim.value
            if lim.stable:
                return max(lim.stabilized_at, 1), lim.value
            return None
        r = run(T, u, m)
        if r.status is Status.PRODUCED:
            return max(r.steps_used, 1), r.word
        return None

    return slot


def _walk(T, rounds, window=None, trace=False) -> Iterator[Emission]:
    if rounds < 2:
        raise MachineError("rounds must be >= 2")
    slot = _slot_fn(T, window)
    s = DovetailState()

    def sim_one_step():
        s.sim_step += 1
        if s.slot is not None and s.slot[0] == s.sim_step:
            return Emission(s.m, s.n, s.sim_step, s.slot[1])
        return None

    while True:
        if trace:
            s.trace.append((s.stage, s.m, s.n, s.t))
        st = s.stage
        if st == 1:
            s.m, s.n = 2, 0
            s.stage = 2
        elif st == 2:
            s.n = 1
            s.stage = 3
        elif st in (3, 12):
            s.slot = slot(s.n, s.m)
            s.sim_step = 0
            e = sim_one_step()
            if e:
                yield e
            s.stage = 4 if st == 3 else 7
        elif st == 4:
            s.t = 1
            s.stage = 5
        elif st == 5:
            s.stage = 6 if s.t < s.m else 9
        elif st == 6:
            e = sim_one_step()
            if e:
                yield e
            s.stage = 7
        elif st == 7:
            s.t += 1
            s.stage = 8
        elif st == 8:
            if s.t < s.m:
                s.stage = 6
            else:
                s.t = 0
                s.stage = 9
        elif st == 9:
            s.stage = 11 if s.n < s.m else 10
        elif st == 10:
            s.m += 1
            if s.m > rounds:
                if trace:
                    _LAST_TRACE[:] = s.trace
                return
            s.n = 0
            s.stage = 11
        elif st == 11:
            s.n += 1
            s.stage = 12


_LAST_TRACE: list = []


def bidiagonal_stream(T: MachineDescription, rounds: int, window: int | None = None) -> list[Emission]:
    """All emissions of the enumerator through round ``rounds``, in schedule order."""
    return list(_walk(T, rounds, window))


def schedule_trace(T: MachineDescription, rounds: int) -> list[tuple[int, int, int, int]]:
    """(stage, m, n, t) at entry to every stage of the control loop."""
    for _ in _walk(T, rounds, trace=True):
        pass
    return list(_LAST_TRACE)


def schedule_cost(rounds: int) -> int:
    """Simulated steps spent through round ``rounds``: m slots of m steps each."""
    return sum(m * m for m in range(2, rounds + 1))


@dataclass(frozen=True)
class EmissionTable:
    emissions: tuple[Emission, ...]
    cost_at: tuple[int, ...]  # simulated steps up to and including each emission
    compare_cost_at: tuple[int, ...]  # comparison steps for emissions 1..k
    first_index: dict  # output word -> position of its first emission
    total_cost: int
    total_compare_cost: int


@functools.lru_cache(maxsize=256)
def emission_table(T: MachineDescription, rounds: int, window: int | None = None) -> EmissionTable:
    """Memoized equivalent of :func:`bidiagonal_stream` with step costs."""
    if rounds < 2:
        raise MachineError("rounds must be >= 2")
    halting = {}
    if T.model != "itm":
        slot = _slot_fn(T, window)
        for n in range(1, rounds + 1):
            # deterministic runs are budget monotone, so one run at the largest allowance suffices
            halting[n] = slot(n, rounds)
        lookup = lambda n, m: halting[n] if halting[n] is not None and halting[n][0] <= m else None  # noqa: E731
    else:
        lookup = _slot_fn(T, window)
    emissions, cost_at, cmp_at, first = [], [], [], {}
    before = 0
    cmp_total = 0
    for m in range(2, rounds + 1):
        for n in range(1, m + 1):
            hit = lookup(n, m)
            if hit is not None:
                t, z = hit
                emissions.append(Emission(m, n, t, z))
                cost_at.append(before + t)
                cmp_total += len(z) + 1
                cmp_at.append(cmp_total)
                first.setdefault(z, len(emissions) - 1)
            before += m
    return EmissionTable(tuple(emissions), tuple(cost_at), tuple(cmp_at), first,
                         before, cmp_total)


def range_oracle(T: MachineDescription, domain, budget: int) -> frozenset[str]:
    """Outputs of T over ``domain`` by direct per-input simulation."""
    out = set()
    for u in domain:
        r = run(T, u, budget)
        if r.status is Status.PRODUCED:
            out.add(r.word)
    return frozenset(out)


def first_inputs(T: MachineDescription, count: int) -> list[str]:
    return [shortlex_word(i, T.input_alphabet) for i in range(count)]


def format_emission(e: Emission, verbose: bool = False) -> str:
    if verbose:
        return f"{e.round}\t{e.input_index}\t{e.halt_step}\t{e.output}"
    return f"{e.output}{MARKER}"


# ------------------------------------------------------- derived machines

def _dovetail_machine(kind: str, T: MachineDescription, rounds: int, alphabet=None) -> MachineDescription:
    if T.model not in ("tm", "itm", "composite"):
        raise MachineError(f"{kind} needs a tm, itm or composite, got {T.model!r}")
    if rounds < 2:
        raise MachineError("rounds must be >= 2")
    m = MachineDescription(model="composite", input_alphabet=alphabet or T.input_alphabet, kind=kind,
                           components=(T,), params=(("rounds", rounds),))
    return m.with_name(f"{kind}({T.name})" if T.name else "")


def derived_total(T: MachineDescription, rounds: int) -> MachineDescription:
    """DT: on the k-th input word, output the k-th emission of the stream."""
    return _dovetail_machine("derived_total", T, rounds)


def padded_total(T: MachineDescription, rounds: int) -> MachineDescription:
    """D0T: like DT, but repeats the last emission once the stream runs dry."""
    return _dovetail_machine("padded_total", T, rounds)


def _indexed(m, u, budget, pad):
    T, = m.components
    rounds = m.param("rounds")
    tab = emission_table(T, rounds)
    k = shortlex_index(u, m.input_alphabet) + 1
    n_em = len(tab.emissions)
    if k <= n_em:
        cost, word = tab.cost_at[k - 1], tab.emissions[k - 1].output
    elif pad and n_em:
        # only after the last round is it known that no further emission comes
        cost, word = tab.total_cost, tab.emissions[-1].output
    else:
        if tab.total_cost <= budget:
            return exhausted(tab.total_cost, rejected=True), ResourceUsage(tab.total_cost, 1)
        return exhausted(budget), ResourceUsage(budget, 1)
    if cost <= budget:
        return produced(word, cost), ResourceUsage(cost, 1)
    return exhausted(budget), ResourceUsage(budget, 1)


composite_kind("derived_total")(lambda m, u, b: _indexed(m, u, b, pad=False))
composite_kind("padded_total")(lambda m, u, b: _indexed(m, u, b, pad=True))


@output_alphabet_rule("derived_total")
@output_alphabet_rule("padded_total")
def _out_dovetail(m):
    return output_alphabet(m.components[0])


def stream_match(T: MachineDescription, rounds: int, alphabet=None) -> MachineDescription:
    """Weak decider for the range of T: halts with 1 once ``u`` shows up in T's stream.

    Each emission ``z`` is checked with the comparison predicate for ``u``,
    which costs |z| + 1 steps.
    """
    return _dovetail_machine("stream_match", T, rounds, alphabet)


@composite_kind("stream_match")
def _run_stream_match(m, u, budget):
    T, = m.components
    tab = emission_table(T, m.param("rounds"))
    k = tab.first_index.get(u)
    if k is None:
        cost = tab.total_cost + tab.total_compare_cost
        if cost <= budget:
            return exhausted(cost, rejected=True), ResourceUsage(cost, len(u) + 1)
        return exhausted(budget), ResourceUsage(budget, len(u) + 1)
    cost = tab.cost_at[k] + tab.compare_cost_at[k]
    if cost <= budget:
        return produced("1", cost), ResourceUsage(cost, len(u) + 1)
    return exhausted(budget), ResourceUsage(budget, len(u) + 1)


@output_alphabet_rule("stream_match")
def _out_match(m):
    return frozenset("1")


def stream_match_reference(T: MachineDescription, rounds: int, u: str, budget: int):
    """Literal evaluation of :func:`stream_match`: walk the stream and run the
    comparison machine on every emission.  Used to certify the fast path."""
    from .combinators import comp_predicate

    comparator = comp_predicate(u, sorted(set(T.input_alphabet.symbols) | output_alphabet(T)))
    spent = 0
    last_slot_end = 0
    for e in _walk(T, rounds):
        slot_start = schedule_cost(e.round - 1) + (e.input_index - 1) * e.round
        spent += slot_start + e.halt_step - last_slot_end
        last_slot_end = slot_start + e.halt_step
        r = run(comparator, e.output, 10 ** 9)
        spent += r.steps_used
        if spent > budget:
            return exhausted(budget)
        if r.word == "1":
            return produced("1", spent)
    spent += schedule_cost(rounds) - last_slot_end
    if spent <= budget:
        return exhausted(spent, rejected=True)
    return exhausted(budget)
