"""Words, alphabets, the machine description record and budgeted execution.

Every machine, whatever its model, is run through :func:`run`.  A run is
always bounded by a step budget, so "no result" is reported as
``Status.EXHAUSTED`` relative to that budget and is never a claim about
divergence.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple

BLANK = "_"
SEPARATOR = "#"
MARKER = "*"
RESERVED = frozenset({BLANK, SEPARATOR, MARKER})

MODELS = ("dfa", "nfa", "pda", "tm", "itm", "composite")
ACCEPTOR_MODELS = frozenset({"dfa", "nfa", "pda"})


class MachineError(ValueError):
    """Raised for malformed machine descriptions or ill-typed inputs."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of single-character symbols; the order fixes shortlex."""

    symbols: tuple[str, ...]
    allow_reserved: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.symbols:
            raise MachineError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise MachineError(f"duplicate symbols in alphabet {self.symbols}")
        for s in self.symbols:
            if len(s) != 1:
                raise MachineError(f"symbol {s!r} is not a single character")
            if s in RESERVED and not self.allow_reserved:
                raise MachineError(f"reserved symbol {s!r} in input alphabet")

    @classmethod
    def of(cls, symbols: "str | Iterable[str] | Alphabet", allow_reserved=False) -> "Alphabet":
        if isinstance(symbols, Alphabet):
            return symbols
        return cls(tuple(symbols), allow_reserved=allow_reserved)

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, s):
        return s in self.symbols

    def union(self, other: Iterable[str]) -> "Alphabet":
        extra = [s for s in other if s not in self.symbols]
        syms = self.symbols + tuple(sorted(set(extra)))
        return Alphabet(syms, allow_reserved=True)

    def __str__(self):
        return " ".join(self.symbols)


def check_word(w: str, a: Alphabet) -> None:
    for i, s in enumerate(w):
        if s not in a:
            raise MachineError(f"symbol {s!r} at position {i} of {w!r} not in alphabet {{{a}}}")


def shortlex_index(w: str, a: Alphabet) -> int:
    """Position of ``w`` in the shortlex order over ``a``; the empty word is 0."""
    check_word(w, a)
    k = len(a)
    rank = {s: i for i, s in enumerate(a.symbols)}
    # bijective base-k numeration
    n = 0
    for s in w:
        n = n * k + rank[s] + 1
    return n


def shortlex_word(n: int, a: Alphabet) -> str:
    if n < 0:
        raise MachineError("index must be a natural number")
    k = len(a)
    out = []
    while n > 0:
        n, r = divmod(n - 1, k)
        out.append(a.symbols[r])
    return "".join(reversed(out))


def words_up_to(a: Alphabet, max_length: int) -> Iterator[str]:
    """All words of length <= max_length in shortlex order."""
    layer = [""]
    yield ""
    for _ in range(max_length):
        layer = [w + s for w in layer for s in a.symbols]
        yield from layer


class Status(enum.Enum):
    PRODUCED = "produced"
    EXHAUSTED = "exhausted"
    LIMIT_STABLE = "limit_stable"


@dataclass(frozen=True)
class RunOutcome:
    """Result of a budgeted run.

    ``rejected`` marks an EXHAUSTED run that stopped before spending its
    budget without a result (an automaton ending in a non-accepting state,
    a stuck Turing machine).  It is still "no result"; the flag only lets
    decision queries read acceptor models by state.
    """

    status: Status
    steps_used: int
    word: str | None = None
    stabilized_at: int | None = None
    rejected: bool = False

    @property
    def produced(self) -> bool:
        return self.status is Status.PRODUCED

    @property
    def result(self) -> str | None:
        """The word for PRODUCED or LIMIT_STABLE runs, else None."""
        return self.word if self.status is not Status.EXHAUSTED else None

    def __str__(self):
        if self.status is Status.PRODUCED:
            return f"produced\t{self.word}\tsteps={self.steps_used}"
        if self.status is Status.LIMIT_STABLE:
            return f"limit_stable\t{self.word}\tstabilized_at={self.stabilized_at}\tsteps={self.steps_used}"
        tag = "rejected" if self.rejected else "exhausted"
        return f"{tag}\t\tsteps={self.steps_used}"


def produced(word: str, steps: int) -> RunOutcome:
    return RunOutcome(Status.PRODUCED, steps, word)


def exhausted(steps: int, rejected: bool = False) -> RunOutcome:
    return RunOutcome(Status.EXHAUSTED, steps, rejected=rejected)


@dataclass(frozen=True)
class ResourceUsage:
    steps: int
    cells_visited: int


class TmRule(NamedTuple):
    state: str
    read: str
    next: str
    write: str
    move: str
    out: str | None = None  # itm only: new output tape content


class FaRule(NamedTuple):
    state: str
    read: str  # "" is an epsilon move (nfa only)
    next: str


class PdaRule(NamedTuple):
    state: str
    read: str  # "" reads nothing
    pop: str  # "" pops nothing
    next: str
    push: str  # leftmost symbol ends on top


@dataclass(frozen=True, eq=True)
class MachineDescription:
    model: str
    input_alphabet: Alphabet
    states: tuple[str, ...] = ()
    start: str | None = None
    accept: frozenset[str] = frozenset()
    transitions: tuple = ()
    tape_alphabet: Alphabet | None = None
    stack_alphabet: Alphabet | None = None
    start_stack: str = ""
    acceptance: str = "final_state"
    blank: str = BLANK
    # composite fields
    kind: str | None = None
    components: tuple["MachineDescription", ...] = ()
    predicate: "MachineDescription | None" = None
    params: tuple[tuple[str, object], ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.model not in MODELS:
            raise MachineError(f"unknown model {self.model!r}")
        if self.model == "composite":
            if self.kind is None:
                raise MachineError("composite machine needs a kind")
        else:
            _validate_table(self)
        object.__setattr__(self, "_hash", None)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.model, self.input_alphabet, self.states, self.start, self.accept,
                      self.transitions, self.tape_alphabet, self.stack_alphabet, self.start_stack,
                      self.acceptance, self.blank, self.kind, self.components, self.predicate,
                      self.params))
            object.__setattr__(self, "_hash", h)
        return h

    def param(self, key, default=None):
        return dict(self.params).get(key, default)

    @property
    def deterministic(self) -> bool:
        if self.model == "dfa":
            return True
        if self.model in ("tm", "itm"):
            keys = [(r.state, r.read) for r in self.transitions]
            return len(keys) == len(set(keys))
        if self.model == "nfa":
            keys = [(r.state, r.read) for r in self.transitions]
            return "" not in {r.read for r in self.transitions} and len(keys) == len(set(keys))
        if self.model == "pda":
            rules = self.transitions
            for r in rules:
                for o in rules:
                    if o is r or o.state != r.state:
                        continue
                    reads_clash = o.read == r.read or "" in (o.read, r.read)
                    pops_clash = o.pop == r.pop or "" in (o.pop, r.pop)
                    if reads_clash and pops_clash:
                        return False
            return True
        return all(c.deterministic for c in self.components) and (
            self.predicate is None or self.predicate.deterministic)

    def with_name(self, name: str) -> "MachineDescription":
        object.__setattr__(self, "name", name)
        return self


def _validate_table(m: MachineDescription) -> None:
    states = set(m.states)
    if m.start is None:
        raise MachineError("missing start state")
    if m.start not in states:
        raise MachineError(f"start state {m.start!r} not declared")
    for q in m.accept:
        if q not in states:
            raise MachineError(f"accepting state {q!r} not declared")
    inputs = set(m.input_alphabet.symbols)
    if m.model in ("tm", "itm"):
        if m.tape_alphabet is None:
            raise MachineError("tm needs a tape alphabet")
        tape = set(m.tape_alphabet.symbols)
        if m.blank not in tape or not inputs <= tape:
            raise MachineError("tape alphabet must contain the blank and the input alphabet")
        seen = set()
        for r in m.transitions:
            _check_states(r, states, (r.state, r.next))
            if r.read not in tape or r.write not in tape:
                raise MachineError(f"undeclared tape symbol in {r}")
            if r.move not in ("L", "R", "S"):
                raise MachineError(f"bad move {r.move!r}")
            if (r.state, r.read) in seen:
                raise MachineError(f"tm must be deterministic: two rules for {(r.state, r.read)}")
            seen.add((r.state, r.read))
            if r.out is not None and m.model != "itm":
                raise MachineError("only itm rules write the output tape")
    elif m.model in ("dfa", "nfa"):
        seen = set()
        for r in m.transitions:
            _check_states(r, states, (r.state, r.next))
            if r.read and r.read not in inputs:
                raise MachineError(f"undeclared symbol {r.read!r} in {r}")
            if m.model == "dfa":
                if not r.read:
                    raise MachineError("dfa cannot have epsilon moves")
                if (r.state, r.read) in seen:
                    raise MachineError(f"dfa has two transitions for {(r.state, r.read)}")
                seen.add((r.state, r.read))
        if m.model == "dfa":
            for q in m.states:
                for a in m.input_alphabet:
                    if (q, a) not in seen:
                        raise MachineError(f"dfa missing transition for {(q, a)}")
    elif m.model == "pda":
        if m.stack_alphabet is None:
            raise MachineError("pda needs a stack alphabet")
        if m.acceptance not in ("final_state", "empty_stack"):
            raise MachineError(f"unknown acceptance convention {m.acceptance!r}")
        stack = set(m.stack_alphabet.symbols)
        for s in m.start_stack:
            if s not in stack:
                raise MachineError(f"start stack symbol {s!r} undeclared")
        for r in m.transitions:
            _check_states(r, states, (r.state, r.next))
            if r.read and r.read not in inputs:
                raise MachineError(f"undeclared symbol {r.read!r} in {r}")
            for s in r.pop + r.push:
                if s not in stack:
                    raise MachineError(f"undeclared stack symbol {s!r} in {r}")


def _check_states(rule, states, refs):
    for q in refs:
        if q not in states:
            raise MachineError(f"undeclared state {q!r} in rule {tuple(rule)}")


# Simulators register themselves here, keyed by model (or composite kind).
_SIMULATORS: dict[str, Callable] = {}
_COMPOSITES: dict[str, Callable] = {}


def simulator(model: str):
    def deco(fn):
        _SIMULATORS[model] = fn
        return fn
    return deco


def composite_kind(kind: str):
    def deco(fn):
        _COMPOSITES[kind] = fn
        return fn
    return deco


def run_metered(m: MachineDescription, u: str, budget: int) -> tuple[RunOutcome, ResourceUsage]:
    """Run with exact step and distinct-cell accounting."""
    if budget < 0:
        raise MachineError("budget must be >= 0")
    check_word(u, m.input_alphabet)
    if m.model == "composite":
        try:
            fn = _COMPOSITES[m.kind]
        except KeyError:
            raise MachineError(f"unknown composite kind {m.kind!r}") from None
    else:
        fn = _SIMULATORS[m.model]
    outcome, usage = fn(m, u, budget)
    assert outcome.steps_used <= budget
    return outcome, usage


def run(m: MachineDescription, u: str, budget: int) -> RunOutcome:
    return run_metered(m, u, budget)[0]


def relation_of(m: MachineDescription, domain: Iterable[str], budget: int) -> frozenset[tuple[str, str]]:
    pairs = set()
    for u in domain:
        r = run(m, u, budget)
        if r.status is Status.PRODUCED:
            pairs.add((u, r.word))
    return frozenset(pairs)


def is_function(relation: Iterable[tuple[str, str]]) -> bool:
    seen: dict[str, str] = {}
    for u, z in relation:
        if seen.setdefault(u, z) != z:
            return False
    return True


def output_alphabet(m: MachineDescription) -> frozenset[str]:
    """Symbols that can appear in a result of ``m`` (an over-approximation)."""
    if m.model in ACCEPTOR_MODELS:
        return frozenset("1")
    if m.model in ("tm", "itm"):
        syms = set(m.tape_alphabet.symbols) - {m.blank}
        if m.model == "itm":
            for r in m.transitions:
                if r.out:
                    syms |= set(r.out)
        return frozenset(syms)
    fn = _OUTPUT_ALPHABETS.get(m.kind)
    if fn is not None:
        return fn(m)
    out = set()
    for c in m.components:
        out |= output_alphabet(c)
    return frozenset(out)


_OUTPUT_ALPHABETS: dict[str, Callable] = {}


def output_alphabet_rule(kind: str):
    def deco(fn):
        _OUTPUT_ALPHABETS[kind] = fn
        return fn
    return deco
