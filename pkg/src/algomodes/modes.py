"""Mode queries (compute, enumerate, accept, weak-decide, codecide, decide)
evaluated exhaustively over a bounded domain at a fixed budget."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import ACCEPTOR_MODELS, Alphabet, MachineDescription, RunOutcome, Status, run, words_up_to

MODES = ("compute", "enumerate", "accept", "weak_decide", "codecide", "decide")


@dataclass(frozen=True)
class BoundedDomain:
    """All words over ``alphabet`` of length <= ``max_length``, shortlex ordered."""

    alphabet: Alphabet
    max_length: int

    @classmethod
    def of(cls, alphabet, max_length: int) -> "BoundedDomain":
        return cls(Alphabet.of(alphabet), max_length)

    def __iter__(self) -> Iterator[str]:
        return words_up_to(self.alphabet, self.max_length)

    def __len__(self):
        k = len(self.alphabet)
        return sum(k ** i for i in range(self.max_length + 1))

    def __contains__(self, w):
        return len(w) <= self.max_length and all(s in self.alphabet for s in w)

    def words(self) -> list[str]:
        return list(self)


@dataclass(frozen=True)
class ModeVerdict:
    mode: str
    holds: bool
    witness: tuple | None = None  # (input, observed, expected)

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def line(self) -> str:
        if self.witness is None:
            return f"{self.mode}\ttrue\t"
        u, observed, expected = self.witness
        return f"{self.mode}\t{str(self.holds).lower()}\t{_show(u)}: observed {_show(observed)}, expected {_show(expected)}"


def _show(w):
    if w is None:
        return "none"
    if isinstance(w, str):
        return w if w else "ε"
    return str(w)


class Acceptance(enum.Enum):
    ACCEPTED = "accepted"
    NOT_WITHIN_BUDGET = "not_within_budget"


def computable_set(m: MachineDescription, domain: Iterable[str], budget: int) -> frozenset[str]:
    out = set()
    for u in domain:
        r = run(m, u, budget)
        if r.status is Status.PRODUCED:
            out.add(r.word)
    return frozenset(out)


def accepts(m: MachineDescription, u: str, budget: int) -> Acceptance:
    r = run(m, u, budget)
    return Acceptance.ACCEPTED if r.status is Status.PRODUCED else Acceptance.NOT_WITHIN_BUDGET


def accepted_set(m: MachineDescription, domain: Iterable[str], budget: int) -> frozenset[str]:
    return frozenset(u for u in domain if accepts(m, u, budget) is Acceptance.ACCEPTED)


def indicated_set(m: MachineDescription, domain: Iterable[str], budget: int) -> frozenset[str]:
    """Inputs on which ``m`` produces the indicator word "1"."""
    return frozenset(u for u in domain if _indicator(run(m, u, budget)))


def _indicator(r: RunOutcome) -> bool:
    return r.status is Status.PRODUCED and r.word == "1"


def decision_value(m: MachineDescription, r: RunOutcome) -> str | None:
    """Read a run as a 1/0 decision.

    Halting results count as they are; an inductive machine's stable limit
    counts as its result; an acceptor model that stops in a rejecting state
    reads as "0" (acceptance by state and by result coincide for them).
    A bounded wrapper passes its automaton's rejections through; a run cut
    off by the bound gives no decision.
    """
    if r.status is Status.PRODUCED or r.status is Status.LIMIT_STABLE:
        return r.word
    if r.rejected and reads_by_state(m):
        return "0"
    return None


def reads_by_state(m: MachineDescription) -> bool:
    """Automata, and resource-bounded wrappers of them, decide by their stopping state."""
    if m.model in ACCEPTOR_MODELS:
        return True
    return m.model == "composite" and m.kind == "bounded" and reads_by_state(m.components[0])


def enumerates(m, X: Iterable[str], domain, budget: int) -> ModeVerdict:
    X = frozenset(X)
    out = set()
    for u in domain:
        r = run(m, u, budget)
        if r.status is not Status.PRODUCED:
            return ModeVerdict("enumerate", False, (u, None, "a result"))
        out.add(r.word)
    if out != X:
        diff = sorted(out ^ X, key=lambda w: (len(w), w))[0]
        return ModeVerdict("enumerate", False, (diff, "in range" if diff in out else "not in range",
                                               "in set" if diff in X else "not in set"))
    return ModeVerdict("enumerate", True)


def _indicator_check(mode, m, target: frozenset, domain, budget) -> ModeVerdict:
    for u in domain:
        r = run(m, u, budget)
        want = u in target
        if _indicator(r) != want or (not want and r.status is not Status.EXHAUSTED):
            return ModeVerdict(mode, False, (u, r.result, "1" if want else None))
    return ModeVerdict(mode, True)


def weakly_decides(m, X: Iterable[str], domain, budget: int) -> ModeVerdict:
    """Produces "1" exactly on X and gives no result elsewhere."""
    return _indicator_check("weak_decide", m, frozenset(X), domain, budget)


def codecides(m, X: Iterable[str], domain, budget: int) -> ModeVerdict:
    domain = list(domain)
    return _indicator_check("codecide", m, frozenset(domain) - frozenset(X), domain, budget)


def decides(m, X: Iterable[str], domain, budget: int) -> ModeVerdict:
    X = frozenset(X)
    for u in domain:
        got = decision_value(m, run(m, u, budget))
        want = "1" if u in X else "0"
        if got != want:
            return ModeVerdict("decide", False, (u, got, want))
    return ModeVerdict("decide", True)


def computes(m, X: Iterable[str], domain, budget: int) -> ModeVerdict:
    X = frozenset(X)
    got = computable_set(m, domain, budget)
    if got != X:
        diff = sorted(got ^ X, key=lambda w: (len(w), w))[0]
        return ModeVerdict("compute", False, (diff, "in range" if diff in got else "not in range",
                                             "in set" if diff in X else "not in set"))
    return ModeVerdict("compute", True)


def accepts_set(m, X: Iterable[str], domain, budget: int) -> ModeVerdict:
    X = frozenset(X)
    for u in domain:
        ok = accepts(m, u, budget) is Acceptance.ACCEPTED
        if ok != (u in X):
            return ModeVerdict("accept", False, (u, "accepted" if ok else "not accepted",
                                                "accepted" if u in X else "not accepted"))
    return ModeVerdict("accept", True)


CHECKS = {
    "compute": computes,
    "enumerate": enumerates,
    "accept": accepts_set,
    "weak_decide": weakly_decides,
    "codecide": codecides,
    "decide": decides,
}


def verify(mode: str, m, X, domain, budget) -> ModeVerdict:
    try:
        check = CHECKS[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}") from None
    return check(m, X, domain, budget)
