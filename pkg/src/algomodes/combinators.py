"""Algorithm operations as composite machines.

Composites are schedulers over their components rather than products of
transition tables.  Every component micro-step costs one unit of the
composite's budget, and races interleave the two components in lockstep
(A moves, then B), which gives the timing used below: if A finishes after
``a`` of its own steps and B after ``b``, A's ``s``-th step happens at
global time ``s + min(s - 1, b)`` and B's at ``s + min(s, a)``.
"""
from __future__ import annotations

from .core import (
    BLANK, SEPARATOR, Alphabet, MachineDescription, MachineError, ResourceUsage,
    Status, check_word, composite_kind, exhausted, output_alphabet, output_alphabet_rule,
    produced, run_metered,
)
from .models import make_tm

DEFAULT_ALPHABET = "01"

SEQ_KINDS = ("seq", "disj_par", "conj_par", "p_seq", "p_conj_par", "p_disj_par", "p_disj_seq")


def rewriting(alphabet=DEFAULT_ALPHABET) -> MachineDescription:
    """Identity machine: scans its input and halts on the first blank."""
    sigma = Alphabet.of(alphabet, allow_reserved=True)
    rules = [("q0", a, "q0", a, "R") for a in sigma]
    rules.append(("q0", BLANK, "h", BLANK, "S"))
    return make_tm(rules, "q0", ["h"], sigma, name="rewriting")


def constant(c: str | None, alphabet=DEFAULT_ALPHABET) -> MachineDescription:
    """Machine with constant output ``c``; ``None`` gives a machine that never halts."""
    sigma = Alphabet.of(alphabet, allow_reserved=True)
    if c is None:
        rules = [("loop", a, "loop", a, "S") for a in (*sigma, BLANK)]
        return make_tm(rules, "loop", [], sigma, extra_states=["h"], name="constant(NONE)")
    rules = [("e", a, "e", BLANK, "R") for a in sigma]
    if not c:
        rules.append(("e", BLANK, "h", BLANK, "S"))
    else:
        rules.append(("e", BLANK, "w1" if len(c) > 1 else "h", c[0], "R" if len(c) > 1 else "S"))
        for i in range(1, len(c)):
            last = i == len(c) - 1
            rules.append((f"w{i}", BLANK, "h" if last else f"w{i + 1}", c[i], "S" if last else "R"))
    return make_tm(rules, "e", ["h"], sigma, name=f"constant({c!r})")


def comp_predicate(v: str, alphabet=DEFAULT_ALPHABET) -> MachineDescription:
    """Comparison predicate: writes 1 iff its input equals ``v``, else 0.

    States track the longest matched prefix of ``v``; the input is erased on
    the way, so every run takes exactly |w| + 1 steps.
    """
    sigma = Alphabet.of(alphabet, allow_reserved=True)
    check_word(v, sigma)
    rules = []
    for i in range(len(v) + 1):
        for a in sigma:
            nxt = f"m{i + 1}" if i < len(v) and v[i] == a else "x"
            rules.append((f"m{i}", a, nxt, BLANK, "R"))
        rules.append((f"m{i}", BLANK, "h", "1" if i == len(v) else "0", "S"))
    rules += [("x", a, "x", BLANK, "R") for a in sigma]
    rules.append(("x", BLANK, "h", "0", "S"))
    return make_tm(rules, "m0", ["h"], sigma, name=f"comp({v!r})")


def _composite(kind, components, predicate=None, input_alphabet=None, name=""):
    if input_alphabet is None:
        input_alphabet = components[-1].input_alphabet if kind in ("seq", "p_seq") else components[0].input_alphabet
    m = MachineDescription(model="composite", input_alphabet=input_alphabet, kind=kind,
                           components=tuple(components), predicate=predicate)
    return m.with_name(name)


def _accepts_outputs_of(consumer: MachineDescription, producer: MachineDescription, what: str):
    missing = output_alphabet(producer) - set(consumer.input_alphabet.symbols)
    if missing:
        raise MachineError(f"{what}: output symbols {sorted(missing)} not in input alphabet "
                           f"{{{consumer.input_alphabet}}}")


def _same_inputs(a, b, what):
    if set(a.input_alphabet.symbols) != set(b.input_alphabet.symbols):
        raise MachineError(f"{what}: components have different input alphabets")


def seq_compose(a, b) -> MachineDescription:
    """Sequential composition: D(u) = A(B(u))."""
    _accepts_outputs_of(a, b, "seq_compose")
    return _composite("seq", (a, b), input_alphabet=b.input_alphabet)


def disj_parallel(a, b) -> MachineDescription:
    _same_inputs(a, b, "disj_parallel")
    return _composite("disj_par", (a, b))


def conj_parallel(a, b) -> MachineDescription:
    _same_inputs(a, b, "conj_parallel")
    return _composite("conj_par", (a, b))


def p_seq(a, p, b) -> MachineDescription:
    _accepts_outputs_of(p, b, "p_seq predicate")
    _accepts_outputs_of(a, b, "p_seq")
    return _composite("p_seq", (a, b), p, input_alphabet=b.input_alphabet)


def p_conj_parallel(a, p, b) -> MachineDescription:
    _same_inputs(a, b, "p_conj_parallel")
    _accepts_outputs_of(p, b, "p_conj_parallel predicate")
    return _composite("p_conj_par", (a, b), p)


def p_disj_parallel(a, p, b) -> MachineDescription:
    _same_inputs(a, b, "p_disj_parallel")
    _accepts_outputs_of(p, a, "p_disj_parallel predicate")
    _accepts_outputs_of(p, b, "p_disj_parallel predicate")
    return _composite("p_disj_par", (a, b), p)


def p_disj_seq(a, p, b) -> MachineDescription:
    """Run A; keep its result if P accepts it, otherwise fall back to B on the input."""
    _same_inputs(a, b, "p_disj_seq")
    _accepts_outputs_of(p, a, "p_disj_seq predicate")
    return _composite("p_disj_seq", (a, b), p)


COMBINATORS = {
    "seq": lambda a, b, p=None: seq_compose(a, b),
    "disj_par": lambda a, b, p=None: disj_parallel(a, b),
    "conj_par": lambda a, b, p=None: conj_parallel(a, b),
    "p_seq": lambda a, b, p: p_seq(a, p, b),
    "p_conj_par": lambda a, b, p: p_conj_parallel(a, p, b),
    "p_disj_par": lambda a, b, p: p_disj_parallel(a, p, b),
    "p_disj_seq": lambda a, b, p: p_disj_seq(a, p, b),
}


# ---------------------------------------------------------------- semantics

def _dead(budget, cells):
    # a blocked composite parks in a dead loop until the budget is gone
    return exhausted(budget), ResourceUsage(budget, cells)


def _test(p, z, budget):
    """Run the predicate; returns (verdict or None, steps, cells)."""
    r, use = run_metered(p, z, budget)
    if r.status is not Status.PRODUCED:
        return None, r.steps_used, use.cells_visited
    if r.word not in ("0", "1"):
        raise MachineError(f"predicate produced {r.word!r}, expected 1 or 0")
    return r.word == "1", r.steps_used, use.cells_visited


@composite_kind("seq")
def _run_seq(m, u, budget):
    a, b = m.components
    rb, ub = run_metered(b, u, budget)
    if not rb.produced:
        return exhausted(rb.steps_used, rb.rejected), ub
    ra, ua = run_metered(a, rb.word, budget - rb.steps_used)
    usage = ResourceUsage(rb.steps_used + ra.steps_used, max(ub.cells_visited, ua.cells_visited))
    if ra.produced:
        return produced(ra.word, usage.steps), usage
    return exhausted(usage.steps, ra.rejected), usage


@composite_kind("conj_par")
def _run_conj(m, u, budget):
    a, b = m.components
    ra, ua = run_metered(a, u, budget)
    rb, ub = run_metered(b, u, budget)
    cells = ua.cells_visited + ub.cells_visited
    total = ra.steps_used + rb.steps_used
    if ra.produced and rb.produced and total <= budget:
        return produced(ra.word + SEPARATOR + rb.word, total), ResourceUsage(total, cells)
    finished = (ra.produced or ra.rejected) and (rb.produced or rb.rejected)
    if finished and total <= budget:
        return exhausted(total, rejected=True), ResourceUsage(total, cells)
    return exhausted(budget), ResourceUsage(budget, cells)


def _race(branches, budget):
    """Lockstep race of two branches.

    Each branch is ``(finish_steps or None, result word or None, cells)``;
    a branch with a finish but no result died (rejected, or failed its
    predicate).  Returns ``(RunOutcome, ResourceUsage)``.
    """
    (fa, za, ca), (fb, zb, cb) = branches
    cells = ca + cb
    inf = float("inf")
    fa_ = inf if fa is None else fa
    fb_ = inf if fb is None else fb
    # global completion times; a zero-step finish completes at time 0
    ta = inf if fa is None else (fa + min(fa - 1, fb_) if fa > 0 else 0)
    tb = inf if fb is None else (fb + min(fb, fa_) if fb > 0 else 0)
    wins = []
    if za is not None and ta <= budget:
        wins.append((ta, 0, za))
    if zb is not None and tb <= budget:
        wins.append((tb, 1, zb))
    if wins:
        t, _, z = min(wins)
        return produced(z, int(t)), ResourceUsage(int(t), cells)
    end = max(ta, tb)
    if end <= budget:
        return exhausted(int(end), rejected=True), ResourceUsage(int(end), cells)
    return exhausted(budget), ResourceUsage(budget, cells)


def _plain_branch(x, u, budget):
    r, use = run_metered(x, u, budget)
    if r.produced:
        return r.steps_used, r.word, use.cells_visited
    if r.rejected:
        return r.steps_used, None, use.cells_visited
    return None, None, use.cells_visited


def _guarded_branch(x, p, u, budget):
    """Branch that runs ``x`` and then filters its result through ``p``."""
    r, use = run_metered(x, u, budget)
    if not r.produced:
        return (r.steps_used if r.rejected else None), None, use.cells_visited
    ok, ps, pc = _test(p, r.word, budget - r.steps_used)
    cells = max(use.cells_visited, pc)
    if ok is None:
        return None, None, cells
    # a failing predicate kills the branch; the race goes on without it
    return r.steps_used + ps, (r.word if ok else None), cells


@composite_kind("disj_par")
def _run_disj(m, u, budget):
    a, b = m.components
    return _race([_plain_branch(a, u, budget), _plain_branch(b, u, budget)], budget)


@composite_kind("p_disj_par")
def _run_p_disj(m, u, budget):
    a, b = m.components
    p = m.predicate
    return _race([_guarded_branch(a, p, u, budget), _guarded_branch(b, p, u, budget)], budget)


@composite_kind("p_seq")
def _run_p_seq(m, u, budget):
    a, b = m.components
    rb, ub = run_metered(b, u, budget)
    if not rb.produced:
        return exhausted(rb.steps_used, rb.rejected), ub
    ok, ps, pc = _test(m.predicate, rb.word, budget - rb.steps_used)
    used = rb.steps_used + ps
    cells = max(ub.cells_visited, pc)
    if not ok:
        return _dead(budget, cells)
    ra, ua = run_metered(a, rb.word, budget - used)
    usage = ResourceUsage(used + ra.steps_used, max(cells, ua.cells_visited))
    if ra.produced:
        return produced(ra.word, usage.steps), usage
    return exhausted(usage.steps, ra.rejected), usage


@composite_kind("p_conj_par")
def _run_p_conj(m, u, budget):
    a, b = m.components
    rb, ub = run_metered(b, u, budget)
    if not rb.produced:
        return exhausted(rb.steps_used, rb.rejected), ub
    ok, ps, pc = _test(m.predicate, rb.word, budget - rb.steps_used)
    used = rb.steps_used + ps
    cells = max(ub.cells_visited, pc)
    if ok is None:
        return _dead(budget, cells)
    if not ok:
        return produced(rb.word, used), ResourceUsage(used, cells)
    ra, ua = run_metered(a, u, budget - used)
    usage = ResourceUsage(used + ra.steps_used, max(cells, ua.cells_visited))
    if ra.produced:
        return produced(ra.word, usage.steps), usage
    return exhausted(usage.steps, ra.rejected), usage


@composite_kind("p_disj_seq")
def _run_p_disj_seq(m, u, budget):
    a, b = m.components
    ra, ua = run_metered(a, u, budget)
    if not ra.produced:
        return exhausted(ra.steps_used, ra.rejected), ua
    ok, ps, pc = _test(m.predicate, ra.word, budget - ra.steps_used)
    used = ra.steps_used + ps
    cells = max(ua.cells_visited, pc)
    if ok is None:
        return _dead(budget, cells)
    if ok:
        return produced(ra.word, used), ResourceUsage(used, cells)
    rb, ub = run_metered(b, u, budget - used)
    usage = ResourceUsage(used + rb.steps_used, max(cells, ub.cells_visited))
    if rb.produced:
        return produced(rb.word, usage.steps), usage
    return exhausted(usage.steps, rb.rejected), usage


@output_alphabet_rule("seq")
@output_alphabet_rule("p_seq")
def _out_seq(m):
    return output_alphabet(m.components[0])


@output_alphabet_rule("conj_par")
def _out_conj(m):
    return output_alphabet(m.components[0]) | output_alphabet(m.components[1]) | {SEPARATOR}


@output_alphabet_rule("p_conj_par")
@output_alphabet_rule("disj_par")
@output_alphabet_rule("p_disj_par")
@output_alphabet_rule("p_disj_seq")
def _out_union(m):
    return output_alphabet(m.components[0]) | output_alphabet(m.components[1])
