"""Print the headline desk-scale results: stream sizes, mode round trips,
bounded-class round trips, the PDA/DFA power comparison and limit verdicts."""
import argparse
import random
import time

from algomodes.corpus import (
    dfa_all, dfa_even0, fixed_corpus, halting_battery, language_battery, pda_anbn, random_tm,
)
from algomodes.dovetail import bidiagonal_stream, first_inputs, range_oracle
from algomodes.models import dfa_complement, itm_run_limit, tm_predicate_from_dfa
from algomodes.modes import BoundedDomain, accepted_set
from algomodes.theorems import (
    ClassDescriptor, Poly, compare_power, decider_from_acceptors, decider_round_trip,
    functional_equiv, limit_decider, power_report, resource_bounded_class,
)

B = 10 ** 4


def streams(rounds, n_random, seed):
    rng = random.Random(seed)
    machines = [random_tm(rng) for _ in range(n_random)] + fixed_corpus()
    print(f"# dovetail streams, {rounds} rounds")
    print("machine\temissions\tdistinct\tmatches_oracle")
    for T in machines:
        s = bidiagonal_stream(T, rounds)
        outs = {e.output for e in s}
        ok = outs == range_oracle(T, first_inputs(T, rounds), rounds)
        print(f"{T.name}\t{len(s)}\t{len(outs)}\t{int(ok)}")


def round_trips(max_length):
    print(f"\n# decider round trips, |w| <= {max_length}")
    print("language\tvia_computers\tvia_acceptors\tseconds")
    for name, D, dom in language_battery(max_length):
        t = time.perf_counter()
        a = decider_round_trip(D, dom, B).holds
        b = functional_equiv(D, decider_from_acceptors(D, dfa_complement(D)), "decide", dom, B).holds
        print(f"{name}\t{int(a)}\t{int(b)}\t{time.perf_counter() - t:.2f}")


def bounded_classes():
    dom = BoundedDomain.of("01", 8).words()
    base = ClassDescriptor("TM", (tm_predicate_from_dfa(dfa_even0()),))
    print("\n# even0 round trip inside resource-bounded classes")
    for via, cls in (("tag", resource_bounded_class(base, Poly((16, 0, 4)))),
                     ("rewriting", resource_bounded_class(base, None, Poly((2, 1)))),
                     ("tag", resource_bounded_class(base, None, Poly((2, 1))))):
        print(f"{cls.name}\tsplit={via}\t{decider_round_trip(dfa_even0(), dom, B, via, cls).line()}")


def power():
    dom = BoundedDomain.of("ab", 8).words()
    battery = [("anbn", frozenset("a" * n + "b" * n for n in range(5)))]
    pda = ClassDescriptor("PDA", (pda_anbn(),), models=frozenset({"pda"}), produces_output=False)
    dfa = ClassDescriptor("DFA", (dfa_all("ab"),), closures=frozenset({"complement"}),
                          models=frozenset({"dfa"}), produces_output=False, dfa_search_states=6)
    rp, rd = power_report(pda, battery, dom, B), power_report(dfa, battery, dom, B)
    print("\n# power reports on {a^n b^n : n <= 4}, |w| <= 8")
    for r in (rp, rd):
        print(f"## {r.class_name}")
        print(r.to_tsv(), end="")
        for note in r.notes:
            print(f"note\t{note}")
    c = compare_power(rp, rd, "acceptable")
    print(f"PDA vs DFA (acceptable): {c.verdict}, strictly above: {c.left_strictly_above}")


def limits():
    print("\n# limit decider verdicts, budget 10^4, window 10^3")
    print("machine\tinput\thalts\tverdict\tstabilized_at")
    for m, u, halts in halting_battery():
        lim = itm_run_limit(limit_decider(m), u, B, 10 ** 3)
        print(f"{m.name}\t{u or 'eps'}\t{int(halts)}\t{lim.value if lim.stable else '?'}\t{lim.stabilized_at}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=64)
    ap.add_argument("--random", type=int, default=30, help="number of random machines")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--maxlen", type=int, default=8)
    a = ap.parse_args()
    streams(a.rounds, a.random, a.seed)
    round_trips(a.maxlen)
    bounded_classes()
    power()
    limits()


if __name__ == "__main__":
    main()
