"""Regenerate tests/data/schedule_rewriting_golden.tsv.

Straight-line rewrite of the round schedule that shares no code with the
package: round m = 2, 3, ... gives inputs 1..m (shortlex over 0 < 1) a fresh
run of at most m steps of the rewriting machine, and every run that halts
contributes one line ``m  n  t  word``.
"""
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "schedule_rewriting_golden.tsv"
COUNT = 20


def nth_word(i):
    # bijective base 2 with digits 0 < 1
    digits = []
    while i > 0:
        i -= 1
        digits.append("01"[i % 2])
        i //= 2
    return "".join(reversed(digits))


def rewriting_run(word, allowance):
    """Scan right in state q0; on the first blank move to h without moving."""
    tape = dict(enumerate(word))
    head, state, t = 0, "q0", 0
    while state != "h":
        if t == allowance:
            return None
        sym = tape.get(head, "_")
        if sym == "_":
            state = "h"
        else:
            head += 1
        t += 1
    cells = [tape[k] for k in sorted(tape) if tape[k] != "_"]
    return t, "".join(cells)


def main():
    lines = []
    m = 2
    while len(lines) < COUNT:
        for n in range(1, m + 1):
            hit = rewriting_run(nth_word(n - 1), m)
            if hit is not None:
                lines.append(f"{m}\t{n}\t{hit[0]}\t{hit[1]}")
        m += 1
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines[:COUNT]) + "\n")
    print(OUT)


if __name__ == "__main__":
    main()
