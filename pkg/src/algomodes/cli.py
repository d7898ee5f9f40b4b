"""Command line: run, compose, enumerate, transform, verify, power, equiv.

Exit codes: 0 when the run produced or the verdict holds, 1 when it does
not (the witness goes to standard output), 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import models, theorems
from .amd import AmdError, load_amd, save_amd, serialize_amd
from .combinators import COMBINATORS
from .core import MachineDescription, MachineError, Status, run
from .dovetail import bidiagonal_stream, derived_total, format_emission, padded_total
from .modes import MODES, BoundedDomain, verify

DEFAULT_BUDGET = 10 ** 4
DEFAULT_ROUNDS = 64


class UsageError(Exception):
    pass


def _word_arg(w: str) -> str:
    return "" if w in ("eps", "ε") else w


def _domain(m: MachineDescription, args) -> BoundedDomain:
    return BoundedDomain.of(args.alphabet or m.input_alphabet, args.maxlen)


def read_word_set(path, domain: BoundedDomain) -> frozenset[str]:
    """One word per line, ``eps`` for the empty word, ``@all`` for the whole domain."""
    words = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        tok = raw.strip()
        if not tok:
            continue
        if tok == "@all":
            words |= set(domain)
        else:
            words.add(_word_arg(tok))
    return frozenset(words)


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    m = load_amd(args.file)
    r = run(m, _word_arg(args.word), args.budget)
    print(r)
    return 0 if r.status in (Status.PRODUCED, Status.LIMIT_STABLE) else 1


def _relpath(target, out_dir) -> str:
    return os.path.relpath(Path(target).resolve(), Path(out_dir).resolve())


def cmd_compose(args) -> int:
    if args.kind not in COMBINATORS:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {', '.join(COMBINATORS)}")
    a, b = load_amd(args.a), load_amd(args.b)
    p = load_amd(args.p) if args.p else None
    if args.kind.startswith("p_") and p is None:
        raise UsageError(f"{args.kind} needs a predicate file")
    m = COMBINATORS[args.kind](a, b, p)
    out = Path(args.output)
    paths = {"components": [_relpath(args.a, out.parent), _relpath(args.b, out.parent)]}
    if p is not None:
        paths["predicate"] = _relpath(args.p, out.parent)
    out.write_text(serialize_amd(m, paths), encoding="utf-8")
    print(out)
    return 0


def cmd_enumerate(args) -> int:
    m = load_amd(args.file)
    stream = bidiagonal_stream(m, args.rounds)
    if args.verbose:
        for e in stream:
            print(format_emission(e, True))
    else:
        print("".join(format_emission(e) for e in stream))
    return 0


def _one(ms, rule):
    if len(ms) != 1:
        raise UsageError(f"rule {rule} takes one machine, got {len(ms)}")
    return ms[0]


def _two(ms, rule):
    if len(ms) != 2:
        raise UsageError(f"rule {rule} takes two machines, got {len(ms)}")
    return ms


RULES = {
    "prop2.3": lambda ms, a: theorems.computer_from_weak_decider(_one(ms, "prop2.3")),
    "prop2.4": lambda ms, a: theorems.weak_decider_from_acceptor(_one(ms, "prop2.4")),
    "prop2.5": lambda ms, a: theorems.computer_from_acceptor(_one(ms, "prop2.5")),
    "prop2.6": lambda ms, a: theorems.acceptor_from_weak_decider(_one(ms, "prop2.6")),
    "prop2.8": lambda ms, a: theorems.decider_from_weak_and_co(*_two(ms, "prop2.8")),
    "prop2.9": lambda ms, a: theorems.weak_decider_from_computer(_one(ms, "prop2.9"), a.rounds),
    "prop2.10": lambda ms, a: theorems.acceptor_from_computer(_one(ms, "prop2.10"), a.rounds),
    "thm2.1": lambda ms, a: theorems.decider_from_computers(*_two(ms, "thm2.1"), a.rounds),
    "thm2.3": lambda ms, a: theorems.decider_from_acceptors(*_two(ms, "thm2.3")),
    "weak": lambda ms, a: theorems.weak_decider_from_decider(_one(ms, "weak")),
    "co": lambda ms, a: theorems.codecider_from_decider(_one(ms, "co")),
    "determinize": lambda ms, a: models.nfa_to_dfa(_one(ms, "determinize")),
    "complement": lambda ms, a: models.dfa_complement(_one(ms, "complement")),
    "empty-stack": lambda ms, a: models.pda_convert_acceptance(_one(ms, "empty-stack"), "empty_stack"),
    "final-state": lambda ms, a: models.pda_convert_acceptance(_one(ms, "final-state"), "final_state"),
    "limit": lambda ms, a: theorems.limit_decider(_one(ms, "limit")),
    "dt": lambda ms, a: derived_total(_one(ms, "dt"), a.rounds),
    "d0t": lambda ms, a: padded_total(_one(ms, "d0t"), a.rounds),
}


def cmd_transform(args) -> int:
    if args.rule not in RULES:
        raise UsageError(f"unknown rule {args.rule!r}; choose from {', '.join(RULES)}")
    ms = [load_amd(p) for p in args.inputs]
    m = RULES[args.rule](ms, args)
    for p in save_amd(m, args.output):
        print(p)
    return 0


def cmd_verify(args) -> int:
    m = load_amd(args.file)
    d = _domain(m, args)
    target = read_word_set(args.set, d)
    v = verify(args.mode, m, target, list(d), args.budget)
    print(v.line())
    return 0 if v.holds else 1


# class directories: member *.amd files plus an optional class.txt manifest
_MANIFEST_KEYS = {"name", "members", "closures", "models", "step_bound", "cell_bound",
                  "produces_output", "allowed_outputs", "dfa_search_states"}


def load_class(directory) -> theorems.ClassDescriptor:
    directory = Path(directory)
    conf: dict[str, str] = {}
    manifest = directory / "class.txt"
    if manifest.exists():
        for no, raw in enumerate(manifest.read_text(encoding="utf-8").splitlines(), 1):
            if not raw.strip():
                continue
            key, sep, value = raw.partition(":")
            key = key.strip()
            if not sep or key not in _MANIFEST_KEYS:
                raise AmdError(f"bad manifest line {raw.strip()!r}", no, 1)
            conf[key] = value.strip()
    if "members" in conf:
        files = [directory / f for f in conf["members"].split()]
    else:
        # composite parts are saved as <stem>.<i>.amd and are not members
        files = sorted(p for p in directory.glob("*.amd") if "." not in p.stem)
    members = tuple(load_amd(f) for f in files)

    def poly(key):
        v = conf.get(key, "none")
        return None if v == "none" else theorems.Poly(tuple(int(c) for c in v.split()))

    kw = {}
    if "models" in conf:
        kw["models"] = frozenset(conf["models"].split())
    if "allowed_outputs" in conf:
        kw["allowed_outputs"] = frozenset(_word_arg(w) for w in conf["allowed_outputs"].split())
    return theorems.ClassDescriptor(
        conf.get("name", directory.name), members,
        closures=frozenset(conf.get("closures", "").split()),
        step_bound=poly("step_bound"), cell_bound=poly("cell_bound"),
        produces_output=conf.get("produces_output", "yes") == "yes",
        dfa_search_states=int(conf.get("dfa_search_states", "0")), **kw)


def read_battery(path, domain: BoundedDomain) -> list[tuple[str, frozenset[str]]]:
    """``name: w1 w2 ...`` per line; ``@all`` is the whole domain, ``eps`` the empty word."""
    out = []
    for no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip():
            continue
        name, sep, rest = raw.partition(":")
        if not sep:
            raise AmdError("expected 'name: words'", no, 1)
        words = set()
        for tok in rest.split():
            words |= set(domain) if tok == "@all" else {_word_arg(tok)}
        out.append((name.strip(), frozenset(words)))
    return out


def cmd_power(args) -> int:
    cls = load_class(args.classdir)
    if not args.alphabet:
        raise UsageError("power needs --alphabet")
    d = BoundedDomain.of(args.alphabet, args.maxlen)
    battery = read_battery(args.battery, d)
    report = theorems.power_report(cls, battery, list(d), args.budget)
    sys.stdout.write(report.to_tsv())
    for note in report.notes:
        print(f"note\t{note}")
    bad = theorems.inclusion_violations(report, cls.closures)
    for b in bad:
        print(f"violation\t{b}")
    if args.against:
        other = theorems.power_report(load_class(args.against), battery, list(d), args.budget)
        for flag in theorems.FLAGS:
            c = theorems.compare_power(report, other, flag)
            extra = ",".join(sorted(c.only_left)) or "-"
            print(f"compare\t{flag}\t{report.class_name} {c.verdict} {other.class_name}\twitness={extra}")
    return 1 if bad else 0


def cmd_equiv(args) -> int:
    a, b = load_amd(args.a), load_amd(args.b)
    if args.exact_dfa:
        same, w = theorems.dfa_equiv_exact(a, b)
        print("equivalent" if same else f"different\t{w if w else 'eps'}")
        return 0 if same else 1
    v = theorems.functional_equiv(a, b, args.mode, list(_domain(a, args)), args.budget)
    print(v.line())
    return 0 if v.holds else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="algomodes", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, budget=True, domain=False):
        if budget:
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        if domain:
            p.add_argument("--alphabet", default=None, help="domain alphabet (default: machine input alphabet)")
            p.add_argument("--maxlen", type=int, default=8)

    p = sub.add_parser("run", help="run a machine on one word")
    p.add_argument("file")
    p.add_argument("word", help="input word, 'eps' for the empty word")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compose", help="write a composite of two machines")
    p.add_argument("kind")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("p", nargs="?")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("enumerate", help="print the bidiagonal emission stream")
    p.add_argument("file")
    p.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("transform", help="apply a named construction")
    p.add_argument("--rule", required=True)
    p.add_argument("inputs", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="check a mode claim on a bounded domain")
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("file")
    p.add_argument("--set", required=True)
    common(p, domain=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("power", help="power report of a class on a battery")
    p.add_argument("classdir")
    p.add_argument("battery")
    p.add_argument("--against", default=None, help="second class directory to compare with")
    common(p, domain=True)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("equiv", help="compare two machines")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--exact-dfa", action="store_true")
    p.add_argument("--mode", default="accept", choices=MODES)
    common(p, domain=True)
    p.set_defaults(func=cmd_equiv)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MachineError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
