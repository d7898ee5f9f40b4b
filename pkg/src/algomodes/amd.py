"""Plain-text machine description files (``.amd``).

A document is a block of ``key: value`` header lines followed by a
``transitions:`` block with one rule per line::

    model: tm
    name: T_double
    states: q0 q1 h
    input_alphabet: 1
    tape_alphabet: 1 X _
    blank: _
    start: q0
    accept: h
    transitions:
      q0 1 -> q1 X R

Rule syntax depends on the model: ``q a -> p b M`` for tm (an itm may append
``/ w`` to set its output tape to ``w``), ``q a -> p`` for dfa and nfa, and
``q a s -> p push`` for pda.  ``eps`` stands for the empty word.  Composite
documents name their parts by file path::

    composite: seq
    components: a.amd b.amd
    predicate: p.amd
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .core import (
    BLANK, MODELS, Alphabet, FaRule, MachineDescription, MachineError, PdaRule, TmRule,
)
from .theorems import Poly

EPS = "eps"

HEADER_KEYS = {
    "tm": ("model", "name", "states", "input_alphabet", "tape_alphabet", "blank", "start", "accept"),
    "dfa": ("model", "name", "states", "input_alphabet", "start", "accept"),
    "pda": ("model", "name", "states", "input_alphabet", "stack_alphabet", "start_stack", "start",
            "accept", "acceptance"),
}
HEADER_KEYS["itm"] = HEADER_KEYS["tm"]
HEADER_KEYS["nfa"] = HEADER_KEYS["dfa"]
COMPOSITE_KEYS = ("composite", "name", "input_alphabet", "components", "predicate", "rounds",
                  "step_bound", "cell_bound")
REQUIRED = {"model", "states", "input_alphabet", "start"}


class AmdError(MachineError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


@dataclass
class _Line:
    no: int
    text: str

    def col_of(self, token: str) -> int:
        i = self.text.find(token)
        return i + 1 if i >= 0 else 1


def _word(tok: str) -> str:
    return "" if tok == EPS else tok


def _show(w: str) -> str:
    return w if w else EPS


def _split_header(text: str):
    header: dict[str, tuple[str, _Line]] = {}
    rules: list[_Line] = []
    in_rules = False
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if in_rules:
            if line.startswith((" ", "\t")):
                rules.append(_Line(no, line))
                continue
            in_rules = False
        key, sep, value = line.partition(":")
        if not sep:
            raise AmdError(f"expected 'key: value', got {line.strip()!r}", no, 1)
        key = key.strip()
        if key in header:
            raise AmdError(f"duplicate key {key!r}", no, 1)
        if key == "transitions":
            in_rules = True
            header[key] = ("", _Line(no, line))
            continue
        header[key] = (value.strip(), _Line(no, line))
    return header, rules


def parse_amd(text: str, base_dir: str | Path | None = None,
              loader: Callable[[str], MachineDescription] | None = None) -> MachineDescription:
    """Parse and validate a machine document; errors carry line and column."""
    header, rules = _split_header(text)
    if "composite" in header:
        return _parse_composite(header, base_dir, loader)
    if "model" not in header:
        raise AmdError("missing 'model' key", 1, 1)
    model, mline = header["model"]
    if model not in MODELS or model == "composite":
        raise AmdError(f"unknown model {model!r}", mline.no, mline.col_of(model) if model else 1)
    allowed = set(HEADER_KEYS[model]) | {"transitions"}
    for key, (_, ln) in header.items():
        if key not in allowed:
            raise AmdError(f"unknown key {key!r} for model {model}", ln.no, 1)
    last = max(ln.no for _, ln in header.values())
    for key in sorted(REQUIRED):
        if key not in header:
            raise AmdError(f"missing {key!r}" + (" state" if key == "start" else ""), last, 1)

    def get(key, default=""):
        return header[key][0] if key in header else default

    def symbols(key, reserved):
        value, ln = header[key]
        toks = value.split()
        try:
            return Alphabet(tuple(toks), allow_reserved=reserved)
        except MachineError as e:
            raise AmdError(str(e), ln.no, ln.col_of(value) if value else 1) from None

    states = tuple(get("states").split())
    sigma = symbols("input_alphabet", True)
    start, sline = header["start"]
    if start not in states:
        raise AmdError(f"undeclared state {start!r}", sline.no, sline.col_of(start) if start else 1)
    accept = get("accept").split()
    for q in accept:
        if q not in states:
            ln = header["accept"][1]
            raise AmdError(f"undeclared state {q!r}", ln.no, ln.col_of(q))
    known_states = set(states)
    kw: dict = {}
    if model in ("tm", "itm"):
        if "tape_alphabet" not in header:
            raise AmdError("missing 'tape_alphabet'", last, 1)
        tape = symbols("tape_alphabet", True)
        blank = get("blank", BLANK)
        kw.update(tape_alphabet=tape, blank=blank)
        alph = set(tape.symbols)
        parsed = _tm_rules(rules, known_states, alph, model)
    elif model in ("dfa", "nfa"):
        parsed = _fa_rules(rules, known_states, set(sigma.symbols), model)
    else:
        if "stack_alphabet" not in header:
            raise AmdError("missing 'stack_alphabet'", last, 1)
        stack = symbols("stack_alphabet", True)
        kw.update(stack_alphabet=stack, start_stack=_word(get("start_stack", EPS)),
                  acceptance=get("acceptance", "final_state"))
        parsed = _pda_rules(rules, known_states, set(sigma.symbols), set(stack.symbols))
    try:
        m = MachineDescription(model=model, input_alphabet=sigma, states=states, start=start,
                               accept=frozenset(accept), transitions=tuple(parsed), **kw)
    except MachineError as e:
        raise AmdError(str(e), last, 1) from None
    return m.with_name(get("name"))


def _rule_parts(ln: _Line, left_n: int, right_n: tuple[int, ...]):
    left, arrow, right = ln.text.partition("->")
    if not arrow:
        raise AmdError("expected '->'", ln.no, len(ln.text.rstrip()) + 1)
    lt, rt = left.split(), right.split()
    if len(lt) != left_n or len(rt) not in right_n:
        raise AmdError("wrong number of fields in rule", ln.no, ln.col_of(ln.text.strip()))
    return lt, rt


def _need(ln: _Line, tok: str, pool: set, what: str, col_hint: int = 0):
    if tok not in pool:
        col = ln.text.find(f" {tok}", col_hint) + 2 if f" {tok}" in ln.text else ln.col_of(tok)
        raise AmdError(f"undeclared {what} {tok!r}", ln.no, col)


def _tm_rules(lines, states, tape, model):
    out, seen = [], {}
    for ln in lines:
        lt, rt = _rule_parts(ln, 2, (3, 5) if model == "itm" else (3,))
        q, a = lt
        p, b, mv = rt[:3]
        arrow = ln.text.find("->")
        _need(ln, q, states, "state")
        _need(ln, a, tape, "symbol")
        _need(ln, p, states, "state", arrow)
        _need(ln, b, tape, "symbol", arrow)
        if mv not in ("L", "R", "S"):
            raise AmdError(f"bad move {mv!r}", ln.no, ln.text.rfind(mv) + 1)
        o = None
        if len(rt) == 5:
            if rt[3] != "/":
                raise AmdError("expected '/' before the output word", ln.no, ln.col_of(rt[3]))
            o = _word(rt[4])
        if (q, a) in seen:
            raise AmdError(f"second rule for ({q}, {a}); first on line {seen[(q, a)]}", ln.no, 1)
        seen[(q, a)] = ln.no
        out.append(TmRule(q, a, p, b, mv, o))
    return out


def _fa_rules(lines, states, sigma, model):
    out, seen = [], {}
    for ln in lines:
        lt, rt = _rule_parts(ln, 2, (1,))
        (q, a), (p,) = lt, rt
        _need(ln, q, states, "state")
        _need(ln, p, states, "state", ln.text.find("->"))
        a = _word(a)
        if a == "" and model == "dfa":
            raise AmdError("dfa cannot have epsilon moves", ln.no, ln.col_of(EPS))
        if a:
            _need(ln, a, sigma, "symbol")
        if model == "dfa":
            if (q, a) in seen:
                raise AmdError(f"dfa has two transitions for ({q}, {a}); first on line {seen[(q, a)]}",
                               ln.no, 1)
            seen[(q, a)] = ln.no
        out.append(FaRule(q, a, p))
    return out


def _pda_rules(lines, states, sigma, stack):
    out = []
    for ln in lines:
        lt, rt = _rule_parts(ln, 3, (2,))
        (q, a, s), (p, push) = lt, rt
        _need(ln, q, states, "state")
        _need(ln, p, states, "state", ln.text.find("->"))
        a, s, push = _word(a), _word(s), _word(push)
        if a:
            _need(ln, a, sigma, "symbol")
        for c in s + push:
            _need(ln, c, stack, "stack symbol")
        out.append(PdaRule(q, a, s, p, push))
    return out


def _poly(text: str, ln: _Line) -> Poly | None:
    if text in ("", "none"):
        return None
    try:
        return Poly(tuple(int(c) for c in text.split()))
    except ValueError:
        raise AmdError(f"bad polynomial {text!r}", ln.no, ln.col_of(text)) from None


def _parse_composite(header, base_dir, loader):
    for key, (_, ln) in header.items():
        if key not in COMPOSITE_KEYS:
            raise AmdError(f"unknown key {key!r} for a composite", ln.no, 1)
    from .combinators import SEQ_KINDS
    kind, kline = header["composite"]
    kinds = set(SEQ_KINDS) | {"derived_total", "padded_total", "stream_match", "bounded"}
    if kind not in kinds:
        raise AmdError(f"unknown combinator kind {kind!r}", kline.no, kline.col_of(kind) if kind else 1)
    if loader is None:
        base = Path(base_dir or ".")
        loader = lambda p: load_amd(base / p)  # noqa: E731
    if "components" not in header:
        raise AmdError("missing 'components'", kline.no, 1)
    value, cline = header["components"]
    parts = []
    for p in value.split():
        try:
            parts.append(loader(p))
        except OSError as e:
            raise AmdError(f"cannot read component {p!r}: {e.strerror}", cline.no, cline.col_of(p)) from None
    pred = None
    if "predicate" in header:
        pv, pline = header["predicate"]
        try:
            pred = loader(pv)
        except OSError as e:
            raise AmdError(f"cannot read predicate {pv!r}: {e.strerror}", pline.no, pline.col_of(pv)) from None
    params = []
    if "rounds" in header:
        rv, rline = header["rounds"]
        if not rv.isdigit():
            raise AmdError(f"rounds must be a natural number, got {rv!r}", rline.no, rline.col_of(rv))
        params.append(("rounds", int(rv)))
    if kind == "bounded":
        params.append(("step_bound", _poly(*_field(header, "step_bound"))))
        params.append(("cell_bound", _poly(*_field(header, "cell_bound"))))
    if not parts:
        raise AmdError("a composite needs components", cline.no, 1)
    if "input_alphabet" in header:
        sigma = Alphabet(tuple(header["input_alphabet"][0].split()), allow_reserved=True)
    else:
        sigma = parts[-1].input_alphabet if kind in ("seq", "p_seq") else parts[0].input_alphabet
    m = MachineDescription(model="composite", input_alphabet=sigma, kind=kind, components=tuple(parts),
                           predicate=pred, params=tuple(params))
    return m.with_name(header.get("name", ("", None))[0])


def _field(header, key):
    if key in header:
        return header[key]
    return "", _Line(0, "")


def load_amd(path: str | Path) -> MachineDescription:
    path = Path(path)
    return parse_amd(path.read_text(encoding="utf-8"), base_dir=path.parent)


# ------------------------------------------------------------ serializing

def serialize_amd(m: MachineDescription, component_paths: dict | None = None) -> str:
    """Canonical text of ``m``.  Composites need ``component_paths`` mapping
    ``"components"`` to a list of paths and optionally ``"predicate"``."""
    if m.model == "composite":
        return _serialize_composite(m, component_paths or {})
    lines = [f"model: {m.model}"]
    if m.name:
        lines.append(f"name: {m.name}")
    lines.append("states: " + " ".join(m.states))
    lines.append(f"input_alphabet: {m.input_alphabet}")
    if m.model in ("tm", "itm"):
        lines.append(f"tape_alphabet: {m.tape_alphabet}")
        lines.append(f"blank: {m.blank}")
    if m.model == "pda":
        lines.append(f"stack_alphabet: {m.stack_alphabet}")
        lines.append(f"start_stack: {_show(m.start_stack)}")
    lines.append(f"start: {m.start}")
    lines.append("accept: " + " ".join(q for q in m.states if q in m.accept))
    if m.model == "pda":
        lines.append(f"acceptance: {m.acceptance}")
    lines.append("transitions:")
    for r in m.transitions:
        if m.model in ("tm", "itm"):
            tail = "" if r.out is None else f" / {_show(r.out)}"
            lines.append(f"  {r.state} {r.read} -> {r.next} {r.write} {r.move}{tail}")
        elif m.model == "pda":
            lines.append(f"  {r.state} {_show(r.read)} {_show(r.pop)} -> {r.next} {_show(r.push)}")
        else:
            lines.append(f"  {r.state} {_show(r.read)} -> {r.next}")
    return "\n".join(x.rstrip() for x in lines) + "\n"


def _serialize_composite(m, paths):
    comps = paths.get("components")
    if comps is None or len(comps) != len(m.components):
        raise MachineError("serializing a composite needs one path per component")
    lines = [f"composite: {m.kind}"]
    if m.name:
        lines.append(f"name: {m.name}")
    lines.append(f"input_alphabet: {m.input_alphabet}")
    lines.append("components: " + " ".join(str(p) for p in comps))
    if m.predicate is not None:
        if "predicate" not in paths:
            raise MachineError("serializing this composite needs a predicate path")
        lines.append(f"predicate: {paths['predicate']}")
    for key, value in m.params:
        if isinstance(value, Poly) or value is None:
            value = "none" if value is None else " ".join(str(c) for c in value.coeffs)
        lines.append(f"{key}: {value}")
    return "\n".join(x.rstrip() for x in lines) + "\n"


def save_amd(m: MachineDescription, path: str | Path) -> list[Path]:
    """Write ``m`` to ``path``; composite parts go to sibling files
    ``<stem>.<i>.amd`` and ``<stem>.p.amd``.  Returns every file written."""
    path = Path(path)
    written = []
    paths: dict = {}
    if m.model == "composite":
        names = []
        for i, c in enumerate(m.components):
            sub = path.with_name(f"{path.stem}.{i}.amd")
            written += save_amd(c, sub)
            names.append(sub.name)
        paths["components"] = names
        if m.predicate is not None:
            sub = path.with_name(f"{path.stem}.p.amd")
            written += save_amd(m.predicate, sub)
            paths["predicate"] = sub.name
    path.write_text(serialize_amd(m, paths), encoding="utf-8")
    written.append(path)
    return written
