"""Write the example machines, two class directories and a battery as files
under corpus/ so the command line can be exercised on them."""
from pathlib import Path

from algomodes.amd import save_amd
from algomodes.corpus import (
    dfa_all, dfa_even0, itm_alternating, itm_single_write, nfa_end01, pda_anbn, pda_even0,
    t_bouncer, t_double, t_even, t_loop, t_odd, tm_anbn_decider, tm_even0_decider,
)
from algomodes.combinators import comp_predicate, constant, rewriting

ROOT = Path(__file__).resolve().parent.parent / "corpus"


def main():
    machines = {
        "t_double": t_double(), "t_even": t_even(), "t_odd": t_odd(), "t_loop": t_loop(),
        "t_bouncer": t_bouncer(), "rewriting": rewriting(), "const1": constant("1"),
        "const_none": constant(None), "is1": comp_predicate("1"),
        "dfa_even0": dfa_even0(), "dfa_all": dfa_all(), "nfa_end01": nfa_end01(),
        "pda_anbn": pda_anbn(), "pda_even0": pda_even0(), "tm_anbn": tm_anbn_decider(),
        "tm_even0": tm_even0_decider(), "itm_write1": itm_single_write(),
        "itm_alternate": itm_alternating(),
    }
    ROOT.mkdir(exist_ok=True)
    for name, m in machines.items():
        save_amd(m, ROOT / f"{name}.amd")
    classes = {
        "pda": (["pda_anbn"], "name: PDA\nmodels: pda\nproduces_output: no\n"),
        "dfa": (["dfa_all_ab"], "name: DFA\nmodels: dfa\nclosures: complement\nproduces_output: no\n"
                "dfa_search_states: 6\n"),
    }
    for cname, (members, manifest) in classes.items():
        d = ROOT / "classes" / cname
        d.mkdir(parents=True, exist_ok=True)
        for mname in members:
            m = pda_anbn() if mname == "pda_anbn" else dfa_all("ab")
            save_amd(m, d / f"{mname}.amd")
        (d / "class.txt").write_text(manifest)
    (ROOT / "battery_ab.txt").write_text(
        "anbn: eps ab aabb aaabbb aaaabbbb\n")
    (ROOT / "even_unary.txt").write_text("eps\n11\n1111\n111111\n11111111\n")


if __name__ == "__main__":
    main()
