"""Structural classification: linkage classes, reversibility, and the
positive-recurrence verdict.

The verdict is a sufficient condition.  The first two networks satisfy all
three hypotheses and are certified outright; the three-class chain fails
weak reversibility and comes back Inconclusive with the reasons listed.
"""

from pathlib import Path

from crnkit import (
    is_binary,
    is_weakly_reversible,
    linkage_classes,
    parse,
    reachable_states,
    species_complex_condition,
    theorem_verdict,
)

NETWORKS = Path(__file__).resolve().parent / "networks"


def describe(name):
    system = parse((NETWORKS / name).read_text())
    net = system.network
    print(f"== {name} ==")
    part = linkage_classes(net)
    for cls, strong in zip(part.classes, part.strongly_connected):
        members = ", ".join(net.format_complex(net.complexes[i]) for i in sorted(cls))
        print(f"  class {{{members}}}  strongly connected: {strong}")
    print(f"  weakly reversible: {is_weakly_reversible(net)}")
    print(f"  binary: {is_binary(net)}")
    report = species_complex_condition(net)
    for sp, witness in zip(net.species, report.witnesses):
        shown = net.format_complex(witness) if witness is not None else "none"
        print(f"  species {sp}: witness complex {shown}")
    verdict = theorem_verdict(net)
    print(f"  verdict: {verdict.verdict}")
    for reason in verdict.reasons:
        print(f"    - {reason}")
    print()


def main():
    for name in ("loop.crn", "cycle.crn", "threeclass.crn"):
        describe(name)

    system = parse((NETWORKS / "isomers.crn").read_text())
    report = reachable_states(system, (2, 0))
    print(
        f"isomers.crn from (2, 0): {len(report.states)} reachable states, "
        f"truncated: {report.truncated}"
    )
    for state in sorted(report.states):
        print(f"  {state}")


if __name__ == "__main__":
    main()
