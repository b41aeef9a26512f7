"""Tier partitions along a parametric family of initial states.

The family here is x_n = (n, 1, 0) on the five-complex cycle.  Complexes
are first bucketed by how fast their mass-action monomial grows with n
(the growth partition), then the vanishing sources are split off (the
intensity partition).  The top intensity tier is what matters dynamically:
reactions fired from it dominate, and a path through it that strictly
drops the growth tier is a certificate that the chain is pushed back
toward the origin along the family.
"""

from fractions import Fraction
from pathlib import Path

from crnkit import (
    Const,
    Grow,
    d_partition,
    hypothesis_check,
    parse,
    parse_sequence_spec,
    path_probability_limit,
    path_tier_membership,
    s_partition,
    witness_path,
)

NETWORKS = Path(__file__).resolve().parent / "networks"


def law_text(law):
    if isinstance(law, Const):
        return str(law.value)
    power = Fraction(law.power)
    body = "n" if power == 1 else f"n^{power}"
    return body if law.coef == 1 else f"{law.coef}*{body}"


def seq_text(seq, species):
    return ", ".join(f"{s}={law_text(l)}" for s, l in zip(species, seq.laws))


def show_partition(title, net, partition):
    print(title)
    for rank, tier in enumerate(partition.tiers, start=1):
        degree = partition.degrees[next(iter(tier))]
        members = ", ".join(
            sorted(net.format_complex(net.complexes[i]) for i in tier)
        )
        print(f"  tier {rank} (degree {degree}): {members}")
    if partition.infinite:
        members = ", ".join(
            sorted(net.format_complex(net.complexes[i]) for i in partition.infinite)
        )
        print(f"  vanishing: {members}")


def main():
    system = parse((NETWORKS / "cycle.crn").read_text())
    net = system.network
    seq = parse_sequence_spec("A=n, B=1, C=0", net.species).normalized_for(net)
    print(f"family: ({seq_text(seq, net.species)}) from n = {seq.start}")
    for n in (10, 100, 1000):
        print(f"  x_{n} = {seq.evaluate(n)}")
    print()

    show_partition("growth partition:", net, d_partition(net, seq))
    show_partition("intensity partition:", net, s_partition(net, seq))
    print()

    path = witness_path(net, seq)
    report = path_tier_membership(net, seq, path)
    print("witness path (each step fired from the top intensity tier):")
    for step in path:
        print(f"  {step.format(net.species)}")
    print(f"  stays in top intensity tier: {report.in_top_intensity}")
    print(f"  reaches a lower growth tier: {report.in_drop}")
    limit = path_probability_limit(system, seq, path)
    print(f"  limiting probability of this path: {limit:.6f}")
    print()

    print("pattern scan over (0, 2, n, n^2, n^3) per species:")
    clean = hypothesis_check(net)
    print(
        f"  cycle.crn: {clean.patterns_checked} patterns checked, "
        f"violation found: {clean.violation_found}"
    )
    trap_net = parse((NETWORKS / "annihilation.crn").read_text()).network
    trap = hypothesis_check(trap_net)
    print(
        f"  annihilation.crn: violation after {trap.patterns_checked} patterns"
    )
    print(
        f"    family ({seq_text(trap.violating_sequence, trap_net.species)}) "
        f"leaves complex "
        f"{trap_net.format_complex(trap_net.complexes[trap.violating_complex])!r} "
        f"as the only top-tier source"
    )


if __name__ == "__main__":
    main()
