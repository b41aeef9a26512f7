"""Mass-action rates and the generator applied to the entropy-like function.

Walks through the elementary quantities on two small systems: per-reaction
intensities, the total jump rate out of a state, and the generator applied
to V(x) = sum_i (x_i (log x_i - 1) + 1).  On the five-complex cycle that
last quantity grows linearly in n along the ray (n, 1, 0), which is the
reason one-step drift arguments fail there.
"""

import math

from crnkit import (
    generator_applied,
    lyapunov,
    reaction_rate,
    total_rate,
    transition_rates,
)
from crnkit.catalog import birth_death, five_complex_cycle


def show_rates(system, x):
    net = system.network
    print(f"state x = {x}")
    for reaction in net.reactions:
        rate = reaction_rate(system, reaction, x)
        print(f"  {reaction.format(net.species):<16} rate {rate:g}")
    print(f"  total rate {total_rate(system, x):g}")
    for jump, rate in sorted(transition_rates(system, x).items()):
        print(f"  jump {jump}  at {rate:g}")


def main():
    bd = birth_death(2.0, 1.0)
    print("== birth-death, 0 <-> S with birth 2 and unit decay ==")
    show_rates(bd, (5,))
    print()

    cycle = five_complex_cycle()
    print("== five-complex cycle on (A, B, C) ==")
    show_rates(cycle, (4, 1, 0))
    print()

    slope = 2 * math.log(2) - 1
    print("generator applied to V along (n, 1, 0), compared with n(2 log 2 - 1):")
    for n in (1, 10, 10**3, 10**6):
        value = generator_applied(cycle, (n, 1, 0))
        print(f"  n = {n:>7}:  LV = {value:.12g}   LV / n = {value / n:.15f}")
    print(f"  2 log 2 - 1 = {slope:.15f}")
    print()
    print(f"V(4, 1, 0) = {lyapunov((4, 1, 0)):.6f}")


if __name__ == "__main__":
    main()
