"""Small reaction networks used throughout the tests and demos.

Each factory returns a ``MassActionSystem`` with overridable rate constants.
"""

from __future__ import annotations

from typing import Sequence

from .network import Complex, MassActionSystem, Reaction, ReactionNetwork


def _system(species, pairs, kappa) -> MassActionSystem:
    reactions = [
        Reaction(Complex(src), Complex(prd)) for src, prd in pairs
    ]
    net = ReactionNetwork.from_reactions(species, reactions)
    return MassActionSystem(net, kappa)


def five_complex_cycle(kappa: Sequence[float] = (1, 1, 1, 1, 1)) -> MassActionSystem:
    """Single directed 5-cycle over species (A, B, C):

        A -> A+B -> A+C -> C -> 2B -> A

    Weakly reversible with one linkage class, binary, and every species
    appears alone or doubled as a complex.  The generator applied to the
    Lyapunov function at (n, 1, 0) equals kappa_1 * n * (2 log 2 - 1), which
    grows without bound even though the chain is positive recurrent.
    """
    return _system(
        ("A", "B", "C"),
        [
            ((1, 0, 0), (1, 1, 0)),  # A -> A+B
            ((1, 1, 0), (1, 0, 1)),  # A+B -> A+C
            ((1, 0, 1), (0, 0, 1)),  # A+C -> C
            ((0, 0, 1), (0, 2, 0)),  # C -> 2B
            ((0, 2, 0), (1, 0, 0)),  # 2B -> A
        ],
        kappa,
    )


def creation_annihilation_loop(
    kappa: Sequence[float] = (1, 1, 1, 1, 1, 1, 1, 1)
) -> MassActionSystem:
    """Strongly connected single-class network on (A, B, C) with creation and
    annihilation through the empty complex:

        A -> 2C, A -> B+C, B+C <-> 0, 0 -> B, B -> 2C, 2C -> B, 2C -> A
    """
    return _system(
        ("A", "B", "C"),
        [
            ((1, 0, 0), (0, 0, 2)),  # A -> 2C
            ((1, 0, 0), (0, 1, 1)),  # A -> B+C
            ((0, 1, 1), (0, 0, 0)),  # B+C -> 0
            ((0, 0, 0), (0, 1, 1)),  # 0 -> B+C
            ((0, 0, 0), (0, 1, 0)),  # 0 -> B
            ((0, 1, 0), (0, 0, 2)),  # B -> 2C
            ((0, 0, 2), (0, 1, 0)),  # 2C -> B
            ((0, 0, 2), (1, 0, 0)),  # 2C -> A
        ],
        kappa,
    )


def three_class_network(
    kappa: Sequence[float] = (1, 1, 1, 1, 1, 1, 1)
) -> MassActionSystem:
    """Network on (A, B, C, D) whose reaction graph splits into three linkage
    classes, only one of which is strongly connected:

        2A -> B,  B <-> A+C        (not weakly reversible)
        0 -> 2B                    (not weakly reversible)
        A+B -> 2C -> D -> A+B      (weakly reversible cycle)
    """
    return _system(
        ("A", "B", "C", "D"),
        [
            ((2, 0, 0, 0), (0, 1, 0, 0)),  # 2A -> B
            ((0, 1, 0, 0), (1, 0, 1, 0)),  # B -> A+C
            ((1, 0, 1, 0), (0, 1, 0, 0)),  # A+C -> B
            ((0, 0, 0, 0), (0, 2, 0, 0)),  # 0 -> 2B
            ((1, 1, 0, 0), (0, 0, 2, 0)),  # A+B -> 2C
            ((0, 0, 2, 0), (0, 0, 0, 1)),  # 2C -> D
            ((0, 0, 0, 1), (1, 1, 0, 0)),  # D -> A+B
        ],
        kappa,
    )


def birth_death(birth: float = 1.0, death: float = 1.0) -> MassActionSystem:
    """Single-species birth-death chain 0 <-> S.

    With rates (birth, death) the stationary distribution is Poisson with
    mean birth / death.
    """
    return _system(
        ("S",),
        [
            ((0,), (1,)),  # 0 -> S
            ((1,), (0,)),  # S -> 0
        ],
        (birth, death),
    )


def pure_birth(birth: float = 1.0) -> MassActionSystem:
    """Transient single-species chain 0 -> S (no return mechanism)."""
    return _system(("S",), [((0,), (1,))], (birth,))


def reversible_isomers(k1: float = 1.0, k2: float = 1.0) -> MassActionSystem:
    """Conservative two-species isomerization A <-> B."""
    return _system(
        ("A", "B"),
        [
            ((1, 0), (0, 1)),  # A -> B
            ((0, 1), (1, 0)),  # B -> A
        ],
        (k1, k2),
    )


def pair_annihilation(kf: float = 1.0, kb: float = 1.0) -> MassActionSystem:
    """Two-species annihilation and creation A+B <-> 0.

    Not binary-with-multiples in the sense of the recurrence theorem: neither
    A, 2A, B, nor 2B is a complex, and growth-tier comparisons along
    sequences where only one species grows can place the empty complex in the
    top intensity tier but not the top growth tier.
    """
    return _system(
        ("A", "B"),
        [
            ((1, 1), (0, 0)),  # A+B -> 0
            ((0, 0), (1, 1)),  # 0 -> A+B
        ],
        (kf, kb),
    )
