"""Stochastic mass-action kinetics and the entropy-like Lyapunov function.

Intensities follow the classical stochastic mass-action form: a complex y
fires at state x with intensity equal to the product of falling factorials
x_i (x_i - 1) ... (x_i - y_i + 1), which is zero whenever some x_i < y_i.
On top of that this module provides the jump-chain step distribution, the
generator applied to the Lyapunov function

    V(x) = sum_i (x_i (log x_i - 1) + 1),        with 0 log 0 = 0,

and finite-path probabilities of the embedded chain.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, Sequence

from .network import Complex, MassActionSystem, Reaction, State, as_state

__all__ = [
    "intensity",
    "reaction_rate",
    "total_rate",
    "transition_rates",
    "lyapunov",
    "lyapunov_difference",
    "generator_applied",
    "embedded_step_distribution",
    "path_probability",
]


def intensity(y: Complex, x: Iterable[int]) -> float:
    """Mass-action intensity of complex ``y`` at state ``x``.

    Product over species of the falling factorial x_i! / (x_i - y_i)!,
    evaluated as a falling product (never via full factorials).  Returns 0.0
    whenever some coordinate of ``x`` is below the complex's requirement.
    """
    xs = as_state(x, y.dim)
    out = 1
    for xi, yi in zip(xs, y.coeffs):
        if yi == 0:
            continue
        if xi < yi:
            return 0.0
        # math.perm(n, k) is the exact falling factorial n (n-1) ... (n-k+1).
        out *= math.perm(xi, yi)
    return float(out)


def reaction_rate(system: MassActionSystem, reaction: Reaction, x: Iterable[int]) -> float:
    """Rate of one reaction at ``x``: rate constant times source intensity."""
    kappa = system.rate_constant(reaction)
    return kappa * intensity(reaction.source, x)


def total_rate(system: MassActionSystem, x: Iterable[int]) -> float:
    """Total jump rate at ``x``.  Zero exactly when ``x`` is absorbing."""
    xs = as_state(x, system.network.dim)
    return sum(
        k * intensity(r.source, xs)
        for r, k in zip(system.network.reactions, system.rate_constants)
    )


def transition_rates(system: MassActionSystem, x: Iterable[int]) -> Dict[State, float]:
    """Aggregate rate of each net jump vector at ``x``.

    Reactions sharing the same net change pool their rates.  Jumps with zero
    rate are omitted, so an absorbing state yields an empty dict.
    """
    xs = as_state(x, system.network.dim)
    out: Dict[State, float] = {}
    for r, k in zip(system.network.reactions, system.rate_constants):
        lam = k * intensity(r.source, xs)
        if lam > 0.0:
            h = r.change
            out[h] = out.get(h, 0.0) + lam
    return out


def _f(t: int) -> float:
    """Scalar piece of the Lyapunov function: t (log t - 1) + 1, with the
    0 log 0 = 0 convention handled as an explicit branch."""
    if t == 0:
        return 1.0
    return t * (math.log(t) - 1.0) + 1.0


def lyapunov(x: Iterable[int]) -> float:
    """Entropy-like Lyapunov function V(x).

    Nonnegative everywhere, and zero exactly at the all-ones state.
    """
    xs = tuple(int(v) for v in x)
    if any(v < 0 for v in xs):
        raise ValueError("lyapunov requires a nonnegative state")
    return sum(_f(v) for v in xs)


def lyapunov_difference(x: Sequence[int], h: Sequence[int]) -> float:
    """V(x + h) - V(x), summed coordinate-wise over changed coordinates only.

    Mathematically identical to ``lyapunov(x + h) - lyapunov(x)`` but avoids
    the catastrophic cancellation of subtracting two large near-equal sums
    when only small coordinates change.  Raises ``ValueError`` if ``x + h``
    leaves the nonnegative orthant.
    """
    if len(x) != len(h):
        raise ValueError("state and jump vector have different dimensions")
    out = 0.0
    for xi, hi in zip(x, h):
        if hi == 0:
            continue
        xn = xi + hi
        if xn < 0:
            raise ValueError(f"jump drives coordinate {xi} to negative value {xn}")
        out += _f(xn) - _f(xi)
    return out


def generator_applied(system: MassActionSystem, x: Iterable[int]) -> float:
    """Infinitesimal generator applied to the Lyapunov function at ``x``:

        sum over reactions of  rate(x) * (V(x + change) - V(x)).

    Zero-rate reactions are skipped, so states near the boundary never
    evaluate V at negative arguments.
    """
    xs = as_state(x, system.network.dim)
    acc = 0.0
    for r, k in zip(system.network.reactions, system.rate_constants):
        lam = k * intensity(r.source, xs)
        if lam > 0.0:
            acc += lam * lyapunov_difference(xs, r.change)
    return acc


def embedded_step_distribution(
    system: MassActionSystem, x: Iterable[int]
) -> Dict[State, float]:
    """One-step distribution of the embedded (jump) chain from ``x``.

    Maps successor states to probabilities rate(x, x') / total_rate(x).
    All probabilities are strictly positive and sum to 1 up to rounding.
    Raises ``AbsorbingStateError`` when the total rate is zero.
    """
    from .errors import AbsorbingStateError

    xs = as_state(x, system.network.dim)
    rates = transition_rates(system, xs)
    lam_bar = sum(rates.values())
    if lam_bar == 0.0:
        raise AbsorbingStateError(f"state {xs} is absorbing (total rate 0)")
    return {
        tuple(xi + hi for xi, hi in zip(xs, h)): lam / lam_bar
        for h, lam in rates.items()
    }


def path_probability(
    system: MassActionSystem, x: Iterable[int], path: Sequence[Reaction]
) -> float:
    """Probability that the embedded chain from ``x`` executes ``path`` in order.

    The product over steps of rate_m(z_m) / total_rate(z_m) along the states
    z_1 = x, z_{m+1} = z_m + change_m.  Returns 0.0 as soon as a step has
    rate zero or an intermediate state is absorbing.  The empty path has
    probability 1.
    """
    xs = list(as_state(x, system.network.dim))
    prob = 1.0
    for r in path:
        kappa = system.rate_constant(r)  # KeyError for foreign reactions
        lam = kappa * intensity(r.source, xs)
        if lam == 0.0:
            return 0.0
        lam_bar = total_rate(system, xs)
        prob *= lam / lam_bar
        for i, hi in enumerate(r.change):
            xs[i] += hi
    return prob
