"""Trajectory simulation and stationary diagnostics for mass-action chains.

All randomness comes from numpy's counter-based Philox generator.  A run
with seed s uses the stream of ``SeedSequence(s)``; replica r of a
multi-replica estimate uses ``SeedSequence(s, spawn_key=(r,))``.  Equal
seeds therefore give identical trajectories, and replicas are independent
and reproducible regardless of execution order or thread count (the
``CRN_THREADS`` environment variable only sets the worker count).

Each jump consumes exactly two variates, one exponential for the holding
time and one uniform for the reaction choice, drawn in blocks of 4096; the
embedded-chain sampler shares this discipline, so it visits exactly the
states of the full simulation with the same seed.
"""

from __future__ import annotations

import math
import os
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AmbiguousRegionError
from .kinetics import lyapunov, lyapunov_difference, transition_rates
from .network import STATE_COORD_MAX, MassActionSystem, State, as_state

__all__ = [
    "TrajectorySample",
    "ReturnTimeStats",
    "StationaryEstimate",
    "ssa_simulate",
    "embedded_chain_simulate",
    "return_times",
    "occupancy_estimate",
    "truncated_stationary",
    "drift_estimate_mc",
    "lyapunov_sublevel",
]

_BLOCK = 4096


def _generator(seed: int, replica: Optional[int] = None) -> np.random.Generator:
    if replica is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(replica,))
    return np.random.Generator(np.random.Philox(ss))


def _thread_count() -> int:
    raw = os.environ.get("CRN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CRN_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"CRN_THREADS must be positive, got {n}")
    return n


def _replica_map(fn: Callable[[int], object], replicas: int) -> list:
    """Evaluate fn(0..replicas-1), possibly on CRN_THREADS workers.

    Results are ordered by replica index, so the outcome does not depend on
    the worker count."""
    workers = min(_thread_count(), replicas) if replicas else 1
    if workers <= 1:
        return [fn(i) for i in range(replicas)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(replicas)))


class _Kernel:
    """Precompiled per-reaction tables for the inner simulation loop."""

    def __init__(self, system: MassActionSystem):
        self.system = system
        self.dim = system.network.dim
        self.table = []
        for r, kappa in zip(system.network.reactions, system.rate_constants):
            pairs = tuple(
                (i, c) for i, c in enumerate(r.source.coeffs) if c > 0
            )
            change = tuple(
                (i, c) for i, c in enumerate(r.change) if c != 0
            )
            self.table.append((kappa, pairs, change))

    def rates(self, x: list) -> Tuple[list, float]:
        out = []
        total = 0.0
        for kappa, pairs, _ in self.table:
            lam = kappa
            for i, c in pairs:
                xi = x[i]
                if c == 1:
                    lam *= xi
                elif xi < c:
                    lam = 0.0
                    break
                elif c == 2:
                    lam *= xi * (xi - 1)
                else:
                    lam *= math.perm(xi, c)
                if lam == 0.0:
                    break
            out.append(lam)
            total += lam
        return out, total


class _DrawBlock:
    """Blocked draws: one exponential and one uniform per jump."""

    def __init__(self, rng: np.random.Generator, block: int = _BLOCK):
        self.rng = rng
        self.block = block
        self.exps = rng.standard_exponential(block)
        self.unis = rng.random(block)
        self.pos = 0

    def next_pair(self) -> Tuple[float, float]:
        if self.pos == self.block:
            self.exps = self.rng.standard_exponential(self.block)
            self.unis = self.rng.random(self.block)
            self.pos = 0
        e = self.exps[self.pos]
        u = self.unis[self.pos]
        self.pos += 1
        return e, u


def _apply(x: list, change: tuple):
    for i, c in change:
        xi = x[i] + c
        if xi > STATE_COORD_MAX:
            raise ValueError(
                f"state coordinate exceeded supported maximum {STATE_COORD_MAX} "
                "during simulation"
            )
        x[i] = xi


TERMINATED_MAX_TIME = "max_time"
TERMINATED_MAX_JUMPS = "max_jumps"
TERMINATED_ABSORBED = "absorbed"


@dataclass(frozen=True)
class TrajectorySample:
    """A simulated trajectory: jump times (starting at 0.0) and the state
    after each jump, row-aligned."""

    times: np.ndarray
    states: np.ndarray
    seed: int
    terminated_by: str

    @property
    def final_state(self) -> State:
        return tuple(int(v) for v in self.states[-1])

    def __len__(self) -> int:
        return len(self.times)


def ssa_simulate(
    system: MassActionSystem,
    x0: Iterable[int],
    *,
    max_time: Optional[float] = None,
    max_jumps: Optional[int] = None,
    seed: int = 0,
) -> TrajectorySample:
    """Simulate the chain by the stochastic simulation (direct) algorithm.

    Runs until the time horizon ``max_time`` would be crossed, ``max_jumps``
    jumps have fired, or an absorbing state is reached; at least one bound
    must be given.  Trajectories are identical byte for byte across runs
    with equal seeds.
    """
    if max_time is None and max_jumps is None:
        raise ValueError("give max_time and/or max_jumps")
    if max_time is not None and not max_time >= 0:
        raise ValueError(f"max_time must be nonnegative, got {max_time}")
    if max_jumps is not None and max_jumps < 0:
        raise ValueError(f"max_jumps must be nonnegative, got {max_jumps}")
    kernel = _Kernel(system)
    x = list(as_state(x0, kernel.dim))
    draws = _DrawBlock(_generator(seed))
    times = array("d", [0.0])
    states = array("q", x)
    t = 0.0
    jumps = 0
    terminated = None
    while True:
        if max_jumps is not None and jumps >= max_jumps:
            terminated = TERMINATED_MAX_JUMPS
            break
        rates, total = kernel.rates(x)
        if total == 0.0:
            terminated = TERMINATED_ABSORBED
            break
        e, u = draws.next_pair()
        dt = e / total
        if max_time is not None and t + dt > max_time:
            terminated = TERMINATED_MAX_TIME
            break
        t += dt
        target = u * total
        acc = 0.0
        chosen = kernel.table[-1][2]
        for lam, (_, _, change) in zip(rates, kernel.table):
            acc += lam
            if target < acc:
                chosen = change
                break
        _apply(x, chosen)
        times.append(t)
        states.extend(x)
        jumps += 1
    return TrajectorySample(
        times=np.asarray(times, dtype=np.float64),
        states=np.asarray(states, dtype=np.int64).reshape(-1, kernel.dim),
        seed=seed,
        terminated_by=terminated,
    )


def embedded_chain_simulate(
    system: MassActionSystem,
    x0: Iterable[int],
    steps: int,
    seed: int = 0,
) -> np.ndarray:
    """States of the embedded (jump) chain, initial state included.

    Shares the draw discipline of ``ssa_simulate``: with equal seeds the
    rows equal the states of the full simulation.  Stops early at an
    absorbing state, so the result has up to ``steps`` + 1 rows.
    """
    sample = ssa_simulate(system, x0, max_jumps=steps, seed=seed)
    return sample.states


@dataclass(frozen=True)
class ReturnTimeStats:
    """First-return times to a target set, one replica each.

    A return is the first entry into the target after having left it at
    least once; times are continuous (chain) time from the replica's start.
    Replicas that do not return within the horizon are only counted in
    ``non_returning``.
    """

    target_description: str
    times: np.ndarray
    non_returning: int
    replicas: int
    horizon: float

    @property
    def mean(self) -> Optional[float]:
        return float(np.mean(self.times)) if len(self.times) else None

    @property
    def median(self) -> Optional[float]:
        return float(np.median(self.times)) if len(self.times) else None

    @property
    def max(self) -> Optional[float]:
        return float(np.max(self.times)) if len(self.times) else None


def lyapunov_sublevel(cutoff: float) -> Callable[[State], bool]:
    """Predicate for the sublevel set {x : V(x) <= cutoff}."""

    def predicate(x) -> bool:
        return lyapunov(x) <= cutoff

    predicate.description = f"V <= {cutoff}"
    return predicate


def return_times(
    system: MassActionSystem,
    x0: Iterable[int],
    target: Callable[[State], bool],
    *,
    horizon: float,
    replicas: int,
    seed: int = 0,
    target_description: Optional[str] = None,
) -> ReturnTimeStats:
    """Sample first-return times to ``target`` from ``x0`` over independent
    replicas.

    ``x0`` must itself satisfy the target predicate.  Each replica runs
    until it has left the target set and come back (recording the return
    time), reached an absorbing state outside the target, or exhausted the
    time horizon.
    """
    kernel = _Kernel(system)
    x_start = as_state(x0, kernel.dim)
    if not target(x_start):
        raise ValueError(f"start state {x_start} is not in the target set")
    if replicas < 1:
        raise ValueError("need at least one replica")
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    desc = (
        target_description
        if target_description is not None
        else getattr(target, "description", "user predicate")
    )

    def run(replica: int) -> Optional[float]:
        draws = _DrawBlock(_generator(seed, replica))
        x = list(x_start)
        t = 0.0
        left = False
        while True:
            rates, total = kernel.rates(x)
            if total == 0.0:
                return None  # stuck outside the target (or inside, pre-exit)
            e, u = draws.next_pair()
            t += e / total
            if t > horizon:
                return None
            acc = 0.0
            chosen = kernel.table[-1][2]
            target_rate = u * total
            for lam, (_, _, change) in zip(rates, kernel.table):
                acc += lam
                if target_rate < acc:
                    chosen = change
                    break
            _apply(x, chosen)
            inside = target(tuple(x))
            if left and inside:
                return t
            if not inside:
                left = True

    results = _replica_map(run, replicas)
    returned = [t for t in results if t is not None]
    return ReturnTimeStats(
        target_description=desc,
        times=np.asarray(returned, dtype=np.float64),
        non_returning=sum(1 for t in results if t is None),
        replicas=replicas,
        horizon=float(horizon),
    )


@dataclass(frozen=True)
class StationaryEstimate:
    """A probability vector over an explicit support of states."""

    support: tuple
    probabilities: np.ndarray
    method: str
    detail: str

    def as_dict(self) -> Dict[State, float]:
        return {s: float(p) for s, p in zip(self.support, self.probabilities)}

    def probability_of(self, state) -> float:
        state = tuple(state)
        for s, p in zip(self.support, self.probabilities):
            if s == state:
                return float(p)
        return 0.0


def occupancy_estimate(
    system: MassActionSystem,
    x0: Iterable[int],
    t_max: float,
    seed: int = 0,
) -> StationaryEstimate:
    """Empirical occupancy over [0, t_max]: holding time per state divided by
    the total.  The interval from the last jump to the horizon counts, and a
    trajectory absorbed at time t leaves all remaining weight on the
    absorbing state (a point mass when ``x0`` itself is absorbing).
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    kernel = _Kernel(system)
    x = list(as_state(x0, kernel.dim))
    draws = _DrawBlock(_generator(seed))
    weights: Dict[State, float] = {}
    t = 0.0
    while True:
        rates, total = kernel.rates(x)
        here = tuple(x)
        if total == 0.0:
            weights[here] = weights.get(here, 0.0) + (t_max - t)
            break
        e, u = draws.next_pair()
        dt = e / total
        if t + dt >= t_max:
            weights[here] = weights.get(here, 0.0) + (t_max - t)
            break
        weights[here] = weights.get(here, 0.0) + dt
        t += dt
        acc = 0.0
        chosen = kernel.table[-1][2]
        target_rate = u * total
        for lam, (_, _, change) in zip(rates, kernel.table):
            acc += lam
            if target_rate < acc:
                chosen = change
                break
        _apply(x, chosen)
    support = tuple(sorted(weights))
    probs = np.asarray([weights[s] for s in support], dtype=np.float64)
    probs /= probs.sum()
    return StationaryEstimate(
        support=support,
        probabilities=probs,
        method="time_average",
        detail=f"time average over [0, {t_max:g}], seed {seed}",
    )


def truncated_stationary(
    system: MassActionSystem,
    region: Iterable[Iterable[int]],
) -> StationaryEstimate:
    """Stationary distribution of the chain censored to a finite region.

    Transitions leaving the region are discarded (their rate is dropped, not
    redirected).  The censored chain must have exactly one closed
    communicating class inside the region; its stationary law is computed by
    uniformized power iteration and reported with zeros on the transient
    states.  Multiple closed classes raise ``AmbiguousRegionError``.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    dim = system.network.dim
    states = sorted({as_state(s, dim) for s in region})
    if not states:
        raise ValueError("region is empty")
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    q = np.zeros((n, n), dtype=np.float64)
    for i, s in enumerate(states):
        for h, lam in transition_rates(system, s).items():
            nxt = tuple(a + b for a, b in zip(s, h))
            j = index.get(nxt)
            if j is not None:
                q[i, j] += lam
    np.fill_diagonal(q, -q.sum(axis=1))

    adj = csr_matrix((q > 0).astype(np.int8))
    n_comp, labels = connected_components(adj, directed=True, connection="strong")
    closed = []
    for comp in range(n_comp):
        members = np.flatnonzero(labels == comp)
        mask = np.zeros(n, dtype=bool)
        mask[members] = True
        leaves = q[np.ix_(mask, ~mask)]
        if leaves.size == 0 or not (leaves > 0).any():
            closed.append(tuple(states[i] for i in members))
    if len(closed) != 1:
        raise AmbiguousRegionError(
            f"censored region splits into {len(closed)} closed communicating "
            "classes; truncate to one of them",
            tuple(sorted(closed)),
        )
    members = [index[s] for s in closed[0]]
    sub = q[np.ix_(members, members)]
    exit_rates = -np.diag(sub)
    lam_max = float(exit_rates.max())
    pi_sub = np.zeros(len(members))
    if lam_max == 0.0:
        pi_sub[0] = 1.0  # a single absorbing state
    else:
        lam_u = 1.05 * lam_max  # slack keeps the uniformized chain aperiodic
        p = np.eye(len(members)) + sub / lam_u
        pi_sub[:] = 1.0 / len(members)
        for _ in range(2_000_000):
            nxt = pi_sub @ p
            delta = float(np.abs(nxt - pi_sub).sum())
            pi_sub = nxt
            if delta <= 1e-13:
                break
        else:
            raise RuntimeError("stationary solve did not converge")
        pi_sub /= pi_sub.sum()
    probs = np.zeros(n)
    for local, i in enumerate(members):
        probs[i] = pi_sub[local]
    return StationaryEstimate(
        support=tuple(states),
        probabilities=probs,
        method="truncated_solve",
        detail=(
            f"censored solve on {n} states "
            f"({n - len(members)} transient)"
        ),
    )


def drift_estimate_mc(
    system: MassActionSystem,
    x: Iterable[int],
    k: int,
    replicas: int,
    seed: int = 0,
) -> Tuple[float, float]:
    """Monte Carlo estimate of the k-step embedded drift E[V(Z_k) - V(Z_0)].

    Each replica walks the jump chain k steps (an absorbing state freezes V)
    and evaluates the Lyapunov difference coordinate-wise.  Returns (mean,
    standard error); k = 0 gives exactly (0.0, 0.0).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if replicas < 2:
        raise ValueError("need at least two replicas for a standard error")
    kernel = _Kernel(system)
    x_start = as_state(x, kernel.dim)
    if k == 0:
        return 0.0, 0.0

    block = min(k, _BLOCK)  # a k-step replica consumes at most k draw pairs

    def run(replica: int) -> float:
        draws = _DrawBlock(_generator(seed, replica), block)
        state = list(x_start)
        for _ in range(k):
            rates, total = kernel.rates(state)
            if total == 0.0:
                break
            e, u = draws.next_pair()
            acc = 0.0
            chosen = kernel.table[-1][2]
            target_rate = u * total
            for lam, (_, _, change) in zip(rates, kernel.table):
                acc += lam
                if target_rate < acc:
                    chosen = change
                    break
            _apply(state, chosen)
        return lyapunov_difference(
            x_start, tuple(a - b for a, b in zip(state, x_start))
        )

    values = np.asarray(_replica_map(run, replicas), dtype=np.float64)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(replicas))
    return mean, stderr
