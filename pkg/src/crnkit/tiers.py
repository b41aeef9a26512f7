"""Tier analysis along parametric state sequences, and embedded-chain drift.

A parametric sequence assigns each species either a constant value or a
monomial growth law ceil(a * n ** p) with a > 0 and rational p > 0, plus an
integer offset per coordinate.  Along such a sequence x_n every complex y
has intensity lambda_y(x_n) that is either identically zero for n past the
start index or grows like (leading coefficient) * n ** deg(y), where deg(y)
sums y_i * p_i over the growing coordinates.  That dichotomy yields two
partitions of the complexes:

* the growth partition (``d_partition``): all complexes grouped by deg(y),
  top tier first; invariant under integer shifts of the sequence;
* the intensity partition (``s_partition``): complexes whose intensity is
  identically zero form the infinite tier, the rest are grouped by deg(y).

Paths of reactions are classified by where their sources and products sit in
these partitions as the sequence is shifted step by step, which gives exact
limits of embedded-chain path probabilities and a constructive witness path
whose probability-weighted Lyapunov increment diverges to minus infinity.

Sequences are not checked for reachability of the underlying chain; use
``ParametricSequence.samples`` against a ``ReachabilityReport`` when that
matters for the conclusion being drawn.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    AbsorbingStateError,
    BudgetExceededError,
    InvalidSequenceError,
    NoDropComplexError,
    TailNotNormalizedError,
    WitnessPathError,
)
from .kinetics import lyapunov_difference
from .network import Complex, MassActionSystem, Reaction, ReactionNetwork, as_state

__all__ = [
    "Const",
    "Grow",
    "ParametricSequence",
    "TierPartition",
    "PathTierReport",
    "HypothesisScanReport",
    "ScanFamily",
    "scan_patterns",
    "evaluate_sequence",
    "shift",
    "d_partition",
    "s_partition",
    "path_tier_membership",
    "path_probability_limit",
    "hypothesis_violation",
    "hypothesis_check",
    "witness_path",
    "exact_kstep_drift",
    "parse_sequence_spec",
]


@dataclass(frozen=True)
class Const:
    """Coordinate pinned at a nonnegative integer value."""

    value: int

    def __post_init__(self):
        if self.value < 0:
            raise InvalidSequenceError(
                f"constant coordinate value must be nonnegative, got {self.value}"
            )
        object.__setattr__(self, "_hash", hash((Const, self.value)))

    def __hash__(self):  # precomputed; labels are hashed in hot loops
        return self._hash


@dataclass(frozen=True)
class Grow:
    """Coordinate growing like ceil(coef * n ** power)."""

    coef: float = 1.0
    power: Fraction = Fraction(1)

    def __post_init__(self):
        if not self.coef > 0:
            raise InvalidSequenceError(
                f"growth coefficient must be positive, got {self.coef}"
            )
        p = self.power
        if not isinstance(p, Fraction):
            p = Fraction(p)
            object.__setattr__(self, "power", p)
        if p <= 0:
            raise InvalidSequenceError(f"growth exponent must be positive, got {p}")
        object.__setattr__(self, "_hash", hash((Grow, self.coef, p)))

    def __hash__(self):  # precomputed; labels are hashed in hot loops
        return self._hash


CoordLaw = Union[Const, Grow]


def _ceil_of_root(fr: Fraction, r: int) -> int:
    """Smallest integer k >= 0 with k ** r >= fr (the ceiling of fr ** (1/r)),
    computed exactly."""
    if fr <= 0:
        return 0
    if r == 1:
        return -(-fr.numerator // fr.denominator)
    k = int(float(fr) ** (1.0 / r))
    while k > 0 and k**r >= fr:
        k -= 1
    while k**r < fr:
        k += 1
    return k


@lru_cache(maxsize=None)
def _coef_fraction(coef) -> Fraction:
    return Fraction(coef)


@lru_cache(maxsize=1 << 16)
def _raw_value(law: "CoordLaw", n: int) -> int:
    if isinstance(law, Const):
        return law.value
    p = law.power
    if p.denominator == 1:
        v = _coef_fraction(law.coef) * n**p.numerator
        return -(-v.numerator // v.denominator)
    return _ceil_of_root(
        _coef_fraction(law.coef) ** p.denominator * Fraction(n) ** p.numerator,
        p.denominator,
    )


@lru_cache(maxsize=1 << 16)
def _degree_value(laws: tuple, coeffs: tuple) -> Fraction:
    out = Fraction(0)
    for y, law in zip(coeffs, laws):
        if y and isinstance(law, Grow):
            out += y * law.power
    return out


@lru_cache(maxsize=1 << 15)
def _minimal_start(laws: tuple, offset: tuple, start: int, bound: int) -> int:
    """Smallest n >= start at which every growing coordinate exceeds
    ``bound``, by doubling then bisection (each law is monotone in n)."""
    grown = tuple((l, w) for l, w in zip(laws, offset) if isinstance(l, Grow))

    def ok(n: int) -> bool:
        return all(_raw_value(l, n) + w > bound for l, w in grown)

    lo = start
    if ok(lo):
        return lo
    hi = max(lo, 1)
    while not ok(hi):
        hi *= 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ParametricSequence:
    """State sequence x_n with per-coordinate laws, offsets, and start index.

    Coordinate i evaluates to ``laws[i].value + offset[i]`` (constant) or
    ``ceil(coef * n ** power) + offset[i]`` (growing).  At least one
    coordinate must grow.  The start index is raised on construction to the
    smallest value at which every growing coordinate is nonnegative; a
    constant coordinate driven negative by its offset raises
    ``InvalidSequenceError`` outright.
    """

    laws: tuple
    offset: tuple
    start: int

    def __init__(self, laws, offset=None, start: int = 1):
        laws = tuple(laws)
        if not laws:
            raise InvalidSequenceError("sequence needs at least one coordinate")
        if offset is None:
            offset = (0,) * len(laws)
        offset = tuple(int(w) for w in offset)
        if len(offset) != len(laws):
            raise InvalidSequenceError(
                f"{len(offset)} offsets for {len(laws)} coordinates"
            )
        if not any(isinstance(l, Grow) for l in laws):
            raise InvalidSequenceError("sequence needs at least one growing coordinate")
        for l, w in zip(laws, offset):
            if isinstance(l, Const) and l.value + w < 0:
                raise InvalidSequenceError(
                    f"constant coordinate {l.value} with offset {w} is negative"
                )
        start = int(start)
        if start < 1:
            raise InvalidSequenceError(f"start index must be >= 1, got {start}")
        while any(
            self._raw(l, start) + w < 0
            for l, w in zip(laws, offset)
            if isinstance(l, Grow)
        ):
            start += 1
        object.__setattr__(self, "laws", laws)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "start", start)

    @staticmethod
    def _raw(law: CoordLaw, n: int) -> int:
        if isinstance(law, Const):
            return law.value
        return _raw_value(law, n)

    @property
    def dim(self) -> int:
        return len(self.laws)

    def evaluate(self, n: int) -> tuple:
        """The state x_n; requires n >= start."""
        if n < self.start:
            raise ValueError(f"n={n} is below the sequence start {self.start}")
        return tuple(
            self._raw(l, n) + w for l, w in zip(self.laws, self.offset)
        )

    def samples(self, ns) -> list:
        """States at several indices (for reachability cross-checks etc.)."""
        return [self.evaluate(n) for n in ns]

    def shifted(self, w) -> "ParametricSequence":
        """Sequence x_n + w.  Raises ``InvalidSequenceError`` when a constant
        coordinate goes negative; the start index is raised as needed to keep
        growing coordinates nonnegative."""
        w = tuple(int(v) for v in w)
        if len(w) != self.dim:
            raise InvalidSequenceError("shift vector has wrong dimension")
        new_offset = tuple(a + b for a, b in zip(self.offset, w))
        return ParametricSequence(self.laws, new_offset, self.start)

    def normalized_for(self, net: ReactionNetwork) -> "ParametricSequence":
        """Copy whose start index is far enough along for tier classification.

        Raises the start until every growing coordinate exceeds the largest
        complex entry of ``net`` plus the largest absolute offset, so that
        intensity of each complex is either zero for all n >= start or
        positive for all n >= start, and stays so under single-reaction
        shifts.
        """
        if net.dim != self.dim:
            raise InvalidSequenceError("network dimension does not match sequence")
        max_entry = max((max(c.coeffs, default=0) for c in net.complexes), default=0)
        bound = max_entry + max((abs(w) for w in self.offset), default=0)

        grown = tuple(
            (l, w) for l, w in zip(self.laws, self.offset) if isinstance(l, Grow)
        )

        def ok(n: int) -> bool:
            return all(_raw_value(l, n) + w > bound for l, w in grown)

        lo = self.start
        if ok(lo):
            return self
        hi = _minimal_start(self.laws, self.offset, self.start, bound)
        return ParametricSequence(self.laws, self.offset, hi)

    def degree(self, c: Complex) -> Fraction:
        """Growth exponent of (x_n vee 1) ** c: sum of c_i * p_i over growing
        coordinates."""
        if c.dim != self.dim:
            raise InvalidSequenceError("complex dimension does not match sequence")
        return _degree_value(self.laws, c.coeffs)

    def vanishes_forever(self, c: Complex) -> bool:
        """True when lambda_c(x_n) = 0 for every n (a constant coordinate sits
        below the complex's requirement)."""
        return any(
            isinstance(l, Const) and l.value + w < c.coeffs[i]
            for i, (l, w) in enumerate(zip(self.laws, self.offset))
        )

    def leading_coefficient(self, c: Complex) -> float:
        """Leading coefficient of lambda_c(x_n) ~ coef * n ** degree(c):
        growth coefficients to the power c_i times falling factorials of the
        constant coordinates.  Zero when the intensity vanishes identically.
        """
        out = 1.0
        for i, (l, w) in enumerate(zip(self.laws, self.offset)):
            ci = c.coeffs[i]
            if ci == 0:
                continue
            if isinstance(l, Grow):
                out *= l.coef**ci
            else:
                base = l.value + w
                if base < ci:
                    return 0.0
                out *= float(math.perm(base, ci))
        return out


def evaluate_sequence(seq: ParametricSequence, n: int) -> tuple:
    """Functional form of ``seq.evaluate(n)``."""
    return seq.evaluate(n)


def shift(seq: ParametricSequence, w) -> ParametricSequence:
    """Functional form of ``seq.shifted(w)``."""
    return seq.shifted(w)


@dataclass(frozen=True)
class TierPartition:
    """Ordered partition of the complex indices of a network.

    ``tiers`` lists frozensets from fastest-growing downward; ``infinite``
    holds complexes with identically-zero intensity (always empty for the
    growth partition).  ``degrees`` aligns with the network's complex list
    and is None on the infinite tier.
    """

    kind: str
    tiers: tuple
    infinite: frozenset
    degrees: tuple

    def tier_of(self, index: int) -> Optional[int]:
        """1-based tier number of a complex, or None if in the infinite tier."""
        for t, members in enumerate(self.tiers, start=1):
            if index in members:
                return t
        return None

    @property
    def top(self) -> frozenset:
        return self.tiers[0] if self.tiers else frozenset()


def _group_by_degree(indices, degrees) -> tuple:
    # keyed by (numerator, denominator): cheap to hash, unlike Fraction
    groups: Dict[tuple, set] = {}
    for i in indices:
        d = degrees[i]
        groups.setdefault((d.numerator, d.denominator), set()).add(i)
    return tuple(
        frozenset(groups[k])
        for k in sorted(groups, key=lambda k: Fraction(*k), reverse=True)
    )


def d_partition(net: ReactionNetwork, seq: ParametricSequence) -> TierPartition:
    """Partition all complexes by growth exponent of (x_n vee 1) ** y.

    Exact rational arithmetic on the exponents; invariant under shifts of
    ``seq``.
    """
    degrees = tuple(seq.degree(c) for c in net.complexes)
    tiers = _group_by_degree(range(len(net.complexes)), degrees)
    return TierPartition("D", tiers, frozenset(), degrees)


def s_partition(net: ReactionNetwork, seq: ParametricSequence) -> TierPartition:
    """Partition complexes by intensity growth along the sequence.

    Complexes whose intensity is identically zero form the infinite tier;
    the rest are ranked by growth exponent.  Raises
    ``TailNotNormalizedError`` when some complex has zero intensity at the
    start index but positive intensity later, i.e. the start index is too
    small for the classification to describe the whole tail (see
    ``ParametricSequence.normalized_for``).
    """
    if net.dim != seq.dim:
        raise InvalidSequenceError("network dimension does not match sequence")
    x_start = seq.evaluate(seq.start)
    finite = []
    infinite = set()
    degrees: List[Optional[Fraction]] = []
    for idx, c in enumerate(net.complexes):
        if seq.vanishes_forever(c):
            infinite.add(idx)
            degrees.append(None)
            continue
        if any(x_start[i] < c.coeffs[i] for i in range(net.dim)):
            raise TailNotNormalizedError(
                f"complex {net.format_complex(c)} has zero intensity at "
                f"n={seq.start} but not identically; raise the start index "
                "(see ParametricSequence.normalized_for)"
            )
        finite.append(idx)
        degrees.append(seq.degree(c))
    tiers = _group_by_degree(finite, degrees)
    return TierPartition("S", tiers, frozenset(infinite), tuple(degrees))


@dataclass(frozen=True)
class PathTierReport:
    """Tier classification of a reaction path along a sequence.

    ``in_top_intensity`` says every step's source lies in the top intensity
    tier of the correspondingly shifted sequence.  ``in_drop`` says every
    source lies in the top growth tier and some product falls below it;
    ``first_drop_index`` is the 1-based index of the first such product
    (present whenever a drop exists, whether or not the source condition
    holds).
    """

    path: tuple
    in_top_intensity: bool
    in_drop: bool
    first_drop_index: Optional[int]


def _check_path(net: ReactionNetwork, path) -> tuple:
    path = tuple(path)
    known = set(net.reactions)
    for r in path:
        if r not in known:
            raise ValueError(
                f"reaction {r.source.coeffs} -> {r.product.coeffs} "
                "is not part of the network"
            )
    return path


def path_tier_membership(
    net: ReactionNetwork, seq: ParametricSequence, path: Sequence[Reaction]
) -> PathTierReport:
    """Classify ``path`` against the tier partitions along ``seq``.

    Step m is judged with the sequence shifted by the accumulated net change
    of the first m-1 reactions (start indices are raised internally as
    needed).  ``InvalidSequenceError`` propagates if a shift drives a
    constant coordinate negative.
    """
    path = _check_path(net, path)
    d_top = d_partition(net, seq).top
    current = seq
    in_top_intensity = True
    sources_in_top_growth = True
    first_drop = None
    for m, r in enumerate(path, start=1):
        s_part = s_partition(net, current.normalized_for(net))
        src = net.complex_index(r.source)
        prd = net.complex_index(r.product)
        if src not in s_part.top:
            in_top_intensity = False
        if src not in d_top:
            sources_in_top_growth = False
        if first_drop is None and prd not in d_top:
            first_drop = m
        if m < len(path):  # the shift after the last step is never consulted
            current = current.shifted(r.change)
    in_drop = bool(path) and sources_in_top_growth and first_drop is not None
    return PathTierReport(
        path=path,
        in_top_intensity=in_top_intensity,
        in_drop=in_drop,
        first_drop_index=first_drop,
    )


def path_probability_limit(
    system: MassActionSystem, seq: ParametricSequence, path: Sequence[Reaction]
) -> float:
    """Limit as n grows of the embedded-chain probability of ``path`` from x_n.

    Zero unless every step's source is in the top intensity tier of its
    shifted sequence; otherwise the product over steps of

        kappa * lead(source) / sum over reactions with source in the top
        intensity tier of kappa' * lead(source'),

    with ``lead`` the intensity leading coefficient at that step's shift.
    """
    net = system.network
    path = _check_path(net, path)
    report = path_tier_membership(net, seq, path)
    if not report.in_top_intensity:
        return 0.0
    current = seq
    prob = 1.0
    for m, r in enumerate(path, start=1):
        cur = current.normalized_for(net)
        s_part = s_partition(net, cur)
        top = s_part.top
        num = system.rate_constant(r) * cur.leading_coefficient(r.source)
        den = 0.0
        for rr, kk in zip(net.reactions, system.rate_constants):
            if net.complex_index(rr.source) in top:
                den += kk * cur.leading_coefficient(rr.source)
        prob *= num / den
        if m < len(path):
            current = current.shifted(r.change)
    return prob


# ------------------------------------------------------------ pattern scan

#: Coordinate labels enumerated by ``hypothesis_check``: pinned empty, pinned
#: above any binary requirement, or growing with exponent 1, 2, or 3.
_SCAN_LABELS = (
    Const(0),
    Const(2),
    Grow(1.0, Fraction(1)),
    Grow(1.0, Fraction(2)),
    Grow(1.0, Fraction(3)),
)

_SCAN_MAX_DIM = 12


@dataclass(frozen=True)
class HypothesisScanReport:
    """Result of scanning the monomial pattern family for a tier-inclusion
    violation (a complex in the top intensity tier but not the top growth
    tier).

    ``patterns_enumerated`` counts labelings with at least one growing
    coordinate; ``patterns_checked`` counts the distinct patterns actually
    classified after deduplication by (complex degrees, vanishing set).
    When ``exhaustive`` is False the enumeration hit its budget, so a
    negative result is only heuristic.
    """

    violation_found: bool
    patterns_enumerated: int
    patterns_checked: int
    exhaustive: bool
    violating_sequence: Optional[ParametricSequence]
    violating_complex: Optional[int]


def hypothesis_violation(
    net: ReactionNetwork, seq: ParametricSequence
) -> Optional[int]:
    """Index of a complex in the top intensity tier but outside the top
    growth tier along ``seq``, or None when the inclusion holds.

    The start index is raised internally; the answer concerns the tail.
    """
    seq = seq.normalized_for(net)
    s_part = s_partition(net, seq)
    if not s_part.tiers:
        return None
    d_top = d_partition(net, seq).top
    for idx in sorted(s_part.top):
        if idx not in d_top:
            return idx
    return None


@dataclass(frozen=True)
class ScanFamily:
    """Deduplicated monomial pattern family for one network.

    ``enumerated`` counts all labelings with a growing coordinate before
    deduplication; ``exhaustive`` is False when the budget cut the
    enumeration short."""

    sequences: tuple
    enumerated: int
    exhaustive: bool


def scan_patterns(
    net: ReactionNetwork, pattern_budget: int = 1_000_000
) -> ScanFamily:
    """The canonical pattern family scanned for tier-inclusion violations.

    Each species gets one of the labels in ``_SCAN_LABELS``; labelings with
    no growing coordinate are dropped, and the rest are deduplicated by the
    complex degrees and vanishing set they induce, which is all the tier
    machinery can observe.  Networks with more than 12 species are
    rejected.
    """
    d = net.dim
    if d > _SCAN_MAX_DIM:
        raise ValueError(
            f"pattern scan supports at most {_SCAN_MAX_DIM} species, got {d}"
        )
    enumerated = 0
    seen = set()
    sequences = []
    exhaustive = True
    for labels in itertools.product(_SCAN_LABELS, repeat=d):
        if not any(isinstance(l, Grow) for l in labels):
            continue
        if enumerated >= pattern_budget:
            exhaustive = False
            break
        enumerated += 1
        seq = ParametricSequence(labels)
        key = (
            tuple(seq.degree(c) for c in net.complexes),
            frozenset(
                i for i, c in enumerate(net.complexes) if seq.vanishes_forever(c)
            ),
        )
        if key in seen:
            continue
        seen.add(key)
        sequences.append(seq)
    return ScanFamily(
        sequences=tuple(sequences), enumerated=enumerated, exhaustive=exhaustive
    )


def hypothesis_check(
    net: ReactionNetwork, pattern_budget: int = 1_000_000
) -> HypothesisScanReport:
    """Scan the canonical pattern family for a tier-inclusion violation.

    Classifies every sequence of ``scan_patterns``.  Finding a violation
    refutes the inclusion outright; exhausting the family without one
    confirms it for all monomial sequences with these exponents, which is a
    heuristic for general sequences.  Enumerations beyond
    ``pattern_budget`` return a partial, non-exhaustive report.
    """
    family = scan_patterns(net, pattern_budget)
    checked = 0
    for seq in family.sequences:
        checked += 1
        idx = hypothesis_violation(net, seq)
        if idx is not None:
            return HypothesisScanReport(
                violation_found=True,
                patterns_enumerated=family.enumerated,
                patterns_checked=checked,
                exhaustive=family.exhaustive,
                violating_sequence=seq,
                violating_complex=idx,
            )
    return HypothesisScanReport(
        violation_found=False,
        patterns_enumerated=family.enumerated,
        patterns_checked=checked,
        exhaustive=family.exhaustive,
        violating_sequence=None,
        violating_complex=None,
    )


# ------------------------------------------------------------ witness path

def witness_path(
    net: ReactionNetwork,
    seq: ParametricSequence,
    target_len: Optional[int] = None,
) -> tuple:
    """Construct a reaction path in the top intensity tier with a growth-tier
    drop, of length ``target_len`` (default: the number of reactions).

    Works on weakly reversible single-linkage-class networks whose top
    intensity tier is contained in the top growth tier along ``seq``: start
    from a top-intensity-tier complex, walk the reaction graph to the
    nearest complex below the top growth tier, then extend greedily with
    reactions of asymptotically maximal intensity (unit rate constants, ties
    by declaration order).  The result is verified with
    ``path_tier_membership`` before being returned.

    Raises ``NoDropComplexError`` when all complexes share one growth tier,
    and ``WitnessPathError`` when construction or verification fails.
    """
    d_part = d_partition(net, seq)
    if len(d_part.tiers) <= 1:
        raise NoDropComplexError(
            "every complex has the same growth exponent along the sequence; "
            "no path can drop out of the top growth tier"
        )
    d_top = d_part.top
    s_part = s_partition(net, seq.normalized_for(net))
    if not s_part.tiers:
        raise WitnessPathError(
            "every complex has identically zero intensity along the sequence"
        )
    if not s_part.top <= d_top:
        raise WitnessPathError(
            "top intensity tier is not contained in the top growth tier"
        )

    # shortest directed walk from the top intensity tier out of the top
    # growth tier; first-found in breadth-first order for determinism
    out_edges: Dict[int, list] = {}
    for r in net.reactions:
        out_edges.setdefault(net.complex_index(r.source), []).append(
            (net.complex_index(r.product), r)
        )
    start = min(s_part.top)
    parent: Dict[int, tuple] = {start: None}
    frontier = [start]
    goal = None
    while frontier and goal is None:
        nxt = []
        for u in frontier:
            for v, r in out_edges.get(u, ()):
                if v in parent:
                    continue
                parent[v] = (u, r)
                if v not in d_top:
                    goal = v
                    break
                nxt.append(v)
            if goal is not None:
                break
        frontier = nxt
    if goal is None:
        raise WitnessPathError(
            "no complex outside the top growth tier is reachable from the "
            "top intensity tier (is the network weakly reversible with a "
            "single linkage class?)"
        )
    prefix: List[Reaction] = []
    node = goal
    while parent[node] is not None:
        u, r = parent[node]
        prefix.append(r)
        node = u
    prefix.reverse()

    length = target_len if target_len is not None else len(net.reactions)
    if length < len(prefix):
        raise ValueError(
            f"target_len={length} is shorter than the drop prefix "
            f"({len(prefix)} reactions)"
        )

    path = list(prefix)
    current = seq
    for r in path:
        current = current.shifted(r.change)
    while len(path) < length:
        cur = current.normalized_for(net)
        top = s_partition(net, cur).top
        best = None
        best_lead = -1.0
        for r in net.reactions:
            if net.complex_index(r.source) not in top:
                continue
            lead = cur.leading_coefficient(r.source)
            if lead > best_lead:
                best = r
                best_lead = lead
        if best is None:
            raise WitnessPathError(
                "no reaction fires from the top intensity tier during the "
                "greedy extension"
            )
        path.append(best)
        current = current.shifted(best.change)

    report = path_tier_membership(net, seq, path)
    if not (report.in_top_intensity and report.in_drop):
        raise WitnessPathError(
            "constructed path failed tier verification "
            f"(in_top_intensity={report.in_top_intensity}, "
            f"in_drop={report.in_drop})"
        )
    return tuple(path)


# ---------------------------------------------------------- embedded drift

def exact_kstep_drift(
    system: MassActionSystem,
    x,
    k: int,
    budget: int = 10**7,
) -> float:
    """Exact expectation of V(Z_k) - V(Z_0) for the embedded chain from ``x``.

    Enumerates reaction sequences of length ``k`` depth first with
    memoization on (state, remaining steps); zero-rate branches are pruned
    and branches that reach an absorbing state hold V constant.  Lyapunov
    differences are accumulated coordinate-wise relative to ``x``, so large
    states do not lose precision to cancellation.

    Raises ``AbsorbingStateError`` when ``x`` itself is absorbing and
    ``BudgetExceededError`` when ``r ** k`` exceeds ``budget``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    net = system.network
    x0 = as_state(x, net.dim)
    rates0 = [
        kk * _intensity_fast(r.source.coeffs, x0)
        for r, kk in zip(net.reactions, system.rate_constants)
    ]
    if sum(rates0) == 0.0:
        raise AbsorbingStateError(f"state {x0} is absorbing (total rate 0)")
    if k == 0:
        return 0.0
    if len(net.reactions) ** k > budget:
        raise BudgetExceededError(
            f"{len(net.reactions)} ** {k} paths exceed the budget of {budget}"
        )

    changes = [r.change for r in net.reactions]
    sources = [r.source.coeffs for r in net.reactions]
    kappas = system.rate_constants
    memo: Dict[tuple, float] = {}

    def rel_v(state: tuple) -> float:
        return lyapunov_difference(x0, tuple(a - b for a, b in zip(state, x0)))

    def expected(state: tuple, depth: int) -> float:
        if depth == 0:
            return rel_v(state)
        key = (state, depth)
        hit = memo.get(key)
        if hit is not None:
            return hit
        rates = [kk * _intensity_fast(src, state) for src, kk in zip(sources, kappas)]
        lam_bar = sum(rates)
        if lam_bar == 0.0:
            out = rel_v(state)
        else:
            out = 0.0
            for lam, ch in zip(rates, changes):
                if lam == 0.0:
                    continue
                nxt = tuple(a + b for a, b in zip(state, ch))
                out += (lam / lam_bar) * expected(nxt, depth - 1)
        memo[key] = out
        return out

    return expected(x0, k)


def _intensity_fast(coeffs: tuple, x: tuple) -> float:
    out = 1
    for xi, yi in zip(x, coeffs):
        if yi == 0:
            continue
        if xi < yi:
            return 0.0
        if yi == 1:
            out *= xi
        elif yi == 2:
            out *= xi * (xi - 1)
        else:
            out *= math.perm(xi, yi)
    return float(out)


# ------------------------------------------------------- textual sequences

_GROW_RE = re.compile(
    r"^(?:(?P<coef>[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)\s*\*?\s*)?"
    r"n(?:\s*\^\s*(?P<power>[0-9]+(?:/[0-9]+)?))?$"
)


def parse_sequence_spec(text: str, species: Sequence[str]) -> ParametricSequence:
    """Parse a textual sequence such as ``"A=n, B=1, C=0"``.

    Each species gets either a nonnegative integer constant or a growth term
    ``[coef *] n [^ power]`` with positive coefficient and positive integer
    or fractional power (``2*n^2``, ``0.5n^3/2``, ``n``).  Every species must
    be assigned exactly once.  Raises ``ValueError`` on malformed input and
    ``InvalidSequenceError`` when no coordinate grows.
    """
    assignments = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"expected 'name=expr' in sequence spec, got '{part}'")
        name, expr = (s.strip() for s in part.split("=", 1))
        if name not in species:
            raise ValueError(f"unknown species '{name}' in sequence spec")
        if name in assignments:
            raise ValueError(f"species '{name}' assigned twice in sequence spec")
        assignments[name] = _parse_sequence_expr(expr)
    missing = [s for s in species if s not in assignments]
    if missing:
        raise ValueError(
            "sequence spec missing species: " + ", ".join(missing)
        )
    return ParametricSequence(tuple(assignments[s] for s in species))


def _parse_sequence_expr(expr: str) -> CoordLaw:
    expr = expr.strip()
    if re.fullmatch(r"[0-9]+", expr):
        return Const(int(expr))
    m = _GROW_RE.match(expr)
    if m is None:
        raise ValueError(
            f"cannot parse sequence expression '{expr}' "
            "(expected an integer or '[coef *] n [^ power]')"
        )
    coef = float(m.group("coef")) if m.group("coef") else 1.0
    power_txt = m.group("power")
    if power_txt is None:
        power = Fraction(1)
    elif "/" in power_txt:
        num, den = power_txt.split("/")
        power = Fraction(int(num), int(den))
    else:
        power = Fraction(int(power_txt))
    return Grow(coef, power)
