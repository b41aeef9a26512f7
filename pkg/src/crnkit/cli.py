"""Command-line front end.

Subcommands: analyze, tiers, drift, simulate, stationary.  Every command is
deterministic given the input file, flags, and seed (default 0; wall-clock
time is never consulted).  JSON reports carry a schema version, the tool
version, and the input file's SHA-256; matching schemas ship in the
package's ``schemas`` directory.

Exit codes: 0 for success (for ``analyze``: verdict PositiveRecurrent),
2 for an Inconclusive verdict, 1 for any error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, TextIO

from . import __version__
from .errors import CRNError
from .kinetics import total_rate
from .network import Complex, MassActionSystem, State
from .parser import parse
from .structure import (
    VERDICT_POSITIVE_RECURRENT,
    linkage_classes,
    reachable_states,
    theorem_verdict,
)
from .tiers import (
    Const,
    Grow,
    ParametricSequence,
    d_partition,
    exact_kstep_drift,
    hypothesis_check,
    parse_sequence_spec,
    path_probability_limit,
    path_tier_membership,
    s_partition,
    witness_path,
)
from .simulate import (
    drift_estimate_mc,
    occupancy_estimate,
    ssa_simulate,
    truncated_stationary,
)

SCHEMA_VERSION = "1"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as exceptions, so the
    process-level exit code stays under our control (errors are 1, never
    argparse's 2, which this tool reserves for Inconclusive verdicts)."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _load(path: str) -> MassActionSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _envelope(path: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "crnkit", "version": __version__},
        "input": {"path": path, "sha256": _sha256(path)},
    }


def _emit(report: dict, out: TextIO) -> None:
    json.dump(report, out, indent=2, sort_keys=True)
    out.write("\n")


def _parse_state(text: str, dim: int, flag: str) -> State:
    parts = [p.strip() for p in text.split(",")]
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise _UsageError(f"{flag} expects comma-separated integers, got {text!r}")
    if len(values) != dim or any(v < 0 for v in values):
        raise _UsageError(
            f"{flag} needs {dim} nonnegative coordinates, got {text!r}"
        )
    return values


def _format_complex(c: Complex, species) -> str:
    return c.format(species)


def _render_law(law) -> str:
    if isinstance(law, Const):
        return str(law.value)
    coef = law.coef
    coef_str = str(int(coef)) if float(coef) == int(coef) else repr(float(coef))
    head = "n" if coef_str == "1" else f"{coef_str}*n"
    if law.power == 1:
        return head
    return f"{head}^{law.power}"


def _render_sequence(seq: ParametricSequence, species) -> str:
    return ", ".join(
        f"{name}={_render_law(law)}" for name, law in zip(species, seq.laws)
    )


def _partition_json(partition, net) -> dict:
    species = net.species
    return {
        "tiers": [
            {
                "complexes": sorted(
                    _format_complex(net.complexes[i], species) for i in tier
                ),
                "degree": str(partition.degrees[next(iter(tier))]),
            }
            for tier in partition.tiers
        ],
        "infinite": sorted(
            _format_complex(net.complexes[i], species) for i in partition.infinite
        ),
    }


def _parse_path_flag(text: str, system: MassActionSystem):
    """Resolve a textual reaction list like "A->A+B, A+B->A+C" against the
    loaded network, reusing the file parser for each arrow expression."""
    decl = "species: " + ", ".join(system.network.species)
    atoms = [a.strip() for a in text.replace(";", ",").split(",") if a.strip()]
    if not atoms:
        raise _UsageError("--path expects at least one reaction")
    lookup = {
        (r.source, r.product): r for r in system.network.reactions
    }
    path = []
    for atom in atoms:
        if "->" not in atom:
            raise _UsageError(f"--path entry {atom!r} is not of the form src->prd")
        probe = parse(f"{decl}\n{atom} ; k=1.0")
        reaction = probe.network.reactions[0]
        match = lookup.get((reaction.source, reaction.product))
        if match is None:
            raise _UsageError(
                f"--path entry {atom!r} does not name a reaction of the network"
            )
        path.append(match)
    return tuple(path)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_analyze(args) -> int:
    system = _load(args.file)
    net = system.network
    species = net.species
    verdict = theorem_verdict(net)
    partition = linkage_classes(net)
    report = _envelope(args.file)
    report["network"] = {
        "species": list(species),
        "n_species": len(species),
        "n_complexes": len(net.complexes),
        "n_reactions": len(net.reactions),
        "complexes": [_format_complex(c, species) for c in net.complexes],
        "reactions": [r.format(species) for r in net.reactions],
    }
    report["linkage_classes"] = {
        "classes": [
            sorted(_format_complex(net.complexes[i], species) for i in cls)
            for cls in partition.classes
        ],
        "strongly_connected": list(partition.strongly_connected),
    }
    report["verdict"] = {
        "verdict": verdict.verdict,
        "weakly_reversible": verdict.weakly_reversible,
        "single_linkage_class": verdict.single_linkage_class,
        "binary": verdict.binary,
        "species_condition": verdict.species_condition,
        "witnesses": {
            name: (_format_complex(c, species) if c is not None else None)
            for name, c in zip(species, verdict.species_report.witnesses)
        },
        "failing_species": list(verdict.species_report.failing),
        "reasons": list(verdict.reasons),
    }
    if args.hypothesis_scan:
        scan = hypothesis_check(net)
        report["hypothesis_scan"] = {
            "violation_found": scan.violation_found,
            "patterns_enumerated": scan.patterns_enumerated,
            "patterns_checked": scan.patterns_checked,
            "exhaustive": scan.exhaustive,
            "violating_sequence": (
                _render_sequence(scan.violating_sequence, species)
                if scan.violating_sequence is not None
                else None
            ),
            "violating_complex": (
                _format_complex(net.complexes[scan.violating_complex], species)
                if scan.violating_complex is not None
                else None
            ),
        }
    if args.reach_from is not None:
        start = _parse_state(args.reach_from, net.dim, "--reach-from")
        reach = reachable_states(system, start, cap=args.reach_cap)
        report["reachability"] = {
            "start": list(reach.start),
            "n_states": len(reach.states),
            "truncated": reach.truncated,
            "n_absorbing": len(reach.absorbing),
            "min_total_rate": reach.min_total_rate,
        }
    _emit(report, sys.stdout)
    return 0 if verdict.verdict == VERDICT_POSITIVE_RECURRENT else 2


def _cmd_tiers(args) -> int:
    system = _load(args.file)
    net = system.network
    species = net.species
    seq = parse_sequence_spec(args.seq, species).normalized_for(net)
    dpart = d_partition(net, seq)
    spart = s_partition(net, seq)
    report = _envelope(args.file)
    report["sequence"] = {
        "spec": _render_sequence(seq, species),
        "start": seq.start,
    }
    report["d_partition"] = _partition_json(dpart, net)
    report["s_partition"] = _partition_json(spart, net)
    if args.path == "auto":
        path = witness_path(net, seq, target_len=args.limit)
        origin = "witness"
    else:
        path = _parse_path_flag(args.path, system)
        origin = "flag"
    membership = path_tier_membership(net, seq, path)
    limit = path_probability_limit(system, seq, path)
    report["path"] = {
        "origin": origin,
        "reactions": [r.format(species) for r in path],
        "in_top_intensity": membership.in_top_intensity,
        "in_drop": membership.in_drop,
        "first_drop_index": membership.first_drop_index,
        "probability_limit": limit,
    }
    _emit(report, sys.stdout)
    return 0


def _cmd_drift(args) -> int:
    system = _load(args.file)
    net = system.network
    species = net.species
    if args.mc is not None and args.along is not None:
        raise _UsageError("--along computes exact drifts; drop --mc")
    if args.along is not None:
        spec, _, tail = args.along.partition(":")
        if not tail:
            raise _UsageError('--along expects "<sequence spec>:<n list>"')
        seq = parse_sequence_spec(spec, species).normalized_for(net)
        try:
            ns = [int(p) for p in tail.split(",") if p.strip()]
        except ValueError:
            raise _UsageError(f"--along index list {tail!r} must be integers")
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["n", "drift"])
        for n in ns:
            value = exact_kstep_drift(
                system, seq.evaluate(max(n, seq.start)), args.k, budget=args.budget
            )
            writer.writerow([n, repr(value)])
        return 0
    if args.x is None:
        raise _UsageError("--x is required unless --along is given")
    x = _parse_state(args.x, net.dim, "--x")
    report = _envelope(args.file)
    if args.mc is not None:
        mean, stderr = drift_estimate_mc(
            system, x, args.k, replicas=args.mc, seed=args.seed
        )
        report["drift"] = {
            "state": list(x),
            "k": args.k,
            "method": "mc",
            "value": mean,
            "stderr": stderr,
            "replicas": args.mc,
            "seed": args.seed,
        }
    else:
        value = exact_kstep_drift(system, x, args.k, budget=args.budget)
        report["drift"] = {
            "state": list(x),
            "k": args.k,
            "method": "exact",
            "value": value,
            "stderr": None,
            "replicas": None,
            "seed": None,
        }
    _emit(report, sys.stdout)
    return 0


def _cmd_simulate(args) -> int:
    system = _load(args.file)
    net = system.network
    x0 = _parse_state(args.x0, net.dim, "--x0")
    if args.t_max is None and args.jumps is None:
        raise _UsageError("give --t-max and/or --jumps")
    sample = ssa_simulate(
        system, x0, max_time=args.t_max, max_jumps=args.jumps, seed=args.seed
    )
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["t", *net.species])
        for t, row in zip(sample.times, sample.states):
            writer.writerow([repr(float(t)), *(int(v) for v in row)])
    finally:
        if args.out:
            out.close()
    return 0


def _parse_region(text: str, dim: int):
    ranges = []
    for part in text.split(","):
        lo, sep, hi = part.strip().partition("..")
        if not sep:
            raise _UsageError(
                f'--region expects "lo..hi" per species, got {part.strip()!r}'
            )
        try:
            lo_v, hi_v = int(lo), int(hi)
        except ValueError:
            raise _UsageError(f"--region bounds must be integers, got {part.strip()!r}")
        if lo_v < 0 or hi_v < lo_v:
            raise _UsageError(f"--region range {part.strip()!r} is empty or negative")
        ranges.append(range(lo_v, hi_v + 1))
    if len(ranges) != dim:
        raise _UsageError(f"--region needs {dim} ranges, got {len(ranges)}")
    import itertools

    return [tuple(p) for p in itertools.product(*ranges)]


def _cmd_stationary(args) -> int:
    system = _load(args.file)
    net = system.network
    if (args.region is None) == (args.x0 is None):
        raise _UsageError("give exactly one of --x0 (time average) or --region (solve)")
    if args.region is not None:
        region = _parse_region(args.region, net.dim)
        estimate = truncated_stationary(system, region)
    else:
        if args.t_max is None:
            raise _UsageError("--x0 needs --t-max")
        x0 = _parse_state(args.x0, net.dim, "--x0")
        if total_rate(system, x0) == 0.0:
            print(
                f"warning: start state {x0} is absorbing; the time average "
                "is a point mass",
                file=sys.stderr,
            )
        estimate = occupancy_estimate(system, x0, args.t_max, seed=args.seed)
    report = _envelope(args.file)
    report["stationary"] = {
        "method": estimate.method,
        "detail": estimate.detail,
        "distribution": [
            {"state": list(state), "probability": float(p)}
            for state, p in zip(estimate.support, estimate.probabilities)
        ],
    }
    _emit(report, sys.stdout)
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="crnkit",
        description="Structural, tier, drift, and simulation reports for "
        "mass-action reaction networks.",
    )
    parser.add_argument("--version", action="version", version=f"crnkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structure checks and recurrence verdict")
    p.add_argument("file", help="reaction network file")
    p.add_argument(
        "--hypothesis-scan",
        action="store_true",
        help="scan canonical sequence patterns for tier-condition violations",
    )
    p.add_argument(
        "--reach-from",
        metavar="STATE",
        help="explore the reachable state space from this state",
    )
    p.add_argument(
        "--reach-cap",
        type=int,
        default=10_000,
        metavar="N",
        help="cap on explored states (default 10000)",
    )
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("tiers", help="tier partitions and witness path")
    p.add_argument("file")
    p.add_argument(
        "--seq",
        required=True,
        metavar="SPEC",
        help='parametric sequence, e.g. "A=n, B=1, C=0" or "A=2*n^2, B=3"',
    )
    p.add_argument(
        "--path",
        default="auto",
        metavar="LIST",
        help='reaction list "src->prd, ..." or "auto" for a witness path',
    )
    p.add_argument(
        "--limit",
        type=int,
        default=None,
        metavar="LEN",
        help="witness path length (default: number of reactions)",
    )
    p.set_defaults(fn=_cmd_tiers)

    p = sub.add_parser("drift", help="k-step embedded-chain drift of V")
    p.add_argument("file")
    p.add_argument("--x", metavar="STATE", help="start state, e.g. 3,1,0")
    p.add_argument("--k", type=int, required=True, help="number of jumps")
    p.add_argument(
        "--exact",
        action="store_true",
        help="exact enumeration (the default mode)",
    )
    p.add_argument(
        "--mc",
        type=int,
        default=None,
        metavar="REPLICAS",
        help="Monte Carlo estimate with this many replicas",
    )
    p.add_argument(
        "--along",
        metavar="SPEC:NS",
        help='evaluate along a sequence, e.g. "A=n,B=1,C=0:10,100,1000"; '
        "emits CSV (n, drift)",
    )
    p.add_argument(
        "--budget",
        type=float,
        default=1e7,
        help="cap on enumerated branches r^k (default 1e7)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_drift)

    p = sub.add_parser("simulate", help="sample a trajectory to CSV")
    p.add_argument("file")
    p.add_argument("--x0", required=True, metavar="STATE")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--jumps", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="CSV", help="write here instead of stdout")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser(
        "stationary", help="occupancy time average or censored-region solve"
    )
    p.add_argument("file")
    p.add_argument("--x0", metavar="STATE", help="time-average mode start state")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument(
        "--region",
        metavar="BOX",
        help='censored-solve mode box, e.g. "0..40" or "0..3,0..3"',
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_stationary)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except CRNError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
