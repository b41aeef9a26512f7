"""Read every network file under demos/networks and summarize it.

Also demonstrates the raw statement stream (useful for tooling that wants
line numbers) and what a parse error looks like.
"""

from pathlib import Path

from crnkit import parse, parse_document, serialize
from crnkit.errors import ParseError

NETWORKS = Path(__file__).resolve().parent / "networks"


def main():
    for path in sorted(NETWORKS.glob("*.crn")):
        system = parse(path.read_text())
        net = system.network
        reversible = sum(
            1
            for r in net.reactions
            if any(s.source == r.product and s.product == r.source for s in net.reactions)
        )
        print(
            f"{path.name:<16} {len(net.species)} species, "
            f"{len(net.complexes)} complexes, {len(net.reactions)} reactions"
            + (f" ({reversible} in reversible pairs)" if reversible else "")
        )

    print()
    print("statement stream for cycle.crn:")
    for stmt in parse_document((NETWORKS / "cycle.crn").read_text()).statements:
        print(f"  line {stmt.line}: {stmt.kind}")

    print()
    print("round-trip: serialize(parse(text)) is stable:")
    text = (NETWORKS / "birthdeath.crn").read_text()
    once = serialize(parse(text))
    print("  identical after a second pass:", serialize(parse(once)) == once)

    print()
    bad = "species: A, B\nA -> ; k=1.0\n"
    try:
        parse(bad)
    except ParseError as exc:
        print(f"parse error example: {exc}")


if __name__ == "__main__":
    main()
