#!/usr/bin/env python3
"""Materialize the karate-club graph as forestsim input files.

Writes ``karate.edges`` (edge list) and ``karate.labels`` (three
degree-derived role labels: peripheral <= 2, connector 3..6, hub >= 7)
into the target directory. The graph ships with networkx, so no network
access is needed.

Usage: python scripts/fetch_karate.py [out_dir]
"""

import sys
from pathlib import Path

import networkx


def main(out_dir="."):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    graph = networkx.karate_club_graph()

    edges = sorted((min(u, v), max(u, v)) for u, v in graph.edges)
    (out / "karate.edges").write_text(
        "".join(f"{u} {v}\n" for u, v in edges))

    def role(degree):
        if degree <= 2:
            return "peripheral"
        if degree <= 6:
            return "connector"
        return "hub"

    (out / "karate.labels").write_text(
        "".join(f"{u} {role(graph.degree[u])}\n" for u in sorted(graph.nodes)))
    print(f"wrote {out / 'karate.edges'} ({len(edges)} edges) and "
          f"{out / 'karate.labels'}")


if __name__ == "__main__":
    main(*sys.argv[1:])
