"""Regenerate data/karate.{edges,labels} from the networkx built-in graph.

The files are committed; this script documents their provenance and lets
them be rebuilt: python tools/make_karate.py
"""

import networkx as nx


def main():
    g = nx.karate_club_graph()
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    with open("data/karate.edges", "w") as fh:
        fh.write("# Zachary's karate club (34 nodes, 78 edges), 0-indexed\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")
    with open("data/karate.labels", "w") as fh:
        fh.write("# faction labels: 0 = Mr. Hi, 1 = Officer\n")
        for u in sorted(g.nodes()):
            fh.write(f"{u} {0 if g.nodes[u]['club'] == 'Mr. Hi' else 1}\n")
    print(f"wrote {len(edges)} edges, {g.number_of_nodes()} labels")


if __name__ == "__main__":
    main()
