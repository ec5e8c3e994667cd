"""Designing electronic state graphs with the detuning.

Tuning the laser detuning against the interaction energy makes selected
configurations degenerate, and the drive then hops between them like a
particle on a graph.  The same tetrahedron supports very different graphs:
compensating one interaction shift yields a ten-node multiply connected
graph, compensating three yields a five-node star.
"""

import vibronic as vb

POTENTIAL = vb.PowerLaw(1.0, 6)  # repulsive van-der-Waals-type tail, V(1) = 1

CASES = [
    ("dumbbell, one shift compensated", vb.dumbbell(), -1.0, "01"),
    ("triangle, one shift compensated", vb.triangle(), -1.0, "001"),
    ("tetrahedron, one shift compensated", vb.tetrahedron(), -1.0, "1000"),
    ("tetrahedron, three shifts compensated", vb.tetrahedron(), -3.0, "1110"),
]


def main():
    for title, geometry, delta, seed in CASES:
        graph = vb.build_resonant_manifold(
            geometry, delta, POTENTIAL, vb.config_from_string(seed)
        )
        label, degrees = vb.graph_classify(graph)
        print(f"\n{title}")
        print(f"  detuning = {delta}, seed = {seed}")
        print(f"  nodes: {graph.n_nodes}  topology: {label}")
        print(f"  degree sequence: {sorted(degrees, reverse=True)}")
        print(f"  members: {' '.join(graph.bitstrings)}")
        print("  edges:")
        for line in vb.export_edge_list(graph).strip().split("\n"):
            i, j = map(int, line.split())
            print(f"    {graph.bitstrings[i]} -- {graph.bitstrings[j]}")


if __name__ == "__main__":
    main()
