import numpy as np
import pytest

import helpers


@pytest.fixture
def g0():
    return helpers.toy_graph()


@pytest.fixture(scope="session")
def karate():
    """Zachary's karate club with three degree-derived structural labels.

    The canonical labeled datasets are external downloads; this local
    stand-in keeps the evaluation pipeline testable offline. Labels bucket
    nodes by degree (peripheral <= 2, connector 3..6, hub >= 7), which is a
    purely topological role assignment.
    """
    networkx = pytest.importorskip("networkx")
    nx_graph = networkx.karate_club_graph()
    from forestsim import Graph, LabeledGraph, NodeIdMap

    n = nx_graph.number_of_nodes()
    graph = Graph.from_edge_pairs(list(nx_graph.edges), n=n)
    labels = np.digitize(graph.degrees, [2.5, 6.5])
    labeled = LabeledGraph(graph, labels, ["peripheral", "connector", "hub"])
    return labeled, NodeIdMap.identity(n)
