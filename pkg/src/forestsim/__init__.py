"""Structural role similarity for graphs via the forest-matrix diagonal.

Quick start::

    from forestsim import ForestSim, load_edge_list

    graph, ids = load_edge_list("graph.txt")
    model = ForestSim(method="approx", epsilon=0.1).fit(graph)
    for node, score in model.top_k(0, 10).pairs():
        print(ids.to_external(node), score)
"""

from .approx import ApproxConfig, approx_forest_diag, solve_shifted_laplacian
from .baselines import (RoleSimConfig, StructSimIndex, rolesim_scores,
                        structsim_build_index, structsim_score, structsim_top_k,
                        top_k_from_scores)
from .enumeration import (ForestEnsemble, average_root_tree_size,
                          enumerate_rooted_forests, shifted_laplacian_determinant)
from .estimators import ForestSim, RoleSim, StructSim
from .evaluation import (APReport, LabeledGraph, ap_report, average_precision_at_k,
                         axiom_battery, load_labels)
from .exact import DENSE_NODE_LIMIT, forest_diag, forest_matrix
from .exceptions import (ConvergenceError, FingerprintMismatchError, ForestSimError,
                         GraphParseError, GraphSizeError)
from .graph import (Graph, NodeIdMap, as_graph, incidence_apply, load_edge_list,
                    save_edge_list, shifted_laplacian_apply)
from .index import (ForestIndex, TopKResult, build_index, check_fingerprint,
                    forest_distance, forest_similarity, load_index, save_index,
                    top_k_all, top_k_search)

__version__ = "0.1.0"

__all__ = [
    "ApproxConfig", "approx_forest_diag", "solve_shifted_laplacian",
    "RoleSimConfig", "StructSimIndex", "rolesim_scores",
    "structsim_build_index", "structsim_score", "structsim_top_k",
    "top_k_from_scores",
    "ForestEnsemble", "average_root_tree_size", "enumerate_rooted_forests",
    "shifted_laplacian_determinant",
    "ForestSim", "RoleSim", "StructSim",
    "APReport", "LabeledGraph", "ap_report", "average_precision_at_k",
    "axiom_battery", "load_labels",
    "DENSE_NODE_LIMIT", "forest_diag", "forest_matrix",
    "ConvergenceError", "FingerprintMismatchError", "ForestSimError",
    "GraphParseError", "GraphSizeError",
    "Graph", "NodeIdMap", "as_graph", "incidence_apply", "load_edge_list",
    "save_edge_list", "shifted_laplacian_apply",
    "ForestIndex", "TopKResult", "build_index", "check_fingerprint",
    "forest_distance", "forest_similarity", "load_index", "save_index",
    "top_k_all", "top_k_search",
]
