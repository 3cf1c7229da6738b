"""Hierarchical consensus clustering for networks.

The package samples ensembles of multiresolution-modularity partitions
(with event sampling of the resolution parameter), builds co-classification
statistics with partition null models, and recursively extracts a
statistically significant hierarchy of communities.
"""

__version__ = "0.1.0"

from .benchmark import (HierBenchmarkSpec, PlantedHierarchy, generate_network,
                        sample_hierarchy)
from .consensus import (ConsensusTree, TreeNode, all_cuts, consensus_partition,
                        cut_tree, hierarchical_consensus, lf_consensus,
                        read_tree_json, write_tree_json)
from .ensemble import (CoclassStats, PartitionEnsemble, coclass_stats,
                       coclassification, consensus_null_matrix,
                       generate_ensemble, null_moments, null_prob_local,
                       null_prob_permutation, read_ensemble_csv,
                       significance_threshold, write_ensemble_csv)
from .errors import ConvergenceError, DomainError, EdgeListParseError
from .graph import Graph, config_null_matrix, load_edge_list, write_edge_list
from .metrics import (ContingencyTable, ami_max, entropy, expected_mi,
                      mutual_information, nmi_max)
from .modularity import (Partition, QualityProblem, iterated_louvain,
                         louvain_once, modularity_score, read_partition_csv,
                         write_partition_csv)
from .resolution import (EventProfile, build_event_profile,
                         estimate_gamma_min, gamma_max, gamma_of_beta,
                         sample_gammas)

__all__ = [
    "__version__",
    "ConsensusTree", "TreeNode", "CoclassStats", "ContingencyTable",
    "ConvergenceError", "DomainError", "EdgeListParseError", "EventProfile",
    "Graph", "HierBenchmarkSpec", "Partition", "PartitionEnsemble",
    "PlantedHierarchy", "QualityProblem",
    "all_cuts", "ami_max", "build_event_profile", "coclass_stats",
    "coclassification", "config_null_matrix", "consensus_null_matrix",
    "consensus_partition", "cut_tree", "entropy", "estimate_gamma_min",
    "expected_mi", "gamma_max", "gamma_of_beta", "generate_ensemble",
    "generate_network", "hierarchical_consensus", "iterated_louvain",
    "lf_consensus", "load_edge_list", "louvain_once", "modularity_score",
    "mutual_information", "nmi_max", "null_moments", "null_prob_local",
    "null_prob_permutation", "read_ensemble_csv", "read_partition_csv",
    "read_tree_json", "sample_gammas", "sample_hierarchy",
    "significance_threshold", "write_edge_list", "write_ensemble_csv",
    "write_partition_csv", "write_tree_json",
]
