"""Exact graph magnitude, magnitude homology, and sycamore twists."""

from .graph import INF, Graph, GraphError, SubgraphEmbedding, all_pairs_distances
from .series import TruncatedSeries, magnitude_by_inversion
from .chains import magnitude_by_path_count, magnitude_by_chains
from .homology import magnitude_homology, smith_normal_form
from .twist import TwistSpec, build_twist_pair, classify_path, twist_path, validate_sycamore

__all__ = [
    "INF", "Graph", "GraphError", "SubgraphEmbedding", "all_pairs_distances",
    "TruncatedSeries", "magnitude_by_inversion", "magnitude_by_path_count", "magnitude_by_chains",
    "magnitude_homology", "smith_normal_form",
    "TwistSpec", "build_twist_pair", "classify_path", "twist_path", "validate_sycamore",
]
