"""linelab: lines in graphs, metric spaces and 3-uniform hypergraphs, with
exhaustive desk-scale checks of the conjectures about how many there are."""

from .errors import CapExceeded, GraphFormatError, MetricError, Refusal
from .graphs import Graph, bfs_metric, parse_graph6, write_graph6
from .hypergraphs import Hypergraph3
from .lines import LineFamily, check_amrz, check_dbe, line_family
from .metrics import MetricSpace, TernaryRelation, betweenness_of

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "GraphFormatError", "MetricError", "Refusal",
    "Graph", "bfs_metric", "parse_graph6", "write_graph6",
    "Hypergraph3", "LineFamily", "check_amrz", "check_dbe", "line_family",
    "MetricSpace", "TernaryRelation", "betweenness_of",
]
