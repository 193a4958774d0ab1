"""Exact signed Eulerian-trail sums on marked digraphs, matrices over a
finitely generated exterior algebra, and the cross-check tying the two
together through the standard alternating polynomial."""

from .digraph import (DegreeProfile, GraphFormatError, MarkedDigraph,
                      enumerate_marked_graphs, extend, format_graph, make_gn,
                      opposite, parse_graph, random_feasible_graph,
                      read_graph_file, surgery_in, surgery_out, validate,
                      write_graph_file)
from .grassmann import (ArityCapError, GrassmannElement, GrassmannMatrix,
                        ShapeError, SimplifiedBasisTuple, ext_mul, mat_mul,
                        simplify_basis_tuple, standard_polynomial,
                        substitute_generators)
from .trails import (AtPosition, BudgetExceededError, Precedes,
                     SignedSumReport, Subtrail, TrailPermutation,
                     enumerate_trails, filtered_signed_sum, invert_permutation,
                     is_trail, marked_order_sign, relabel, sgn_perm, sigma_M,
                     signed_sum, swan_identity, swap_parallel_subtrails,
                     trail_signs)
from .bridge import (CrossCheckReport, IdentityVerdict, SimplifiedSet,
                     cross_check, graph_to_simplified, identity_verdict,
                     simplified_to_graph)

__all__ = [
    "ArityCapError", "AtPosition", "BudgetExceededError", "CrossCheckReport",
    "DegreeProfile", "GraphFormatError", "GrassmannElement", "GrassmannMatrix",
    "IdentityVerdict", "MarkedDigraph", "Precedes", "ShapeError",
    "SignedSumReport", "SimplifiedBasisTuple", "SimplifiedSet", "Subtrail",
    "TrailPermutation", "cross_check", "enumerate_marked_graphs",
    "enumerate_trails", "ext_mul", "extend", "filtered_signed_sum",
    "format_graph", "graph_to_simplified", "identity_verdict",
    "invert_permutation", "is_trail", "make_gn", "marked_order_sign",
    "mat_mul", "opposite", "parse_graph", "random_feasible_graph",
    "read_graph_file", "relabel", "sgn_perm", "sigma_M", "signed_sum",
    "simplified_to_graph", "simplify_basis_tuple", "standard_polynomial",
    "substitute_generators", "surgery_in", "surgery_out", "swan_identity",
    "swap_parallel_subtrails", "trail_signs", "validate", "write_graph_file",
]

__version__ = "0.1.0"
