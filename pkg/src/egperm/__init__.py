"""Extended graph permanents of multigraphs, their closed forms, and the
companion invariants (c2, Hepp bound, affine point counts)."""

from .graphcore import (Multigraph, Embedding, FundamentalSpec, GraphError,
                        catalog, parse_graph, fundamental_spec, decompletions,
                        duplicate_edges, schnetz_twist, planar_dual,
                        two_vertex_glue, whitney_flip)
from .matmod import (IntMatrix, ModMatrix, BlockSpec, MatrixError,
                     CompositeModulusError, permanent_naive, permanent_ryser,
                     permanent_block, row_reduce_unimodular, parse_matrix)
from .gperm import (MatrixSource, PermSequence, reduced_incidence,
                    gperm_at_prime, gperm_sequence, sequences_match,
                    tagging_oracle)
from .closedform import (ClosedForm, FormulaError, parse_formula, print_formula,
                         eval_formula, family_formula, appendix_catalog,
                         generate_closed_form)
from .invariance import (VerificationReport, check_decompletion, check_twist,
                         check_dual, check_two_cut, check_four_cut,
                         vanishing_witness, orientation_certificate)
from .ctwo import c2_at_prime, kirchhoff_point_count, dodgson_c2, count_flows
from .heppbound import hepp_bound, bridgeless_lattice, NotPrimitiveError
from .pointcount import (permanent_polynomial, tilde_point_count,
                         point_count_identity, verify_chevalley,
                         verify_extension_identity, eta_product, compare_modform)

__version__ = "0.1.0"
