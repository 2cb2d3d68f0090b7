"""liaisonlab: exact liaison computations for curves over prime fields.

The library builds random curves in P^1 x P^2 and P^n over F_p, links them
through complete intersections, computes their invariants exactly, and
records every open-condition check in a replayable certificate.
"""

from .algebra_core import (
    Block,
    MonomialOrder,
    Polynomial,
    PrimeField,
    RingSpec,
    format_polynomial,
    fp_inv,
    multidegree,
    parse_polynomial,
    specialize_fiber,
)
from .groebner import GroebnerBasis, buchberger, is_member, normal_form, s_polynomial
from .ideal_ops import (
    Ideal,
    eliminate,
    ideal_sum,
    intersect,
    is_reduced_zero_dim,
    quotient,
    read_ideal_text,
    ring_map_kernel,
    saturate,
    saturate_irrelevant,
    unit_ideal,
    write_ideal_text,
    zero_dim_degree,
)

__version__ = "0.1.0"
