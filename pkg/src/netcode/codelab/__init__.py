"""Concrete codes: scalar and vector linear codes, table codes and the Z embedding."""

from .embedding import (
    Group,
    MUnicastNetwork,
    TableCode,
    ZeroErrorReport,
    build_z_from_m_unicast,
    fit_decoders,
    forwarding_code,
    lift_code,
    lift_properties,
    linear_table_code,
    verify_zero_error,
)
from .scalar import (
    CodeAssignment,
    check_scalar_code,
    compile_problem,
    exhaustive_search,
    find_scalar_code,
    random_search,
    relevant_pairs,
    routing_code,
    search_space,
    verify_scalar_code,
    zero_code,
)
from .vector import as_rate, check_vector_code, diagonal_lift, verify_vector_code

__all__ = [
    "CodeAssignment",
    "Group",
    "MUnicastNetwork",
    "TableCode",
    "ZeroErrorReport",
    "as_rate",
    "build_z_from_m_unicast",
    "check_scalar_code",
    "check_vector_code",
    "compile_problem",
    "diagonal_lift",
    "exhaustive_search",
    "find_scalar_code",
    "fit_decoders",
    "forwarding_code",
    "lift_code",
    "lift_properties",
    "linear_table_code",
    "random_search",
    "relevant_pairs",
    "routing_code",
    "search_space",
    "verify_scalar_code",
    "verify_vector_code",
    "verify_zero_error",
    "zero_code",
]
