"""
Elementos finitos mixtos: cuadratura, bases de referencia, espacios globales,
interpolación y ensamblaje.
"""

from .quadrature import QuadRule, quadrature_rule, gauss_legendre
from .reference import (
    ElementFamily,
    DofMeta,
    ReferenceBasis,
    pk_basis,
    rt_basis,
    bdm_basis,
    interpolate_reference,
)
from .piola import piola_push, piola_batch
from .space import (
    SpaceKind,
    FeSpace,
    TraceConstraint,
    assembly_rule,
    build_pseudostress_space,
    build_velocity_space,
    build_pressure_space,
    build_trace_constraint,
)
from .interpolation import interp_hdiv, l2_project
from .assembly import (
    EigSystem,
    assemble_a0,
    assemble_a_full,
    assemble_b,
    assemble_mass_u,
    assemble_hdiv_gram,
    inf_sup_constant,
    build_eig_system,
    export_coo,
)

__all__ = [
    "QuadRule",
    "quadrature_rule",
    "gauss_legendre",
    "ElementFamily",
    "DofMeta",
    "ReferenceBasis",
    "pk_basis",
    "rt_basis",
    "bdm_basis",
    "interpolate_reference",
    "piola_push",
    "piola_batch",
    "SpaceKind",
    "FeSpace",
    "TraceConstraint",
    "assembly_rule",
    "build_pseudostress_space",
    "build_velocity_space",
    "build_pressure_space",
    "build_trace_constraint",
    "interp_hdiv",
    "l2_project",
    "EigSystem",
    "assemble_a0",
    "assemble_a_full",
    "assemble_b",
    "assemble_mass_u",
    "assemble_hdiv_gram",
    "inf_sup_constant",
    "build_eig_system",
    "export_coo",
]
