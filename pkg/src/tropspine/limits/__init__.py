"""Hausdorff limits, decorated trees, allowability and degenerations."""

from .decorated import DecoratedTree, decorate, propagate_from_edge
from .degenerations import (
    Allowability,
    DegenerationResult,
    DegenerationWitness,
    allowability,
    enumerate_trees,
    is_allowable,
    is_degeneration,
    subdivide,
)
from .family import (
    DegenerationDatum,
    Family,
    LimitResult,
    Monomial,
    Piece,
    Thresholds,
    cut_pieces,
    kernel_deformation,
    limit_of_family,
    make_datum,
    rescaled_cloud_distance,
    restrict_moduli,
)
from .hausdorff import hausdorff, hausdorff_distance
from .lp import check_farkas, check_solution, solve_feasibility

__all__ = [
    "Allowability",
    "DecoratedTree",
    "DegenerationDatum",
    "DegenerationResult",
    "DegenerationWitness",
    "Family",
    "LimitResult",
    "Monomial",
    "Piece",
    "Thresholds",
    "allowability",
    "check_farkas",
    "check_solution",
    "cut_pieces",
    "decorate",
    "enumerate_trees",
    "hausdorff",
    "hausdorff_distance",
    "is_allowable",
    "is_degeneration",
    "kernel_deformation",
    "limit_of_family",
    "make_datum",
    "propagate_from_edge",
    "rescaled_cloud_distance",
    "restrict_moduli",
    "solve_feasibility",
    "subdivide",
]
