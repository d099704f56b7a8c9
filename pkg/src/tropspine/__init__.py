"""Spines of amoebas of rational curves and tropical limits of families."""

from .complex_curves import (
    ComplexLine,
    ComplexRationalCurve,
    SampleCloud,
    SamplingScheme,
    evaluate,
    factor_through_line,
    log_abs,
    log_map,
    project_line,
    sample_amoeba,
    toric_degree_of,
)
from .degrees import (
    PsiMap,
    ToricDegree,
    line_degree,
    psi_apply,
    psi_norm,
    psi_preimage,
    torus_apply,
    torus_preimage,
    validate_degree,
)
from .errors import SchemaViolation, TropSpineError
from .geometry import Window
from .smith import smith_normal_form
from .spine import (
    EpsilonConstant,
    GeneralSpine,
    Spine,
    build_spine,
    certify,
    certify_curve,
    epsilon,
    phi_eval,
    spine_general,
    spine_line,
    surjectivity_gap,
)
from .tropical import (
    CombinatorialTree,
    ModuliPoint,
    TropicalCurve,
    contract_line,
    from_moduli,
    local_coordinates,
    modify_line,
    real_line,
    to_moduli,
)

__version__ = "0.1.0"
