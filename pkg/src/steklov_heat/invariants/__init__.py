from .curvature import (
    CurvaturePolynomial,
    ExactScalar,
    canonical_riem,
    canonicalize,
    invariant_prefactor,
    sphere_volume,
)
from .expected import expected_invariant, regroup_a2
from .extract import (
    ContourReduced,
    Derivation,
    PointSymbol,
    contour_reduce,
    derive_invariant,
    evaluate_at_P,
    heat_invariant,
    raw_jet_invariant,
    jet_value,
    substitution_table,
    xi_integral,
    xi_moment,
)
from .report import derivation_report, raw_k3_report
