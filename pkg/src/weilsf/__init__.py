"""Serre-Frobenius groups, angle ranks and Frobenius trace distributions of
Weil polynomials over finite fields."""

from .anglerank import (RelationLattice, angle_rank_numeric,
                        torsion_order_structural)
from .classify import (GeometricDecomposition, Partial, SerreFrobeniusGroup,
                       classify, classify_elliptic, classify_prime_dim,
                       classify_surface, classify_threefold, report,
                       sf_of_product)
from .distribution import (MomentReport, TraceHistogram, empirical_moments,
                           exact_moments, histogram, moment_report,
                           trace_sequence)
from .newton import NewtonPolygonData, Stratum, newton_polygon, stratify
from .polyarith import (IsogenyFactorization, SupersingularMatch, base_change,
                        factor, supersingular_match,
                        supersingular_torsion_order)
from .weilpoly import (DEFAULT_PRECISION, RootSystem, WeilError,
                       WeilPolynomial, format_label, from_middle, parse_label,
                       roots, validate)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRECISION", "GeometricDecomposition", "IsogenyFactorization",
    "MomentReport", "NewtonPolygonData", "Partial", "RelationLattice",
    "RootSystem", "SerreFrobeniusGroup", "Stratum", "SupersingularMatch",
    "TraceHistogram", "WeilError", "WeilPolynomial", "angle_rank_numeric",
    "base_change", "classify", "classify_elliptic", "classify_prime_dim",
    "classify_surface", "classify_threefold", "empirical_moments",
    "exact_moments", "factor", "format_label", "from_middle", "histogram",
    "moment_report", "newton_polygon", "parse_label", "report", "roots",
    "sf_of_product", "stratify", "supersingular_match",
    "supersingular_torsion_order", "torsion_order_structural",
    "trace_sequence", "validate",
]
