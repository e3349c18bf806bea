"""Structured Gram-matrix ensembles: samplers, exact spectral formulas,
zonal polynomials, group averages, and a seeded verification harness."""

from .ensembles import (
    AlphaMode,
    AlphaSpec,
    MBParams,
    correlation,
    gram,
    l_transform,
    mb_alpha,
    sample_patterned,
    sample_triangular,
    zero_pattern,
)
from .errors import DegeneracyError
from .formulas import (
    DensityValue,
    avg_charpoly,
    bordered_charpoly_identity,
    correlation_pdf,
    eig_pdf_complex,
    eig_pdf_real_zonal,
    element_pdf,
    fuss_catalan_moment,
    mb_eig_pdf,
    q_factor,
    tilde_q_factor,
    transformed_pdf,
)
from .linalg import Field, RngStream, eigvals_self_adjoint, haar_matrix
from .report import CheckReport
from .spherical import (
    MCEstimate,
    gn_prediction,
    haar_q_integral,
    haar_tilde_integral,
    real_spherical_prediction,
    spherical_ratio,
    splitting_identity_check,
)
from .symfunc import (
    GammaSpec,
    monomial_eval,
    partitions_of,
    rank_one_genfun_deviation,
    schur_ratio,
    zonal,
    zonal_at_ones,
    zonal_eval,
    zonal_ratio_n2,
)
from .verify import SamplerSpec, spectral_moments

__version__ = "0.1.0"

__all__ = [
    "AlphaMode",
    "AlphaSpec",
    "MBParams",
    "CheckReport",
    "DegeneracyError",
    "DensityValue",
    "Field",
    "GammaSpec",
    "MCEstimate",
    "RngStream",
    "SamplerSpec",
    "avg_charpoly",
    "bordered_charpoly_identity",
    "correlation",
    "correlation_pdf",
    "eig_pdf_complex",
    "eig_pdf_real_zonal",
    "eigvals_self_adjoint",
    "element_pdf",
    "fuss_catalan_moment",
    "gn_prediction",
    "gram",
    "haar_matrix",
    "haar_q_integral",
    "haar_tilde_integral",
    "l_transform",
    "mb_alpha",
    "mb_eig_pdf",
    "monomial_eval",
    "partitions_of",
    "q_factor",
    "rank_one_genfun_deviation",
    "real_spherical_prediction",
    "sample_patterned",
    "sample_triangular",
    "schur_ratio",
    "spectral_moments",
    "spherical_ratio",
    "splitting_identity_check",
    "tilde_q_factor",
    "transformed_pdf",
    "zero_pattern",
    "zonal",
    "zonal_at_ones",
    "zonal_eval",
    "zonal_ratio_n2",
    "__version__",
]
