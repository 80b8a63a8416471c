"""Numerical affine differential geometry kernel.

Exact forward-mode jets drive a codimension-1 and codimension-2 induced
geometry engine; closed-form immersion families and a verification suite
sit on top.
"""

from .jets import (
    MAX_ORDER,
    Jet,
    JetError,
    JetTensor,
    SingularSystemError,
    SmoothMap,
    jet_det,
    jet_eval,
    jet_solve,
)
from .hypersurface import (
    CurvatureData,
    DegenerateMetricError,
    FrameError,
    Hypersurface,
    InducedObjects,
    NotBlaschkeError,
    blaschke_normalize,
    blaschke_residuals,
    curvature,
    decompose,
    fundamental_residuals,
    is_affine_sphere,
    reconstruction_residual,
    sectional_curvature,
)
from .paracomplex import (
    CodimTwoSurface,
    NotSwapTangentError,
    ParaStructure,
    StructureError,
    decompose2,
    distribution_basis,
    eta_bracket,
    holomorphy_residual,
    induced_paracontact,
    involutivity_check,
    jtilde,
    normalize_affine_normal2,
    paracontact_residuals,
)
from .families import (
    Family,
    FamilySpec,
    UnknownFamilyError,
    calabi_lambda,
    calabi_product,
    cp,
    family_names,
    jtangency_check,
    jtangency_complex_check,
    lambda_from_alpha,
    matrix_A,
    named_family,
    pair,
    sphere_from_pair,
    suspend,
)
from .verify import CheckResult, VerificationReport, cross_relation_check, run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
